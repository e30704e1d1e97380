//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs under `cargo test` as a harness-less test target.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use skelcat::coeq::{coequalize, ClassId, IdentificationSpec, QArrow, QuotientCat};
use skelcat::corpus;
use skelcat::fincat::{enumerate_functors, subgroupoid, SubgroupoidMode};
use skelcat::presentation::{
    bounded_normal_forms, groupoid_consistency, identity_pushout_equivalence, word_equal_bounded,
    z_cokernel_of_identity, BoundedVerdict, SearchBound,
};
use skelcat::pretorsion::{
    is_trivial_functor, pt1_check, torsionfree_reflection, verify_short_z_exact, verify_z_kernel, z_kernel, ProbeFamily,
};
use skelcat::words::{closure_oracle, reduce, ReducedWord};
use skelcat::{ArrowId, Budget, FinCat, Functor};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let all = corpus::all();
    if all.len() < 10 {
        return Err(format!("only {} corpus categories", all.len()));
    }
    let mut words = 0;
    let mut discrepancies = Vec::new();
    for (name, c) in &all {
        if c.num_objects() > 3 || c.non_identity_arrows().count() > 6 {
            return Err(format!("{name} exceeds the corpus size limits"));
        }
        let oracle = closure_oracle(c, 4, Budget::default()).map_err(|e| e.to_string())?;
        // reduce must induce exactly the oracle's partition
        let mut class_to_form: HashMap<usize, ReducedWord> = HashMap::new();
        let mut form_to_class: HashMap<ReducedWord, usize> = HashMap::new();
        for w in oracle.words() {
            words += 1;
            let form = reduce(c, w.as_slice());
            let class = oracle.class_of(w).expect("enumerated word");
            let a = class_to_form.entry(class).or_insert_with(|| form.clone());
            let b = form_to_class.entry(form.clone()).or_insert(class);
            if *a != form || *b != class {
                discrepancies.push(format!("{name}: {}", w.display(c)));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if !discrepancies.is_empty() {
        return Err(format!("{} discrepancies, first {}", discrepancies.len(), discrepancies[0]));
    }
    if secs >= 60.0 {
        return Err(format!("took {secs:.1}s (limit 60s)"));
    }
    Ok(format!("{} categories, {words} words of length <= 4, 0 discrepancies, {secs:.2}s", all.len()))
}

fn criterion_2() -> Outcome {
    let i = corpus::load("iso_pair").unwrap();
    let seq = torsionfree_reflection(&i);
    let q = &seq.quotient;
    let (f, g) = (i.arrow_id("f").unwrap(), i.arrow_id("g").unwrap());
    let c = ClassId(0);
    let power = |n: i64| -> QArrow {
        let letter = if n >= 0 { f } else { g };
        q.arrow(c, vec![letter; n.unsigned_abs() as usize], c).expect("powers are reduced chains")
    };
    for k in 0..=5usize {
        let arrows = q.enumerate_all(k, Budget::default()).map_err(|e| e.to_string())?;
        if arrows.len() != 2 * k + 1 {
            return Err(format!("{} arrows at bound {k}, expected {}", arrows.len(), 2 * k + 1));
        }
        let expected: BTreeSet<QArrow> = (-(k as i64)..=k as i64).map(power).collect();
        if arrows.into_iter().collect::<BTreeSet<_>>() != expected {
            return Err(format!("arrows at bound {k} are not the powers of f and g"));
        }
    }
    let mut entries = 0;
    for a in -5..=5i64 {
        for b in -5..=5i64 {
            let product = q.q_compose(&power(a), &power(b)).map_err(|e| e.to_string())?;
            if product != power(a + b) {
                return Err(format!("{a} + {b}: got {}", q.display_word(&product)));
            }
            entries += 1;
        }
    }
    Ok(format!("2k+1 arrows for k = 0..5, {entries} table entries match integer addition"))
}

fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0..1usize << items.len())
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x.clone()).collect())
        .collect()
}

fn criterion_3() -> Outcome {
    let mut specs = 0;
    let mut violations = Vec::new();
    for (name, c) in corpus::all() {
        let isos: Vec<ArrowId> = c.non_identity_arrows().filter(|a| c.is_iso(*a)).collect();
        for subset in subsets(&isos) {
            let pairs = subset.iter().map(|a| (c.dom(*a), c.cod(*a))).collect();
            let q = coequalize(IdentificationSpec::new(c.clone(), pairs).map_err(|e| e.to_string())?);
            specs += 1;
            for x in c.arrow_ids() {
                let qx = q.q_map(x);
                if q.q_is_iso(&qx) && !c.is_iso(x) {
                    violations.push(format!("{name}: non-iso {} has an iso image", c.arrow_name(x)));
                }
                for y in c.hom(c.dom(x), c.cod(x)) {
                    if *y != x && q.q_map(*y) == qx {
                        violations.push(format!("{name}: {} and {} collapse", c.arrow_name(x), c.arrow_name(*y)));
                    }
                }
            }
        }
    }
    match violations.first() {
        Some(v) => Err(format!("{} violations, first {v}", violations.len())),
        None => Ok(format!("{specs} identification specs, 0 violations")),
    }
}

/// The skeletal reflection and the all-objects identification of every
/// corpus category.
fn corpus_quotients() -> Vec<(String, QuotientCat)> {
    let mut out = Vec::new();
    for (name, c) in corpus::all() {
        out.push((format!("{name}/reflect"), torsionfree_reflection(&c).quotient));
        let first = c.objects().next();
        let pairs = c.objects().filter_map(|o| first.map(|f| (f, o))).collect();
        out.push((format!("{name}/all"), coequalize(IdentificationSpec::new(c.clone(), pairs).unwrap())));
    }
    out
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    let mut discrepancies = Vec::new();
    for (name, q) in corpus_quotients() {
        let base = q.base().clone();
        let short = q.enumerate_all(4, Budget::default()).map_err(|e| e.to_string())?;
        let long = q.enumerate_all(8, Budget::default()).map_err(|e| e.to_string())?;
        let mut by_endpoints: BTreeMap<(ClassId, ClassId), Vec<&QArrow>> = BTreeMap::new();
        for b in &long {
            by_endpoints.entry((b.src, b.tgt)).or_default().push(b);
        }
        for a in &short {
            let candidates = by_endpoints.get(&(a.tgt, a.src)).map(Vec::as_slice).unwrap_or_default();
            let has_inverse = candidates.iter().any(|b| {
                // a reduced pair whose junction is not composable in the base stays non-empty
                if let (Some(x), Some(y)) = (a.word.as_slice().last(), b.word.as_slice().first()) {
                    if base.cod(*x) != base.dom(*y) {
                        return false;
                    }
                }
                q.q_compose(a, b).is_ok_and(|ab| ab.is_identity()) && q.q_compose(b, a).is_ok_and(|ba| ba.is_identity())
            });
            checked += 1;
            if has_inverse != q.q_is_iso(a) {
                discrepancies.push(format!("{name}: {}", q.render_arrow(a)));
            }
        }
    }
    match discrepancies.first() {
        Some(d) => Err(format!("{} discrepancies, first {d}", discrepancies.len())),
        None => Ok(format!("{checked} arrows of length <= 4 against inverses of length <= 8, 0 discrepancies")),
    }
}

fn criterion_5() -> Outcome {
    let probes = ProbeFamily::default_corpus(Budget::default());
    let mut checks = 0;
    for (name, c) in corpus::all() {
        let report = verify_short_z_exact(&torsionfree_reflection(&c), &probes).map_err(|e| format!("{name}: {e}"))?;
        if let Some(f) = report.failures.first() {
            return Err(format!("{name}: {f}"));
        }
        checks += report.checks;
    }
    // Drop one identification: every pair joining the same two objects
    // (an iso and its inverse contribute the pair in both orientations).
    let mut detected = Vec::new();
    for (name, c) in corpus::all() {
        let seq = torsionfree_reflection(&c);
        let pairs = seq.quotient.spec().pairs().to_vec();
        let Some(&(a, b)) = pairs.iter().find(|(a, b)| a != b) else { continue };
        let kept = pairs.into_iter().filter(|&(x, y)| !((x, y) == (a, b) || (x, y) == (b, a))).collect();
        let mut broken = seq.clone();
        broken.quotient = coequalize(IdentificationSpec::new(c.clone(), kept).unwrap());
        let report = verify_short_z_exact(&broken, &probes).map_err(|e| e.to_string())?;
        if !report.passed() {
            detected.push(name);
        }
    }
    if detected.is_empty() {
        return Err("no mutation detected".into());
    }
    Ok(format!(
        "{} categories, {} probes, {checks} checks passed; mutation detected for {}",
        corpus::names().count(),
        probes.probes.len(),
        detected.join(", ")
    ))
}

fn criterion_6() -> Outcome {
    let all = corpus::all();
    let mut pairs = 0;
    let mut functors = 0;
    for (tn, t) in all.iter().filter(|(_, t)| t.is_groupoid()) {
        for (fname, f) in all.iter().filter(|(_, f)| f.is_skeletal()) {
            let report = pt1_check(t, f, Budget::default()).map_err(|e| e.to_string())?;
            if let Some(fail) = report.failures.first() {
                return Err(format!("({tn}, {fname}): {fail}"));
            }
            pairs += 1;
            functors += report.checks;
        }
    }
    let i = corpus::load("iso_pair").unwrap();
    let two = corpus::load("arrow2").unwrap();
    let fs = enumerate_functors(&i, &two, Budget::default()).map_err(|e| e.to_string())?;
    if fs.len() != 2 || !fs.iter().all(is_trivial_functor) {
        return Err(format!("{} functors I -> 2", fs.len()));
    }
    Ok(format!("{pairs} (groupoid, skeletal) pairs, {functors} functors all trivial; I -> 2 has 2 trivial functors"))
}

fn arrow_names(c: &FinCat) -> BTreeSet<String> {
    c.arrow_ids().map(|a| c.arrow_name(a).to_string()).collect()
}

fn criterion_7() -> Outcome {
    let probes = ProbeFamily::default_corpus(Budget::default());
    let mut checks = 0;
    let mut tally = |report: skelcat::pretorsion::CheckReport, what: &str| -> Result<(), String> {
        if let Some(f) = report.failures.first() {
            return Err(format!("{what}: {f}"));
        }
        checks += report.checks;
        Ok(())
    };
    for (name, c) in corpus::all() {
        let seq = torsionfree_reflection(&c);
        let (zk, _) = z_kernel(&seq.quotient).map_err(|e| e.to_string())?;
        let (iso, _) = subgroupoid(&c, SubgroupoidMode::Iso);
        if arrow_names(&zk) != arrow_names(&iso) || *zk != *iso {
            return Err(format!("{name}: Z-kernel of q differs from Iso(C)"));
        }
        let id = Functor::identity(&c);
        let (zid, _) = z_kernel(&id).map_err(|e| e.to_string())?;
        let (aut, _) = subgroupoid(&c, SubgroupoidMode::Aut);
        if arrow_names(&zid) != arrow_names(&aut) || *zid != *aut {
            return Err(format!("{name}: Z-kernel of the identity differs from Aut(C)"));
        }
        tally(verify_z_kernel(&seq.quotient, &probes).map_err(|e| e.to_string())?, &format!("{name}/q"))?;
        tally(verify_z_kernel(&id, &probes).map_err(|e| e.to_string())?, &format!("{name}/id"))?;
        tally(
            verify_z_kernel(&Functor::to_terminal(&c, "*"), &probes).map_err(|e| e.to_string())?,
            &format!("{name}/1"),
        )?;
    }
    let mut probe_functors = 0;
    for (xn, x) in &probes.probes {
        for (yn, y) in &probes.probes {
            for f in enumerate_functors(x, y, Budget::default()).map_err(|e| e.to_string())? {
                tally(verify_z_kernel(&f, &probes).map_err(|e| e.to_string())?, &format!("{xn} -> {yn}"))?;
                probe_functors += 1;
            }
        }
    }
    Ok(format!("Z-kernels match Iso and Aut on the corpus; universal property: {checks} checks ({probe_functors} probe functors)"))
}

fn criterion_8() -> Outcome {
    let bound = SearchBound::default();
    let two = corpus::load("arrow2").unwrap();
    let (p, _) = z_cokernel_of_identity(&two);
    let forms = bounded_normal_forms(&p, 6, Budget::default()).map_err(|e| e.to_string())?;
    let rendered: BTreeSet<String> = forms.iter().map(|f| p.render(f)).collect();
    let mut expected = BTreeSet::from(["()".to_string()]);
    for n in 1..=6 {
        expected.insert(vec!["u"; n].join(","));
        expected.insert(vec!["u^-1"; n].join(","));
    }
    if forms.len() != 13 || rendered != expected {
        return Err(format!("normal forms {rendered:?}"));
    }
    for (i, a) in forms.iter().enumerate() {
        for b in &forms[i + 1..] {
            if !word_equal_bounded(&p, a, b, bound).map_err(|e| e.to_string())?.is_distinct() {
                return Err(format!("{} and {} not separated", p.render(a), p.render(b)));
            }
        }
    }
    let uu = p.parse_word("u,u^-1", None).unwrap();
    let verdict = word_equal_bounded(&p, &uu, &p.parse_word("()", None).unwrap(), bound).map_err(|e| e.to_string())?;
    let BoundedVerdict::Equal(trace) = verdict else { return Err(format!("u,u^-1 vs (): {verdict:?}")) };
    if p.replay(&uu, &trace).is_none_or(|w| !w.is_empty()) {
        return Err("trace for u,u^-1 = () does not replay".into());
    }

    let mut equivalences = 0;
    for (name, c) in corpus::all() {
        let report = identity_pushout_equivalence(&c, bound).map_err(|e| format!("{name}: {e}"))?;
        if !report.passed() {
            return Err(format!("{name}: {:?} {:?}", report.failures.first(), report.unknown.first()));
        }
        equivalences += report.checks;
    }
    let mut groupoids = Vec::new();
    for (name, c) in corpus::all().into_iter().filter(|(_, c)| c.is_groupoid()) {
        let report = groupoid_consistency(&c, 4, bound, Budget::default()).map_err(|e| format!("{name}: {e}"))?;
        if !report.passed() {
            return Err(format!("{name}: {:?} {:?}", report.failures.first(), report.unknown.first()));
        }
        groupoids.push(name);
    }
    Ok(format!(
        "13 pairwise distinct normal forms u^n; {equivalences} equivalence checks; bijection at bound 4 for {}",
        groupoids.join(", ")
    ))
}

fn skelcat(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_skelcat")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = dir.path().to_str().unwrap().to_string();
    let (code, _) = skelcat(&["corpus", "export", &root]);
    if code != 0 {
        return Err(format!("corpus export exited {code}"));
    }
    let mut files = 0;
    for name in corpus::names() {
        let path = format!("{root}/{name}.json");
        let (code, first) = skelcat(&["validate", "--canonical", &path]);
        if code != 0 {
            return Err(format!("{name}: validate exited {code}"));
        }
        let canonical = format!("{root}/{name}.canonical.json");
        std::fs::write(&canonical, &first).map_err(|e| e.to_string())?;
        let (_, second) = skelcat(&["validate", "--canonical", &canonical]);
        let reparsed = FinCat::from_json(std::str::from_utf8(&first).unwrap()).map_err(|e| e.to_string())?;
        if first != second || Arc::new(reparsed) != corpus::load(name).unwrap() {
            return Err(format!("{name}: canonical export is not a fixed point"));
        }
        let (code, _) = skelcat(&["check-pretorsion", &path]);
        if code != 0 {
            return Err(format!("{name}: check-pretorsion exited {code}"));
        }
        files += 1;
    }
    let run = || skelcat(&["--json", "corpus", "run-all"]);
    let (c1, r1) = run();
    let (c2, r2) = run();
    if c1 != 0 || c2 != 0 || r1 != r2 {
        return Err(format!("run-all exit codes {c1}/{c2}, identical reports: {}", r1 == r2));
    }
    Ok(format!("{files} files round-trip, check-pretorsion exit 0 on all, run-all reports byte-identical"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("normal-form soundness and uniqueness", criterion_1),
        ("integers from the iso pair", criterion_2),
        ("faithfulness and iso reflection", criterion_3),
        ("isos are the invertible quotient arrows", criterion_4),
        ("short Z-exact sequences", criterion_5),
        ("groupoid to skeletal functors are trivial", criterion_6),
        ("Z-kernels", criterion_7),
        ("presented Z-cokernels", criterion_8),
        ("command line", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {} ({title}): PASS [{secs:.2}s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({title}): FAIL [{secs:.2}s] {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
