//! The pretorsion theory (groupoids, skeletal categories) on finite inputs.
//!
//! Trivial objects are the skeletal groupoids, so a functor is trivial when
//! every arrow lands on an automorphism. For a category `C` the short
//! Z-exact sequence is `Iso(C) → C → Q`, where `Q` coequalizes the endpoints
//! of every isomorphism of `C`. Universal properties are checked against a
//! finite [`ProbeFamily`]; a failure there is a genuine counterexample.

use std::sync::Arc;

use crate::coeq::{coequalize, ClassId, IdentificationSpec, QArrow, QuotientCat};
use crate::corpus;
use crate::error::{Error, Result};
use crate::fincat::{
    enumerate_functors, subgroupoid, wide_subcategory, ArrowId, FinCat, Functor, ObjId, SubgroupoidMode,
};
use crate::Budget;

/// Anything that acts as a functor out of a finite category and can tell
/// whether the image of an arrow is an automorphism.
pub trait ArrowAction {
    fn source(&self) -> &Arc<FinCat>;
    fn sends_to_automorphism(&self, a: ArrowId) -> bool;
}

impl ArrowAction for Functor {
    fn source(&self) -> &Arc<FinCat> {
        Functor::source(self)
    }

    fn sends_to_automorphism(&self, a: ArrowId) -> bool {
        self.target().is_automorphism(self.on_arrow(a))
    }
}

/// The quotient functor `C → Q`.
impl ArrowAction for QuotientCat {
    fn source(&self) -> &Arc<FinCat> {
        self.base()
    }

    fn sends_to_automorphism(&self, a: ArrowId) -> bool {
        self.q_is_automorphism(&self.q_map(a))
    }
}

/// `first` followed by `second`.
pub struct Composed<'a, F: ArrowAction + ?Sized> {
    first: &'a Functor,
    second: &'a F,
}

impl<'a, F: ArrowAction + ?Sized> Composed<'a, F> {
    pub fn new(first: &'a Functor, second: &'a F) -> Result<Self> {
        if **first.target() != **second.source() {
            return Err(Error::Precondition("composite of functors with mismatched categories".into()));
        }
        Ok(Composed { first, second })
    }
}

impl<F: ArrowAction + ?Sized> ArrowAction for Composed<'_, F> {
    fn source(&self) -> &Arc<FinCat> {
        self.first.source()
    }

    fn sends_to_automorphism(&self, a: ArrowId) -> bool {
        self.second.sends_to_automorphism(self.first.on_arrow(a))
    }
}

/// True iff every arrow of the source is sent to an automorphism, i.e. the
/// functor factors through `Aut` of its target.
pub fn is_trivial_functor<F: ArrowAction + ?Sized>(f: &F) -> bool {
    f.source().arrow_ids().all(|a| f.sends_to_automorphism(a))
}

/// `Iso(C)` with its inclusion: the torsion part of `C`.
pub fn torsion_coreflection(c: &Arc<FinCat>) -> (Arc<FinCat>, Functor) {
    subgroupoid(c, SubgroupoidMode::Iso)
}

/// `K --k--> C --q--> Q` with `K = Iso(C)` and `Q` the skeletal reflection.
#[derive(Clone, Debug)]
pub struct ZExactSequence {
    pub kernel: Arc<FinCat>,
    pub inclusion: Functor,
    pub category: Arc<FinCat>,
    pub quotient: QuotientCat,
}

/// Coequalizes `(dom σ, cod σ)` for every isomorphism `σ` of `C`, identities
/// included, and returns the whole sequence.
pub fn torsionfree_reflection(c: &Arc<FinCat>) -> ZExactSequence {
    let pairs = c.arrow_ids().filter(|a| c.is_iso(*a)).map(|a| (c.dom(a), c.cod(a))).collect();
    let spec = IdentificationSpec::new(c.clone(), pairs).expect("endpoints belong to the category");
    let (kernel, inclusion) = torsion_coreflection(c);
    ZExactSequence { kernel, inclusion, category: c.clone(), quotient: coequalize(spec) }
}

/// The wide subcategory of the source on arrows sent to automorphisms (the
/// pullback along `Aut(B) → B`), with its inclusion.
pub fn z_kernel<F: ArrowAction + ?Sized>(f: &F) -> Result<(Arc<FinCat>, Functor)> {
    wide_subcategory(f.source(), |a| f.sends_to_automorphism(a))
}

/// The corestriction of `g: X → C` to `Iso(C)`, defined when `q ∘ g` is trivial.
pub fn factor_through_coreflection(g: &Functor, seq: &ZExactSequence) -> Result<Functor> {
    if **g.target() != *seq.category {
        return Err(Error::Precondition("functor does not land in the sequence's category".into()));
    }
    if !is_trivial_functor(&Composed::new(g, &seq.quotient)?) {
        return Err(Error::Precondition("q ∘ G is not trivial".into()));
    }
    let c = &seq.category;
    let mut arrow_map = Vec::with_capacity(g.source().num_arrows());
    for x in g.source().arrow_ids() {
        let image = g.on_arrow(x);
        if !c.is_iso(image) {
            return Err(Error::Inconsistency(format!(
                "`{}` is sent to the non-isomorphism `{}` although its image in Q is an automorphism",
                g.source().arrow_name(x),
                c.arrow_name(image)
            )));
        }
        arrow_map.push(seq.kernel.arrow_id(c.arrow_name(image))?);
    }
    let object_map = g.object_map().to_vec();
    Functor::new(g.source().clone(), seq.kernel.clone(), object_map, arrow_map)
}

/// The functor `Q → S` induced by `H: C → S`, evaluated on demand.
#[derive(Clone, Debug)]
pub struct InducedFunctor {
    target: Arc<FinCat>,
    class_map: Vec<ObjId>,
    arrow_images: Vec<ArrowId>,
}

impl InducedFunctor {
    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn on_class(&self, c: ClassId) -> ObjId {
        self.class_map[c.0]
    }

    /// `(src, (f₁, …, fₙ), tgt) ↦ H(f₁) ▷ … ▷ H(fₙ)`.
    pub fn on_arrow(&self, a: &QArrow) -> Result<ArrowId> {
        let mut acc = self.target.identity(self.on_class(a.src));
        for f in a.word.as_slice() {
            acc = self.target.compose(acc, self.arrow_images[f.0])?;
        }
        Ok(acc)
    }
}

/// Builds the induced action after checking that `h` identifies every
/// generating pair. Does not require the target to be skeletal.
pub fn induce(h: &Functor, seq: &ZExactSequence) -> Result<InducedFunctor> {
    if **h.source() != *seq.category {
        return Err(Error::Precondition("functor does not start at the sequence's category".into()));
    }
    let c = &seq.category;
    for &(a, b) in seq.quotient.spec().pairs() {
        if h.on_object(a) != h.on_object(b) {
            return Err(Error::Inconsistency(format!(
                "H does not identify {} and {}",
                c.object_name(a),
                c.object_name(b)
            )));
        }
    }
    let q = &seq.quotient;
    let class_map = q.classes().ids().map(|k| h.on_object(q.classes().representative(k))).collect();
    Ok(InducedFunctor { target: h.target().clone(), class_map, arrow_images: h.arrow_map().to_vec() })
}

/// The unique `L: Q → S` with `L ∘ q = H`, for skeletal `S`. Agreement with
/// `H` and functoriality on arrows up to `max_len` letters are checked.
pub fn factor_through_reflection(
    h: &Functor,
    seq: &ZExactSequence,
    max_len: usize,
    budget: Budget,
) -> Result<InducedFunctor> {
    if !h.target().is_skeletal() {
        return Err(Error::Precondition("target category is not skeletal".into()));
    }
    let l = induce(h, seq)?;
    if let Some(problem) = induced_problems(&l, h, seq, max_len, budget)?.into_iter().next() {
        return Err(Error::Inconsistency(problem));
    }
    Ok(l)
}

fn induced_problems(
    l: &InducedFunctor,
    h: &Functor,
    seq: &ZExactSequence,
    max_len: usize,
    budget: Budget,
) -> Result<Vec<String>> {
    let (c, q) = (&seq.category, &seq.quotient);
    let mut problems = Vec::new();
    for f in c.arrow_ids() {
        if l.on_arrow(&q.q_map(f))? != h.on_arrow(f) {
            problems.push(format!("L ∘ q differs from H on `{}`", c.arrow_name(f)));
        }
    }
    let arrows = q.enumerate_all(max_len, budget)?;
    for a in &arrows {
        for b in arrows.iter().filter(|b| b.src == a.tgt && a.word.len() + b.word.len() <= max_len) {
            let ab = q.q_compose(a, b)?;
            let expected = l.target.compose(l.on_arrow(a)?, l.on_arrow(b)?)?;
            if l.on_arrow(&ab)? != expected {
                problems.push(format!(
                    "L does not preserve the composite of {} and {}",
                    q.display_word(a),
                    q.display_word(b)
                ));
            }
        }
    }
    Ok(problems)
}

/// Finite stand-in for "every category": the test domains and codomains of
/// universal-property checks.
#[derive(Clone, Debug)]
pub struct ProbeFamily {
    pub probes: Vec<(String, Arc<FinCat>)>,
    pub budget: Budget,
    /// Length bound for quotient-arrow enumeration.
    pub max_len: usize,
}

impl ProbeFamily {
    pub fn new(mut probes: Vec<(String, Arc<FinCat>)>, budget: Budget, max_len: usize) -> ProbeFamily {
        probes.sort_by(|a, b| a.0.cmp(&b.0));
        ProbeFamily { probes, budget, max_len }
    }

    /// Corpus categories with at most two objects and four non-identity
    /// arrows; quotient bound 4.
    pub fn default_corpus(budget: Budget) -> ProbeFamily {
        ProbeFamily::new(corpus::default_probes(), budget, 4)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    fn merge(&mut self, other: CheckReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

/// Probe-checks that `k` is the Z-kernel of `q` and `q` the Z-cokernel of `k`.
pub fn verify_short_z_exact(seq: &ZExactSequence, probes: &ProbeFamily) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let (c, k, i, q) = (&seq.category, &seq.kernel, &seq.inclusion, &seq.quotient);
    let budget = probes.budget;

    report.check(k.is_groupoid(), || "kernel is not a groupoid".into());
    report.check(i.is_injective() && **i.target() == **c, || "k is not an inclusion into C".into());
    report.check(is_trivial_functor(&Composed::new(i, q)?), || "q ∘ k is not trivial".into());

    let arrows = q.enumerate_all(probes.max_len, budget)?;
    for a in &arrows {
        report.check(!q.q_is_iso(a) || a.src == a.tgt, || {
            format!("Q is not skeletal: {} is a non-endo isomorphism", q.render_arrow(a))
        });
        let mut generated = q.identity(a.src);
        for f in a.word.as_slice() {
            generated = q.q_compose(&generated, &q.q_map(*f))?;
        }
        report.check(generated == *a, || format!("{} is not generated by the image of q", q.render_arrow(a)));
    }

    for (name, x) in &probes.probes {
        let kernel_maps = enumerate_functors(x, k, budget)?;
        for g in enumerate_functors(x, c, budget)? {
            let trivial = is_trivial_functor(&Composed::new(&g, q)?);
            if x.is_groupoid() {
                report.check(trivial, || format!("probe {name}: q ∘ G is not trivial for a groupoid domain"));
            }
            if !trivial {
                continue;
            }
            let mut factorizations = Vec::new();
            for hmap in &kernel_maps {
                if hmap.then(i)? == g {
                    factorizations.push(hmap);
                }
            }
            report.check(factorizations.len() == 1, || {
                format!("probe {name}: {} factorizations through k instead of 1", factorizations.len())
            });
            if let [only] = factorizations.as_slice() {
                let corestricted = factor_through_coreflection(&g, seq);
                report.check(corestricted.as_ref().is_ok_and(|h| h == *only), || {
                    format!("probe {name}: corestriction disagrees with the enumerated factorization")
                });
            }
        }

        for h in enumerate_functors(c, x, budget)? {
            if !is_trivial_functor(&Composed::new(i, &h)?) {
                continue;
            }
            match induce(&h, seq) {
                Ok(l) => {
                    for problem in induced_problems(&l, &h, seq, probes.max_len, budget)? {
                        report.check(false, || format!("probe {name}: {problem}"));
                    }
                    report.checks += 1;
                }
                Err(e) => report.check(false, || format!("probe {name}: {e}")),
            }
        }
    }
    Ok(report)
}

/// Probe-checks that the inclusion from [`z_kernel`] has the kernel
/// universal property for `f`.
pub fn verify_z_kernel<F: ArrowAction + ?Sized>(f: &F, probes: &ProbeFamily) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let (kernel, k) = z_kernel(f)?;
    report.check(is_trivial_functor(&Composed::new(&k, f)?), || "F ∘ k is not trivial".into());
    for (name, x) in &probes.probes {
        let into_kernel = enumerate_functors(x, &kernel, probes.budget)?;
        for g in enumerate_functors(x, f.source(), probes.budget)? {
            let trivial = is_trivial_functor(&Composed::new(&g, f)?);
            let mut count = 0;
            for h in &into_kernel {
                if h.then(&k)? == g {
                    count += 1;
                }
            }
            let expected = usize::from(trivial);
            report.check(count == expected, || {
                format!("probe {name}: {count} factorizations through the Z-kernel, expected {expected}")
            });
        }
    }
    Ok(report)
}

/// Checks that every functor from the groupoid `t` to the skeletal `f` is
/// trivial.
pub fn pt1_check(t: &Arc<FinCat>, f: &Arc<FinCat>, budget: Budget) -> Result<CheckReport> {
    if !t.is_groupoid() {
        return Err(Error::Precondition("first category is not a groupoid".into()));
    }
    if !f.is_skeletal() {
        return Err(Error::Precondition("second category is not skeletal".into()));
    }
    let mut report = CheckReport::default();
    for (n, g) in enumerate_functors(t, f, budget)?.iter().enumerate() {
        report.check(is_trivial_functor(g), || format!("functor #{n} is not trivial"));
    }
    Ok(report)
}

/// Everything `check-pretorsion` runs for one category.
pub fn check_pretorsion(c: &Arc<FinCat>, probes: &ProbeFamily) -> Result<CheckReport> {
    let seq = torsionfree_reflection(c);
    let mut report = verify_short_z_exact(&seq, probes)?;
    let (zk, _) = z_kernel(&seq.quotient)?;
    report.check(*zk == *seq.kernel, || "Z-kernel of q differs from Iso(C)".into());
    let (aut, _) = subgroupoid(c, SubgroupoidMode::Aut);
    let (zk_id, _) = z_kernel(&Functor::identity(c))?;
    report.check(*zk_id == *aut, || "Z-kernel of the identity differs from Aut(C)".into());
    report.merge(verify_z_kernel(&seq.quotient, probes)?);
    if c.is_groupoid() {
        for (name, f) in probes.probes.iter().filter(|(_, f)| f.is_skeletal()) {
            let pt1 = pt1_check(c, f, probes.budget)?;
            report.checks += pt1.checks;
            report.failures.extend(pt1.failures.into_iter().map(|m| format!("PT1 into {name}: {m}")));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    /// `I ⊔ 2`, built by hand.
    fn iso_pair_plus_arrow() -> Arc<FinCat> {
        Arc::new(
            FinCat::from_parts(
                &["X", "Y", "A", "B"],
                &[("f", "X", "Y"), ("g", "Y", "X"), ("u", "A", "B")],
                &[("f", "g", "id:X"), ("g", "f", "id:Y")],
            )
            .unwrap(),
        )
    }

    #[test]
    fn trivial_functor_examples() {
        let i = corpus::load("iso_pair").unwrap();
        let two = corpus::load("arrow2").unwrap();
        for f in enumerate_functors(&i, &two, Budget::default()).unwrap() {
            assert!(is_trivial_functor(&f));
        }
        assert!(!is_trivial_functor(&Functor::identity(&two)));
        for (_, c) in corpus::all() {
            let to_one = Functor::to_terminal(&c, "*");
            assert!(is_trivial_functor(&to_one));
        }
    }

    #[test]
    fn torsion_coreflection_examples() {
        let i = corpus::load("iso_pair").unwrap();
        assert_eq!(*torsion_coreflection(&i).0, *i);
        let two = corpus::load("arrow2").unwrap();
        assert_eq!(*torsion_coreflection(&two).0, FinCat::discrete(&["A", "B"]));
        let mixed = iso_pair_plus_arrow();
        let (iso, inc) = torsion_coreflection(&mixed);
        let expected = FinCat::from_parts(
            &["X", "Y", "A", "B"],
            &[("f", "X", "Y"), ("g", "Y", "X")],
            &[("f", "g", "id:X"), ("g", "f", "id:Y")],
        )
        .unwrap();
        assert_eq!(*iso, expected);
        assert!(inc.is_injective());
    }

    #[test]
    fn reflection_of_iso_pair_is_the_integers() {
        let i = corpus::load("iso_pair").unwrap();
        let seq = torsionfree_reflection(&i);
        assert_eq!(seq.quotient.num_classes(), 1);
        let arrows = seq.quotient.enumerate_all(3, Budget::default()).unwrap();
        let words: Vec<String> = arrows.iter().map(|a| seq.quotient.display_word(a).to_string()).collect();
        assert_eq!(words, vec!["()", "f", "g", "f,f", "g,g", "f,f,f", "g,g,g"]);
    }

    #[test]
    fn reflection_of_skeletal_categories_is_trivial() {
        for name in ["arrow2", "chain3", "retract", "idempotent", "z3"] {
            let c = corpus::load(name).unwrap();
            let seq = torsionfree_reflection(&c);
            assert_eq!(seq.quotient.num_classes(), c.num_objects(), "{name}");
            let arrows = seq.quotient.enumerate_all(4, Budget::default()).unwrap();
            assert_eq!(arrows.len(), c.num_arrows(), "{name}");
        }
    }

    #[test]
    fn z_kernel_examples() {
        for (name, c) in corpus::all() {
            let (aut, _) = subgroupoid(&c, SubgroupoidMode::Aut);
            assert_eq!(*z_kernel(&Functor::identity(&c)).unwrap().0, *aut, "{name}");
            assert_eq!(*z_kernel(&Functor::to_terminal(&c, "*")).unwrap().0, *c, "{name}");
            let seq = torsionfree_reflection(&c);
            assert_eq!(*z_kernel(&seq.quotient).unwrap().0, *seq.kernel, "{name}");
        }
    }

    #[test]
    fn factor_through_coreflection_examples() {
        let i = corpus::load("iso_pair").unwrap();
        let seq = torsionfree_reflection(&i);
        // groupoid domains always factor
        let z2 = corpus::load("z2").unwrap();
        for g in enumerate_functors(&z2, &i, Budget::default()).unwrap() {
            let h = factor_through_coreflection(&g, &seq).unwrap();
            assert_eq!(h.then(&seq.inclusion).unwrap(), g);
        }
        // k itself factors as the identity
        let h = factor_through_coreflection(&seq.inclusion, &seq).unwrap();
        assert_eq!(h, Functor::identity(&seq.kernel));
        // picking an object
        let one = Arc::new(FinCat::discrete(&["*"]));
        let pick = Functor::from_names(one.clone(), i.clone(), &map(&[("*", "Y")]), &map(&[])).unwrap();
        let h = factor_through_coreflection(&pick, &seq).unwrap();
        assert_eq!(seq.kernel.object_name(h.on_object(ObjId(0))), "Y");
    }

    #[test]
    fn factor_through_coreflection_rejects_nontrivial_composites() {
        let two = corpus::load("arrow2").unwrap();
        let seq = torsionfree_reflection(&two);
        let err = factor_through_coreflection(&Functor::identity(&two), &seq).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn factor_through_reflection_examples() {
        let i = corpus::load("iso_pair").unwrap();
        let seq = torsionfree_reflection(&i);
        let z3 = corpus::load("z3").unwrap();
        let h = Functor::from_names(
            i.clone(),
            z3.clone(),
            &map(&[("X", "X"), ("Y", "X")]),
            &map(&[("f", "r"), ("g", "r2")]),
        )
        .unwrap();
        let l = factor_through_reflection(&h, &seq, 4, Budget::default()).unwrap();
        let f = i.arrow_id("f").unwrap();
        let ff = seq.quotient.arrow(ClassId(0), vec![f, f], ClassId(0)).unwrap();
        assert_eq!(z3.arrow_name(l.on_arrow(&ff).unwrap()), z3.compose_arrows("r", "r").unwrap());

        let one = Functor::to_terminal(&i, "*");
        let lc = factor_through_reflection(&one, &seq, 4, Budget::default()).unwrap();
        for a in seq.quotient.enumerate_all(3, Budget::default()).unwrap() {
            assert_eq!(lc.on_arrow(&a).unwrap(), ArrowId(0));
        }

        let chain = corpus::load("chain3").unwrap();
        let seq = torsionfree_reflection(&chain);
        let l = factor_through_reflection(&Functor::identity(&chain), &seq, 4, Budget::default()).unwrap();
        let arrows = seq.quotient.enumerate_all(4, Budget::default()).unwrap();
        let mut images: Vec<ArrowId> = arrows.iter().map(|a| l.on_arrow(a).unwrap()).collect();
        images.sort();
        assert_eq!(images, chain.arrow_ids().collect::<Vec<_>>());
    }

    #[test]
    fn factor_through_reflection_requires_a_skeletal_target() {
        let i = corpus::load("iso_pair").unwrap();
        let seq = torsionfree_reflection(&i);
        let err = factor_through_reflection(&Functor::identity(&i), &seq, 4, Budget::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn short_z_exact_examples() {
        let probes = ProbeFamily::new(
            ["one", "arrow2", "iso_pair"].iter().map(|n| (n.to_string(), corpus::load(n).unwrap())).collect(),
            Budget::default(),
            4,
        );
        let i = corpus::load("iso_pair").unwrap();
        let report = verify_short_z_exact(&torsionfree_reflection(&i), &probes).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        assert!(report.checks > 0);

        let d = Arc::new(FinCat::discrete(&["A", "B"]));
        assert!(verify_short_z_exact(&torsionfree_reflection(&d), &probes).unwrap().passed());

        let mut broken = torsionfree_reflection(&i);
        let idx = broken.quotient.spec().pairs().iter().position(|(a, b)| a != b).unwrap();
        broken.quotient = coequalize(broken.quotient.spec().without_pair(idx));
        // the remaining pair (g's endpoints) still merges X and Y, so drop both
        let idx = broken.quotient.spec().pairs().iter().position(|(a, b)| a != b).unwrap();
        broken.quotient = coequalize(broken.quotient.spec().without_pair(idx));
        let report = verify_short_z_exact(&broken, &probes).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn pt1_examples() {
        let i = corpus::load("iso_pair").unwrap();
        let two = corpus::load("arrow2").unwrap();
        let report = pt1_check(&i, &two, Budget::default()).unwrap();
        assert_eq!(report.checks, 2);
        assert!(report.passed());
        let d = Arc::new(FinCat::discrete(&["A", "B"]));
        for (_, f) in corpus::all().into_iter().filter(|(_, f)| f.is_skeletal()) {
            assert!(pt1_check(&d, &f, Budget::default()).unwrap().passed());
        }
        assert!(matches!(pt1_check(&i, &i, Budget::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn groupoid_probes_make_q_composites_trivial() {
        for (name, c) in corpus::all() {
            let seq = torsionfree_reflection(&c);
            for (_, x) in corpus::all().into_iter().filter(|(_, x)| x.is_groupoid() && x.num_arrows() <= 4) {
                for g in enumerate_functors(&x, &c, Budget::default()).unwrap() {
                    assert!(is_trivial_functor(&Composed::new(&g, &seq.quotient).unwrap()), "{name}");
                }
            }
        }
    }
}
