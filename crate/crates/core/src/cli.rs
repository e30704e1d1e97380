//! The `skelcat` command-line frontend.
//!
//! Every verb produces a [`RunReport`]; text mode prints its findings one per
//! line, `--json` prints the whole report. Exit codes: 0 pass, 1 check or
//! validation failure, 2 usage or syntax error, 3 unknown or budget exhausted.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::coeq::{coequalize, IdentificationSpec, QuotientCat};
use crate::corpus;
use crate::dot::{category_dot, quotient_dot};
use crate::error::{Error, Result};
use crate::fincat::{subgroupoid, validate_category, CategoryFile, FinCat, Functor, FunctorFile, SubgroupoidMode};
use crate::presentation::{
    bounded_normal_forms, word_equal_bounded, z_cokernel, z_cokernel_of_identity, BoundedVerdict, PWord, Presentation,
    SearchBound,
};
use crate::pretorsion::{check_pretorsion, torsionfree_reflection, z_kernel, ProbeFamily};
use crate::words::{reduce, Word};
use crate::Budget;

#[derive(Debug, Parser)]
#[command(name = "skelcat", version, about = "Skeletal reflections and Z-exact sequences of finite categories")]
pub struct Cli {
    /// Print the run report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print the wall-clock duration on stderr.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a category file.
    Validate {
        cat: PathBuf,
        /// Print the category in canonical form.
        #[arg(long)]
        canonical: bool,
    },
    /// Reduce a comma-separated word of arrows.
    Reduce {
        cat: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Coequalize object identifications such as `X=Y,U=V`.
    Coeq {
        cat: PathBuf,
        #[arg(long)]
        identify: String,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// The groupoid of isomorphisms.
    Iso { cat: PathBuf },
    /// The groupoid of automorphisms.
    Aut { cat: PathBuf },
    /// The skeletal reflection.
    Reflect {
        cat: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// The Z-kernel of a functor.
    Zkernel { functor: PathBuf },
    /// The Z-cokernel of the identity, as a presentation.
    ZcokId {
        cat: PathBuf,
        #[command(flatten)]
        words: WordQueries,
    },
    /// The Z-cokernel of a functor, as a presentation.
    Zcok {
        functor: PathBuf,
        #[command(flatten)]
        words: WordQueries,
    },
    /// Verify the short Z-exact sequence of a category against probes.
    CheckPretorsion {
        cat: PathBuf,
        /// Directory of probe category files (default: bundled probes).
        #[arg(long)]
        probes: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Export a category, or its skeletal reflection, as DOT.
    ExportDot {
        cat: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long)]
        reflect: bool,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// The bundled example categories.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, clap::Args)]
pub struct WordQueries {
    /// Rewrite steps for word-equality searches.
    #[arg(long, default_value_t = SearchBound::default().max_steps)]
    pub bound: usize,
    /// Check an equality `w1=w2`; letters `name` or `name^-1`, `()` empty.
    #[arg(long)]
    pub equal: Vec<String>,
    /// List normal forms of words up to this length.
    #[arg(long)]
    pub normal_forms: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// List the bundled categories.
    List,
    /// Write every bundled category file into a directory.
    Export { dir: PathBuf },
    /// Round-trip and pretorsion checks on every bundled category.
    RunAll {
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Unknown => 3,
        }
    }
}

/// Everything a run produced. The duration is kept out of the serialized
/// form so reports are byte-identical across runs.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub verb: String,
    pub inputs: Vec<String>,
    pub outcome: Outcome,
    pub findings: Vec<String>,
    #[serde(skip)]
    pub duration: Duration,
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Invalid(_)
        | Error::InvalidFunctor(_)
        | Error::NotClosed { .. }
        | Error::Precondition(_)
        | Error::Inconsistency(_) => 1,
        Error::BudgetExceeded { .. } => 3,
        Error::UnknownObject(_)
        | Error::UnknownArrow(_)
        | Error::NotComposable { .. }
        | Error::ClassMismatch { .. }
        | Error::Presentation(_)
        | Error::Parse(_) => 2,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_file(path: &Path) -> Result<CategoryFile> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn load_category(path: &Path) -> Result<Arc<FinCat>> {
    let raw = parse_file(path)?;
    Ok(Arc::new(validate_category(&raw)?))
}

/// Category paths inside a functor file are relative to the functor file.
pub fn load_functor(path: &Path) -> Result<Functor> {
    let raw: FunctorFile =
        serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let source = load_category(&dir.join(&raw.source))?;
    let target = load_category(&dir.join(&raw.target))?;
    Functor::from_names(source, target, &raw.objects, &raw.arrows)
}

struct Output {
    outcome: Outcome,
    findings: Vec<String>,
}

impl Output {
    fn pass(findings: Vec<String>) -> Output {
        Output { outcome: Outcome::Pass, findings }
    }
}

fn lines(text: &str) -> impl Iterator<Item = String> + '_ {
    text.lines().map(str::to_string)
}

fn category_summary(c: &FinCat) -> Vec<String> {
    let mut out = vec![format!("objects: {}", c.objects().map(|o| c.object_name(o)).collect::<Vec<_>>().join(", "))];
    out.push(format!("arrows: {}", c.non_identity_arrows().count()));
    for a in c.non_identity_arrows() {
        out.push(format!("  {}: {} -> {}", c.arrow_name(a), c.object_name(c.dom(a)), c.object_name(c.cod(a))));
    }
    out
}

fn quotient_listing(q: &QuotientCat, max_len: usize, budget: Budget) -> Result<Vec<String>> {
    let base = q.base();
    let mut out = vec![format!("classes: {}", q.num_classes())];
    for c in q.classes().ids() {
        let members: Vec<&str> = q.classes().members(c).iter().map(|o| base.object_name(*o)).collect();
        out.push(format!("  {} = {{{}}}", q.class_name(c), members.join(", ")));
    }
    let arrows = q.enumerate_all(max_len, budget)?;
    out.push(format!("arrows up to length {max_len}: {}", arrows.len()));
    out.extend(arrows.iter().map(|a| format!("  {}", q.render_arrow(a))));
    Ok(out)
}

fn presentation_listing(
    p: &Presentation,
    images: &[(String, &PWord)],
    queries: &WordQueries,
    budget: Budget,
) -> Result<Output> {
    let mut findings: Vec<String> = lines(&p.to_string()).collect();
    findings.push("images:".into());
    findings.extend(images.iter().map(|(name, w)| format!("  {name} -> {}", p.render(w))));
    if let Some(k) = queries.normal_forms {
        let forms = bounded_normal_forms(p, k, budget)?;
        findings.push(format!("normal forms up to length {k}: {}", forms.len()));
        for f in &forms {
            findings.push(format!("  {} -> {} : {}", p.objects()[f.src], p.objects()[f.tgt], p.render(f)));
        }
    }
    let bound = SearchBound { max_steps: queries.bound, ..SearchBound::default() };
    let mut outcome = Outcome::Pass;
    for query in &queries.equal {
        let (l, r) = query
            .split_once('=')
            .ok_or_else(|| Error::Presentation(format!("equality `{query}` is not of the form w1=w2")))?;
        let (lw, rw) = match (p.parse_word(l, None), p.parse_word(r, None)) {
            (Ok(a), Ok(b)) => (a, b),
            (Ok(a), Err(_)) => (a.clone(), p.parse_word(r, Some(a.src))?),
            (Err(_), Ok(b)) => (p.parse_word(l, Some(b.src))?, b),
            (Err(e), Err(_)) => return Err(e),
        };
        let verdict = word_equal_bounded(p, &lw, &rw, bound)?;
        let text = match &verdict {
            BoundedVerdict::Equal(trace) => format!("equal ({} steps)", trace.len()),
            BoundedVerdict::Distinct(why) => format!("distinct ({why})"),
            BoundedVerdict::Unknown(b) => {
                outcome = Outcome::Unknown;
                format!("unknown (searched {b})")
            }
        };
        findings.push(format!("{} = {}: {text}", p.render(&lw), p.render(&rw)));
        if let BoundedVerdict::Equal(trace) = &verdict {
            findings.extend(trace.iter().map(|s| format!("  {}", p.describe_step(*s))));
        }
    }
    Ok(Output { outcome, findings })
}

fn probe_family(dir: Option<&Path>, max_len: usize, budget: Budget) -> Result<ProbeFamily> {
    let Some(dir) = dir else {
        let mut probes = ProbeFamily::default_corpus(budget);
        probes.max_len = max_len;
        return Ok(probes);
    };
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    let mut probes = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::Parse(e.to_string()))?.path();
        if path.extension().is_some_and(|x| x == "json") {
            let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            probes.push((name, load_category(&path)?));
        }
    }
    Ok(ProbeFamily::new(probes, budget, max_len))
}

fn pretorsion_findings(c: &Arc<FinCat>, probes: &ProbeFamily) -> Result<Output> {
    let report = check_pretorsion(c, probes)?;
    let mut findings = vec![
        format!("probes: {}", probes.probes.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(", ")),
        format!("checks: {}", report.checks),
        format!("failures: {}", report.failures.len()),
    ];
    findings.extend(report.failures.iter().map(|f| format!("  {f}")));
    let outcome = if report.passed() { Outcome::Pass } else { Outcome::Fail };
    Ok(Output { outcome, findings })
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn dispatch(command: &Command, budget: Budget) -> Result<Output> {
    match command {
        Command::Validate { cat, canonical } => {
            let raw = parse_file(cat)?;
            match validate_category(&raw) {
                Ok(c) if *canonical => Ok(Output::pass(lines(&c.to_json()).collect())),
                Ok(c) => {
                    let class = c.classify();
                    let mut findings = vec!["valid".to_string()];
                    findings.extend(category_summary(&c));
                    findings.push(format!("groupoid: {}", class.is_groupoid));
                    findings.push(format!("skeletal: {}", class.is_skeletal));
                    Ok(Output::pass(findings))
                }
                Err(report) => Ok(Output {
                    outcome: Outcome::Fail,
                    findings: report.violations.iter().map(|v| v.to_string()).collect(),
                }),
            }
        }
        Command::Reduce { cat, word } => {
            let c = load_category(cat)?;
            let w = Word::parse(&c, word)?;
            Ok(Output::pass(vec![reduce(&c, w.as_slice()).display(&c).to_string()]))
        }
        Command::Coeq { cat, identify, max_len } => {
            let c = load_category(cat)?;
            let q = coequalize(IdentificationSpec::parse(c, identify)?);
            Ok(Output::pass(quotient_listing(&q, *max_len, budget)?))
        }
        Command::Iso { cat } | Command::Aut { cat } => {
            let c = load_category(cat)?;
            let mode = if matches!(command, Command::Iso { .. }) { SubgroupoidMode::Iso } else { SubgroupoidMode::Aut };
            Ok(Output::pass(category_summary(&subgroupoid(&c, mode).0)))
        }
        Command::Reflect { cat, max_len } => {
            let c = load_category(cat)?;
            let seq = torsionfree_reflection(&c);
            Ok(Output::pass(quotient_listing(&seq.quotient, *max_len, budget)?))
        }
        Command::Zkernel { functor } => {
            let f = load_functor(functor)?;
            Ok(Output::pass(category_summary(&z_kernel(&f)?.0)))
        }
        Command::ZcokId { cat, words } => {
            let c = load_category(cat)?;
            let (p, images) = z_cokernel_of_identity(&c);
            let named: Vec<(String, &PWord)> =
                c.arrow_ids().map(|a| (c.arrow_name(a).to_string(), &images[a.0])).collect();
            presentation_listing(&p, &named, words, budget)
        }
        Command::Zcok { functor, words } => {
            let f = load_functor(functor)?;
            let (p, images) = z_cokernel(&f)?;
            let b = f.target();
            let named: Vec<(String, &PWord)> =
                b.arrow_ids().map(|a| (b.arrow_name(a).to_string(), &images[a.0])).collect();
            presentation_listing(&p, &named, words, budget)
        }
        Command::CheckPretorsion { cat, probes, max_len } => {
            let c = load_category(cat)?;
            pretorsion_findings(&c, &probe_family(probes.as_deref(), *max_len, budget)?)
        }
        Command::ExportDot { cat, output, reflect, max_len } => {
            let c = load_category(cat)?;
            let dot = if *reflect {
                let q = torsionfree_reflection(&c).quotient;
                quotient_dot(&q, &q.enumerate_all(*max_len, budget)?)
            } else {
                category_dot(&c)
            };
            match output {
                Some(path) => {
                    std::fs::write(path, dot).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    Ok(Output::pass(vec![format!("wrote {}", path.display())]))
                }
                None => Ok(Output::pass(lines(&dot).collect())),
            }
        }
        Command::Corpus { action } => match action {
            CorpusAction::List => Ok(Output::pass(
                corpus::all()
                    .iter()
                    .map(|(name, c)| {
                        let class = c.classify();
                        format!(
                            "{name}: {} objects, {} non-identity arrows, groupoid {}, skeletal {}",
                            c.num_objects(),
                            c.non_identity_arrows().count(),
                            class.is_groupoid,
                            class.is_skeletal
                        )
                    })
                    .collect(),
            )),
            CorpusAction::Export { dir } => {
                std::fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
                let mut findings = Vec::new();
                for name in corpus::names() {
                    let path = dir.join(format!("{name}.json"));
                    std::fs::write(&path, corpus::source(name).expect("listed"))
                        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    findings.push(format!("wrote {}", path.display()));
                }
                Ok(Output::pass(findings))
            }
            CorpusAction::RunAll { max_len } => {
                let probes = probe_family(None, *max_len, budget)?;
                let mut outcome = Outcome::Pass;
                let mut findings = Vec::new();
                for (name, c) in corpus::all() {
                    let round_trip = FinCat::from_json(&c.to_json())? == *c;
                    let checked = pretorsion_findings(&c, &probes)?;
                    let ok = round_trip && checked.outcome == Outcome::Pass;
                    if !ok {
                        outcome = Outcome::Fail;
                    }
                    findings.push(format!(
                        "{name}: {} (round trip {}, {})",
                        if ok { "pass" } else { "fail" },
                        if round_trip { "ok" } else { "changed" },
                        checked.findings[1]
                    ));
                }
                Ok(Output { outcome, findings })
            }
        },
    }
}

fn verb(command: &Command) -> &'static str {
    match command {
        Command::Validate { .. } => "validate",
        Command::Reduce { .. } => "reduce",
        Command::Coeq { .. } => "coeq",
        Command::Iso { .. } => "iso",
        Command::Aut { .. } => "aut",
        Command::Reflect { .. } => "reflect",
        Command::Zkernel { .. } => "zkernel",
        Command::ZcokId { .. } => "zcok-id",
        Command::Zcok { .. } => "zcok",
        Command::CheckPretorsion { .. } => "check-pretorsion",
        Command::ExportDot { .. } => "export-dot",
        Command::Corpus { .. } => "corpus",
    }
}

fn inputs(command: &Command) -> Vec<String> {
    match command {
        Command::Validate { cat, .. }
        | Command::Reduce { cat, .. }
        | Command::Coeq { cat, .. }
        | Command::Iso { cat }
        | Command::Aut { cat }
        | Command::Reflect { cat, .. }
        | Command::ZcokId { cat, .. }
        | Command::CheckPretorsion { cat, .. }
        | Command::ExportDot { cat, .. } => vec![display(cat)],
        Command::Zkernel { functor } | Command::Zcok { functor, .. } => vec![display(functor)],
        Command::Corpus { .. } => Vec::new(),
    }
}

/// Runs a parsed command and builds its report, or fails with an error and
/// its exit code.
pub fn execute(cli: &Cli, budget: Budget) -> std::result::Result<RunReport, (Error, i32)> {
    let start = Instant::now();
    let out = dispatch(&cli.command, budget).map_err(|e| {
        let code = error_code(&e);
        (e, code)
    })?;
    Ok(RunReport {
        verb: verb(&cli.command).to_string(),
        inputs: inputs(&cli.command),
        outcome: out.outcome,
        findings: out.findings,
        duration: start.elapsed(),
    })
}

/// The whole program: parses `args` (including the program name), writes
/// to `out`/`err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli, Budget::from_env()) {
        Ok(report) => {
            if cli.json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                for line in &report.findings {
                    let _ = writeln!(out, "{line}");
                }
            }
            if cli.timing {
                let _ = writeln!(err, "{}: {:.3}s", report.verb, report.duration.as_secs_f64());
            }
            report.outcome.exit_code()
        }
        Err((e, code)) => {
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}
