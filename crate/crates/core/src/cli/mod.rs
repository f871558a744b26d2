//! Command-line front end. Labels on the command line are 1-based positions or the names
//! given in the document's `labels` list.
//!
//! Exit codes: 0 success, 1 numeric mismatch, 2 usage or input error.

pub mod document;
pub mod report;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bargmann;
use crate::criteria::{self, Decision, FIXTURE_NAMES, WITNESS_TOL};
use crate::discrimination;
use crate::error::Error;
use crate::qstate::{self, MultiState, PurityMode};
use crate::quantifiers;
use crate::reconstruct;

pub use document::{DocumentError, MultiStateDocument, TaskDocument};
pub use report::{FixtureReport, Provenance, ReportDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Most third-order witnesses listed by `analyze`.
const MAX_TRIPLES: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "multistate", version, about = "Imaginarity and coherence of multi-states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// JSON multi-state document; stdin when neither this nor --fixture is given
    #[arg(long, conflicts_with = "fixture")]
    pub input: Option<PathBuf>,
    /// Use a built-in fixture as input
    #[arg(long)]
    pub fixture: Option<String>,
    /// Rank or witness threshold (default: per test)
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Machine-readable output
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gram matrix, resource tests and optionally quantifiers
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        quantify: bool,
    },
    /// One Bargmann invariant, with the quadratic certificate for qubits
    Invariant {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        seq: String,
    },
    /// Im_R1 and C_R1 with their Gram bounds (qubits)
    Quantify {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Invariant-based witnesses and, with --task, operational advantage ratios
    Witness {
        #[command(flatten)]
        input: InputArgs,
        /// Defaults to 1,2,3
        #[arg(long)]
        seq: Option<String>,
        /// JSON discrimination task applied to every state
        #[arg(long)]
        task: Option<PathBuf>,
    },
    /// Recompute the closed-form fixtures
    Reproduce {
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        fixture: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
    },
    /// Emit a reproducible random multi-state document
    Random {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long)]
        pure: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(DocumentError),
    Mismatch(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(e) => write!(f, "invalid input at {e}"),
            CliError::Mismatch(m) => write!(f, "numeric mismatch: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => EXIT_MISMATCH,
            _ => EXIT_USAGE,
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Input(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalDisagreement { .. }
            | Error::MethodDisagreement { .. }
            | Error::CertificateResidual(_)
            | Error::CertificateFailed(_) => CliError::Mismatch(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Loaded {
    doc: MultiStateDocument,
    ms: MultiState,
    source: String,
}

fn load(args: &InputArgs, stdin: &mut dyn Read) -> CliResult<Loaded> {
    if let Some(name) = &args.fixture {
        let f = criteria::named_fixture(name)?;
        let doc = MultiStateDocument::from_multistate(&f.multistate, None);
        return Ok(Loaded { doc, ms: f.multistate, source: format!("fixture:{name}") });
    }
    let (text, source) = match &args.input {
        Some(path) => (
            std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
            path.display().to_string(),
        ),
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
            (s, "stdin".to_string())
        }
    };
    let doc = MultiStateDocument::parse(&text)?;
    let ms = doc.to_multistate()?;
    Ok(Loaded { doc, ms, source })
}

fn provenance(command: &'static str, loaded: &Loaded, tolerance: Option<f64>) -> Provenance {
    Provenance { input: Some(loaded.source.clone()), tolerance, ..Provenance::new(command) }
}

fn check_tolerance(t: Option<f64>) -> CliResult<()> {
    match t {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(CliError::Usage(format!("--tolerance must be positive, got {t}"))),
        _ => Ok(()),
    }
}

pub fn cmd_analyze(args: &InputArgs, quantify: bool, stdin: &mut dyn Read) -> CliResult<ReportDocument> {
    check_tolerance(args.tolerance)?;
    let loaded = load(args, stdin)?;
    let ms = &loaded.ms;
    let mut report = ReportDocument::new(ms.dim(), ms.len(), provenance("analyze", &loaded, args.tolerance));
    let g = bargmann::gram(ms, args.tolerance);
    report.gram = Some((&g).into());
    let witness_tol = args.tolerance.unwrap_or(WITNESS_TOL);

    if ms.dim() == 2 {
        let im = criteria::qubit_imaginarity_test(ms, args.tolerance)?;
        if im.decision == Decision::ResourceFree {
            report.real_basis = Some((&criteria::construct_real_basis(ms)?).into());
        }
        report.verdicts.push(report::VerdictReport::new(&im, None));
        report.verdicts.push(report::VerdictReport::new(&criteria::qubit_coherence_test(ms, args.tolerance)?, None));
    } else {
        let im = criteria::high_dim_imaginarity_necessary(ms, args.tolerance)?;
        let coh = criteria::high_dim_coherence_necessary(ms, args.tolerance)?;
        report.verdicts.push(report::VerdictReport::new(&im, None));
        report.verdicts.push(report::VerdictReport::new(&coh, None));
    }

    let n = ms.len();
    let triples = (0..n)
        .flat_map(|k| (k + 1..n).flat_map(move |l| (l + 1..n).map(move |m| [k, l, m])))
        .take(MAX_TRIPLES);
    for t in triples {
        let b = bargmann::invariant(ms, &t)?;
        report.invariants.push(report::InvariantReport::new(&b, None));
        let v = criteria::third_order_witness(ms, t[0], t[1], t[2], witness_tol)?;
        report.witnesses.push(report::VerdictReport::new(&v, Some(&t)));
    }

    if quantify {
        if ms.dim() != 2 {
            return Err(CliError::Usage("--quantify needs qubit states".into()));
        }
        report.quantifiers.push(report::QuantifierReport::new("Im_R1", &quantifiers::im_r1(ms)?));
        report.quantifiers.push(report::QuantifierReport::new("C_R1", &quantifiers::c_r1(ms)?));
    }
    Ok(report)
}

pub fn cmd_invariant(args: &InputArgs, seq: &str, stdin: &mut dyn Read) -> CliResult<ReportDocument> {
    check_tolerance(args.tolerance)?;
    let loaded = load(args, stdin)?;
    let seq = loaded.doc.resolve_sequence(seq)?;
    let ms = &loaded.ms;
    let mut report = ReportDocument::new(ms.dim(), ms.len(), provenance("invariant", &loaded, args.tolerance));
    let b = bargmann::invariant(ms, &seq)?;
    let cert = if ms.dim() == 2 { Some(reconstruct::quadratic_certificate(ms, &seq)?) } else { None };
    report.invariants.push(report::InvariantReport::new(&b, cert.as_ref()));
    Ok(report)
}

pub fn cmd_quantify(args: &InputArgs, stdin: &mut dyn Read) -> CliResult<ReportDocument> {
    check_tolerance(args.tolerance)?;
    let loaded = load(args, stdin)?;
    let ms = &loaded.ms;
    if ms.dim() != 2 {
        return Err(CliError::Usage(format!("quantify needs qubit states, got d = {}", ms.dim())));
    }
    let mut report = ReportDocument::new(ms.dim(), ms.len(), provenance("quantify", &loaded, args.tolerance));
    report.gram = Some((&bargmann::gram(ms, args.tolerance)).into());
    report.quantifiers.push(report::QuantifierReport::new("Im_R1", &quantifiers::im_r1(ms)?));
    report.quantifiers.push(report::QuantifierReport::new("C_R1", &quantifiers::c_r1(ms)?));
    Ok(report)
}

pub fn cmd_witness(
    args: &InputArgs,
    seq: Option<&str>,
    task: Option<&std::path::Path>,
    stdin: &mut dyn Read,
) -> CliResult<ReportDocument> {
    check_tolerance(args.tolerance)?;
    let loaded = load(args, stdin)?;
    let ms = &loaded.ms;
    let tol = args.tolerance.unwrap_or(WITNESS_TOL);
    let mut report = ReportDocument::new(ms.dim(), ms.len(), provenance("witness", &loaded, Some(tol)));

    let seq = match seq {
        Some(s) => loaded.doc.resolve_sequence(s)?,
        None if ms.len() >= 3 => vec![0, 1, 2],
        None => (0..ms.len()).collect(),
    };
    let b = bargmann::invariant(ms, &seq)?;
    report.invariants.push(report::InvariantReport::new(&b, None));
    report.witnesses.push(report::VerdictReport::new(&criteria::invariant_witness(ms, &seq, tol)?, Some(&seq)));
    if seq.len() >= 2 {
        // swap the last two factors
        let mut perm: Vec<usize> = (0..seq.len()).collect();
        perm.swap(seq.len() - 2, seq.len() - 1);
        let v = criteria::permutation_equality_witness(ms, &seq, &perm, tol)?;
        let permuted = criteria::permuted_sequence(&seq, &perm)?;
        report.invariants.push(report::InvariantReport::new(&bargmann::invariant(ms, &permuted)?, None));
        report.witnesses.push(report::VerdictReport::new(&v, Some(&seq)));
    }

    if let Some(path) = task {
        if ms.dim() != 2 {
            return Err(CliError::Usage("--task needs qubit states".into()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let (t, m) = TaskDocument::parse(&text)?.to_task()?;
        let reference = discrimination::best_real_reference(&t, &m, discrimination::REAL_GRID)?.value;
        for (k, rho) in ms.iter().enumerate() {
            let ratio = discrimination::advantage_ratio(rho, &t, &m)?;
            let ceiling = discrimination::advantage_ceiling(rho)?;
            if ratio > ceiling + 1e-6 {
                return Err(CliError::Mismatch(format!("state {}: ratio {ratio} exceeds 1 + Im_R = {ceiling}", k + 1)));
            }
            report.tasks.push(report::TaskReport {
                state: k + 1,
                p_succ: discrimination::p_succ(rho, &t, &m)?,
                real_reference: reference,
                ratio,
                ceiling,
            });
        }
    }
    Ok(report)
}

pub fn cmd_reproduce(fixture: Option<&str>, all: bool) -> CliResult<Vec<FixtureReport>> {
    let names: Vec<&str> = match (fixture, all) {
        (_, true) => FIXTURE_NAMES.to_vec(),
        (Some(name), false) => vec![name],
        (None, false) => return Err(CliError::Usage("give --fixture NAME or --all".into())),
    };
    names
        .into_iter()
        .map(|name| {
            criteria::named_fixture(name).map(|f| FixtureReport::from(&f)).map_err(|e| {
                CliError::Usage(format!("{e}; known fixtures: {}", FIXTURE_NAMES.join(", ")))
            })
        })
        .collect()
}

pub fn cmd_random(dim: usize, count: usize, pure: bool, seed: u64) -> CliResult<MultiStateDocument> {
    if dim < 2 {
        return Err(CliError::Usage(format!("--dim must be at least 2, got {dim}")));
    }
    if count < 1 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let mode = if pure { PurityMode::Pure } else { PurityMode::Mixed };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states = (0..count).map(|_| qstate::random_state_with(&mut rng, dim, mode)).collect();
    Ok(MultiStateDocument::from_multistate(&MultiState::new(states)?, None))
}

fn emit_report(report: &ReportDocument, json: bool, out: &mut dyn Write) -> CliResult<()> {
    if let Some(path) = report.first_non_finite() {
        return Err(CliError::Mismatch(format!("non-finite value at {path}")));
    }
    let text = if json { serde_json::to_string_pretty(report).expect("report serializes") } else { report.render() };
    write_out(out, &text)
}

/// A closed downstream pipe is not an error.
fn write_out(out: &mut dyn Write, text: &str) -> CliResult<()> {
    match writeln!(out, "{}", text.trim_end()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Usage(e.to_string())),
        _ => Ok(()),
    }
}

fn dispatch(cli: Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> CliResult<i32> {
    match cli.command {
        Command::Analyze { input, quantify } => emit_report(&cmd_analyze(&input, quantify, stdin)?, input.json, out)?,
        Command::Invariant { input, seq } => emit_report(&cmd_invariant(&input, &seq, stdin)?, input.json, out)?,
        Command::Quantify { input } => emit_report(&cmd_quantify(&input, stdin)?, input.json, out)?,
        Command::Witness { input, seq, task } => {
            emit_report(&cmd_witness(&input, seq.as_deref(), task.as_deref(), stdin)?, input.json, out)?
        }
        Command::Reproduce { fixture, all, json } => {
            let reports = cmd_reproduce(fixture.as_deref(), all)?;
            let passed = reports.iter().all(|r| r.passed);
            let text = if json {
                serde_json::to_string_pretty(&reports).expect("reports serialize")
            } else {
                let mut s: String = reports.iter().map(FixtureReport::render).collect();
                let n = reports.iter().filter(|r| r.passed).count();
                s.push_str(&format!("{n}/{} fixtures passed\n", reports.len()));
                s
            };
            write_out(out, &text)?;
            return Ok(if passed { EXIT_OK } else { EXIT_MISMATCH });
        }
        Command::Random { dim, count, pure, seed } => {
            let doc = cmd_random(dim, count, pure, seed)?;
            write_out(out, &serde_json::to_string(&doc).expect("document serializes"))?;
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command, returning the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli, stdin, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}
