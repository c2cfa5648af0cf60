//! Command-line front end for the finite-topology structure-map library.
//!
//! Subcommands: `enumerate` streams topologies (or class representatives,
//! or a degree histogram) as JSON lines; `canonical` prints the
//! homeomorphism-class table for a ground size; `compute` applies one
//! structure map to each JSON value read from a file or standard input;
//! `verify` runs named identity checks and emits one JSON report per line;
//! `count` prints totals.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error (including
//! an unknown check name), 3 rejected input, reported on standard error as
//! a single JSON object `{code, message, offending_input}`.
//!
//! The tool is fully deterministic: identical invocations produce identical
//! byte streams. `TOPOBIM_MAX_N` raises the ground-size caps (at the cost
//! of steep enumeration growth), up to the hard limit of 16 labels.

use std::io::{BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use topobim_core::enumerate::{
    self, DEFAULT_CANONICAL_CAP, DEFAULT_ENUM_CAP,
};
use topobim_core::{
    ops, verify, AdmissiblePair, BasisKey, Error, ExecMode, LabelSet, LinComb, Topology,
    MAX_GROUND_SIZE,
};

#[derive(Parser)]
#[command(name = "topobim", version, about = "Finite topologies as quasi-orders: enumeration, structure maps, identity checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stream every topology on the ground set {0, .., n-1}, one JSON line each
    Enumerate(EnumerateArgs),
    /// Print the homeomorphism-class table for ground size n, one class per line
    Canonical {
        n: usize,
    },
    /// Apply one structure map to each JSON value from FILE or standard input
    Compute {
        map: MapName,
        /// Input file; standard input when omitted
        file: Option<PathBuf>,
    },
    /// Run identity checks; JSON reports on stdout, summary table on stderr
    Verify(VerifyArgs),
    /// Print how many topologies exist on n points
    Count(CountArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    n: usize,
    /// One canonical representative per homeomorphism class
    #[arg(long, conflicts_with = "grading")]
    unlabelled: bool,
    /// Degree histogram instead of the stream, one {degree, count} line each
    #[arg(long)]
    grading: bool,
}

#[derive(Args)]
struct CountArgs {
    n: usize,
    /// Count homeomorphism classes instead of labelled topologies
    #[arg(long, conflicts_with = "grading")]
    unlabelled: bool,
    /// Degree histogram, one {degree, count} line each
    #[arg(long)]
    grading: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single named check
    #[arg(long, conflicts_with = "all")]
    check: Option<String>,
    /// Run every registered check
    #[arg(long)]
    all: bool,
    /// Ground size; defaults to each check's registered cap
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Copy, Clone, ValueEnum)]
enum MapName {
    #[value(name = "delta_external")]
    DeltaExternal,
    #[value(name = "gamma_internal")]
    GammaInternal,
    #[value(name = "counit_internal")]
    CounitInternal,
    #[value(name = "m_product")]
    MProduct,
    #[value(name = "delta_D")]
    DeltaD,
    #[value(name = "gamma_Dtilde")]
    GammaDtilde,
    #[value(name = "counit_Dtilde")]
    CounitDtilde,
    #[value(name = "p2_projection")]
    P2Projection,
    #[value(name = "phi_coaction")]
    PhiCoaction,
    #[value(name = "star_product")]
    StarProduct,
    #[value(name = "unquotient")]
    Unquotient,
    #[value(name = "divtimes_product")]
    DivtimesProduct,
    #[value(name = "psi_action")]
    PsiAction,
    #[value(name = "xi_map")]
    XiMap,
    #[value(name = "m13")]
    M13,
}

/// How a command run ends short of success. `Usage` exits 2, `Data` exits 3
/// with the JSON error object on stderr, `ChecksFailed` exits 1.
enum Failure {
    Usage(String),
    Data { code: &'static str, message: String, offending_input: Value },
    ChecksFailed,
}

impl Failure {
    fn from_core(e: Error, input: Value) -> Failure {
        Failure::Data { code: e.code(), message: e.to_string(), offending_input: input }
    }

    fn bad_input(message: String, input: Value) -> Failure {
        Failure::Data { code: "InvalidInput", message, offending_input: input }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data { code, message, offending_input }) => {
            let obj = json!({
                "code": code,
                "message": message,
                "offending_input": offending_input,
            });
            eprintln!("{obj}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Enumerate(args) => cmd_enumerate(args),
        Cmd::Canonical { n } => cmd_canonical(n),
        Cmd::Compute { map, file } => cmd_compute(map, file),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Count(args) => cmd_count(args),
    }
}

/// Ground-size cap for a command, `TOPOBIM_MAX_N` allowed to raise (never
/// lower) the default, clamped to the hard label limit.
fn cap(default: usize) -> Result<usize, Failure> {
    match std::env::var("TOPOBIM_MAX_N") {
        Err(_) => Ok(default),
        Ok(raw) => match raw.parse::<usize>() {
            Ok(v) => Ok(v.max(default).min(MAX_GROUND_SIZE)),
            Err(_) => Err(Failure::Usage(format!(
                "TOPOBIM_MAX_N must be a nonnegative integer, got {raw:?}"
            ))),
        },
    }
}

fn emit_lines<T: serde::Serialize>(items: impl IntoIterator<Item = T>) -> Result<(), Failure> {
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for item in items {
        let line = serde_json::to_string(&item).expect("output serializes");
        writeln!(out, "{line}").map_err(|e| Failure::Usage(format!("cannot write output: {e}")))?;
    }
    out.flush().map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

fn grading_lines(n: usize, limit: usize) -> Result<(), Failure> {
    let hist = enumerate::count_by_grading_capped(n, limit, ExecMode::default())
        .map_err(|e| Failure::from_core(e, json!(n)))?;
    emit_lines(hist.into_iter().map(|(degree, count)| json!({ "degree": degree, "count": count })))
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), Failure> {
    if args.unlabelled {
        let classes = enumerate::canonical_classes_capped(
            args.n,
            cap(DEFAULT_CANONICAL_CAP)?,
            ExecMode::default(),
        )
        .map_err(|e| Failure::from_core(e, json!(args.n)))?;
        return emit_lines(classes.into_iter().map(|c| c.representative));
    }
    if args.grading {
        return grading_lines(args.n, cap(DEFAULT_ENUM_CAP)?);
    }
    let labels = LabelSet::from_range(args.n);
    let iter = enumerate::all_topologies_capped(&labels, cap(DEFAULT_ENUM_CAP)?)
        .map_err(|e| Failure::from_core(e, json!(args.n)))?;
    emit_lines(iter)
}

fn cmd_canonical(n: usize) -> Result<(), Failure> {
    let classes =
        enumerate::canonical_classes_capped(n, cap(DEFAULT_CANONICAL_CAP)?, ExecMode::default())
            .map_err(|e| Failure::from_core(e, json!(n)))?;
    emit_lines(classes)
}

fn cmd_count(args: CountArgs) -> Result<(), Failure> {
    if args.grading {
        return grading_lines(args.n, cap(DEFAULT_ENUM_CAP)?);
    }
    let total = if args.unlabelled {
        enumerate::canonical_classes_capped(args.n, cap(DEFAULT_CANONICAL_CAP)?, ExecMode::default())
            .map_err(|e| Failure::from_core(e, json!(args.n)))?
            .len() as u64
    } else {
        let labels = LabelSet::from_range(args.n);
        enumerate::all_topologies_capped(&labels, cap(DEFAULT_ENUM_CAP)?)
            .map_err(|e| Failure::from_core(e, json!(args.n)))?
            .count() as u64
    };
    println!("{total}");
    Ok(())
}

// ---- compute ----

#[derive(Deserialize)]
struct OpenInput {
    topology: Topology,
    open: LabelSet,
}

#[derive(Deserialize)]
struct PairInput {
    base: Topology,
    refinement: Topology,
}

impl PairInput {
    fn validated(self) -> Result<AdmissiblePair, Error> {
        AdmissiblePair::new(self.base, self.refinement)
    }
}

#[derive(Deserialize)]
struct BinaryInput {
    left: BasisKey,
    right: BasisKey,
}

#[derive(Deserialize)]
struct UnquotientInput {
    base: Topology,
    refinement: Topology,
    target: Topology,
}

#[derive(Deserialize)]
struct PsiInput {
    pair: PairInput,
    operand: OpenInput,
}

#[derive(Deserialize)]
struct XiInput {
    pair: PairInput,
    first: OpenInput,
    second: OpenInput,
}

#[derive(Deserialize)]
struct FactorsInput {
    factors: Vec<BasisKey>,
}

fn parse<T: serde::de::DeserializeOwned>(value: &Value) -> Result<T, Failure> {
    serde_json::from_value(value.clone())
        .map_err(|e| Failure::bad_input(e.to_string(), value.clone()))
}

fn apply_map(map: MapName, value: &Value) -> Result<LinComb, Failure> {
    let core = |e: Error| Failure::from_core(e, value.clone());
    match map {
        MapName::DeltaExternal => ops::delta_external(&parse(value)?).map_err(core),
        MapName::GammaInternal => ops::gamma_internal(&parse(value)?).map_err(core),
        MapName::CounitInternal => ops::counit_internal(&parse(value)?).map_err(core),
        MapName::MProduct => {
            let b: BinaryInput = parse(value)?;
            ops::m_product(&b.left, &b.right).map_err(core)
        }
        MapName::DeltaD => {
            let i: OpenInput = parse(value)?;
            ops::delta_d(&i.topology, &i.open).map_err(core)
        }
        MapName::GammaDtilde => {
            let p = parse::<PairInput>(value)?.validated().map_err(core)?;
            ops::gamma_dtilde(&p).map_err(core)
        }
        MapName::CounitDtilde => {
            let p = parse::<PairInput>(value)?.validated().map_err(core)?;
            ops::counit_dtilde(&p).map_err(core)
        }
        MapName::P2Projection => {
            let p = parse::<PairInput>(value)?.validated().map_err(core)?;
            Ok(ops::p2_projection(&p))
        }
        MapName::PhiCoaction => {
            let i: OpenInput = parse(value)?;
            ops::phi_coaction(&i.topology, &i.open).map_err(core)
        }
        MapName::StarProduct => {
            let b: BinaryInput = parse(value)?;
            ops::star_product(&b.left, &b.right).map_err(core)
        }
        MapName::Unquotient => {
            let i: UnquotientInput = parse(value)?;
            let p = AdmissiblePair::new(i.base, i.refinement).map_err(core)?;
            let t = ops::unquotient(&p, &i.target).map_err(core)?;
            Ok(LinComb::from_key(BasisKey::Top(t)))
        }
        MapName::DivtimesProduct => {
            let b: BinaryInput = parse(value)?;
            ops::divtimes_product(&b.left, &b.right).map_err(core)
        }
        MapName::PsiAction => {
            let i: PsiInput = parse(value)?;
            let p = i.pair.validated().map_err(core)?;
            ops::psi_action(&p, &i.operand.topology, &i.operand.open).map_err(core)
        }
        MapName::XiMap => {
            let i: XiInput = parse(value)?;
            let p = i.pair.validated().map_err(core)?;
            ops::xi_map(
                &p,
                (&i.first.topology, &i.first.open),
                (&i.second.topology, &i.second.open),
            )
            .map_err(core)
        }
        MapName::M13 => {
            let i: FactorsInput = parse(value)?;
            ops::m13(&i.factors).map_err(core)
        }
    }
}

fn read_input(file: Option<PathBuf>) -> Result<String, Failure> {
    match file {
        Some(path) => std::fs::read_to_string(&path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::Usage(format!("cannot read standard input: {e}")))?;
            Ok(buf)
        }
    }
}

fn cmd_compute(map: MapName, file: Option<PathBuf>) -> Result<(), Failure> {
    let text = read_input(file)?;
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    // a stream of whitespace-separated JSON values: one output line per value
    for item in serde_json::Deserializer::from_str(&text).into_iter::<Value>() {
        let value = item.map_err(|e| Failure::bad_input(e.to_string(), json!(text.trim())))?;
        let result = apply_map(map, &value)?;
        let line = serde_json::to_string(&result).expect("output serializes");
        writeln!(out, "{line}").map_err(|e| Failure::Usage(format!("cannot write output: {e}")))?;
    }
    out.flush().map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

// ---- verify ----

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    if !args.all && args.check.is_none() {
        return Err(Failure::Usage("pass --all or --check <NAME>".into()));
    }
    let reports = if args.all {
        match args.n {
            Some(n) => verify::run_all(n),
            None => verify::run_all(MAX_GROUND_SIZE),
        }
        .map_err(|e| Failure::Usage(e.to_string()))?
    } else {
        let name = args.check.expect("checked above");
        let info = verify::registered_checks()
            .into_iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Failure::Usage(format!("unknown check name: {name}")))?;
        let n = args.n.unwrap_or(info.default_cap);
        vec![verify::run_check(&name, n).map_err(|e| Failure::Usage(e.to_string()))?]
    };

    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for r in &reports {
        let line = serde_json::to_string(r).expect("report serializes");
        writeln!(out, "{line}").map_err(|e| Failure::Usage(format!("cannot write output: {e}")))?;
    }
    out.flush().map_err(|e| Failure::Usage(format!("cannot write output: {e}")))?;

    let passed = reports.iter().filter(|r| r.passed).count();
    for r in &reports {
        eprintln!(
            "{:<26} n={}  {}  {:>9} checked  {:>6} ms",
            r.name,
            r.ground_size,
            if r.passed { "pass" } else { "FAIL" },
            r.basis_elements_checked,
            r.elapsed_ms,
        );
    }
    eprintln!("{passed}/{} checks passed", reports.len());
    if passed == reports.len() {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}
