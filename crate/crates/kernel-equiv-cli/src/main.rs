//! Command-line front end. Subcommands map one-to-one onto the library's
//! entry points; all machine-readable output goes to standard output as
//! JSON, human summaries go to standard error under --verbose, and exit
//! codes follow one contract everywhere: 0 equivalent/all-equal/success,
//! 1 not equivalent/mismatch, 2 usage or input error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kernel_equiv::*;
use serde::Serialize;
use serde_json::{Value, json};

#[derive(Parser)]
#[command(name = "kernel-equiv", version, about = "Decide sign-conjugation equivalence of finite symmetric kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print a human-readable summary on standard error
    #[arg(long, global = true)]
    verbose: bool,
    /// Accepted for compatibility; output is always JSON
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide equivalence and print a witness or a refusal certificate
    Check(CheckArgs),
    /// Print only the canonical conjugating sign vector
    Witness(PairArgs),
    /// Stream every conjugating sign vector, one JSON array per line
    Enumerate(PairArgs),
    /// Compare principal minors of the two kernels by brute force
    Oracle(OracleArgs),
    /// Generate a random kernel file on standard output
    Gen(GenArgs),
}

#[derive(Args)]
struct PairArgs {
    /// Left kernel file
    k: PathBuf,
    /// Right kernel file
    q: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// On refusal, search for a smallest distinguishing principal minor
    #[arg(long)]
    find_minor: bool,
    /// Report every failed pointwise condition, not just the first
    #[arg(long)]
    all: bool,
    /// Include components, forest edges, and fundamental cycles in the report
    #[arg(long)]
    dump_graph: bool,
    /// Include the edge sign table in the report
    #[arg(long)]
    dump_transition: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Largest subset size to sweep (default: the full point count)
    #[arg(long)]
    max_size: Option<usize>,
    /// Worker threads (default: KERNEL_EQUIV_WORKERS, else 1)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Copy, Clone, ValueEnum)]
enum FieldKind {
    Rational,
    Gfp,
    Approx,
}

#[derive(Args)]
struct GenArgs {
    /// Coefficient field of the generated kernel
    #[arg(long, value_enum)]
    field: FieldKind,
    /// Modulus, required for --field gfp
    #[arg(long)]
    p: Option<u64>,
    /// Number of points
    #[arg(long)]
    n: usize,
    /// Probability that an off-diagonal entry is nonzero
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

struct CliError(String);

impl CliError {
    fn new(msg: impl Into<String>) -> CliError {
        CliError(msg.into())
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            eprintln!("{}", json!({ "error": msg }));
            2
        }
    };
    process::exit(code);
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Check(ref args) => run_check(args, cli.verbose),
        Command::Witness(ref args) => run_witness(args, cli.verbose),
        Command::Enumerate(ref args) => run_enumerate(args, cli.verbose),
        Command::Oracle(ref args) => run_oracle(args, cli.verbose),
        Command::Gen(ref args) => run_gen(args, cli.verbose),
    }
}

fn load(path: &PathBuf) -> Result<SymmetricKernel, CliError> {
    let file =
        File::open(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    SymmetricKernel::from_reader(file)
        .map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn load_pair(args: &PairArgs) -> Result<(SymmetricKernel, SymmetricKernel), CliError> {
    Ok((load(&args.k)?, load(&args.q)?))
}

/// Report printed by `check`. Field presence follows the verdict: witness,
/// components, and witness_count appear only on acceptance, certificate and
/// failures only on refusal.
#[derive(Serialize)]
struct CheckReport {
    equivalent: bool,
    heuristic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<i8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    components: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_count: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failures: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transition: Option<Value>,
}

fn certificate_json(cert: &Certificate, spec: &FieldSpec) -> Value {
    match cert {
        Certificate::DiagonalMismatch { index } => {
            json!({ "kind": "diagonal_mismatch", "index": index })
        }
        Certificate::SquareMismatch { i, j } => {
            json!({ "kind": "square_mismatch", "i": i, "j": j })
        }
        Certificate::CycleObstruction { cycle } => {
            json!({ "kind": "cycle_obstruction", "cycle": cycle.vertices() })
        }
        Certificate::MinorMismatch { subset, det_k, det_q } => json!({
            "kind": "minor_mismatch",
            "subset": subset,
            "det_k": spec.entry_to_json(det_k),
            "det_q": spec.entry_to_json(det_q),
        }),
    }
}

fn failure_json(failure: &NecessaryFailure) -> Value {
    match failure {
        NecessaryFailure::Diagonal { index } => {
            json!({ "kind": "diagonal_mismatch", "index": index })
        }
        NecessaryFailure::Square { i, j } => {
            json!({ "kind": "square_mismatch", "i": i, "j": j })
        }
    }
}

fn certificate_hint(cert: &Certificate) -> Vec<usize> {
    match cert {
        Certificate::DiagonalMismatch { index } => vec![*index],
        Certificate::SquareMismatch { i, j } => vec![*i, *j],
        Certificate::CycleObstruction { cycle } => cycle.vertices().to_vec(),
        Certificate::MinorMismatch { subset, .. } => subset.clone(),
    }
}

fn describe_certificate(cert: &Certificate) -> String {
    match cert {
        Certificate::DiagonalMismatch { index } => {
            format!("diagonal entries differ at point {index}")
        }
        Certificate::SquareMismatch { i, j } => {
            format!("squared entries differ at pair ({i}, {j})")
        }
        Certificate::CycleObstruction { cycle } => {
            format!("sign product is -1 around the cycle {:?}", cycle.vertices())
        }
        Certificate::MinorMismatch { subset, .. } => {
            format!("principal minors differ on the subset {subset:?}")
        }
    }
}

fn witness_count_json(verdict: &EquivalenceVerdict) -> Value {
    match verdict.witness_count() {
        Some(count) => match u64::try_from(count) {
            Ok(small) => Value::from(small),
            Err(_) => Value::from(count.to_string()),
        },
        // 128 components or more: report the power itself.
        None => Value::from(format!("2^{}", verdict.component_count().unwrap_or(0))),
    }
}

fn graph_json(graph: &KernelGraph) -> Value {
    let components: Vec<Value> = graph
        .components()
        .iter()
        .map(|c| json!({ "base": c.base, "vertices": c.vertices }))
        .collect();
    let forest: Vec<[usize; 2]> = graph.tree_edges().map(|(a, b)| [a, b]).collect();
    let cycles: Vec<Vec<usize>> = graph
        .fundamental_cycles()
        .map(|p| p.vertices().to_vec())
        .collect();
    json!({
        "components": components,
        "forest_edges": forest,
        "fundamental_cycles": cycles,
    })
}

fn transition_json(table: &TransitionTable) -> Value {
    let edges: Vec<Value> = table
        .entries()
        .map(|((i, j), s)| json!([i, j, s.as_i8()]))
        .collect();
    json!({ "edges": edges })
}

fn run_check(args: &CheckArgs, verbose: bool) -> Result<i32, CliError> {
    let (k, q) = load_pair(&args.pair)?;
    let verdict = decide_equivalence(&k, &q).map_err(|e| CliError(e.to_string()))?;
    let graph = build_graph(&k);

    let mut report = CheckReport {
        equivalent: verdict.is_equivalent(),
        heuristic: verdict.heuristic,
        witness: None,
        components: None,
        witness_count: None,
        certificate: None,
        failures: None,
        graph: None,
        transition: None,
    };

    if let Some(witness) = verdict.witness() {
        report.witness = Some(witness.as_i8_vec());
        report.components = verdict.component_count();
        report.witness_count = Some(witness_count_json(&verdict));
    } else {
        let mut cert = verdict.certificate().expect("refusals carry a certificate").clone();
        if args.find_minor {
            let hint = certificate_hint(&cert);
            if let Some(subset) = find_minimal_mismatch(&k, &q, &hint) {
                let det_k = determinant(&k.submatrix(&subset), k.spec());
                let det_q = determinant(&q.submatrix(&subset), k.spec());
                cert = Certificate::MinorMismatch { subset, det_k, det_q };
            }
        }
        if args.all {
            let failures =
                check_necessary_all(&k, &q).map_err(|e| CliError(e.to_string()))?;
            report.failures = Some(failures.iter().map(failure_json).collect());
        }
        report.certificate = Some(certificate_json(&cert, k.spec()));
    }

    if args.dump_graph {
        report.graph = Some(graph_json(&graph));
    }
    if args.dump_transition {
        // The sign table exists only when the pointwise conditions hold.
        let pass = matches!(
            check_necessary(&k, &q).map_err(|e| CliError(e.to_string()))?,
            NecessaryCheck::Pass
        );
        if pass && let Ok(table) = build_transition(&k, &q, &graph) {
            report.transition = Some(transition_json(&table));
        }
    }

    println!(
        "{}",
        serde_json::to_string(&report).expect("report serialization")
    );
    if verbose {
        match (verdict.witness(), verdict.certificate()) {
            (Some(_), _) => eprintln!(
                "equivalent{}: {} component(s), {} witness(es)",
                if verdict.heuristic { " (heuristic)" } else { "" },
                verdict.component_count().unwrap_or(0),
                verdict
                    .witness_count()
                    .map_or_else(|| "many".to_string(), |c| c.to_string()),
            ),
            (_, Some(cert)) => eprintln!(
                "not equivalent{}: {}",
                if verdict.heuristic { " (heuristic)" } else { "" },
                describe_certificate(cert),
            ),
            _ => unreachable!("verdict carries a witness or a certificate"),
        }
    }
    Ok(if verdict.is_equivalent() { 0 } else { 1 })
}

fn run_witness(args: &PairArgs, verbose: bool) -> Result<i32, CliError> {
    let (k, q) = load_pair(args)?;
    let verdict = decide_equivalence(&k, &q).map_err(|e| CliError(e.to_string()))?;
    match verdict.witness() {
        Some(witness) => {
            println!(
                "{}",
                serde_json::to_string(&witness.as_i8_vec()).expect("vector serialization")
            );
            Ok(0)
        }
        None => {
            if verbose {
                let cert = verdict.certificate().expect("refusals carry a certificate");
                eprintln!("not equivalent: {}", describe_certificate(cert));
            }
            Ok(1)
        }
    }
}

fn run_enumerate(args: &PairArgs, verbose: bool) -> Result<i32, CliError> {
    let (k, q) = load_pair(args)?;
    let verdict = decide_equivalence(&k, &q).map_err(|e| CliError(e.to_string()))?;
    if !verdict.is_equivalent() {
        if verbose {
            let cert = verdict.certificate().expect("refusals carry a certificate");
            eprintln!("not equivalent: {}", describe_certificate(cert));
        }
        return Ok(1);
    }
    let graph = build_graph(&k);
    let witnesses =
        enumerate_witnesses(&verdict, &graph).map_err(|e| CliError(e.to_string()))?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for witness in witnesses {
        let line =
            serde_json::to_string(&witness.as_i8_vec()).expect("vector serialization");
        if let Err(e) = writeln!(out, "{line}") {
            if e.kind() == io::ErrorKind::BrokenPipe {
                // Downstream closed the stream; it has all it wants.
                return Ok(0);
            }
            return Err(CliError(format!("write failed: {e}")));
        }
    }
    if verbose {
        eprintln!(
            "{} witness(es) over {} component(s)",
            verdict
                .witness_count()
                .map_or_else(|| "many".to_string(), |c| c.to_string()),
            verdict.component_count().unwrap_or(0),
        );
    }
    Ok(0)
}

#[derive(Serialize)]
struct OracleJsonReport {
    max_size: usize,
    subsets_checked: u64,
    result: Value,
}

fn run_oracle(args: &OracleArgs, verbose: bool) -> Result<i32, CliError> {
    let (k, q) = load_pair(&args.pair)?;
    let max_size = args.max_size.unwrap_or(k.n());
    let workers = match args.workers {
        Some(w) => w,
        None => match std::env::var("KERNEL_EQUIV_WORKERS") {
            Ok(text) => text
                .parse::<usize>()
                .map_err(|_| CliError(format!("KERNEL_EQUIV_WORKERS is not a worker count: {text:?}")))?,
            Err(_) => 1,
        },
    };
    let report = compare_minors_parallel(&k, &q, max_size, workers)
        .map_err(|e| CliError(e.to_string()))?;
    let (result, code) = match &report.result {
        MinorOutcome::AllEqual => (Value::from("all_equal"), 0),
        MinorOutcome::FirstMismatch { subset, det_k, det_q } => (
            json!({
                "kind": "first_mismatch",
                "subset": subset,
                "det_k": k.spec().entry_to_json(det_k),
                "det_q": k.spec().entry_to_json(det_q),
            }),
            1,
        ),
    };
    println!(
        "{}",
        serde_json::to_string(&OracleJsonReport {
            max_size: report.max_size,
            subsets_checked: report.subsets_checked,
            result,
        })
        .expect("report serialization")
    );
    if verbose {
        match &report.result {
            MinorOutcome::AllEqual => eprintln!(
                "all {} principal minors up to size {} agree",
                report.subsets_checked, report.max_size
            ),
            MinorOutcome::FirstMismatch { subset, .. } => eprintln!(
                "first differing minor on subset {subset:?} after {} checks",
                report.subsets_checked
            ),
        }
    }
    Ok(code)
}

fn describe_field(spec: &FieldSpec) -> String {
    match spec {
        FieldSpec::Rational => "the rationals".to_string(),
        FieldSpec::PrimeField { p } => format!("GF({p})"),
        FieldSpec::ApproxReal { .. } => "approximate reals".to_string(),
    }
}

fn run_gen(args: &GenArgs, verbose: bool) -> Result<i32, CliError> {
    let spec = match args.field {
        FieldKind::Rational | FieldKind::Approx if args.p.is_some() => {
            return Err(CliError::new("--p only applies to --field gfp"));
        }
        FieldKind::Rational => FieldSpec::rational(),
        FieldKind::Approx => FieldSpec::approx_default(),
        FieldKind::Gfp => {
            let p = args.p.ok_or_else(|| CliError::new("--field gfp requires --p"))?;
            FieldSpec::prime_field(p).map_err(|e| CliError(e.to_string()))?
        }
    };
    if args.n == 0 {
        return Err(CliError::new("--n must be at least 1"));
    }
    if !(args.density > 0.0 && args.density <= 1.0) {
        return Err(CliError::new("--density must lie in (0, 1]"));
    }
    let kernel = gen_random_kernel(args.n, &spec, args.density, args.seed);
    println!("{}", kernel.to_json_string());
    if verbose {
        eprintln!(
            "generated a {}-point kernel over {} (density {}, seed {})",
            args.n,
            describe_field(&spec),
            args.density,
            args.seed
        );
    }
    Ok(0)
}
