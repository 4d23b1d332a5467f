//! `flowloc`: exact characteristic numbers from the fixed-point data of a
//! flow.
//!
//! Exit status is 0 on success, 1 for malformed input and 2 when the input
//! parses but violates a mathematical precondition.

mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use flowloc::charforms::{l_genus_poly, parse_invariant, pfaffian_poly, pontryagin_poly, InvariantPoly};
use flowloc::exactnum::{parse_rat, parse_rat_matrix_json};
use flowloc::kronecker::{annihilator_basis, closure_dimension, WeightMatrix};
use flowloc::localize::{
    build_model, component_residues, euler_characteristic, euler_via_residues, signature_indices,
    signature_via_indices, skeigen_basis, skeigen_decompose, verify_commutant, FlowFixedData, ModelKind,
    SkewBlockMatrix,
};
use flowloc::{Error, Rat};

use report::RunReport;

#[derive(Parser)]
#[command(name = "flowloc", version, about = "Exact characteristic numbers from fixed-point data of flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-component residues of an invariant polynomial and their total.
    Residue {
        /// Fixed-point dataset (JSON).
        #[arg(long)]
        input: PathBuf,
        /// `euler`, `L`, `p:<partition>` (e.g. `p:1,1`) or `expr:<text>`.
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        /// Also print the total rounded to this many decimal places.
        #[arg(long, value_name = "DIGITS")]
        approx: Option<usize>,
        /// Print the wall-clock time of the residue evaluation.
        #[arg(long)]
        timing: bool,
    },
    /// Euler characteristic as the sum of the components' Euler characteristics.
    Euler {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated Euler characteristics, one per component.
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        /// Cross-check against the Pfaffian residues.
        #[arg(long)]
        check: bool,
    },
    /// Signature as the sum of indices at isolated fixed points.
    Signature {
        #[arg(long)]
        input: PathBuf,
    },
    /// Closure dimension and annihilator lattice of a weight vector.
    Kronecker {
        /// JSON array of rows of `"p/q"` strings, one row per weight.
        #[arg(long)]
        weights: PathBuf,
    },
    /// Skeigen-values of a skew-symmetric matrix.
    Skeigen {
        /// JSON array of rows of `"p/q"` strings.
        #[arg(long)]
        matrix: PathBuf,
        /// Also print an adapted basis.
        #[arg(long)]
        basis: bool,
        /// Check a matrix against the commutant of the (block-form) matrix.
        #[arg(long, value_name = "FILE")]
        commutant: Option<PathBuf>,
    },
    /// Write the fixed-point dataset of an example flow.
    Model {
        #[arg(long, value_enum)]
        kind: ModelArg,
        /// Comma-separated rationals: all `m + 1` alphas for `cpm`, or
        /// `alpha,beta` for `s4`.
        #[arg(long, allow_hyphen_values = true)]
        alphas: Option<String>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Cpm,
    S4,
    Klein,
}

/// A failure with its exit status.
#[derive(Debug)]
enum Failure {
    Input(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Precondition(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_data(path: &Path) -> CliResult<FlowFixedData> {
    FlowFixedData::from_json(&read(path)?).map_err(|e| match Failure::from(e) {
        Failure::Input(msg) => Failure::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn parse_list(s: &str) -> CliResult<Vec<Rat>> {
    s.split(',').map(|t| parse_rat(t).map_err(Failure::from)).collect()
}

fn parse_psi(spec: &str, m: usize) -> CliResult<InvariantPoly> {
    let psi = if spec == "euler" {
        pfaffian_poly(m)?
    } else if spec == "L" {
        l_genus_poly(m)?
    } else if let Some(part) = spec.strip_prefix("p:") {
        let parts = part
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Failure::Input(format!("invalid partition `{part}`: expected e.g. `2,1`")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        pontryagin_poly(&parts, m)?
    } else if let Some(expr) = spec.strip_prefix("expr:") {
        parse_invariant(expr, m)?
    } else {
        return Err(Failure::Input(format!(
            "unknown --psi `{spec}`: expected euler, L, p:<partition> or expr:<text>"
        )));
    };
    Ok(psi)
}

fn thread_cap() -> CliResult<usize> {
    match std::env::var("RESIDUE_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Failure::Input(format!("RESIDUE_THREADS must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn format_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn run_residue(input: &Path, psi: &str, approx: Option<usize>, timing: bool) -> CliResult<String> {
    let data = load_data(input)?;
    let psi = parse_psi(psi, data.m())?;
    let threads = thread_cap()?;
    let start = Instant::now();
    let residues = component_residues(&psi, &data, threads)?;
    let sum = residues.iter().fold(Rat::from_integer(0.into()), |acc, r| acc + r);
    let total = if data.flow_orientable() { sum } else { sum / Rat::from_integer(2.into()) };
    let elapsed = start.elapsed();
    let report = RunReport {
        psi_label: psi.label().to_string(),
        m: data.m(),
        residues: data.components().iter().map(|c| c.name().to_string()).zip(residues).collect(),
        total,
        halved: !data.flow_orientable(),
        approx,
        timing: timing.then_some(elapsed),
    };
    Ok(report.render()?)
}

fn run_euler(input: &Path, chi: &str, check: bool) -> CliResult<String> {
    let data = load_data(input)?;
    let values = parse_list(chi)?;
    let total = euler_characteristic(&data, &values)?;
    let mut out = String::new();
    for (c, v) in data.components().iter().zip(&values) {
        writeln!(out, "{}  {v}", c.name()).unwrap();
    }
    if !data.flow_orientable() {
        writeln!(out, "halved for the orientation double cover").unwrap();
    }
    writeln!(out, "chi = {total}").unwrap();
    if check {
        let via = euler_via_residues(&data)?;
        if via != total {
            return Err(Failure::Precondition(format!(
                "Euler characteristics sum to {total} but the Pfaffian residues give {via}"
            )));
        }
        writeln!(out, "pfaffian check = {via} (agrees)").unwrap();
    }
    Ok(out)
}

fn run_signature(input: &Path) -> CliResult<String> {
    let data = load_data(input)?;
    let indices = signature_indices(&data)?;
    let sigma = signature_via_indices(&data)?;
    let width = data.components().iter().map(|c| c.name().len()).max().unwrap_or(0).max("component".len());
    let mut out = String::new();
    writeln!(out, "{:<width$}  index", "component").unwrap();
    for (c, i) in data.components().iter().zip(&indices) {
        writeln!(out, "{:<width$}  {i:+}", c.name()).unwrap();
    }
    if !data.flow_orientable() {
        writeln!(out, "sum = {}", indices.iter().sum::<i64>()).unwrap();
        writeln!(out, "sigma = 1/2 * sum = {sigma}").unwrap();
    } else {
        writeln!(out, "sigma = {sigma}").unwrap();
    }
    Ok(out)
}

fn run_kronecker(path: &Path) -> CliResult<String> {
    let w = WeightMatrix::from_json(&read(path)?)?;
    let (span, ann) = closure_dimension(&w);
    let mut out = String::new();
    writeln!(out, "k = {}, d = {}", w.k(), w.d()).unwrap();
    writeln!(out, "dim_span = {span}").unwrap();
    writeln!(out, "dim_annihilator = {ann}").unwrap();
    writeln!(out, "annihilator basis:").unwrap();
    for beta in annihilator_basis(&w) {
        let parts: Vec<String> = beta.iter().map(ToString::to_string).collect();
        writeln!(out, "  ({})", parts.join(", ")).unwrap();
    }
    Ok(out)
}

fn run_skeigen(path: &Path, basis: bool, commutant: Option<&Path>) -> CliResult<String> {
    let a = SkewBlockMatrix::new(parse_rat_matrix_json(&read(path)?)?)?;
    let mut out = String::new();
    writeln!(out, "lambda  mult").unwrap();
    for (lambda, mult) in skeigen_decompose(&a)? {
        writeln!(out, "{:<6}  {mult}", lambda.to_string()).unwrap();
    }
    if basis {
        writeln!(out, "adapted basis:").unwrap();
        for pair in skeigen_basis(&a)? {
            writeln!(
                out,
                "  lambda = {}: {} -> {}",
                pair.lambda,
                format_vec(&pair.e_odd),
                format_vec(&pair.e_even)
            )
            .unwrap();
        }
    }
    if let Some(l_path) = commutant {
        let l = parse_rat_matrix_json(&read(l_path)?)?;
        writeln!(out, "commutant {}", verify_commutant(&l, &a)?).unwrap();
    }
    Ok(out)
}

fn run_model(kind: ModelArg, alphas: Option<&str>, output: Option<&Path>) -> CliResult<String> {
    let list = alphas.map(parse_list).transpose()?;
    let kind = match kind {
        ModelArg::Cpm => {
            let alphas = list.unwrap_or_else(|| (0..3).map(|i| Rat::from_integer(i.into())).collect());
            if alphas.len() < 2 {
                return Err(Failure::Input("cpm needs at least two alphas".into()));
            }
            ModelKind::Cpm { m: alphas.len() - 1, alphas }
        }
        ModelArg::S4 => match list.as_deref() {
            None => ModelKind::SphereSuspension { alpha: Rat::from_integer(1.into()), beta: Rat::from_integer(1.into()) },
            Some([a, b]) => ModelKind::SphereSuspension { alpha: a.clone(), beta: b.clone() },
            Some(_) => return Err(Failure::Input("s4 takes exactly two weights: --alphas alpha,beta".into())),
        },
        ModelArg::Klein => {
            if list.is_some() {
                return Err(Failure::Input("the klein model takes no --alphas".into()));
            }
            ModelKind::KleinDoubleCover
        }
    };
    let json = build_model(&kind)?.to_json();
    match output {
        Some(path) => {
            std::fs::write(path, &json)
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(json),
    }
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Residue { input, psi, approx, timing } => run_residue(&input, &psi, approx, timing),
        Command::Euler { input, chi, check } => run_euler(&input, &chi, check),
        Command::Signature { input } => run_signature(&input),
        Command::Kronecker { weights } => run_kronecker(&weights),
        Command::Skeigen { matrix, basis, commutant } => run_skeigen(&matrix, basis, commutant.as_deref()),
        Command::Model { kind, alphas, output } => run_model(kind, alphas.as_deref(), output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
