//! `steer`: evaluate steering criteria, sweep and bisect state families, run
//! the LHS oracle and emit boundary-curve data.
//!
//! Exit codes: 0 when the command ran (violations are data), 1 on runtime or
//! solver errors, 2 on usage errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use output::Format;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<steer_core::Error> for CliError {
    fn from(e: steer_core::Error) -> Self {
        use steer_core::Error::*;
        match e {
            OutOfRange { .. }
            | UnknownCriterion(_)
            | UnknownFamily(_)
            | Incompatible { .. }
            | Parse { .. }
            | InvalidMeasurement { .. }
            | InvalidSpin(_)
            | EmptyGrid => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "steer", version, about = "EPR-steering criteria and LHS oracle")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Free-text label copied into single-record outputs.
    #[arg(long, global = true)]
    tag: Option<String>,
    /// Seed for randomized constructions (hidden-state grids above qubits).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Criterion catalog.
    Criteria {
        #[command(subcommand)]
        action: CriteriaAction,
    },
    /// Evaluate one criterion on one state.
    Eval(EvalArgs),
    /// Evaluate one criterion along a parameter grid.
    Sweep(SweepArgs),
    /// Bisect the violation boundary along one parameter.
    Boundary(BoundaryArgs),
    /// Decide LHS feasibility on a hidden-state grid and optionally certify.
    Oracle(OracleArgs),
    /// Curve data for figures.
    Figure {
        #[command(subcommand)]
        figure: FigureKind,
    },
}

#[derive(Debug, Subcommand)]
enum CriteriaAction {
    List,
}

#[derive(Debug, Subcommand)]
enum FigureKind {
    /// Entanglement, Reid and collective boundaries of the symmetric Gaussian family.
    CvBounds {
        /// lo:hi:count, evenly spaced and inclusive.
        #[arg(long)]
        nbar_grid: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// werner, symmetric-gaussian or singlet.
    #[arg(long)]
    family: String,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    nbar: Option<f64>,
    /// Spin of the singlet family.
    #[arg(long, allow_negative_numbers = true)]
    j: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    criterion: String,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("points").required(true).args(["grid", "values"])))]
pub struct SweepArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    criterion: String,
    /// Swept parameter name.
    #[arg(long)]
    param: String,
    /// lo:hi:count, evenly spaced and inclusive.
    #[arg(long)]
    grid: Option<String>,
    /// Comma-separated parameter values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    values: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    criterion: String,
    #[arg(long)]
    param: String,
    /// lo:hi; defaults to the parameter's declared range.
    #[arg(long)]
    bracket: Option<String>,
    /// Final bracket width.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("meas").required(true).args(["measurements", "measurement_file"])))]
pub struct OracleArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Built-in qubit preset: mub2 or mub3.
    #[arg(long)]
    measurements: Option<String>,
    /// Plain-text measurement file, applied on both sides.
    #[arg(long, conflicts_with = "measurements")]
    measurement_file: Option<PathBuf>,
    /// Number of pure hidden states (the maximally mixed state is added).
    #[arg(long)]
    grid: usize,
    /// Turn a grid-infeasible dual into a rigorously checked functional.
    #[arg(long)]
    certify: bool,
    /// Write the certificate record as JSON.
    #[arg(long, requires = "certify")]
    certificate: Option<PathBuf>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("STEER_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("STEER_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Runtime(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let ctx = commands::Context {
        format: cli.format,
        tag: cli.tag,
        seed: cli.seed,
    };
    let text = match &cli.command {
        Command::Criteria {
            action: CriteriaAction::List,
        } => commands::list(&ctx)?,
        Command::Eval(a) => commands::eval(&ctx, a)?,
        Command::Sweep(a) => commands::sweep(&ctx, a)?,
        Command::Boundary(a) => commands::boundary(&ctx, a)?,
        Command::Oracle(a) => commands::oracle(&ctx, a)?,
        Command::Figure {
            figure: FigureKind::CvBounds { nbar_grid },
        } => commands::cv_bounds(&ctx, nbar_grid)?,
    };
    output::emit(&text, cli.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (CliError::Usage(msg) | CliError::Runtime(msg)) = &e;
            eprintln!("error: {msg}");
            ExitCode::from(e.code())
        }
    }
}
