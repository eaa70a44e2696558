//! `expsum`: exponential sum approximations from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "expsum",
    version,
    about = "Exponential sum approximation via multi-point Padé"
)]
struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, env = "EXPSUM_DIGITS", default_value_t = 100)]
    digits: u32,

    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Approximate a target and write its coefficients.
    Approx(ApproxArgs),
    /// Tabulate f, φ and f - φ for a coefficient file.
    Error(ErrorArgs),
    /// Run over a grid of (A, B) and keep the best approximation.
    Sweep(SweepArgs),
    /// Evaluate ln Γ or ln G from gamma-kernel coefficients.
    Gamma(GammaArgs),
}

#[derive(Args, Debug)]
struct TargetArgs {
    #[arg(long)]
    target: String,
    /// Target parameter as key=value; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Args, Debug)]
struct ApproxArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long = "M")]
    m: usize,
    #[arg(long)]
    ninf: usize,
    #[arg(long = "A", allow_negative_numbers = true)]
    a: f64,
    #[arg(long = "B", allow_negative_numbers = true)]
    b: f64,
    /// Coefficient JSON; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ErrorArgs {
    #[arg(long)]
    coeffs: PathBuf,
    #[command(flatten)]
    target: TargetArgs,
    /// Right end of the x range; the target's own range by default.
    #[arg(long)]
    xmax: Option<f64>,
    /// Left end for --logx.
    #[arg(long, default_value_t = 1e-8)]
    xmin: f64,
    /// Number of intervals.
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long)]
    out: PathBuf,
    /// Log-spaced x with an extra ln(x) column.
    #[arg(long)]
    logx: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long = "M")]
    m: usize,
    #[arg(long)]
    ninf: usize,
    /// lo:hi:step
    #[arg(long = "A", allow_hyphen_values = true)]
    a: String,
    /// lo:hi:step
    #[arg(long = "B", allow_hyphen_values = true)]
    b: String,
    /// l1, linf or maxc:BOUND
    #[arg(long, default_value = "l1")]
    objective: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GammaArgs {
    #[arg(long)]
    coeffs: PathBuf,
    #[arg(long = "fn", value_enum)]
    function: GammaFn,
    /// re,im or re
    #[arg(long, allow_hyphen_values = true)]
    z: String,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GammaFn {
    Lngamma,
    Lnbarnesg,
}

/// Why a command failed, and which exit code that maps to.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }
}

impl From<expsum::Error> for Failure {
    fn from(e: expsum::Error) -> Self {
        use expsum::{Error, PipelineStep};
        match &e {
            Error::Step {
                step: PipelineStep::Config,
                ..
            }
            | Error::UnknownTarget(_)
            | Error::Invalid(_)
            | Error::Parse(_)
            | Error::Precision { .. }
            | Error::DomainError(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Approx(a) => commands::approx(&cli, a),
        Command::Error(a) => commands::error(&cli, a),
        Command::Sweep(a) => commands::sweep(&cli, a),
        Command::Gamma(a) => commands::gamma(&cli, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("usage error: {m}"),
                Failure::Numerical(m) => eprintln!("failed: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
