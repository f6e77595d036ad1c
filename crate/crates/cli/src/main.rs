//! `quatstab` command-line entry point.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for an
//! invalid configuration.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod output;
mod run;

#[derive(Debug, Parser)]
#[command(name = "quatstab", version, about = "Stability checks for quaternion space forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structure, curvature and pointwise Hessian identities for (n, c).
    Identities(Common),
    /// Curvature-tensor checks only.
    Curvature(Common),
    /// Monte Carlo Hessian and first eigenvalue on the round 4-sphere.
    Sphere(Common),
    /// Stability verdict for a single (n, c).
    Stability(StabilityArgs),
    /// One verdict row per quaternion dimension in a range.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Quaternion dimension.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Constant quaternion sectional curvature.
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Override for algebraic residual tolerances (default 1e-10).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Override for tensor-density tolerances (default 1e-12).
    #[arg(long)]
    pub density_tol: Option<f64>,
    /// Override for relative Monte Carlo tolerances (default scales with 1/sqrt(samples)).
    #[arg(long)]
    pub mc_tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Attach sphere-model Monte Carlo evidence (n = 1, c > 0).
    #[arg(long)]
    pub attach_numerics: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Inclusive range `a..b` of quaternion dimensions.
    #[arg(long)]
    pub n_range: String,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Identities(cfg) => run::identities(&cfg),
        Command::Curvature(cfg) => run::curvature(&cfg),
        Command::Sphere(cfg) => run::sphere(&cfg),
        Command::Stability(args) => run::stability(&args),
        Command::Report(args) => run::report(&args),
    };
    match outcome {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(run::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `quatstab --help` for usage");
            ExitCode::from(2)
        }
        Err(run::Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
