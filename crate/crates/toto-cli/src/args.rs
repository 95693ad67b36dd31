//! Command-line argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "toto",
    version,
    about = "Minimum-time bang-bang frequency protocols for the parametric oscillator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Solve one instance and list every validated extremal.
    Solve(SolveArgs),
    /// Reproduce the built-in four-case table of extremal times.
    Table(TableArgs),
    /// Export the optimal trajectory as CSV.
    Simulate(SimulateArgs),
    /// Solve a (gamma, u2) grid and emit one CSV row per point.
    Sweep(SweepArgs),
}

/// Problem input, either in scaled form (gamma, u1, u2) or as the four
/// physical angular frequencies. The scaled form of sqrt(3) is the decimal
/// 1.7320508; expressions are not parsed.
#[derive(Args, Clone)]
pub struct ProblemArgs {
    /// Target ratio sqrt(omega0/omegaf); must exceed 1.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Lower control bound; 0 < u1 <= 1/gamma^4.
    #[arg(long)]
    pub u1: Option<f64>,
    /// Upper control bound; u2 >= 1.
    #[arg(long)]
    pub u2: Option<f64>,
    /// Initial angular frequency in rad/s.
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Final angular frequency in rad/s.
    #[arg(long)]
    pub omegaf: Option<f64>,
    /// Lower angular frequency bound in rad/s.
    #[arg(long)]
    pub omega1: Option<f64>,
    /// Upper angular frequency bound in rad/s.
    #[arg(long)]
    pub omega2: Option<f64>,
}

#[derive(Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Largest turn count searched per extremal family.
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    /// Emit the full report as canonical JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    /// Cross-check the optimum with the brute-force duration oracle.
    #[arg(long)]
    pub oracle: bool,
    /// Report durations in seconds; requires the frequency form of the input.
    #[arg(long)]
    pub seconds: bool,
}

#[derive(Args)]
pub struct TableArgs {
    /// Compare computed times against the published values, report the
    /// largest deviation, and fail when it exceeds this bound.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Largest turn count searched per extremal family.
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    /// Report the time column in seconds; requires frequency input.
    #[arg(long)]
    pub seconds: bool,
    /// Samples written per protocol segment.
    #[arg(long, default_value_t = 200)]
    pub samples_per_segment: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Gamma grid as start:end:steps (steps = number of points).
    #[arg(long, value_name = "A:B:STEPS")]
    pub gamma_range: String,
    /// u2 grid as start:end:steps (steps = number of points).
    #[arg(long, value_name = "A:B:STEPS")]
    pub u2_range: String,
    /// Shared lower control bound.
    #[arg(long)]
    pub u1: f64,
    /// Largest turn count searched per extremal family.
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
