use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "puo",
    version,
    about = "Coherent-state moments of the fourth-order oscillator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form and Fock-numeric moments at one time, with deviations.
    Report(ReportArgs),
    /// Moments and the classical trajectory over a time range.
    Evolve(EvolveArgs),
    /// Exact vs leading uncertainty product over a range of Omega/omega.
    Scan(ScanArgs),
    /// Run every invariant suite.
    Validate(ValidateArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct StateArgs {
    /// Frequency of the normal mode.
    #[arg(long = "Omega", visible_alias = "big-freq", allow_negative_numbers = true)]
    pub big_freq: Option<f64>,
    /// Frequency of the ghost mode.
    #[arg(long = "omega", visible_alias = "small-freq", allow_negative_numbers = true)]
    pub small_freq: Option<f64>,
    /// Strength of the normal-mode label.
    #[arg(long = "J", allow_negative_numbers = true)]
    pub big_strength: Option<f64>,
    /// Strength of the ghost-mode label.
    #[arg(long = "j", allow_negative_numbers = true)]
    pub small_strength: Option<f64>,
    /// Initial phase of the normal-mode label.
    #[arg(long = "Gamma0", allow_negative_numbers = true)]
    pub big_phase0: Option<f64>,
    /// Initial phase of the ghost-mode label.
    #[arg(long = "gamma0", allow_negative_numbers = true)]
    pub small_phase0: Option<f64>,
    /// Fock cutoff: `auto` (1e-12 Poisson tail) or an integer.
    #[arg(long)]
    pub truncation: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Significant digits, 6 to 17.
    #[arg(long)]
    pub precision: Option<usize>,
    /// JSON file with default values; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Evaluation time (default 0).
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Start time (default 0).
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t1: Option<f64>,
    /// Output spacing; rows run from t0 to the last t0 + k dt <= t1.
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, value_enum, default_value_t = ScanParam::Ratio)]
    pub param: ScanParam,
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    pub spacing: Spacing,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long, value_enum)]
    pub grid: Option<GridArg>,
    #[arg(long, value_enum)]
    pub format: Option<ValidateFormat>,
    #[arg(long)]
    pub precision: Option<usize>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Swap in the misprinted inverse map (self-test of the suites).
    #[arg(long, hide = true)]
    pub inject_inverse_misprint: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValidateFormat {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanParam {
    Ratio,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridArg {
    Small,
    Full,
}
