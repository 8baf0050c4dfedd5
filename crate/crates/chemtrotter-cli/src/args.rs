use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "chemtrotter",
    version,
    about = "Trotter error bounds, sum-of-squares splitting and term coalescing for electronic-structure Hamiltonians"
)]
pub struct Cli {
    /// Directory receiving reports, tables and the run manifest.
    #[arg(long, global = true, default_value = "chemtrotter-out")]
    pub out: PathBuf,
    /// Worker-thread cap; results do not depend on it.
    #[arg(long, global = true, value_parser = positive_usize)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Commutator-counting bounds and step counts.
    Bound(BoundArgs),
    /// Sum-of-squares splitting and its bound next to the standard one.
    Sos(SosArgs),
    /// Importance table, period assignment and coalesced schedule.
    Coalesce(CoalesceArgs),
    /// Bounds over a family of sizes with fitted exponents.
    Scaling(ScalingArgs),
    /// Dense-simulation experiments for small systems.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Generate (or convert) a Hamiltonian and write it as JSON.
    Ensemble(EnsembleArgs),
}

/// Where the Hamiltonian comes from: a file or a generated ensemble member.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SourceArgs {
    /// FCIDUMP file, or a `.json` Hamiltonian written by `ensemble`.
    #[arg(long, conflicts_with = "ensemble")]
    pub input: Option<PathBuf>,
    /// Generate an artificial Hamiltonian with this many spin orbitals.
    #[arg(long, value_name = "N", value_parser = positive_usize)]
    pub ensemble: Option<usize>,
    /// Fraction of two-body candidates kept by the generator.
    #[arg(long, default_value_t = 1.0)]
    pub fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub ensemble_seed: u64,
    /// Override the electron count recorded with the Hamiltonian.
    #[arg(long)]
    pub nelec: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundChoice {
    Triangle,
    Mc,
    Cs,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingMethod {
    Triangle,
    Mc,
    Cs,
}

impl ScalingMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::Triangle => "triangle",
            Self::Mc => "mc",
            Self::Cs => "cs",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SamplingArgs {
    /// Monte-Carlo sample count.
    #[arg(long, default_value_t = 100_000, value_parser = positive_u64)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Visit every triple instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum, default_value_t = BoundChoice::All)]
    pub method: BoundChoice,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Energy accuracy in Hartree used for the step count.
    #[arg(long, default_value_t = 1e-3, value_parser = positive_f64)]
    pub target_error: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SosArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long, default_value_t = 1e-3, value_parser = positive_f64)]
    pub target_error: f64,
    /// Rebuild the Hamiltonian densely from the squares (at most 12 spin orbitals).
    #[arg(long)]
    pub verify: bool,
    /// Also write the decomposition itself.
    #[arg(long)]
    pub save_decomposition: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CoalesceArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Base step δt of the coalesced schedule.
    #[arg(long, default_value_t = 0.01, value_parser = positive_f64)]
    pub dt: f64,
    /// Histogram bin width on the chosen axis.
    #[arg(long, default_value_t = 0.25, value_parser = positive_f64)]
    pub bin_width: f64,
    /// Bin `(log10 I − mean) / std` instead of `log10 I`.
    #[arg(long)]
    pub normalize: bool,
    /// Compare the coalesced schedule at Δt/2 with the plain one at Δt by dense simulation.
    #[arg(long)]
    pub compare_error: bool,
    /// Δt for `--compare-error`; the coalesced cycle spans up to 32 Δt.
    #[arg(long, default_value_t = 0.015625, value_parser = positive_f64)]
    pub compare_dt: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ScalingArgs {
    /// Ensemble sizes in spin orbitals, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = positive_usize, conflicts_with = "inputs")]
    pub sizes: Vec<usize>,
    /// Hamiltonian files instead of generated sizes.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub fraction: f64,
    /// Generator seed shared by all sizes.
    #[arg(long, default_value_t = 0)]
    pub ensemble_seed: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "triangle")]
    pub method: Vec<ScalingMethod>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long, default_value_t = 1e-3, value_parser = positive_f64)]
    pub target_error: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleSource {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Particle-number sector; defaults to the recorded electron count, else
    /// the sector of the global ground state.
    #[arg(long)]
    pub sector: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaChoice {
    First,
    Second,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum OracleCommand {
    /// Measured energy error over successive step halvings.
    Convergence(ConvergenceArgs),
    /// Second-order effective Hamiltonian against the matrix logarithm.
    Bch(BchArgs),
    /// Energy errors over random four-index orderings.
    Histogram(HistogramArgs),
    /// Measured error against the triangle and Cauchy–Schwarz bounds.
    BoundCheck(BoundCheckArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub system: OracleSource,
    #[arg(long, default_value_t = 0.125, value_parser = positive_f64)]
    pub dt: f64,
    #[arg(long, default_value_t = 3, value_parser = positive_usize)]
    pub halvings: usize,
    #[arg(long, value_enum, default_value_t = FormulaChoice::Second)]
    pub formula: FormulaChoice,
}

#[derive(Debug, Args, Serialize)]
pub struct BchArgs {
    #[command(flatten)]
    pub system: OracleSource,
    #[arg(long, default_value_t = 0.125, value_parser = positive_f64)]
    pub dt: f64,
    #[arg(long, default_value_t = 3, value_parser = positive_usize)]
    pub halvings: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct HistogramArgs {
    #[command(flatten)]
    pub system: OracleSource,
    #[arg(long, default_value_t = 500, value_parser = positive_usize)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.125, value_parser = positive_f64)]
    pub dt: f64,
    #[arg(long, default_value_t = 30, value_parser = positive_usize)]
    pub bins: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundCheckArgs {
    #[command(flatten)]
    pub system: OracleSource,
    /// Step sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.0625,0.03125,0.015625", value_parser = positive_f64)]
    pub dts: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct EnsembleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// File name inside the output directory.
    #[arg(long, default_value = "hamiltonian.json")]
    pub file: String,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("expected a positive finite number, got {s}"))
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("expected a positive integer, got 0".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(format!("{e}")),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    positive_usize(s).map(|v| v as u64)
}
