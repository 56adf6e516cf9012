use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tailbound_core::DistributionClass;

#[derive(Debug, Parser)]
#[command(
    name = "tailbound",
    version,
    about = "Sharp tail bounds for standardized random variables"
)]
pub struct Cli {
    /// JSON config file; defaults to the file named by TAILBOUND_CONFIG.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Significant digits in printed numbers (1 to 17).
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sharp bound on P(Z <= -u or Z >= v) for one class.
    Bound(BoundArgs),
    /// Worst-case nonconforming fraction for every class from specification limits.
    Capability(CapabilityArgs),
    /// Check a bound against an independent oracle and its extremal witness.
    Verify(VerifyArgs),
    /// Bounds over a range of v as CSV.
    Sweep(SweepArgs),
    /// One-sided, absolute and interval bounds for every class.
    Table1(Table1Args),
    /// The distribution attaining a bound.
    Extremal(ExtremalArgs),
}

fn parse_class(s: &str) -> Result<DistributionClass, String> {
    DistributionClass::from_str(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct IntervalArgs {
    #[arg(long, value_parser = parse_class)]
    pub class: DistributionClass,
    #[arg(long, allow_negative_numbers = true)]
    pub v: f64,
    /// Lower distance; omit (or pass inf) for a one-sided query.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "one_sided")]
    pub u: Option<f64>,
    #[arg(long)]
    pub one_sided: bool,
}

impl IntervalArgs {
    pub fn u_or_inf(&self) -> f64 {
        if self.one_sided {
            f64::INFINITY
        } else {
            self.u.unwrap_or(f64::INFINITY)
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub interval: IntervalArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CapabilityArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub lsl: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub usl: f64,
    #[arg(
        long,
        allow_negative_numbers = true,
        requires = "sd",
        conflicts_with = "data"
    )]
    pub mean: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "mean")]
    pub sd: Option<f64>,
    /// CSV file with a header row.
    #[arg(long, value_name = "FILE", requires = "column")]
    pub data: Option<PathBuf>,
    #[arg(long, requires = "data")]
    pub column: Option<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Lp,
    Grid,
    Atoms,
    Mc,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub interval: IntervalArgs,
    /// Defaults to lp for two-sided symmetric queries, atoms for the other
    /// moment-only classes and grid for the unimodal ones.
    #[arg(long, value_enum)]
    pub oracle: Option<OracleKind>,
    #[arg(long)]
    pub mc_n: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Points per atom axis of the grid oracles.
    #[arg(long)]
    pub atom_steps: Option<usize>,
    /// Points on the mode axis of the grid oracles.
    #[arg(long)]
    pub m_steps: Option<usize>,
    /// Witness JSON (as written by `extremal --emit json` or `--emit witness`)
    /// to check instead of the built-in construction.
    #[arg(long, value_name = "FILE")]
    pub witness: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UMode {
    Equal,
    Ratio(f64),
    Inf,
}

impl FromStr for UMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "equal" => Ok(UMode::Equal),
            "inf" => Ok(UMode::Inf),
            _ => {
                let r = s
                    .strip_prefix("ratio:")
                    .ok_or_else(|| format!("expected equal, inf or ratio:R, got {s:?}"))?;
                let r: f64 = r.parse().map_err(|_| format!("bad ratio {r:?}"))?;
                if r > 0.0 && r.is_finite() {
                    Ok(UMode::Ratio(r))
                } else {
                    Err(format!("ratio must be positive, got {r}"))
                }
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_class)]
    pub class: DistributionClass,
    #[arg(long, allow_negative_numbers = true)]
    pub v_from: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub v_to: f64,
    #[arg(long)]
    pub v_steps: usize,
    /// How u follows v: equal, inf (one-sided) or ratio:R for u = R·v.
    #[arg(long, default_value = "equal")]
    pub u_mode: UMode,
    /// Output CSV; stdout when absent or "-".
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long, allow_negative_numbers = true)]
    pub v: f64,
    /// Defaults to v.
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    /// Human-readable description of the witness.
    Summary,
    /// The distribution as `{atoms, segments}`.
    Json,
    /// The full witness record with class, interval, mode and regime.
    Witness,
    /// Seeded draws, one per line.
    Samples,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[command(flatten)]
    pub interval: IntervalArgs,
    #[arg(long, value_enum, default_value = "summary")]
    pub emit: Emit,
    /// Number of samples for `--emit samples`.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}
