//! Run configuration: built-in defaults, overridden by a JSON file, overridden by flags.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tailbound_core::oracles::{GridSpec, APPROACH_TOL, SOUNDNESS_TOL};

use crate::error::CliError;

/// Environment variable naming a config file when `--config` is absent.
pub const CONFIG_ENV: &str = "TAILBOUND_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Agreement between two closed-form evaluations.
    pub formula: f64,
    /// Witness tail and moments against the analytic values.
    pub feasibility: f64,
    /// Largest accepted gap between an oracle and the closed form.
    pub oracle_approach: f64,
    /// Largest accepted excess of an oracle over the closed form.
    pub oracle_soundness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            formula: 1e-12,
            feasibility: 1e-9,
            oracle_approach: APPROACH_TOL,
            oracle_soundness: SOUNDNESS_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonteCarlo {
    pub n: u64,
    pub seed: u64,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        MonteCarlo {
            n: 1_000_000,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tolerances: Tolerances,
    pub monte_carlo: MonteCarlo,
    pub grid: GridSpec,
    /// Significant digits in printed numbers.
    pub precision: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tolerances: Tolerances::default(),
            monte_carlo: MonteCarlo::default(),
            grid: GridSpec::default(),
            precision: 17,
        }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let c: Config =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    /// Reads `path`, or the file named by [`CONFIG_ENV`], or falls back to defaults.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let env_path = std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty());
        let path = match (path, env_path.as_deref()) {
            (Some(p), _) => p,
            (None, Some(p)) => Path::new(p),
            (None, None) => return Ok(Config::default()),
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))?;
        Config::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let t = &self.tolerances;
        let tols = [
            ("formula", t.formula),
            ("feasibility", t.feasibility),
            ("oracle_approach", t.oracle_approach),
            ("oracle_soundness", t.oracle_soundness),
        ];
        for (name, x) in tols {
            if !(x > 0.0 && x.is_finite()) {
                return Err(CliError::Input(format!(
                    "tolerance {name} must be positive, got {x}"
                )));
            }
        }
        if self.monte_carlo.n == 0 {
            return Err(CliError::Input("monte_carlo.n must be positive".into()));
        }
        if !(1..=17).contains(&self.precision) {
            return Err(CliError::Input(format!(
                "precision must be between 1 and 17, got {}",
                self.precision
            )));
        }
        if self.grid.m_steps < 2 || self.grid.atom_steps < 2 {
            return Err(CliError::Input("grid steps must be at least 2".into()));
        }
        Ok(())
    }
}
