//! Independent numerical maximizers used to confirm that a bound is neither
//! exceeded nor slack.
//!
//! Each oracle searches a finite-dimensional family (a linear program over
//! atom masses, or a grid over atom locations with masses fixed by the moment
//! equations) and reports its best value next to the closed form.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::bounds::{DistributionClass, IntervalSpec};

mod atoms;
mod khintchine;
mod lp;
mod monte_carlo;
mod reciprocal;
mod search;

pub use atoms::discrete_atoms_oracle;
pub use khintchine::{khintchine_grid_oracle, khintchine_tail_weight};
pub use lp::{polygon_q, symmetric_lp_oracle, PolygonQ};
pub use monte_carlo::{monte_carlo_tail, TailEstimate};
pub use reciprocal::{reciprocal_bound, reciprocal_oracle};
pub use search::GridSpec;

/// An oracle may exceed the closed form by at most this much.
pub const SOUNDNESS_TOL: f64 = 1e-6;
/// With the default grid an oracle must come this close to the closed form.
pub const APPROACH_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub oracle: String,
    pub class: Option<DistributionClass>,
    pub interval: Option<IntervalSpec>,
    pub best_value: f64,
    pub witness_params: Vec<f64>,
    pub analytic_bound: f64,
    /// `analytic_bound − best_value`; negative means the bound was exceeded.
    pub gap: f64,
}

impl OracleReport {
    pub(crate) fn new(
        oracle: &str,
        class: Option<DistributionClass>,
        interval: Option<IntervalSpec>,
        best_value: f64,
        witness_params: Vec<f64>,
        analytic_bound: f64,
    ) -> Self {
        OracleReport {
            oracle: String::from(oracle),
            class,
            interval,
            best_value,
            witness_params,
            analytic_bound,
            gap: analytic_bound - best_value,
        }
    }

    /// The oracle did not beat the closed form by more than `tol`.
    pub fn is_sound(&self, tol: f64) -> bool {
        self.best_value <= self.analytic_bound + tol
    }

    /// The oracle came within `tol` of the closed form.
    pub fn approaches(&self, tol: f64) -> bool {
        self.gap <= tol
    }
}
