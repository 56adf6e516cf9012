use alloc::string::ToString;

use libm::sqrt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::MixtureDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub n: u64,
}

impl TailEstimate {
    /// `|estimate − target| ≤ k·SE`, with SE taken at `target` when the
    /// empirical SE is zero.
    pub fn within_se(&self, target: f64, k: f64) -> bool {
        let se = if self.standard_error > 0.0 {
            self.standard_error
        } else {
            sqrt(target * (1.0 - target) / self.n as f64)
        };
        (self.estimate - target).abs() <= k * se
    }
}

/// Empirical `P(Z ≤ −u or Z ≥ v)` from `n` seeded draws, boundaries included.
pub fn monte_carlo_tail(
    d: &MixtureDistribution,
    u: f64,
    v: f64,
    n: u64,
    seed: u64,
) -> Result<TailEstimate> {
    if n == 0 {
        return Err(Error::InvalidCount(
            "Monte Carlo needs at least one draw".to_string(),
        ));
    }
    let lower = -u;
    let hits = d
        .sampler(seed)
        .take(n as usize)
        .filter(|&z| z <= lower || z >= v)
        .count();
    let p = hits as f64 / n as f64;
    Ok(TailEstimate {
        estimate: p,
        standard_error: sqrt(p * (1.0 - p) / n as f64),
        n,
    })
}
