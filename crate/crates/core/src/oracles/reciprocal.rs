//! Oracle for the sharp bound on `E[1/(Y ∨ 1)]` given the mean and variance of `Y`.

use alloc::format;
use alloc::vec;

use libm::sqrt;

use super::search::GridSpec;
use super::OracleReport;
use crate::error::{Error, Result};

/// `1 − (μ−1)²/(σ² + μ² − μ)` for `μ > 1`, otherwise 1.
pub fn reciprocal_bound(mu: f64, sigma: f64) -> f64 {
    if mu > 1.0 {
        let d = mu - 1.0;
        1.0 - d * d / (sigma * sigma + mu * mu - mu)
    } else {
        1.0
    }
}

fn clamp_reciprocal(y: f64) -> f64 {
    1.0 / y.max(1.0)
}

/// Maximizes `E[1/(Y ∨ 1)]` over two-point laws with mean `mu` and standard
/// deviation `sigma`.
///
/// The family is parametrized by the mass `p1 ∈ (0, 1)` of the lower atom
/// `y1 = mu − sigma·√((1−p1)/p1)`, run over `grid.atom_steps` interior points
/// `k/(steps+1)`, plus the anchor `y1 = 1` when `mu > 1`. The grid is not
/// refined locally, so a supremum that is only approached stays strictly
/// above the reported best. `witness_params` is `[y1, p1, y2, p2]`.
pub fn reciprocal_oracle(mu: f64, sigma: f64, grid: &GridSpec) -> Result<OracleReport> {
    if !(sigma > 0.0) || !sigma.is_finite() || !mu.is_finite() {
        return Err(Error::InvalidMoment(format!(
            "need finite mu and sigma > 0, got mu={mu}, sigma={sigma}"
        )));
    }
    let var = sigma * sigma;
    let steps = grid.atom_steps.max(1);
    let from_mass = |p1: f64| {
        let y1 = mu - sigma * sqrt((1.0 - p1) / p1);
        let y2 = mu + sigma * sqrt(p1 / (1.0 - p1));
        (y1, p1, y2)
    };
    let from_lower = |y1: f64| {
        let d = mu - y1;
        (y1, var / (var + d * d), mu + var / d)
    };
    let anchor = (mu > 1.0).then(|| from_lower(1.0));
    let candidates = (1..=steps)
        .map(|k| from_mass(k as f64 / (steps + 1) as f64))
        .chain(anchor);
    let mut best: Option<(f64, f64, f64, f64)> = None;
    for (y1, p1, y2) in candidates {
        let value = p1 * clamp_reciprocal(y1) + (1.0 - p1) * clamp_reciprocal(y2);
        let replace = match best {
            None => true,
            Some((bv, by1, _, _)) => value > bv || (value == bv && y1 < by1),
        };
        if replace {
            best = Some((value, y1, p1, y2));
        }
    }
    let (value, y1, p1, y2) =
        best.ok_or_else(|| Error::OracleInconclusive("empty reciprocal grid".into()))?;
    Ok(OracleReport::new(
        "reciprocal",
        None,
        None,
        value,
        vec![y1, p1, y2, 1.0 - p1],
        reciprocal_bound(mu, sigma),
    ))
}
