//! Grid oracle over standardized laws with two or three atoms.

use alloc::format;
use alloc::vec::Vec;

use super::khintchine::{best_over, three_point, Family, Law};
use super::search::{budget_steps, Axis, GridSpec};
use super::OracleReport;
use crate::bounds::{bound, DistributionClass, IntervalSpec};
use crate::error::{Error, Result};

/// Maximizes the closed tail over small discrete laws with mean 0 and
/// variance 1 (class `All`) or over symmetric laws built from one or two
/// pairs `±a` plus an atom at 0 (class `Symmetric`).
///
/// `witness_params` lists `(x, mass)` pairs of the best law.
pub fn discrete_atoms_oracle(
    class: DistributionClass,
    u: f64,
    v: f64,
    grid: &GridSpec,
) -> Result<OracleReport> {
    let interval = IntervalSpec::new(u, v)?;
    let analytic = bound(class, interval)?.value;
    let (lo, hi) = grid.window_for(u, v);
    let reach = lo.abs().max(hi.abs());
    let a = grid.atom_steps;
    let budget = grid.max_coarse_points;

    let cantelli_pair = |p: &[f64]| {
        let x = p[0];
        if x == 0.0 {
            return None;
        }
        let m = 1.0 / (1.0 + x * x);
        Law::new(0.0, &[(x, m), (-1.0 / x, 1.0 - m)])
    };
    let triple = |p: &[f64]| Law::new(0.0, &three_point(0.0, 1.0, [p[0], p[1], p[2]])?);
    let pair = |p: &[f64]| {
        let x = p[0];
        let m = 0.5 / (x * x);
        Law::new(0.0, &[(-x, m), (0.0, 1.0 - 2.0 * m), (x, m)])
    };
    let two_pairs = |p: &[f64]| {
        let (x, y, px) = (p[0], p[1], p[2]);
        if !(x < y) {
            return None;
        }
        let py = (1.0 - 2.0 * px * x * x) / (2.0 * y * y);
        Law::new(
            0.0,
            &[
                (-y, py),
                (-x, px),
                (0.0, 1.0 - 2.0 * px - 2.0 * py),
                (x, px),
                (y, py),
            ],
        )
    };

    let anchors = [-u, v, 0.0, 1.0, -1.0];
    let magnitudes = [u, v, 1.0];
    let mut families: Vec<Family<'_>> = Vec::new();
    match class {
        DistributionClass::All => {
            families.push((
                alloc::vec![Axis::new(lo, hi, a).with_anchors(&anchors)],
                &cantelli_pair,
            ));
            let s = budget_steps(&[a, a, a], budget);
            families.push((
                s.iter()
                    .map(|&k| Axis::new(lo, hi, k).with_anchors(&anchors))
                    .collect(),
                &triple,
            ));
        }
        DistributionClass::Symmetric => {
            families.push((
                alloc::vec![Axis::new(1.0, reach, a).with_anchors(&magnitudes)],
                &pair,
            ));
            let s = budget_steps(&[a, a, a], budget);
            families.push((
                alloc::vec![
                    Axis::new(0.0, reach, s[0]).with_anchors(&magnitudes),
                    Axis::new(0.0, reach, s[1]).with_anchors(&magnitudes),
                    Axis::new(0.0, 0.5, s[2]),
                ],
                &two_pairs,
            ));
        }
        _ => {
            return Err(Error::InvalidClassQuery(format!(
                "the discrete-atoms oracle covers classes all and symmetric, got {class}"
            )));
        }
    }

    let lower = -u;
    let value = |l: &Law| {
        l.atoms[..l.len]
            .iter()
            .filter(|&&(x, _)| x <= lower || x >= v)
            .map(|&(_, p)| p)
            .sum::<f64>()
    };
    let (best, law) = best_over(&families, grid, &value).ok_or_else(|| {
        Error::OracleInconclusive(format!("no feasible atom set for {class}, u={u}, v={v}"))
    })?;
    let mut params = Vec::with_capacity(2 * law.len);
    for &(x, p) in &law.atoms[..law.len] {
        params.push(x);
        params.push(p);
    }
    Ok(OracleReport::new(
        "discrete-atoms",
        Some(class),
        Some(interval),
        best,
        params,
        analytic,
    ))
}
