use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::OracleReport;
use crate::bounds::{bound_symmetric_two_sided, DistributionClass, IntervalSpec};
use crate::error::{Error, Result};

const FEASIBILITY: f64 = 1e-12;

/// Feasible masses `(p, q)` for a symmetric law with atoms at `±u` (mass `p`
/// each) and `±v` (mass `q` each) plus the remainder at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonQ {
    pub u: f64,
    pub v: f64,
    pub vertices: Vec<(f64, f64)>,
}

impl PolygonQ {
    pub fn contains(&self, p: f64, q: f64) -> bool {
        feasible(self.u, self.v, p, q)
    }
}

fn feasible(u: f64, v: f64, p: f64, q: f64) -> bool {
    p >= -FEASIBILITY
        && q >= -FEASIBILITY
        && p + q <= 0.5 + FEASIBILITY
        && u * u * p + v * v * q <= 0.5 + FEASIBILITY
}

/// Vertices of the polygon, from pairwise intersections of its four edges.
pub fn polygon_q(u: f64, v: f64) -> Result<PolygonQ> {
    if !(u > 0.0) || !(v > 0.0) || !u.is_finite() || !v.is_finite() {
        return Err(Error::InvalidInterval(format!(
            "polygon needs positive finite u and v, got u={u}, v={v}"
        )));
    }
    // a·p + b·q = c
    let lines = [
        (1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (1.0, 1.0, 0.5),
        (u * u, v * v, 0.5),
    ];
    let mut vertices: Vec<(f64, f64)> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1, c1) = lines[i];
            let (a2, b2, c2) = lines[j];
            let det = a1 * b2 - a2 * b1;
            if det.abs() < 1e-14 {
                continue;
            }
            let p = (c1 * b2 - c2 * b1) / det;
            let q = (a1 * c2 - a2 * c1) / det;
            if !feasible(u, v, p, q) {
                continue;
            }
            let (p, q) = (p.max(0.0), q.max(0.0));
            if !vertices
                .iter()
                .any(|&(pp, qq)| (pp - p).abs() <= FEASIBILITY && (qq - q).abs() <= FEASIBILITY)
            {
                vertices.push((p, q));
            }
        }
    }
    vertices.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(PolygonQ { u, v, vertices })
}

/// Maximizes `2p + q` over the polygon for `0 < v ≤ u`.
///
/// The maximizer is reported in `witness_params` as `[p, q]`; ties go to
/// the lexicographically smallest vertex.
pub fn symmetric_lp_oracle(u: f64, v: f64) -> Result<OracleReport> {
    let poly = polygon_q(u, v)?;
    if v > u {
        return Err(Error::InvalidInterval(format!(
            "the polygon oracle expects v <= u, got u={u}, v={v}"
        )));
    }
    let mut best: Option<(f64, f64, f64)> = None;
    for &(p, q) in &poly.vertices {
        let value = 2.0 * p + q;
        if best.map_or(true, |(bv, _, _)| value > bv) {
            best = Some((value, p, q));
        }
    }
    let (value, p, q) = best
        .ok_or_else(|| Error::OracleInconclusive(format!("no feasible vertex for u={u}, v={v}")))?;
    let analytic = bound_symmetric_two_sided(u, v)?.value;
    Ok(OracleReport::new(
        "lp",
        Some(DistributionClass::Symmetric),
        Some(IntervalSpec::two_sided(u, v)?),
        value,
        vec![p, q],
        analytic,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_regime_vertex() {
        let r = symmetric_lp_oracle(3.0, 2.0).unwrap();
        assert!((r.best_value - 0.125).abs() < 1e-15);
        assert_eq!(r.witness_params, vec![0.0, 0.125]);
    }

    #[test]
    fn boundary_case_has_single_degenerate_vertex() {
        let poly = polygon_q(2.0, 1.0).unwrap();
        let r = symmetric_lp_oracle(2.0, 1.0).unwrap();
        assert!((r.best_value - 0.5).abs() < 1e-15);
        let at_max: Vec<_> = poly
            .vertices
            .iter()
            .filter(|&&(p, q)| (2.0 * p + q - 0.5).abs() < 1e-12)
            .collect();
        assert_eq!(at_max, vec![&(0.0, 0.5)]);
    }

    #[test]
    fn inner_case() {
        let r = symmetric_lp_oracle(0.5, 0.5).unwrap();
        assert_eq!(r.best_value, 1.0);
        assert_eq!(r.witness_params, vec![0.5, 0.0]);
    }

    #[test]
    fn vertices_are_feasible() {
        for &(u, v) in &[(0.3, 0.2), (1.2, 1.0), (4.0, 0.5), (5.0, 4.0)] {
            let poly = polygon_q(u, v).unwrap();
            assert!(poly.vertices.len() >= 3);
            assert!(poly.vertices.iter().all(|&(p, q)| poly.contains(p, q)));
        }
    }
}
