//! Grid oracle over Khintchine mixtures `Z = M + U·Y` with discrete `Y`.
//!
//! For a unimodal `Z` with mode `M`, mean 0 and variance 1 the mixing law
//! satisfies `E Y = −2M` and `E Y² = 3(1 + M²)`, and the tail of `Z` is
//! `E w(Y)` for an explicit weight `w`. Families with two or three atoms in
//! `Y` are searched with masses fixed by those moment equations.

use alloc::format;
use alloc::vec::Vec;

use libm::sqrt;

use super::search::{budget_steps, maximize, Axis, Candidate, GridSpec};
use super::OracleReport;
use crate::bounds::{bound, DistributionClass, IntervalSpec, SQRT3};
use crate::error::{Error, Result};

/// `P(M + U·y ≥ v) + P(M + U·y ≤ −u)` for `U` uniform on `(0, 1)`.
pub fn khintchine_tail_weight(mode: f64, y: f64, u: f64, v: f64) -> f64 {
    let upper = if y == 0.0 {
        if mode >= v {
            1.0
        } else {
            0.0
        }
    } else if y > 0.0 {
        ((mode + y - v) / y).clamp(0.0, 1.0)
    } else {
        ((mode - v) / -y).clamp(0.0, 1.0)
    };
    let lower = if !u.is_finite() {
        0.0
    } else if y == 0.0 {
        if mode <= -u {
            1.0
        } else {
            0.0
        }
    } else if y < 0.0 {
        ((-y - mode - u) / -y).clamp(0.0, 1.0)
    } else {
        ((-u - mode) / y).clamp(0.0, 1.0)
    };
    (upper + lower).min(1.0)
}

const MASS_FLOOR: f64 = 0.0;

/// A discrete mixing law: mode and up to five `(y, mass)` atoms.
#[derive(Clone, Copy)]
pub(crate) struct Law {
    pub mode: f64,
    pub atoms: [(f64, f64); 5],
    pub len: usize,
}

impl Law {
    pub(crate) fn new(mode: f64, atoms: &[(f64, f64)]) -> Option<Self> {
        let mut out = [(0.0, 0.0); 5];
        for (slot, &(y, p)) in out.iter_mut().zip(atoms) {
            if !(p >= MASS_FLOOR) || !y.is_finite() {
                return None;
            }
            *slot = (y, p);
        }
        Some(Law {
            mode,
            atoms: out,
            len: atoms.len(),
        })
    }

    fn tail(&self, u: f64, v: f64) -> f64 {
        self.atoms[..self.len]
            .iter()
            .map(|&(y, p)| p * khintchine_tail_weight(self.mode, y, u, v))
            .sum()
    }

    fn params(&self) -> Vec<f64> {
        let mut out = alloc::vec![self.mode];
        for &(y, p) in &self.atoms[..self.len] {
            out.push(y);
            out.push(p);
        }
        out
    }
}

/// Two atoms with mean `m` and variance `var`, one of them at `y1`.
pub(crate) fn two_point(m: f64, var: f64, y1: f64) -> Option<[(f64, f64); 2]> {
    let d = y1 - m;
    if var <= 0.0 || d == 0.0 {
        return None;
    }
    let p1 = var / (var + d * d);
    Some([(y1, p1), (m - var / d, 1.0 - p1)])
}

/// Masses on `y1 < y2 < y3` matching the moments `1, m1, m2`.
pub(crate) fn three_point(m1: f64, m2: f64, y: [f64; 3]) -> Option<[(f64, f64); 3]> {
    let [a, b, c] = y;
    if !(a < b && b < c) {
        return None;
    }
    let pa = (m2 - m1 * (b + c) + b * c) / ((a - b) * (a - c));
    let pb = (m2 - m1 * (a + c) + a * c) / ((b - a) * (b - c));
    let pc = (m2 - m1 * (a + b) + a * b) / ((c - a) * (c - b));
    if pa < MASS_FLOOR || pb < MASS_FLOOR || pc < MASS_FLOOR {
        return None;
    }
    Some([(a, pa), (b, pb), (c, pc)])
}

/// Search axes paired with the map from a grid point to a law.
pub(crate) type Family<'a> = (Vec<Axis>, &'a dyn Fn(&[f64]) -> Option<Law>);

pub(crate) fn best_over(
    families: &[Family<'_>],
    spec: &GridSpec,
    value: &dyn Fn(&Law) -> f64,
) -> Option<(f64, Law)> {
    let mut best: Option<(Candidate, Law)> = None;
    for (axes, law) in families {
        let found = maximize(axes, spec, |p| law(p).map(|l| value(&l)));
        if let Some(c) = found {
            let l = law(&c.params).expect("maximizer is feasible");
            let params = l.params();
            let replace = match &best {
                None => true,
                Some((b, _)) => {
                    c.value > b.value
                        || (c.value == b.value
                            && params.partial_cmp(&b.params) == Some(core::cmp::Ordering::Less))
                }
            };
            if replace {
                best = Some((
                    Candidate {
                        value: c.value,
                        params,
                    },
                    l,
                ));
            }
        }
    }
    best.map(|(c, l)| (c.value, l))
}

/// Maximizes the tail over Khintchine mixtures for the unimodal classes
/// (and the concave half-line class, where `M = 0` and `Y ≥ 0`).
///
/// `witness_params` lists the mode followed by `(y, mass)` pairs of the best `Y`.
pub fn khintchine_grid_oracle(
    class: DistributionClass,
    u: f64,
    v: f64,
    grid: &GridSpec,
) -> Result<OracleReport> {
    let interval = IntervalSpec::new(u, v)?;
    let analytic = bound(class, interval)?.value;
    let one_sided = interval.is_one_sided();
    let (lo, hi) = grid.window_for(u, v);
    let reach = lo.abs().max(hi.abs());
    let budget = grid.max_coarse_points;
    let a = grid.atom_steps;
    let mode_anchors = [0.0, v, -u];

    let unimodal2 = |p: &[f64]| {
        let m = p[0];
        let pts = two_point(-2.0 * m, 3.0 - m * m, p[1])?;
        Law::new(m, &pts)
    };
    let unimodal3 = |p: &[f64]| {
        let m = p[0];
        let pts = three_point(-2.0 * m, 3.0 * (1.0 + m * m), [p[1], p[2], p[3]])?;
        Law::new(m, &pts)
    };
    let centred2 = |p: &[f64]| Law::new(0.0, &two_point(0.0, 3.0, p[0])?);
    let centred3 = |p: &[f64]| Law::new(0.0, &three_point(0.0, 3.0, [p[0], p[1], p[2]])?);
    let sym_pair = |p: &[f64]| {
        let a = p[0];
        let q = 1.5 / (a * a);
        Law::new(0.0, &[(-a, q), (0.0, 1.0 - 2.0 * q), (a, q)])
    };
    let sym_two_pairs = |p: &[f64]| {
        let (a, c, pa) = (p[0], p[1], p[2]);
        if !(a < c) {
            return None;
        }
        let pc = (3.0 - 2.0 * pa * a * a) / (2.0 * c * c);
        Law::new(
            0.0,
            &[
                (-c, pc),
                (-a, pa),
                (0.0, 1.0 - 2.0 * pa - 2.0 * pc),
                (a, pa),
                (c, pc),
            ],
        )
    };
    let concave2 = |p: &[f64]| {
        let (c1, c2) = (p[0], p[1]);
        if c2 <= c1 {
            return None;
        }
        let q = (c2 * c2 - 3.0) / (c2 * c2 - c1 * c1);
        Law::new(0.0, &[(c1, q), (c2, 1.0 - q)])
    };

    let mut families: Vec<Family<'_>> = Vec::new();
    match class {
        DistributionClass::Unimodal => {
            let s = budget_steps(&[grid.m_steps, a], budget);
            families.push((
                alloc::vec![
                    Axis::new(-SQRT3, SQRT3, s[0]).with_anchors(&mode_anchors),
                    Axis::new(lo, hi, s[1]).with_anchors(&[0.0]),
                ],
                &unimodal2,
            ));
            if !one_sided {
                let s = budget_steps(&[grid.m_steps, a, a, a], budget);
                families.push((
                    alloc::vec![
                        Axis::new(-SQRT3, SQRT3, s[0]).with_anchors(&mode_anchors),
                        Axis::new(lo, hi, s[1]).with_anchors(&[0.0]),
                        Axis::new(lo, hi, s[2]).with_anchors(&[0.0]),
                        Axis::new(lo, hi, s[3]).with_anchors(&[0.0]),
                    ],
                    &unimodal3,
                ));
            }
        }
        DistributionClass::UnimodalModeEqMean => {
            families.push((
                alloc::vec![Axis::new(lo, hi, a).with_anchors(&[0.0])],
                &centred2,
            ));
            if !one_sided {
                let s = budget_steps(&[a, a, a], budget);
                families.push((
                    s.iter()
                        .map(|&k| Axis::new(lo, hi, k).with_anchors(&[0.0]))
                        .collect(),
                    &centred3,
                ));
            }
        }
        DistributionClass::SymmetricUnimodal => {
            let anchors = [u, v];
            families.push((
                alloc::vec![Axis::new(sqrt(1.5), reach, a).with_anchors(&anchors)],
                &sym_pair,
            ));
            let s = budget_steps(&[a, a, a], budget);
            families.push((
                alloc::vec![
                    Axis::new(0.0, reach, s[0]).with_anchors(&anchors),
                    Axis::new(0.0, reach, s[1]).with_anchors(&anchors),
                    Axis::new(0.0, 0.5, s[2]),
                ],
                &sym_two_pairs,
            ));
        }
        DistributionClass::ConcaveHalfLine => {
            let s = budget_steps(&[a, a], budget);
            families.push((
                alloc::vec![
                    Axis::new(0.0, SQRT3, s[0]).with_anchors(&[0.0]),
                    Axis::new(SQRT3, hi.max(2.0 * SQRT3), s[1]),
                ],
                &concave2,
            ));
        }
        DistributionClass::All | DistributionClass::Symmetric => {
            return Err(Error::InvalidClassQuery(format!(
                "the Khintchine oracle covers unimodal classes only, got {class}"
            )));
        }
    }

    let value = |l: &Law| l.tail(u, v);
    let (best, law) = best_over(&families, grid, &value).ok_or_else(|| {
        Error::OracleInconclusive(format!("no feasible mixing law for {class}, u={u}, v={v}"))
    })?;
    Ok(OracleReport::new(
        "khintchine-grid",
        Some(class),
        Some(interval),
        best,
        law.params(),
        analytic,
    ))
}
