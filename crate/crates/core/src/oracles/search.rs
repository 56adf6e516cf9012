//! Deterministic grid search with local zoom refinement.

use alloc::vec::Vec;

use libm::{floor, pow};
use serde::{Deserialize, Serialize};

/// Resolution of the grid oracles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    /// Points on the mode axis.
    pub m_steps: usize,
    /// Points on each atom-location axis.
    pub atom_steps: usize,
    /// Cap on the size of the coarse grid; per-axis counts shrink evenly to meet it.
    pub max_coarse_points: usize,
    /// Zoom rounds around each start; each halves the box.
    pub refine_rounds: usize,
    /// Points per axis in a zoom box.
    pub refine_steps: usize,
    /// Best coarse points kept as zoom starts.
    pub starts: usize,
    /// Atom-location window; `None` selects `[−10(1 + min(u, 10)), 10(1 + v)]`.
    pub window: Option<(f64, f64)>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            m_steps: 201,
            atom_steps: 201,
            max_coarse_points: 2_000_000,
            refine_rounds: 40,
            refine_steps: 9,
            starts: 8,
            window: None,
        }
    }
}

impl GridSpec {
    /// A plain grid without refinement.
    pub fn coarse_only(mut self) -> Self {
        self.refine_rounds = 0;
        self
    }

    pub fn window_for(&self, u: f64, v: f64) -> (f64, f64) {
        self.window
            .unwrap_or((-10.0 * (1.0 + u.min(10.0)), 10.0 * (1.0 + v)))
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub anchors: Vec<f64>,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Self {
        Axis {
            lo,
            hi,
            steps: steps.max(2),
            anchors: Vec::new(),
        }
    }

    pub fn with_anchors(mut self, anchors: &[f64]) -> Self {
        self.anchors
            .extend(anchors.iter().copied().filter(|a| a.is_finite()));
        self
    }

    fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.steps - 1) as f64
    }

    fn points_in(&self, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let lo_c = lo.max(self.lo);
        let hi_c = hi.min(self.hi);
        let mut pts: Vec<f64> = Vec::with_capacity(n + self.anchors.len());
        if n <= 1 || hi_c <= lo_c {
            pts.push(lo_c);
        } else {
            let h = (hi - lo) / (n - 1) as f64;
            for k in 0..n {
                let x = lo + h * k as f64;
                if x >= self.lo && x <= self.hi {
                    pts.push(x);
                }
            }
            pts.push(lo_c);
            pts.push(hi_c);
        }
        pts.extend(
            self.anchors
                .iter()
                .copied()
                .filter(|&a| a >= lo_c && a <= hi_c),
        );
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

/// Per-axis counts scaled down evenly so that their product fits `budget`.
pub(crate) fn budget_steps(requested: &[usize], budget: usize) -> Vec<usize> {
    let total: f64 = requested.iter().map(|&s| s as f64).product();
    if total <= budget as f64 {
        return requested.to_vec();
    }
    let scale = pow(budget as f64 / total, 1.0 / requested.len() as f64);
    requested
        .iter()
        .map(|&s| (floor(s as f64 * scale) as usize).max(3))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Candidate {
    pub value: f64,
    pub params: Vec<f64>,
}

/// Larger value wins; equal values go to the lexicographically smaller parameters.
fn better(value: f64, params: &[f64], than: &Candidate) -> bool {
    if value != than.value {
        return value > than.value;
    }
    for (a, b) in params.iter().zip(than.params.iter()) {
        if a != b {
            return a < b;
        }
    }
    false
}

fn for_each_point(axes_points: &[Vec<f64>], mut visit: impl FnMut(&[f64])) {
    if axes_points.iter().any(|p| p.is_empty()) {
        return;
    }
    let d = axes_points.len();
    let mut idx = alloc::vec![0usize; d];
    let mut point: Vec<f64> = axes_points.iter().map(|p| p[0]).collect();
    loop {
        visit(&point);
        let mut k = d;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes_points[k].len() {
                point[k] = axes_points[k][idx[k]];
                break;
            }
            idx[k] = 0;
            point[k] = axes_points[k][0];
        }
    }
}

fn insert_top(top: &mut Vec<Candidate>, keep: usize, value: f64, params: &[f64]) {
    if top.len() == keep && !better(value, params, &top[keep - 1]) {
        return;
    }
    let pos = top
        .iter()
        .position(|c| better(value, params, c))
        .unwrap_or(top.len());
    top.insert(
        pos,
        Candidate {
            value,
            params: params.to_vec(),
        },
    );
    top.truncate(keep);
}

/// Maximizes `f` over the box spanned by `axes`; `f` returns `None` at
/// infeasible points. Returns `None` if no point is feasible.
pub(crate) fn maximize(
    axes: &[Axis],
    spec: &GridSpec,
    f: impl Fn(&[f64]) -> Option<f64>,
) -> Option<Candidate> {
    let coarse: Vec<Vec<f64>> = axes
        .iter()
        .map(|a| a.points_in(a.lo, a.hi, a.steps))
        .collect();
    let keep = spec.starts.max(1);
    let mut top: Vec<Candidate> = Vec::with_capacity(keep + 1);
    for_each_point(&coarse, |p| {
        if let Some(value) = f(p) {
            if value.is_finite() {
                insert_top(&mut top, keep, value, p);
            }
        }
    });
    let mut best = top.first()?.clone();
    if spec.refine_rounds == 0 {
        return Some(best);
    }
    let n = spec.refine_steps.max(3) | 1;
    for start in &top {
        let mut center = start.clone();
        let mut half: Vec<f64> = axes.iter().map(|a| a.spacing()).collect();
        for _ in 0..spec.refine_rounds {
            let local: Vec<Vec<f64>> = axes
                .iter()
                .zip(center.params.iter().zip(half.iter()))
                .map(|(a, (&c, &h))| {
                    let mut pts = a.points_in(c - h, c + h, n);
                    if !pts.contains(&c) {
                        pts.push(c);
                    }
                    pts
                })
                .collect();
            let mut round_best = center.clone();
            for_each_point(&local, |p| {
                if let Some(value) = f(p) {
                    if value.is_finite() && better(value, p, &round_best) {
                        round_best = Candidate {
                            value,
                            params: p.to_vec(),
                        };
                    }
                }
            });
            center = round_best;
            let mut converged = true;
            for (h, c) in half.iter_mut().zip(center.params.iter()) {
                *h *= 0.5;
                if *h > 1e-14 * (1.0 + c.abs()) {
                    converged = false;
                }
            }
            if converged {
                break;
            }
        }
        if better(center.value, &center.params, &best) {
            best = center;
        }
    }
    Some(best)
}
