//! Finite mixtures of point masses and uniform segments.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Masses at or below this magnitude are dropped at construction.
pub const MASS_EPS: f64 = 1e-13;
/// Segments narrower than this are stored as atoms at their midpoint.
pub const DEGENERATE_WIDTH: f64 = 1e-12;
/// Allowed deviation of the total mass from one.
pub const TOTAL_MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub mass: f64,
}

/// Uniform mass on the closed interval `[left, right]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub left: f64,
    pub right: f64,
    pub mass: f64,
}

impl Segment {
    pub fn width(&self) -> f64 {
        self.right - self.left
    }

    pub fn density(&self) -> f64 {
        self.mass / self.width()
    }

    /// Fraction of the segment lying in `[a, b]`.
    fn fraction_within(&self, a: f64, b: f64) -> f64 {
        let lo = self.left.max(a);
        let hi = self.right.min(b);
        if hi <= lo {
            0.0
        } else {
            ((hi - lo) / self.width()).min(1.0)
        }
    }
}

/// A probability distribution made of atoms and uniform segments.
///
/// Values are validated and normalized on construction and immutable after.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MixtureRepr")]
pub struct MixtureDistribution {
    atoms: Vec<Atom>,
    segments: Vec<Segment>,
}

#[derive(Deserialize)]
struct MixtureRepr {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    segments: Vec<Segment>,
}

impl TryFrom<MixtureRepr> for MixtureDistribution {
    type Error = Error;

    fn try_from(r: MixtureRepr) -> Result<Self> {
        MixtureDistribution::new(r.atoms, r.segments)
    }
}

fn check_mass(m: f64) -> Result<bool> {
    if !m.is_finite() || m < -MASS_EPS {
        return Err(Error::InvalidMixture(format!(
            "mass must be nonnegative, got {m}"
        )));
    }
    Ok(m > MASS_EPS)
}

fn push_atom(atoms: &mut Vec<Atom>, x: f64, mass: f64) {
    match atoms
        .iter_mut()
        .find(|a| (a.x - x).abs() <= DEGENERATE_WIDTH)
    {
        Some(a) => a.mass += mass,
        None => atoms.push(Atom { x, mass }),
    }
}

impl MixtureDistribution {
    /// Builds a mixture, dropping null components, promoting degenerate
    /// segments to atoms and merging coincident atoms.
    pub fn new(atoms: Vec<Atom>, segments: Vec<Segment>) -> Result<Self> {
        let mut out_atoms: Vec<Atom> = Vec::with_capacity(atoms.len());
        let mut out_segments = Vec::with_capacity(segments.len());
        for a in atoms {
            if !a.x.is_finite() {
                return Err(Error::InvalidMixture(format!(
                    "atom location {} is not finite",
                    a.x
                )));
            }
            if check_mass(a.mass)? {
                push_atom(&mut out_atoms, a.x, a.mass);
            }
        }
        for s in segments {
            if !s.left.is_finite() || !s.right.is_finite() {
                return Err(Error::InvalidMixture(format!(
                    "segment [{}, {}] is not finite",
                    s.left, s.right
                )));
            }
            if s.right < s.left - DEGENERATE_WIDTH {
                return Err(Error::InvalidMixture(format!(
                    "segment has left {} > right {}",
                    s.left, s.right
                )));
            }
            if !check_mass(s.mass)? {
                continue;
            }
            if s.width() < DEGENERATE_WIDTH {
                push_atom(&mut out_atoms, 0.5 * (s.left + s.right), s.mass);
            } else {
                out_segments.push(s);
            }
        }
        let d = MixtureDistribution {
            atoms: out_atoms,
            segments: out_segments,
        };
        let total = d.total_mass();
        if (total - 1.0).abs() > TOTAL_MASS_TOL {
            return Err(Error::InvalidMixture(format!(
                "total mass is {total}, expected 1"
            )));
        }
        Ok(d)
    }

    pub fn point_mass(x: f64) -> Result<Self> {
        Self::new(alloc::vec![Atom { x, mass: 1.0 }], Vec::new())
    }

    pub fn uniform(left: f64, right: f64) -> Result<Self> {
        Self::new(
            Vec::new(),
            alloc::vec![Segment {
                left,
                right,
                mass: 1.0
            }],
        )
    }

    /// The law of `M + U·Y` for `U` uniform on `(0, 1)` and discrete `Y`.
    ///
    /// Each atom `y` of `Y` becomes a segment between `mode` and `mode + y`
    /// with the same mass, or an atom at the mode when `y = 0`.
    pub fn khintchine(mode: f64, y: &[Atom]) -> Result<Self> {
        let mut atoms = Vec::new();
        let mut segments = Vec::new();
        for a in y {
            let end = mode + a.x;
            if (end - mode).abs() < DEGENERATE_WIDTH {
                atoms.push(Atom {
                    x: mode,
                    mass: a.mass,
                });
            } else {
                segments.push(Segment {
                    left: mode.min(end),
                    right: mode.max(end),
                    mass: a.mass,
                });
            }
        }
        Self::new(atoms, segments)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>()
            + self.segments.iter().map(|s| s.mass).sum::<f64>()
    }

    /// The law of `−Z`.
    pub fn reflected(&self) -> Self {
        MixtureDistribution {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    x: -a.x,
                    mass: a.mass,
                })
                .collect(),
            segments: self
                .segments
                .iter()
                .map(|s| Segment {
                    left: -s.right,
                    right: -s.left,
                    mass: s.mass,
                })
                .collect(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass * a.x).sum::<f64>()
            + self
                .segments
                .iter()
                .map(|s| s.mass * 0.5 * (s.left + s.right))
                .sum::<f64>()
    }

    pub fn second_moment(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass * a.x * a.x).sum::<f64>()
            + self
                .segments
                .iter()
                .map(|s| s.mass * (s.left * s.left + s.left * s.right + s.right * s.right) / 3.0)
                .sum::<f64>()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        (self.second_moment() - m * m).max(0.0)
    }

    /// `P(Z ≤ −u or Z ≥ v)` with both boundaries included; `u = ∞` gives `P(Z ≥ v)`.
    pub fn tail(&self, u: f64, v: f64) -> f64 {
        let lower = -u;
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| a.x <= lower || a.x >= v)
            .map(|a| a.mass)
            .sum();
        let segments: f64 = self
            .segments
            .iter()
            .map(|s| {
                let right = s.fraction_within(v, f64::INFINITY);
                let left = s.fraction_within(f64::NEG_INFINITY, lower);
                s.mass * (right + left).min(1.0)
            })
            .sum();
        (atoms + segments).clamp(0.0, 1.0)
    }

    /// Right-continuous distribution function.
    pub fn cdf(&self, z: f64) -> f64 {
        let atoms: f64 = self.atoms.iter().filter(|a| a.x <= z).map(|a| a.mass).sum();
        let segments: f64 = self
            .segments
            .iter()
            .map(|s| s.mass * ((z - s.left) / s.width()).clamp(0.0, 1.0))
            .sum();
        (atoms + segments).clamp(0.0, 1.0)
    }

    /// Density of the continuous part at `z` (segments only).
    fn continuous_density(&self, z: f64) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.left <= z && z <= s.right)
            .map(|s| s.density())
            .sum()
    }

    /// True iff every atom sits at `mode` and every segment has an endpoint
    /// there, which is the shape of a Khintchine mixture `M + U·Y`.
    pub fn is_khintchine_unimodal(&self, mode: f64, tol: f64) -> bool {
        self.atoms.iter().all(|a| (a.x - mode).abs() <= tol)
            && self
                .segments
                .iter()
                .all(|s| (s.left - mode).abs() <= tol || (s.right - mode).abs() <= tol)
    }

    /// True iff the law is invariant under `z → −z`.
    ///
    /// Atoms are merged within `tol` before comparison and the continuous part
    /// is compared through its piecewise-constant density, so `[−a, a]` and
    /// `[−a, 0] ∪ [0, a]` are recognised as the same law.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let mut atoms: Vec<Atom> = self.atoms.clone();
        atoms.sort_by(|a, b| a.x.total_cmp(&b.x));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if (a.x - last.x).abs() <= tol => last.mass += a.mass,
                _ => merged.push(a),
            }
        }
        let n = merged.len();
        for i in 0..n {
            let (a, b) = (merged[i], merged[n - 1 - i]);
            if (a.x + b.x).abs() > tol || (a.mass - b.mass).abs() > tol {
                return false;
            }
        }
        let mut cuts: Vec<f64> = Vec::with_capacity(4 * self.segments.len());
        for s in &self.segments {
            cuts.extend_from_slice(&[s.left, s.right, -s.left, -s.right]);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts.windows(2).all(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            let (a, b) = (self.continuous_density(mid), self.continuous_density(-mid));
            (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
        })
    }

    /// Seeded stream of draws.
    pub fn sampler(&self, seed: u64) -> MixtureSampler<'_> {
        let mut cumulative = Vec::with_capacity(self.atoms.len() + self.segments.len());
        let mut acc = 0.0;
        for m in self
            .atoms
            .iter()
            .map(|a| a.mass)
            .chain(self.segments.iter().map(|s| s.mass))
        {
            acc += m;
            cumulative.push(acc);
        }
        MixtureSampler {
            dist: self,
            cumulative,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        self.sampler(seed).take(n).collect()
    }
}

/// Iterator of draws; one uniform picks the component, a second places the
/// draw inside a segment.
pub struct MixtureSampler<'a> {
    dist: &'a MixtureDistribution,
    cumulative: Vec<f64>,
    rng: ChaCha8Rng,
}

impl Iterator for MixtureSampler<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let total = *self.cumulative.last()?;
        let pick: f64 = self.rng.random::<f64>() * total;
        let idx = self
            .cumulative
            .iter()
            .position(|&c| pick < c)
            .unwrap_or(self.cumulative.len() - 1);
        let n_atoms = self.dist.atoms.len();
        if idx < n_atoms {
            Some(self.dist.atoms[idx].x)
        } else {
            let s = self.dist.segments[idx - n_atoms];
            let t: f64 = self.rng.random();
            Some(s.left + s.width() * t)
        }
    }
}
