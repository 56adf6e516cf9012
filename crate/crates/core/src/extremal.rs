//! Distributions attaining each sharp bound.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use libm::sqrt;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound, DistributionClass, IntervalSpec, SQRT3};
use crate::error::{Error, Result};
use crate::mixture::{Atom, MixtureDistribution};
use crate::solvers::{gamma_for, mode_mean_x};

/// The mixing law of a witness written as `M + U·Y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KhintchineForm {
    pub mode: f64,
    pub y: Vec<Atom>,
}

impl KhintchineForm {
    pub fn y_mean(&self) -> f64 {
        self.y.iter().map(|a| a.mass * a.x).sum()
    }

    pub fn y_second_moment(&self) -> f64 {
        self.y.iter().map(|a| a.mass * a.x * a.x).sum()
    }

    fn reflected(&self) -> Self {
        KhintchineForm {
            mode: -self.mode,
            y: self
                .y
                .iter()
                .map(|a| Atom {
                    x: -a.x,
                    mass: a.mass,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalWitness {
    pub distribution: MixtureDistribution,
    pub class: DistributionClass,
    pub interval: IntervalSpec,
    pub mode: Option<f64>,
    pub claimed_value: f64,
    pub regime: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub khintchine: Option<KhintchineForm>,
}

impl ExtremalWitness {
    /// Tail probability of the witness on its own interval.
    pub fn attained_value(&self) -> f64 {
        self.distribution.tail(self.interval.u(), self.interval.v())
    }
}

struct Construction {
    distribution: MixtureDistribution,
    mode: Option<f64>,
    khintchine: Option<KhintchineForm>,
}

impl Construction {
    fn discrete(points: &[(f64, f64)]) -> Result<Self> {
        let atoms = points.iter().map(|&(x, mass)| Atom { x, mass }).collect();
        Ok(Construction {
            distribution: MixtureDistribution::new(atoms, Vec::new())?,
            mode: None,
            khintchine: None,
        })
    }

    fn khintchine(mode: f64, y: &[(f64, f64)]) -> Result<Self> {
        let y: Vec<Atom> = y
            .iter()
            .filter(|&&(_, mass)| mass.abs() > crate::mixture::MASS_EPS)
            .map(|&(x, mass)| Atom { x, mass })
            .collect();
        Ok(Construction {
            distribution: MixtureDistribution::khintchine(mode, &y)?,
            mode: Some(mode),
            khintchine: Some(KhintchineForm { mode, y }),
        })
    }

    fn reflected(self) -> Self {
        Construction {
            distribution: self.distribution.reflected(),
            mode: self.mode.map(|m| -m),
            khintchine: self.khintchine.map(|k| k.reflected()),
        }
    }
}

fn cantelli(v: f64) -> Result<Construction> {
    let v2 = v * v;
    Construction::discrete(&[(v, 1.0 / (1.0 + v2)), (-1.0 / v, v2 / (1.0 + v2))])
}

fn all_two_sided(regime: &str, u: f64, v: f64) -> Result<Construction> {
    match regime {
        "all.trivial" => {
            Construction::discrete(&[(-sqrt(u / v), v / (u + v)), (sqrt(v / u), u / (u + v))])
        }
        "all.mid" => {
            let s2 = (u + v) * (u + v);
            Construction::discrete(&[
                (-u, (2.0 + v * (v - u)) / s2),
                ((v - u) / 2.0, 1.0 - crate::bounds::selberg_mid(u, v)),
                (v, (2.0 + u * (u - v)) / s2),
            ])
        }
        _ => cantelli(v),
    }
}

fn symmetric_pairs(pairs: &[(f64, f64)]) -> Result<Construction> {
    let mut points = Vec::with_capacity(2 * pairs.len() + 1);
    let mut rest = 1.0;
    for &(a, m) in pairs {
        points.push((-a, m));
        rest -= 2.0 * m;
    }
    points.push((0.0, rest));
    for &(a, m) in pairs.iter().rev() {
        points.push((a, m));
    }
    Construction::discrete(&points)
}

fn symmetric_two_sided(regime: &str, u: f64, v: f64) -> Result<Construction> {
    match regime {
        "sym.inner" => symmetric_pairs(&[(1.0, 0.5)]),
        "sym.wide" => symmetric_pairs(&[(u, 1.0 / (2.0 * u * u))]),
        "sym.split" => {
            let d = 2.0 * (u * u - v * v);
            symmetric_pairs(&[(u, (1.0 - v * v) / d), (v, (u * u - 1.0) / d)])
        }
        _ => symmetric_pairs(&[(v, 1.0 / (2.0 * v * v))]),
    }
}

/// Uniform on `[−a, a]` (split at the mode) with mass `m`, rest at 0.
fn inflated_symmetric_uniform(a: f64, m: f64) -> Result<Construction> {
    Construction::khintchine(0.0, &[(-a, 0.5 * m), (0.0, 1.0 - m), (a, 0.5 * m)])
}

fn gauss(v: f64, uniform: bool) -> Result<Construction> {
    if uniform {
        inflated_symmetric_uniform(SQRT3, 1.0)
    } else {
        inflated_symmetric_uniform(1.5 * v, 4.0 / (3.0 * v * v))
    }
}

fn concave(v: f64, uniform: bool) -> Result<Construction> {
    if uniform {
        Construction::khintchine(0.0, &[(SQRT3, 1.0)])
    } else {
        let m = 4.0 / (3.0 * v * v);
        Construction::khintchine(0.0, &[(0.0, 1.0 - m), (1.5 * v, m)])
    }
}

fn unimodal_cap(v: f64) -> Result<Construction> {
    let v2 = v * v;
    Construction::khintchine(
        -1.0 / v,
        &[
            (0.0, (3.0 * v2 - 1.0) / (3.0 * (1.0 + v2))),
            ((3.0 + 3.0 * v2) / (2.0 * v), 4.0 / (3.0 * (1.0 + v2))),
        ],
    )
}

fn unimodal_mode_at_v(v: f64) -> Result<Construction> {
    let v2 = v * v;
    Construction::khintchine(
        v,
        &[
            (0.0, (3.0 - v2) / (3.0 * (1.0 + v2))),
            (-(3.0 + 3.0 * v2) / (2.0 * v), 4.0 * v2 / (3.0 * (1.0 + v2))),
        ],
    )
}

/// Generalized Bernoulli mixing law centred at `(v − u)/2`.
fn unimodal_mid(u: f64, v: f64) -> Result<Construction> {
    let s = u + v;
    let s2 = s * s;
    let y = 0.75 * s;
    Construction::khintchine(
        (v - u) / 2.0,
        &[
            (-y, 4.0 / 3.0 * (2.0 + v * (v - u)) / s2),
            (0.0, 1.0 - 4.0 / 3.0 * crate::bounds::selberg_mid(u, v)),
            (y, 4.0 / 3.0 * (2.0 + u * (u - v)) / s2),
        ],
    )
}

fn mode_mean_one_sided(v: f64) -> Result<Construction> {
    let x = mode_mean_x(v)?.x;
    let vx = v * x;
    let d = 3.0 + vx * vx;
    Construction::khintchine(0.0, &[(-3.0 / vx, vx * vx / d), (vx, 3.0 / d)])
}

fn mode_mean_two_sided(u: f64, v: f64) -> Result<Construction> {
    let g = gamma_for(u, v)?;
    let c = 0.375 * (g + 3.0) * v;
    let ic2 = 1.0 / (c * c);
    Construction::khintchine(
        0.0,
        &[
            (
                -g * c,
                3.0 * (4.0 * ic2 - g + 1.0) / ((g + 1.0) * (g + 3.0)),
            ),
            (
                0.75 * (1.0 - g) * c,
                16.0 * (g - 3.0 * ic2) / ((g + 3.0) * (3.0 * g + 1.0)),
            ),
            (
                c,
                3.0 * (4.0 * ic2 + g * (g - 1.0)) / ((g + 1.0) * (3.0 * g + 1.0)),
            ),
        ],
    )
}

fn sym_unimodal_two_sided(regime: &str, u: f64, v: f64) -> Result<Construction> {
    if regime == "sym_unimodal.joint" {
        let s = u + v;
        inflated_symmetric_uniform(0.75 * s, 16.0 / (3.0 * s * s))
    } else {
        inflated_symmetric_uniform(1.5 * v, 4.0 / (3.0 * v * v))
    }
}

fn construct(class: DistributionClass, regime: &str, u: f64, v: f64) -> Result<Construction> {
    use DistributionClass as C;
    if regime == "trivial" {
        return Err(Error::NoWitness(format!(
            "the bound 1 at v = 0 for class {class} is approached but not attained"
        )));
    }
    match (class, regime) {
        (_, "gauss.uniform") => gauss(v, true),
        (_, "gauss.inflated") => gauss(v, false),
        (C::All, "cantelli") => cantelli(v),
        (C::All, r) => all_two_sided(r, u, v),
        (C::Symmetric, "sym.one_sided") => symmetric_pairs(&{
            let w = v.max(1.0);
            [(w, 1.0 / (2.0 * w * w))]
        }),
        (C::Symmetric, r) => symmetric_two_sided(r, u, v),
        (C::ConcaveHalfLine, r) => concave(v, r == "concave.uniform"),
        (C::Unimodal, "unimodal.mode_at_v") => unimodal_mode_at_v(v),
        (C::Unimodal, "unimodal.cap") => unimodal_cap(v),
        (C::Unimodal, _) => unimodal_mid(u, v),
        (C::UnimodalModeEqMean, "mode_mean.one_sided") => mode_mean_one_sided(v),
        (C::UnimodalModeEqMean, _) => mode_mean_two_sided(u, v),
        (C::SymmetricUnimodal, "sym_unimodal.uniform") => gauss(v, true),
        (C::SymmetricUnimodal, "sym_unimodal.inflated") => gauss(v, false),
        (C::SymmetricUnimodal, r) => sym_unimodal_two_sided(r, u, v),
    }
}

/// Builds the distribution attaining `bound(class, interval)`.
///
/// Reflection-closed classes with `v > u` are built on the swapped interval
/// and reflected back.
pub fn extremal_for(class: DistributionClass, interval: IntervalSpec) -> Result<ExtremalWitness> {
    let b = bound(class, interval)?;
    let (u, v) = (interval.u(), interval.v());
    let swap = class.is_reflection_closed() && !interval.is_one_sided() && v > u;
    let construction = if swap {
        construct(class, &b.regime, v, u)?.reflected()
    } else {
        construct(class, &b.regime, u, v)?
    };
    let mode = match class {
        DistributionClass::All | DistributionClass::Symmetric => None,
        _ => construction.mode,
    };
    Ok(ExtremalWitness {
        distribution: construction.distribution,
        class,
        interval,
        mode,
        claimed_value: b.value,
        regime: b.regime,
        khintchine: construction.khintchine,
    })
}
