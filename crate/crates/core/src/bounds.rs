//! Sharp upper bounds on `P(Z ≤ −u or Z ≥ v)` for a standardized `Z`.
//!
//! Every evaluator returns a [`TailBound`] carrying the value, a regime label
//! and the name of the inequality. Parameters outside the range where a sharp
//! closed form is known produce [`Error::OutOfTheoremRange`], never a value.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use libm::sqrt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::solvers::{gamma_for, mode_mean_x};

pub(crate) const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Relative slack applied when checking a hypothesis such as `v ≥ √3`.
pub const RANGE_SLACK: f64 = 1e-12;

/// `2/√3`, where the uniform and boundary-inflated Gauss regimes meet.
pub fn gauss_breakpoint() -> f64 {
    2.0 / SQRT3
}

/// `√(5/3)`, the one-sided unimodal breakpoint.
pub fn unimodal_breakpoint() -> f64 {
    sqrt(5.0 / 3.0)
}

/// `2√2 − 1`, the ratio `u/v` where the symmetric unimodal two-sided regimes meet.
pub fn sym_unimodal_ratio() -> f64 {
    2.0 * core::f64::consts::SQRT_2 - 1.0
}

fn at_least(x: f64, bound: f64) -> bool {
    x >= bound - RANGE_SLACK * bound.abs().max(1.0)
}

fn at_most(x: f64, bound: f64) -> bool {
    x <= bound + RANGE_SLACK * bound.abs().max(1.0)
}

/// The distribution classes over which the supremum is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DistributionClass {
    /// Every distribution with mean 0 and variance 1.
    #[serde(rename = "all")]
    All,
    /// Distributions symmetric about 0 with variance 1.
    #[serde(rename = "symmetric")]
    Symmetric,
    /// Distributions on `[0, ∞)` with concave CDF there and `E Y² = 1`.
    #[serde(rename = "concave")]
    ConcaveHalfLine,
    /// Unimodal with mean 0, variance 1 and arbitrary mode.
    #[serde(rename = "unimodal")]
    Unimodal,
    /// Unimodal with the mode at the mean.
    #[serde(rename = "mode-mean")]
    UnimodalModeEqMean,
    /// Symmetric and unimodal (hence mode at 0).
    #[serde(rename = "sym-unimodal")]
    SymmetricUnimodal,
}

impl DistributionClass {
    pub const ALL: [DistributionClass; 6] = [
        DistributionClass::All,
        DistributionClass::Symmetric,
        DistributionClass::ConcaveHalfLine,
        DistributionClass::Unimodal,
        DistributionClass::UnimodalModeEqMean,
        DistributionClass::SymmetricUnimodal,
    ];

    /// Short name used on the command line and in JSON.
    pub fn name(self) -> &'static str {
        match self {
            DistributionClass::All => "all",
            DistributionClass::Symmetric => "symmetric",
            DistributionClass::ConcaveHalfLine => "concave",
            DistributionClass::Unimodal => "unimodal",
            DistributionClass::UnimodalModeEqMean => "mode-mean",
            DistributionClass::SymmetricUnimodal => "sym-unimodal",
        }
    }

    /// Whether the class is closed under `Z → −Z`.
    pub fn is_reflection_closed(self) -> bool {
        !matches!(
            self,
            DistributionClass::ConcaveHalfLine | DistributionClass::UnimodalModeEqMean
        )
    }
}

impl fmt::Display for DistributionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistributionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistributionClass::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                Error::InvalidClassQuery(format!(
                    "unknown class '{s}' (expected all, symmetric, concave, unimodal, mode-mean or sym-unimodal)"
                ))
            })
    }
}

/// Tail interval `(−∞, −u] ∪ [v, ∞)` in standard-deviation units.
///
/// `u = +∞` encodes the one-sided event `Z ≥ v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalSpec {
    u: f64,
    v: f64,
}

impl IntervalSpec {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidInterval(format!(
                "v must be a positive finite number, got {v}"
            )));
        }
        if !(u > 0.0) {
            return Err(Error::InvalidInterval(format!(
                "u must be positive or +infinity, got {u}"
            )));
        }
        Ok(IntervalSpec { u, v })
    }

    pub fn two_sided(u: f64, v: f64) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::InvalidInterval(format!(
                "two-sided interval needs finite u, got {u}"
            )));
        }
        Self::new(u, v)
    }

    pub fn one_sided(v: f64) -> Result<Self> {
        Self::new(f64::INFINITY, v)
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn is_one_sided(&self) -> bool {
        self.u == f64::INFINITY
    }

    /// The interval seen by `−Z`.
    pub fn reflected(&self) -> Result<Self> {
        if self.is_one_sided() {
            return Err(Error::InvalidInterval(
                "a one-sided interval has no finite reflection".to_string(),
            ));
        }
        Ok(IntervalSpec {
            u: self.v,
            v: self.u,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    u: Option<f64>,
    v: f64,
}

impl Serialize for IntervalSpec {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        let u = if self.is_one_sided() {
            None
        } else {
            Some(self.u)
        };
        IntervalRepr { u, v: self.v }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let repr = IntervalRepr::deserialize(d)?;
        IntervalSpec::new(repr.u.unwrap_or(f64::INFINITY), repr.v)
            .map_err(<D::Error as serde::de::Error>::custom)
    }
}

/// A bound value together with the regime that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub value: f64,
    pub regime: String,
    pub theorem: String,
    pub conditions_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TailBound {
    fn new(value: f64, regime: &str, theorem: &str) -> Self {
        TailBound {
            value: value.clamp(0.0, 1.0),
            regime: regime.to_string(),
            theorem: theorem.to_string(),
            conditions_ok: true,
            note: None,
        }
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {note}"),
            None => note,
        });
        self
    }
}

/// Unimodal `W` with a second moment given about an arbitrary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VPInput {
    pub w: f64,
    pub m2: f64,
}

pub(crate) mod cite {
    pub const CANTELLI: &str = "Cantelli inequality";
    pub const ALL_TWO_SIDED: &str = "asymmetric Bienaymé-Chebyshev inequality";
    pub const SYM_ONE_SIDED: &str = "symmetric one-sided Chebyshev inequality";
    pub const SYM_TWO_SIDED: &str = "symmetric asymmetric-interval Chebyshev inequality";
    pub const CONCAVE: &str = "one-sided Gauss inequality (concave half-line)";
    pub const GAUSS: &str = "Gauss inequality";
    pub const VP: &str = "Vysochanskii-Petunin inequality";
    pub const UNIMODAL_ONE_SIDED: &str = "unimodal Cantelli inequality";
    pub const UNIMODAL_TWO_SIDED: &str = "unimodal asymmetric Gauss inequality";
    pub const UNIMODAL_VP: &str = "unimodal asymmetric inequality (Vysochanskii-Petunin route)";
    pub const MODE_MEAN_ONE_SIDED: &str = "one-sided Gauss inequality, mode at mean";
    pub const MODE_MEAN_TWO_SIDED: &str = "asymmetric Gauss inequality, mode at mean";
    pub const SYM_UNIMODAL_ONE_SIDED: &str = "symmetric unimodal one-sided Gauss inequality";
    pub const SYM_UNIMODAL_TWO_SIDED: &str = "symmetric unimodal asymmetric Gauss inequality";
    pub const TRIVIAL: &str = "trivial bound";
}

fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInterval(format!(
            "{name} must be a nonnegative finite number, got {x}"
        )))
    }
}

fn check_pos(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInterval(format!(
            "{name} must be a positive finite number, got {x}"
        )))
    }
}

/// Orders `(u, v)` so that `v ≤ u`, reporting whether a swap happened.
fn canonical(u: f64, v: f64) -> (f64, f64, bool) {
    if v > u {
        (v, u, true)
    } else {
        (u, v, false)
    }
}

fn note_swap(b: TailBound, swapped: bool) -> TailBound {
    if swapped {
        b.with_note("evaluated on the reflected interval (u and v swapped)".to_string())
    } else {
        b
    }
}

fn trivial() -> TailBound {
    TailBound::new(1.0, "trivial", cite::TRIVIAL)
}

pub fn bound_all_one_sided(v: f64) -> Result<TailBound> {
    check_nonneg("v", v)?;
    Ok(TailBound::new(
        1.0 / (1.0 + v * v),
        "cantelli",
        cite::CANTELLI,
    ))
}

/// Middle-regime value `(4 + (u−v)²)/(u+v)²` shared by several classes.
pub(crate) fn selberg_mid(u: f64, v: f64) -> f64 {
    let d = u - v;
    let s = u + v;
    (4.0 + d * d) / (s * s)
}

pub fn bound_all_two_sided(u: f64, v: f64) -> Result<TailBound> {
    check_pos("u", u)?;
    check_pos("v", v)?;
    let (u, v, swapped) = canonical(u, v);
    let b = if u * v <= 1.0 {
        TailBound::new(1.0, "all.trivial", cite::ALL_TWO_SIDED)
    } else if u <= v + 2.0 / v {
        TailBound::new(selberg_mid(u, v), "all.mid", cite::ALL_TWO_SIDED)
    } else {
        TailBound::new(1.0 / (1.0 + v * v), "all.cap", cite::ALL_TWO_SIDED)
    };
    Ok(note_swap(b, swapped))
}

/// At `v = 0` the atom at the origin counts, so the supremum is 1.
pub fn bound_symmetric_one_sided(v: f64) -> Result<TailBound> {
    check_nonneg("v", v)?;
    if v == 0.0 {
        return Ok(trivial());
    }
    let w = v.max(1.0);
    Ok(TailBound::new(
        1.0 / (2.0 * w * w),
        "sym.one_sided",
        cite::SYM_ONE_SIDED,
    ))
}

/// The four symmetric two-sided cases, in canonical order `v ≤ u`.
pub(crate) fn symmetric_case(u: f64, v: f64) -> (f64, &'static str) {
    if u <= 1.0 {
        (1.0, "sym.inner")
    } else if u <= core::f64::consts::SQRT_2 * v {
        (1.0 / (u * u), "sym.wide")
    } else if v <= 1.0 {
        (0.5 + (1.0 - v * v) / (2.0 * (u * u - v * v)), "sym.split")
    } else {
        (1.0 / (2.0 * v * v), "sym.right")
    }
}

pub fn bound_symmetric_two_sided(u: f64, v: f64) -> Result<TailBound> {
    check_pos("u", u)?;
    check_pos("v", v)?;
    let (u, v, swapped) = canonical(u, v);
    let (value, regime) = symmetric_case(u, v);
    Ok(note_swap(
        TailBound::new(value, regime, cite::SYM_TWO_SIDED),
        swapped,
    ))
}

fn gauss_value(v: f64) -> (f64, bool) {
    if v <= gauss_breakpoint() {
        (1.0 - v / SQRT3, true)
    } else {
        (4.0 / (9.0 * v * v), false)
    }
}

pub fn bound_concave_one_sided(v: f64) -> Result<TailBound> {
    check_nonneg("v", v)?;
    let (value, uniform) = gauss_value(v);
    let regime = if uniform {
        "concave.uniform"
    } else {
        "concave.inflated"
    };
    Ok(TailBound::new(value, regime, cite::CONCAVE))
}

pub fn bound_gauss_two_sided(v: f64) -> Result<TailBound> {
    check_nonneg("v", v)?;
    let (value, uniform) = gauss_value(v);
    let regime = if uniform {
        "gauss.uniform"
    } else {
        "gauss.inflated"
    };
    Ok(TailBound::new(value, regime, cite::GAUSS))
}

/// Bound on `P(|W| ≥ w)` for unimodal `W` with `E W² = m2`.
pub fn bound_vp(input: VPInput) -> Result<TailBound> {
    let VPInput { w, m2 } = input;
    if !(m2 > 0.0) || !m2.is_finite() {
        return Err(Error::InvalidMoment(format!(
            "second moment must be positive and finite, got {m2}"
        )));
    }
    check_nonneg("w", w)?;
    let b = if w * w <= m2 {
        TailBound::new(1.0, "vp.trivial", cite::VP)
    } else if 3.0 * w * w <= 8.0 * m2 {
        TailBound::new(4.0 * m2 / (3.0 * w * w) - 1.0 / 3.0, "vp.mid", cite::VP)
    } else {
        TailBound::new(4.0 * m2 / (9.0 * w * w), "vp.tail", cite::VP)
    };
    Ok(b)
}

pub fn bound_unimodal_one_sided(v: f64) -> Result<TailBound> {
    check_nonneg("v", v)?;
    let v2 = v * v;
    let b = if 3.0 * v2 <= 5.0 {
        TailBound::new(
            (3.0 - v2) / (3.0 * (1.0 + v2)),
            "unimodal.mode_at_v",
            cite::UNIMODAL_ONE_SIDED,
        )
    } else {
        TailBound::new(
            4.0 / (9.0 * (1.0 + v2)),
            "unimodal.cap",
            cite::UNIMODAL_ONE_SIDED,
        )
    };
    Ok(b)
}

/// Lower limit on `u` for the Vysochanskii-Petunin route at a given `v ≥ √(5/3)`.
pub fn unimodal_vp_lower_u(v: f64) -> f64 {
    let disc = (6.0 * v * v - 10.0).max(0.0);
    v.max((11.0 * v - 4.0 * sqrt(disc)) / 5.0)
}

pub fn bound_unimodal_two_sided(u: f64, v: f64) -> Result<TailBound> {
    check_pos("u", u)?;
    check_pos("v", v)?;
    let (u, v, swapped) = canonical(u, v);
    let b = if at_least(v, SQRT3) {
        if u <= v + 2.0 / v {
            TailBound::new(
                4.0 / 9.0 * selberg_mid(u, v),
                "unimodal.mid",
                cite::UNIMODAL_TWO_SIDED,
            )
        } else {
            TailBound::new(
                4.0 / (9.0 * (1.0 + v * v)),
                "unimodal.cap",
                cite::UNIMODAL_TWO_SIDED,
            )
        }
    } else if at_least(v, unimodal_breakpoint())
        && at_least(u, unimodal_vp_lower_u(v))
        && at_most(u, v + 2.0 / v)
    {
        TailBound::new(
            4.0 / 9.0 * selberg_mid(u, v),
            "unimodal.vp",
            cite::UNIMODAL_VP,
        )
    } else {
        return Err(Error::OutOfTheoremRange(format!(
            "no sharp unimodal bound is known for u={u}, v={v} (needs v >= sqrt(3), or \
             v >= sqrt(5/3) with {:.6} <= u <= {:.6}); the class-all bound applies but is not sharp",
            unimodal_vp_lower_u(v),
            v + 2.0 / v
        )));
    };
    Ok(note_swap(b, swapped))
}

pub fn bound_mode_mean_one_sided(v: f64) -> Result<TailBound> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidInterval(format!(
            "mode-at-mean one-sided bound needs finite v > 0, got {v}"
        )));
    }
    let sol = mode_mean_x(v)?;
    let x = sol.x;
    let value = 2.0 * (x - 1.0) / (v * v * x * x + 2.0 * x + 1.0);
    Ok(
        TailBound::new(value, "mode_mean.one_sided", cite::MODE_MEAN_ONE_SIDED)
            .with_note(format!("x={x}")),
    )
}

/// Whether `(u, v)` lies in the range where the mode-at-mean two-sided form is sharp.
pub fn mode_mean_two_sided_in_range(u: f64, v: f64) -> bool {
    let left = at_least(u, SQRT3) && at_most(u, v) && at_most(v, u + 2.0 / u);
    let right = at_least(v, SQRT3) && at_most(v, u) && at_most(u, v + 2.0 / v);
    left || right
}

/// Value of the mode-at-mean two-sided form for a given γ.
pub(crate) fn mode_mean_two_sided_value(gamma: f64, v: f64) -> f64 {
    let g3 = gamma + 3.0;
    let gm = gamma - 1.0;
    (1024.0 / (v * v) + 27.0 * gm * gm * g3 * g3) / (9.0 * g3 * g3 * g3 * (3.0 * gamma + 1.0))
}

pub fn bound_mode_mean_two_sided(u: f64, v: f64) -> Result<TailBound> {
    check_pos("u", u)?;
    check_pos("v", v)?;
    if !mode_mean_two_sided_in_range(u, v) {
        return Err(Error::OutOfTheoremRange(format!(
            "no sharp mode-at-mean bound is known for u={u}, v={v} (needs \
             sqrt(3) <= min(u,v) and max(u,v) <= min(u,v) + 2/min(u,v)); \
             the class-all bound applies but is not sharp"
        )));
    }
    let gamma = gamma_for(u, v)?;
    let value = mode_mean_two_sided_value(gamma, v);
    Ok(
        TailBound::new(value, "mode_mean.two_sided", cite::MODE_MEAN_TWO_SIDED)
            .with_note(format!("gamma={gamma}")),
    )
}

/// At `v = 0` the supremum is 1, as for every other class.
pub fn bound_sym_unimodal_one_sided(v: f64) -> Result<TailBound> {
    check_nonneg("v", v)?;
    if v == 0.0 {
        return Ok(trivial());
    }
    let b = if v < gauss_breakpoint() {
        TailBound::new(
            0.5 * (1.0 - v / SQRT3),
            "sym_unimodal.uniform",
            cite::SYM_UNIMODAL_ONE_SIDED,
        )
    } else {
        TailBound::new(
            2.0 / (9.0 * v * v),
            "sym_unimodal.inflated",
            cite::SYM_UNIMODAL_ONE_SIDED,
        )
    };
    Ok(b)
}

pub fn bound_sym_unimodal_two_sided(u: f64, v: f64) -> Result<TailBound> {
    check_pos("u", u)?;
    check_pos("v", v)?;
    let (u, v, swapped) = canonical(u, v);
    if !at_least(v, SQRT3) {
        return Err(Error::OutOfTheoremRange(format!(
            "no sharp symmetric unimodal bound is known for min(u,v)={v} < sqrt(3); \
             the class-all bound applies but is not sharp"
        )));
    }
    let b = if u <= sym_unimodal_ratio() * v {
        let s = u + v;
        TailBound::new(
            16.0 / (9.0 * s * s),
            "sym_unimodal.joint",
            cite::SYM_UNIMODAL_TWO_SIDED,
        )
    } else {
        TailBound::new(
            2.0 / (9.0 * v * v),
            "sym_unimodal.right",
            cite::SYM_UNIMODAL_TWO_SIDED,
        )
    };
    Ok(note_swap(b, swapped))
}

fn gauss_fallback(first: Result<TailBound>, u: f64, v: f64) -> Result<TailBound> {
    match first {
        Err(Error::OutOfTheoremRange(_)) if u == v => bound_gauss_two_sided(v),
        other => other,
    }
}

/// Dispatches a query to the evaluator for its class and sidedness.
///
/// For the mode-at-mean and symmetric unimodal classes a symmetric interval
/// outside the asymmetric range falls back to the Gauss bound, which is sharp
/// for every `v` when `u = v`.
pub fn bound(class: DistributionClass, interval: IntervalSpec) -> Result<TailBound> {
    let v = interval.v();
    if interval.is_one_sided() {
        return match class {
            DistributionClass::All => bound_all_one_sided(v),
            DistributionClass::Symmetric => bound_symmetric_one_sided(v),
            DistributionClass::ConcaveHalfLine => bound_concave_one_sided(v),
            DistributionClass::Unimodal => bound_unimodal_one_sided(v),
            DistributionClass::UnimodalModeEqMean => bound_mode_mean_one_sided(v),
            DistributionClass::SymmetricUnimodal => bound_sym_unimodal_one_sided(v),
        };
    }
    let u = interval.u();
    match class {
        DistributionClass::All => bound_all_two_sided(u, v),
        DistributionClass::Symmetric => bound_symmetric_two_sided(u, v),
        DistributionClass::ConcaveHalfLine => Err(Error::InvalidClassQuery(
            "the concave half-line class only supports one-sided queries".to_string(),
        )),
        DistributionClass::Unimodal => bound_unimodal_two_sided(u, v),
        DistributionClass::UnimodalModeEqMean => {
            gauss_fallback(bound_mode_mean_two_sided(u, v), u, v)
        }
        DistributionClass::SymmetricUnimodal => {
            gauss_fallback(bound_sym_unimodal_two_sided(u, v), u, v)
        }
    }
}
