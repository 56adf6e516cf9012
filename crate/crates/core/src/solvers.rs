//! Closed-form roots used by the mode-at-mean bounds.
//!
//! Both cubics here have a trigonometric / Vieta closed form. The closed form
//! is evaluated first and then polished by a single safeguarded Newton step,
//! which keeps the `r = 1` root (`γ = 1` when `u = v`) exact to rounding.

use core::f64::consts::PI;

use libm::{atan, cbrt, cos, sqrt};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The unique positive root `z` of `z³ + 3z² − 3rz − r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicRoot {
    pub r: f64,
    pub z: f64,
}

impl CubicRoot {
    /// `|z³ + 3z² − 3rz − r|` scaled by the sum of the absolute values of its terms.
    pub fn relative_residual(&self) -> f64 {
        cubic_relative_residual(self.r, self.z)
    }
}

fn cubic(r: f64, z: f64) -> f64 {
    ((z + 3.0) * z - 3.0 * r) * z - r
}

fn cubic_derivative(r: f64, z: f64) -> f64 {
    (3.0 * z + 6.0) * z - 3.0 * r
}

/// Relative residual of `z` as a root of `z³ + 3z² − 3rz − r`.
pub fn cubic_relative_residual(r: f64, z: f64) -> f64 {
    let scale = z.abs() * z * z + 3.0 * z * z + 3.0 * (r * z).abs() + r.abs();
    cubic(r, z).abs() / scale.max(f64::MIN_POSITIVE)
}

/// Solves `z³ + 3z² − 3rz − r = 0` for its only positive root,
/// `z = 2√(1+r)·cos((π − arctan √r)/3) − 1`.
pub fn cubic_positive_root(r: f64) -> Result<CubicRoot> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!(
            "cubic parameter must be positive and finite, got {r}"
        )));
    }
    let closed = 2.0 * sqrt(1.0 + r) * cos((PI - atan(sqrt(r))) / 3.0) - 1.0;
    let z = newton_polish(closed, |z| cubic(r, z), |z| cubic_derivative(r, z));
    Ok(CubicRoot { r, z })
}

/// One Newton step, kept only if it stays positive and does not increase the residual.
fn newton_polish(z: f64, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> f64 {
    let fz = f(z);
    let d = df(z);
    if fz == 0.0 || d == 0.0 || !d.is_finite() {
        return z;
    }
    let candidate = z - fz / d;
    if candidate > 0.0 && f(candidate).abs() <= fz.abs() {
        candidate
    } else {
        z
    }
}

/// The positive root of `γ³ + 3γ² − 3(u/v)γ − u/v = 0`.
pub fn gamma_for(u: f64, v: f64) -> Result<f64> {
    if !(u > 0.0) || !(v > 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "gamma requires u > 0 and v > 0, got u={u}, v={v}"
        )));
    }
    if u == v {
        return Ok(1.0);
    }
    Ok(cubic_positive_root(u / v)?.z)
}

/// Stationary point of the one-sided mode-at-mean tail functional.
///
/// `x > 3/2` solves `2v²x³ − 3v²x² − 3 = 0`, written through the Vieta
/// auxiliary `w = (√(3+v²) + √3)^{2/3} v^{−2/3}` as `x = (w + 1 + 1/w)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeMeanSolution {
    pub v: f64,
    pub w: f64,
    pub x: f64,
}

impl ModeMeanSolution {
    /// `|2v²x³ − 3v²x² − 3| / (1 + v²x³)`.
    pub fn relative_residual(&self) -> f64 {
        mode_mean_relative_residual(self.v, self.x)
    }
}

fn mode_mean_cubic(v: f64, x: f64) -> f64 {
    let v2 = v * v;
    v2 * x * x * (2.0 * x - 3.0) - 3.0
}

pub fn mode_mean_relative_residual(v: f64, x: f64) -> f64 {
    mode_mean_cubic(v, x).abs() / (1.0 + v * v * x * x * x)
}

/// Both Vieta branches `(w₁, w₂)`; they satisfy `w₁·w₂ = 1`.
pub fn vieta_branches(v: f64) -> (f64, f64) {
    let s3 = sqrt(3.0);
    let s = sqrt(3.0 + v * v);
    let scale = cbrt(v * v);
    let w1 = cbrt((s + s3) * (s + s3)) / scale;
    // (s - √3) cancels for small v; 3v²/(s + √3) is the same quantity.
    let diff = v * v / (s + s3);
    let w2 = cbrt(diff * diff) / scale;
    (w1, w2)
}

/// Maps a Vieta branch to the stationary point, `x = 3/2 + (w−1)²/(2w)`.
pub fn x_from_branch(w: f64) -> f64 {
    1.5 + (w - 1.0) * (w - 1.0) / (2.0 * w)
}

pub fn mode_mean_x(v: f64) -> Result<ModeMeanSolution> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!(
            "mode-at-mean stationary point requires finite v > 0, got {v}"
        )));
    }
    let (w, _) = vieta_branches(v);
    let closed = x_from_branch(w);
    let v2 = v * v;
    let x = newton_polish(
        closed,
        |x| mode_mean_cubic(v, x),
        |x| 6.0 * v2 * x * (x - 1.0),
    );
    Ok(ModeMeanSolution { v, w, x })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let flo = f(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == (flo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn unit_parameter_root_is_one() {
        let root = cubic_positive_root(1.0).unwrap();
        assert!((root.z - 1.0).abs() < 1e-12, "{}", root.z);
    }

    #[test]
    fn twenty_sevenths_root_is_two() {
        // 8 + 12 - 120/7 - 20/7 = 0
        let root = cubic_positive_root(20.0 / 7.0).unwrap();
        assert!((root.z - 2.0).abs() < 1e-12, "{}", root.z);
    }

    #[test]
    fn tiny_parameter_root_is_tiny_and_consistent() {
        let r = 1e-9;
        let root = cubic_positive_root(r).unwrap();
        assert!(root.z > 0.0 && root.z < 1e-4);
        let lhs = root.z.powi(3) + 3.0 * root.z * root.z;
        let rhs = r * (3.0 * root.z + 1.0);
        assert!((lhs - rhs).abs() <= 1e-10 * rhs);
    }

    #[test]
    fn nonpositive_parameter_is_rejected() {
        assert!(matches!(
            cubic_positive_root(0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            cubic_positive_root(-2.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            cubic_positive_root(f64::NAN),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn gamma_matches_bisection() {
        let r = 2.5 / 2.0;
        let oracle = bisect(|g| g * g * g + 3.0 * g * g - 3.0 * r * g - r, 1.0, 2.0);
        let gamma = gamma_for(2.5, 2.0).unwrap();
        assert!((gamma - oracle).abs() < 1e-12, "{gamma} vs {oracle}");
        assert!((gamma - 1.16).abs() < 0.01);
        assert!(cubic_relative_residual(r, gamma) <= 1e-10);
        assert_eq!(gamma_for(5.0, 5.0).unwrap(), 1.0);
        assert!((gamma_for(20.0, 7.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_is_increasing_in_ratio() {
        let mut prev = 0.0;
        for k in 1..400 {
            let g = gamma_for(k as f64 * 0.05, 1.0).unwrap();
            assert!(g > prev);
            prev = g;
        }
    }

    #[test]
    fn mode_mean_x_at_root_three_halves() {
        let s = mode_mean_x(3f64.sqrt() / 2.0).unwrap();
        assert!((s.x - 2.0).abs() < 1e-12, "{}", s.x);
    }

    #[test]
    fn mode_mean_x_matches_bisection_at_one() {
        let oracle = bisect(|x| 2.0 * x * x * x - 3.0 * x * x - 3.0, 1.5, 3.0);
        let s = mode_mean_x(1.0).unwrap();
        assert!((s.x - oracle).abs() < 1e-9);
    }

    #[test]
    fn mode_mean_x_large_v_tends_to_three_halves() {
        let s = mode_mean_x(1000.0).unwrap();
        assert!(s.x > 1.5 && s.x < 1.5 + 1e-3);
        assert!(s.relative_residual() < 1e-9);
    }

    #[test]
    fn vieta_branches_are_reciprocal_and_agree() {
        for &v in &[0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0] {
            let (w1, w2) = vieta_branches(v);
            assert!((w1 * w2 - 1.0).abs() < 1e-12, "v={v}: {}", w1 * w2);
            assert!((x_from_branch(w1) - x_from_branch(w2)).abs() < 1e-12 * x_from_branch(w1));
        }
    }

    #[test]
    fn mode_mean_rejects_nonpositive() {
        assert!(mode_mean_x(0.0).is_err());
        assert!(mode_mean_x(-1.0).is_err());
    }
}
