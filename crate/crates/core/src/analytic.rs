//! Closed forms for the skip-`m` sausage trees on a helical point set.
//!
//! With `A_m = 1 − 2cos(mω)` and `s = αω`:
//!
//! * Steiner helix radius `r_m = m s / √(A_m (1 + A_m))`
//! * terminal step `d_m = √(m² s² + 1 + A_m)`, the spanning length per point
//! * Steiner length per point `1 + m s √(A_m / (1 + A_m))`
//! * surfaces `ρ_m = (1 + s √(A_1 / (1 + A_1))) / d_m`
//!
//! The ratio function is `ρ = max_m ρ_m`, i.e. the `m = 1` Steiner density
//! over the smallest step distance.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SrfError};
use crate::helix::{HelixParams, SkipCount};

/// Step distances at or below this are treated as coincident terminals.
pub const DEGENERATE_STEP: f64 = 1e-12;

/// Absolute tolerance on the denominator when collecting tied skip classes.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Negative `A_m` down to this size is rounding noise on a zero.
const A_ROUNDOFF: f64 = 1e-14;

pub const DEFAULT_M_MAX: u32 = 16;

/// Lower bound √3/3 on the Euclidean Steiner ratio.
pub fn graham_hwang_bound() -> f64 {
    3f64.sqrt() / 3.0
}

/// `(3√3 + √7) / 10`.
pub fn conjectured_ratio() -> f64 {
    (3.0 * 3f64.sqrt() + 7f64.sqrt()) / 10.0
}

/// `ω_R = π − arccos(2/3)`.
pub fn omega_r() -> f64 {
    PI - (2.0f64 / 3.0).acos()
}

/// `α_R = √30 / (9 ω_R)`, so that `α_R ω_R = √30 / 9`.
pub fn alpha_r() -> f64 {
    30f64.sqrt() / (9.0 * omega_r())
}

/// The three-surface meeting point `(ω_R, α_R)`.
pub fn conjecture_point() -> HelixParams {
    HelixParams {
        omega: omega_r(),
        alpha: alpha_r(),
    }
}

#[inline]
pub fn a_coefficient(m: SkipCount, omega: f64) -> f64 {
    1.0 - 2.0 * (m.as_f64() * omega).cos()
}

/// `m² α² ω² + 1 + A_m`, the squared terminal step.
#[inline]
fn step_squared(m: SkipCount, p: HelixParams) -> f64 {
    let ms = m.as_f64() * p.rise();
    ms * ms + 2.0 - 2.0 * (m.as_f64() * p.omega).cos()
}

/// Radius of the Steiner helix that puts 120° between every edge pair at
/// interior Steiner points.
pub fn radius(m: SkipCount, p: HelixParams) -> Result<f64> {
    let a = a_coefficient(m, p.omega);
    if !(a > 0.0) {
        return Err(SrfError::domain(format!(
            "Steiner radius undefined: A_{m} = {a} <= 0 at omega = {}",
            p.omega
        )));
    }
    Ok(m.as_f64() * p.rise() / (a * (1.0 + a)).sqrt())
}

/// Cosine of the angle between consecutive edges of the skip-`m` terminal path.
pub fn cos_theta(m: SkipCount, p: HelixParams) -> Result<f64> {
    let a = a_coefficient(m, p.omega);
    let denom = step_squared(m, p);
    if !(denom > DEGENERATE_STEP * DEGENERATE_STEP) {
        return Err(SrfError::Degenerate(format!(
            "terminals {m} steps apart coincide at omega = {}, alpha = {}",
            p.omega, p.alpha
        )));
    }
    Ok(-1.0 + (1.0 + a) * (1.0 + a) / (2.0 * denom))
}

/// Euclidean distance between terminals `m` steps apart.
#[inline]
pub fn step_distance(m: SkipCount, p: HelixParams) -> f64 {
    step_squared(m, p).max(0.0).sqrt()
}

/// Steiner tree length per terminal for skip class `m`.
pub fn steiner_length_density(m: SkipCount, p: HelixParams) -> Result<f64> {
    let mut a = a_coefficient(m, p.omega);
    if a < 0.0 {
        if a < -A_ROUNDOFF {
            return Err(SrfError::domain(format!("Steiner density undefined: A_{m} = {a} < 0")));
        }
        a = 0.0;
    }
    Ok(1.0 + m.as_f64() * p.rise() * (a / (1.0 + a)).sqrt())
}

fn numerator(p: HelixParams) -> Result<f64> {
    let a1 = a_coefficient(SkipCount::ONE, p.omega);
    if !(a1 > 0.0) {
        return Err(SrfError::domain(format!(
            "omega = {} outside the numerator domain (pi/3, 5pi/3): A_1 = {a1}",
            p.omega
        )));
    }
    steiner_length_density(SkipCount::ONE, p)
}

/// Surface `ρ_m`: the `m = 1` Steiner density over the skip-`m` step.
///
/// `A_m < 0` is fine here for `m ≥ 2`; only the numerator needs `A_1 > 0`.
pub fn rho_surface(m: SkipCount, p: HelixParams) -> Result<f64> {
    let num = numerator(p)?;
    let d = step_distance(m, p);
    if !(d > DEGENERATE_STEP) {
        return Err(SrfError::Degenerate(format!("d_{m} = {d} at omega = {}", p.omega)));
    }
    Ok(num / d)
}

/// Everything the closed forms say about one skip class at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSample {
    pub params: HelixParams,
    pub m: SkipCount,
    pub a_m: f64,
    pub rho_m: f64,
    pub d_m: f64,
    /// `None` when `A_m < 0`.
    pub density_st: Option<f64>,
    pub cos_theta: f64,
}

pub fn surface_sample(m: SkipCount, p: HelixParams) -> Result<SurfaceSample> {
    Ok(SurfaceSample {
        params: p,
        m,
        a_m: a_coefficient(m, p.omega),
        rho_m: rho_surface(m, p)?,
        d_m: step_distance(m, p),
        density_st: steiner_length_density(m, p).ok(),
        cos_theta: cos_theta(m, p)?,
    })
}

/// Which numerator the ratio function uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SrfVariant {
    /// `m = 1` Steiner density over `min_m d_m`.
    #[default]
    FullTree,
    /// `min_m` of the Steiner densities (over classes with `A_m ≥ 0`) over
    /// `min_m d_m`. Exploration only.
    MinNumerator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrfValue {
    pub rho: f64,
    /// Smallest `m` minimizing the step distance.
    pub argmin_m: SkipCount,
    /// Every `m` whose step is within [`TIE_TOLERANCE`] of the minimum.
    pub tie: Vec<SkipCount>,
    /// Set when the minimizer is `m_max` itself, so a larger class might win.
    pub truncated: bool,
}

pub fn srf(p: HelixParams, m_max: SkipCount) -> Result<SrfValue> {
    srf_with(p, m_max, SrfVariant::FullTree)
}

pub fn srf_with(p: HelixParams, m_max: SkipCount, variant: SrfVariant) -> Result<SrfValue> {
    let num = match variant {
        SrfVariant::FullTree => numerator(p)?,
        SrfVariant::MinNumerator => {
            numerator(p)?;
            SkipCount::up_to(m_max)
                .filter_map(|m| steiner_length_density(m, p).ok())
                .fold(f64::INFINITY, f64::min)
        }
    };

    let steps: Vec<(SkipCount, f64)> = SkipCount::up_to(m_max)
        .map(|m| (m, step_distance(m, p)))
        .filter(|&(_, d)| d > DEGENERATE_STEP)
        .collect();
    let (argmin_m, d_min) = steps
        .iter()
        .copied()
        .fold(None, |best: Option<(SkipCount, f64)>, (m, d)| match best {
            Some((_, bd)) if bd <= d => best,
            _ => Some((m, d)),
        })
        .ok_or_else(|| SrfError::Degenerate("every skip class has coincident terminals".into()))?;

    let tie = steps
        .iter()
        .filter(|&&(_, d)| d - d_min <= TIE_TOLERANCE)
        .map(|&(m, _)| m)
        .collect();

    Ok(SrfValue {
        rho: num / d_min,
        argmin_m,
        tie,
        truncated: argmin_m == m_max,
    })
}

/// The partner point `(2πN − ω, ωα / (2πN − ω))` with the same ratio.
pub fn symmetry_image(p: HelixParams, n: u32) -> Result<HelixParams> {
    let omega = TAU * f64::from(n) - p.omega;
    if !(omega > 0.0) {
        return Err(SrfError::domain(format!(
            "2 pi N = {} <= omega = {}",
            TAU * f64::from(n),
            p.omega
        )));
    }
    HelixParams::wrapped(omega, p.rise() / omega)
}
