//! The compact search region for the ratio function.
//!
//! A point `(ω, α)` is inside when
//!
//! 1. `ω` lies in the window `[arccos(1/4), 2π − arccos(1/4)]`,
//! 2. it is on or below the `ρ_1 = 1` curve, which is the tangency curve
//!    `αω = √(A_1(1 + A_1))` and coincides with the `m = 1` full-tree
//!    boundary `cos θ_1 = −1/2`,
//! 3. `ρ_k ≤ 1` for every `k` in `2..=m_max` (coincident classes count as
//!    violations),
//! 4. and, as a sanity bound, `ρ ≥ √3/3`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::analytic::{self, graham_hwang_bound};
use crate::error::{Result, SrfError};
use crate::helix::{HelixParams, SkipCount};

/// Upper end of the bracketing grid for unit-ρ roots.
pub const ROOT_ALPHA_MAX: f64 = 10.0;
pub const ROOT_GRID_CELLS: usize = 512;
const ROOT_TOL: f64 = 1e-13;
const TANGENCY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaWindow {
    pub lo: f64,
    pub hi: f64,
}

impl OmegaWindow {
    #[inline]
    pub fn contains(&self, omega: f64) -> bool {
        self.lo <= omega && omega <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

pub fn omega_window() -> OmegaWindow {
    let lo = 0.25f64.acos();
    OmegaWindow { lo, hi: TAU - lo }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailedConstraint {
    OmegaWindow,
    NumeratorDomain,
    Rho1Hypograph,
    RhokHypograph(u32),
    /// `ρ < √3/3`; never expected inside the window.
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionPredicateResult {
    pub inside: bool,
    pub failed_constraint: Option<FailedConstraint>,
}

impl RegionPredicateResult {
    const INSIDE: Self = RegionPredicateResult {
        inside: true,
        failed_constraint: None,
    };

    fn failed(c: FailedConstraint) -> Self {
        RegionPredicateResult {
            inside: false,
            failed_constraint: Some(c),
        }
    }
}

/// `cos θ_m ≥ −1/2`.
pub fn full_tree_feasible(m: SkipCount, p: HelixParams) -> Result<bool> {
    Ok(analytic::cos_theta(m, p)? >= -0.5)
}

/// Largest `α` keeping the skip-`m` terminal path full, by bisection on the
/// (decreasing in α) cosine. `None` when no `α ≥ 0` is feasible.
pub fn full_tree_alpha_limit(m: SkipCount, omega: f64) -> Result<Option<f64>> {
    let excess = |alpha: f64| -> Result<f64> { Ok(analytic::cos_theta(m, HelixParams::wrapped(omega, alpha)?)? + 0.5) };
    // the α = 0 end may be degenerate; start just above it
    let mut lo = 1e-300;
    if excess(lo)? < 0.0 {
        return Ok(None);
    }
    let mut hi = 1.0;
    while excess(hi)? >= 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(SrfError::domain("full-tree limit not bracketed"));
        }
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

/// Membership in the compact region, reporting the first failed constraint.
pub fn in_compact_region(p: HelixParams, m_max: SkipCount) -> Result<RegionPredicateResult> {
    if m_max.get() < 5 {
        return Err(SrfError::spec(format!("m_max = {m_max} must be >= 5")));
    }
    if !omega_window().contains(p.omega) {
        return Ok(RegionPredicateResult::failed(FailedConstraint::OmegaWindow));
    }
    if analytic::a_coefficient(SkipCount::ONE, p.omega) <= 0.0 {
        return Ok(RegionPredicateResult::failed(FailedConstraint::NumeratorDomain));
    }
    if !full_tree_feasible(SkipCount::ONE, p)? {
        return Ok(RegionPredicateResult::failed(FailedConstraint::Rho1Hypograph));
    }
    for k in (2..=m_max.get()).map(|k| SkipCount::new(k).expect("k >= 2")) {
        let above_unit = match analytic::rho_surface(k, p) {
            Ok(rho_k) => rho_k > 1.0,
            Err(SrfError::Degenerate(_)) => true,
            Err(e) => return Err(e),
        };
        if above_unit {
            return Ok(RegionPredicateResult::failed(FailedConstraint::RhokHypograph(k.get())));
        }
    }
    let rho = analytic::srf(p, m_max)?.rho;
    if rho < graham_hwang_bound() {
        return Ok(RegionPredicateResult::failed(FailedConstraint::LowerBound));
    }
    Ok(RegionPredicateResult::INSIDE)
}

/// Convenience wrapper: `false` for anything outside or undefined.
pub fn is_inside(p: HelixParams, m_max: SkipCount) -> bool {
    matches!(in_compact_region(p, m_max), Ok(r) if r.inside)
}

/// All `α > 0` with `ρ_m(ω, α) = 1`.
///
/// Sign changes of `ρ_m − 1` on a 512-cell grid over `(0, 10]` are refined by
/// bisection. Along `α`, `ρ_m` rises to a single maximum at
/// `αω = √(A_1/(1+A_1)) (1 + A_m) / m²` and then falls, so a maximum equal to
/// one is reported as a single tangent root.
pub fn unit_rho_curve(m: SkipCount, omega: f64) -> Result<Vec<f64>> {
    let a1 = analytic::a_coefficient(SkipCount::ONE, omega);
    if !(a1 > 0.0) {
        return Err(SrfError::domain(format!(
            "omega = {omega} outside the numerator domain"
        )));
    }
    let f = |alpha: f64| -> f64 {
        match HelixParams::wrapped(omega, alpha).and_then(|p| analytic::rho_surface(m, p)) {
            Ok(rho) => rho - 1.0,
            Err(_) => f64::INFINITY,
        }
    };

    let mut roots = Vec::new();

    let k1 = (a1 / (1.0 + a1)).sqrt();
    let am = analytic::a_coefficient(m, omega);
    let mf = m.as_f64();
    let peak = k1 * (1.0 + am) / (mf * mf * omega);
    let tangent = peak > 0.0 && peak <= ROOT_ALPHA_MAX && f(peak).abs() <= TANGENCY_TOL;
    if tangent {
        roots.push(peak);
    }

    let step = ROOT_ALPHA_MAX / ROOT_GRID_CELLS as f64;
    let mut lo = 0.0;
    let mut f_lo = f(lo);
    for i in 1..=ROOT_GRID_CELLS {
        let hi = step * i as f64;
        let f_hi = f(hi);
        if f_hi == 0.0 {
            roots.push(hi);
        } else if f_lo != 0.0 && (f_lo > 0.0) != (f_hi > 0.0) {
            roots.push(bisect(&f, lo, hi, f_lo > 0.0));
        }
        lo = hi;
        f_lo = f_hi;
    }

    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-6 && (tangent || (*a - *b).abs() < 1e-9));
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, lo_positive: bool) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{conjecture_point, srf};
    use std::f64::consts::PI;

    fn m(k: u32) -> SkipCount {
        SkipCount::new(k).unwrap()
    }

    fn hp(omega: f64, alpha: f64) -> HelixParams {
        HelixParams::new(omega, alpha).unwrap()
    }

    #[test]
    fn window_constants() {
        let w = omega_window();
        assert!((w.lo - 1.31811607165281797).abs() < 1e-15);
        assert!((w.hi - 4.96506923552676851).abs() < 1e-15);
        assert!(w.contains(2.3005240));
        assert!(!w.contains(1.0));
    }

    #[test]
    fn unit_rho_examples() {
        let roots = unit_rho_curve(m(1), PI).unwrap();
        assert_eq!(roots.len(), 1, "{roots:?}");
        assert!((roots[0] - 2.0 * 3f64.sqrt() / PI).abs() < 1e-12);

        let roots = unit_rho_curve(m(2), PI).unwrap();
        assert_eq!(roots.len(), 1, "{roots:?}");
        assert!((roots[0] - 0.280702836947223805).abs() < 1e-12);

        let near = |eps: f64| unit_rho_curve(m(1), PI / 3.0 + eps).unwrap()[0];
        assert!(near(1e-2) > near(1e-4) && near(1e-4) > near(1e-6));
        assert!(near(1e-6) < 2e-3);

        assert!(unit_rho_curve(m(1), 1.0).is_err());
    }

    #[test]
    fn unit_rho_two_roots() {
        // rho_2 exceeds one on a bounded alpha interval at omega = 2.6
        let roots = unit_rho_curve(m(2), 2.6).unwrap();
        assert_eq!(roots.len(), 2, "{roots:?}");
        assert!((roots[0] - 0.015334479150100012).abs() < 1e-12);
        assert!((roots[1] - 0.18579945766920222).abs() < 1e-12);
        for r in roots {
            let v = analytic::rho_surface(m(2), hp(2.6, r)).unwrap();
            assert!((v - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn region_examples() {
        let r = in_compact_region(conjecture_point(), m(16)).unwrap();
        assert!(r.inside);

        let r = in_compact_region(hp(PI, 0.2), m(16)).unwrap();
        assert_eq!(r.failed_constraint, Some(FailedConstraint::RhokHypograph(2)));

        let r = in_compact_region(hp(1.0, 0.3), m(16)).unwrap();
        assert_eq!(r.failed_constraint, Some(FailedConstraint::OmegaWindow));

        // above the tangency curve
        let r = in_compact_region(hp(PI, 1.2), m(16)).unwrap();
        assert_eq!(r.failed_constraint, Some(FailedConstraint::Rho1Hypograph));

        assert!(in_compact_region(conjecture_point(), m(4)).is_err());
    }

    #[test]
    fn full_tree_examples() {
        assert!(full_tree_feasible(m(1), conjecture_point()).unwrap());
        assert!(full_tree_feasible(m(1), hp(PI, 1.0)).unwrap());
        let c = analytic::cos_theta(m(1), hp(PI, 1.0)).unwrap();
        assert!((c + 0.423199121715998115).abs() < 1e-15);
        assert!(!full_tree_feasible(m(1), hp(PI, 1.2)).unwrap());
        let c = analytic::cos_theta(m(1), hp(PI, 1.2)).unwrap();
        assert!((c + 0.560734745183988488).abs() < 1e-15);
    }

    #[test]
    fn flip_matches_tangency() {
        let flip = full_tree_alpha_limit(m(1), PI).unwrap().unwrap();
        let tangent = unit_rho_curve(m(1), PI).unwrap()[0];
        assert!((flip - tangent).abs() < 1e-10);
        // A_3 < 0 at the conjecture angle: no alpha keeps the m = 3 path full
        assert_eq!(full_tree_alpha_limit(m(3), analytic::omega_r()).unwrap(), None);
    }

    #[test]
    fn inside_points_respect_bounds() {
        let w = omega_window();
        for i in 0..60 {
            for j in 1..60 {
                let p = hp(w.lo + w.width() * i as f64 / 59.0, 2.0 * j as f64 / 59.0);
                if is_inside(p, m(16)) {
                    let rho = srf(p, m(16)).unwrap().rho;
                    assert!(rho >= graham_hwang_bound() - 1e-12 && rho <= 1.0 + 1e-12);
                }
            }
        }
    }
}
