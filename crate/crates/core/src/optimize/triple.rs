//! Where the first three surfaces meet.
//!
//! The surfaces share their numerator, so `ρ_1 = ρ_2 = ρ_3` is the same as
//! `d_1² = d_2² = d_3²`. In the unknowns `(ω, u = α²ω²)`:
//!
//! ```text
//! d_1² − d_2² = −3u − 2cos ω + 2cos 2ω = 0
//! d_1² − d_3² = −8u − 2cos ω + 2cos 3ω = 0
//! ```
//!
//! Eliminating `u` leaves `(c − 1)² (3c + 2) = 0` in `c = cos ω`; the
//! double root `c = 1` is degenerate and attracts undamped Newton steps.

use serde::Serialize;

use crate::analytic::step_distance;
use crate::error::{Result, SrfError};
use crate::helix::{HelixParams, SkipCount};
use crate::region::omega_window;

pub const MAX_ITERATIONS: usize = 200;
pub const RESIDUAL_TOL: f64 = 1e-13;
const DAMPING: f64 = 0.5;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriplePoint {
    pub omega: f64,
    pub alpha: f64,
    pub iterations: usize,
    /// `max(|d_1² − d_2²|, |d_1² − d_3²|)` at the returned point.
    pub residual: f64,
}

impl TriplePoint {
    pub fn params(&self) -> HelixParams {
        HelixParams {
            omega: self.omega,
            alpha: self.alpha,
        }
    }

    /// `[d_1, d_2, d_3]`.
    pub fn step_distances(&self) -> [f64; 3] {
        let p = self.params();
        [1, 2, 3].map(|m| step_distance(SkipCount::new(m).expect("nonzero"), p))
    }
}

fn residual(omega: f64, u: f64) -> [f64; 2] {
    let c1 = omega.cos();
    [
        -3.0 * u - 2.0 * c1 + 2.0 * (2.0 * omega).cos(),
        -8.0 * u - 2.0 * c1 + 2.0 * (3.0 * omega).cos(),
    ]
}

fn jacobian(omega: f64) -> [[f64; 2]; 2] {
    let s1 = omega.sin();
    [
        [2.0 * s1 - 4.0 * (2.0 * omega).sin(), -3.0],
        [2.0 * s1 - 6.0 * (3.0 * omega).sin(), -8.0],
    ]
}

#[inline]
fn norm(r: [f64; 2]) -> f64 {
    r[0].abs().max(r[1].abs())
}

/// Damped Newton iteration on `(ω, α²ω²)` from `initial`.
///
/// A step is halved until the residual norm decreases and `u` stays positive.
pub fn solve_triple_point(initial: HelixParams) -> Result<TriplePoint> {
    if !omega_window().contains(initial.omega) {
        return Err(SrfError::domain(format!(
            "initial omega = {} outside the window",
            initial.omega
        )));
    }
    let mut omega = initial.omega;
    let mut u = initial.rise().powi(2);
    let mut r = residual(omega, u);

    for iteration in 0..=MAX_ITERATIONS {
        if norm(r) < RESIDUAL_TOL {
            if 1.0 - omega.cos() < 1e-6 {
                return Err(SrfError::DegenerateRoot);
            }
            return Ok(TriplePoint {
                omega,
                alpha: u.sqrt() / omega,
                iterations: iteration,
                residual: norm(r),
            });
        }
        if iteration == MAX_ITERATIONS {
            break;
        }

        let j = jacobian(omega);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(SrfError::NonConvergence {
                method: "triple-point newton",
                budget: iteration,
                unit: "iterations",
            });
        }
        // solve J δ = −r
        let d_omega = (-r[0] * j[1][1] + r[1] * j[0][1]) / det;
        let d_u = (-r[1] * j[0][0] + r[0] * j[1][0]) / det;

        let current = norm(r);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let (w, v) = (omega + t * d_omega, u + t * d_u);
            if v > 0.0 {
                let trial = residual(w, v);
                if norm(trial) < current {
                    omega = w;
                    u = v;
                    r = trial;
                    accepted = true;
                    break;
                }
            }
            t *= DAMPING;
        }
        if !accepted {
            // no decrease at machine precision; accept only if already tight
            if current < 1e3 * RESIDUAL_TOL {
                r = [0.0, 0.0];
                continue;
            }
            break;
        }
    }
    if 1.0 - omega.cos() < 1e-6 {
        return Err(SrfError::DegenerateRoot);
    }
    Err(SrfError::NonConvergence {
        method: "triple-point newton",
        budget: MAX_ITERATIONS,
        unit: "iterations",
    })
}
