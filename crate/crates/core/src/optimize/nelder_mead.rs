//! Downhill simplex in two dimensions.
//!
//! Infeasible points evaluate to `+∞`, which acts as a hard barrier: such
//! vertices are never accepted by reflection or expansion and the simplex
//! contracts away from them.

use crate::error::{Result, SrfError};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
const MAX_RESTARTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Stop once the simplex diameter falls below this.
    pub tol: f64,
    pub max_evals: usize,
    /// Offsets of the two non-start vertices along each axis.
    pub initial_step: [f64; 2],
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            tol: 1e-12,
            max_evals: 100_000,
            initial_step: [1e-2, 5e-3],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOutcome {
    pub point: [f64; 2],
    pub value: f64,
    pub evaluations: usize,
    pub restarts: usize,
}

struct Counted<F> {
    f: F,
    evals: usize,
    budget: usize,
}

impl<F: FnMut([f64; 2]) -> f64> Counted<F> {
    fn eval(&mut self, x: [f64; 2]) -> Result<f64> {
        if self.evals >= self.budget {
            return Err(SrfError::NonConvergence {
                method: "nelder-mead",
                budget: self.budget,
                unit: "evaluations",
            });
        }
        self.evals += 1;
        let v = (self.f)(x);
        Ok(if v.is_nan() { f64::INFINITY } else { v })
    }
}

#[inline]
fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

fn diameter(s: &[([f64; 2], f64); 3]) -> f64 {
    let d = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
    d(s[0].0, s[1].0).max(d(s[0].0, s[2].0)).max(d(s[1].0, s[2].0))
}

/// Minimizes `f` from `start`, restarting from the best vertex until a
/// restart no longer improves the value.
pub fn minimize<F>(f: F, start: [f64; 2], opts: NelderMeadOptions) -> Result<NelderMeadOutcome>
where
    F: FnMut([f64; 2]) -> f64,
{
    let mut counted = Counted {
        f,
        evals: 0,
        budget: opts.max_evals,
    };
    let mut best_x = start;
    let mut best_v = counted.eval(start)?;
    if !best_v.is_finite() {
        return Err(SrfError::domain("simplex start point is infeasible"));
    }

    let mut restarts = 0;
    loop {
        let (x, v) = run(&mut counted, best_x, best_v, opts)?;
        let improved = v < best_v;
        let moved = (x[0] - best_x[0]).hypot(x[1] - best_x[1]);
        if improved {
            best_x = x;
            best_v = v;
        }
        if !improved || moved < opts.tol || restarts >= MAX_RESTARTS {
            break;
        }
        restarts += 1;
    }

    Ok(NelderMeadOutcome {
        point: best_x,
        value: best_v,
        evaluations: counted.evals,
        restarts,
    })
}

fn run<F: FnMut([f64; 2]) -> f64>(
    f: &mut Counted<F>,
    x0: [f64; 2],
    v0: f64,
    opts: NelderMeadOptions,
) -> Result<([f64; 2], f64)> {
    let mut simplex = [(x0, v0), (x0, v0), (x0, v0)];
    for axis in 0..2 {
        let mut x = x0;
        let mut h = opts.initial_step[axis];
        // pull an infeasible vertex back toward the start
        let mut v = f64::INFINITY;
        for _ in 0..60 {
            x[axis] = x0[axis] + h;
            v = f.eval(x)?;
            if v.is_finite() {
                break;
            }
            h *= 0.5;
        }
        simplex[axis + 1] = (x, v);
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if diameter(&simplex) < opts.tol {
            return Ok(simplex[0]);
        }
        let (best, mid, worst) = (simplex[0], simplex[1], simplex[2]);
        let centroid = lerp(best.0, mid.0, 0.5);

        let xr = lerp(centroid, worst.0, -REFLECT);
        let vr = f.eval(xr)?;
        if vr < best.1 {
            let xe = lerp(centroid, worst.0, -EXPAND);
            let ve = f.eval(xe)?;
            simplex[2] = if ve < vr { (xe, ve) } else { (xr, vr) };
            continue;
        }
        if vr < mid.1 {
            simplex[2] = (xr, vr);
            continue;
        }

        let (xc, vc) = if vr < worst.1 {
            let xc = lerp(centroid, xr, CONTRACT);
            (xc, f.eval(xc)?)
        } else {
            let xc = lerp(centroid, worst.0, CONTRACT);
            (xc, f.eval(xc)?)
        };
        if vc < worst.1.min(vr) {
            simplex[2] = (xc, vc);
            continue;
        }

        for vertex in &mut simplex[1..] {
            let x = lerp(best.0, vertex.0, SHRINK);
            *vertex = (x, f.eval(x)?);
        }
    }
}
