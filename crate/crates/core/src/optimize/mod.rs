//! Global minimization of the ratio function over the compact region.
//!
//! Two independent routes reach the minimum: a lattice scan followed by a
//! barrier-constrained downhill simplex, and a Newton solve for the point
//! where `ρ_1`, `ρ_2` and `ρ_3` coincide. [`conjecture_report`] runs both
//! and refuses to report unless they agree.

pub mod grid;
pub mod nelder_mead;
pub mod triple;

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::analytic::{self, conjectured_ratio, graham_hwang_bound};
use crate::error::{Result, SrfError};
use crate::exec::Execution;
use crate::helix::{HelixParams, SkipCount};
use crate::region;

pub use grid::{grid_scan, GridCell, GridScan, GridSpec};
pub use nelder_mead::{NelderMeadOptions, NelderMeadOutcome};
pub use triple::{solve_triple_point, TriplePoint};

const RING_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimumReport {
    pub omega: f64,
    pub alpha: f64,
    pub rho: f64,
    /// `ρ_m` at the optimum for `m = 1..=5`, keyed by `m`; serialized as
    /// top-level `rho_1`..`rho_5` fields.
    #[serde(flatten, serialize_with = "flat_surface_values")]
    pub surface_values: BTreeMap<u32, f64>,
    pub tie: Vec<SkipCount>,
    /// `[|ρ_1 − ρ_2|, |ρ_1 − ρ_3|]`.
    pub tie_residuals: [f64; 2],
    /// Every point on a ring of radius `10·refine_tolerance` is feasible.
    pub interior: bool,
    pub grid_resolution: Option<[usize; 2]>,
    pub refine_tolerance: f64,
    pub evaluations: usize,
}

impl OptimumReport {
    /// Report at `p`; `tol` sets the interior-ring radius.
    pub fn evaluate(p: HelixParams, m_max: SkipCount, tol: f64, evaluations: usize) -> Result<Self> {
        let value = analytic::srf(p, m_max)?;
        let surface_values: BTreeMap<u32, f64> = (1..=5)
            .filter_map(|m| {
                let m = SkipCount::new(m).ok()?;
                analytic::rho_surface(m, p).ok().map(|v| (m.get(), v))
            })
            .collect();
        let r = |m: u32| surface_values.get(&m).copied().unwrap_or(f64::INFINITY);
        let tie_residuals = [(r(1) - r(2)).abs(), (r(1) - r(3)).abs()];
        Ok(OptimumReport {
            omega: p.omega,
            alpha: p.alpha,
            rho: value.rho,
            surface_values,
            tie: value.tie,
            tie_residuals,
            interior: ring_feasible(p, 10.0 * tol, m_max),
            grid_resolution: None,
            refine_tolerance: tol,
            evaluations,
        })
    }

    pub fn params(&self) -> HelixParams {
        HelixParams {
            omega: self.omega,
            alpha: self.alpha,
        }
    }
}

fn flat_surface_values<S: serde::Serializer>(
    values: &BTreeMap<u32, f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(values.iter().map(|(m, v)| (format!("rho_{m}"), v)))
}

fn ring_feasible(p: HelixParams, radius: f64, m_max: SkipCount) -> bool {
    (0..RING_POINTS).all(|k| {
        let phi = TAU * k as f64 / RING_POINTS as f64;
        HelixParams::new(p.omega + radius * phi.cos(), p.alpha + radius * phi.sin())
            .map(|q| region::is_inside(q, m_max))
            .unwrap_or(false)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineOptions {
    pub tol: f64,
    pub m_max: SkipCount,
    pub max_evals: usize,
    pub initial_step: [f64; 2],
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            tol: 1e-12,
            m_max: SkipCount::new(analytic::DEFAULT_M_MAX).expect("nonzero"),
            max_evals: 100_000,
            initial_step: [1e-2, 5e-3],
        }
    }
}

/// The ratio function with the compact region as a hard barrier.
pub fn barrier_objective(m_max: SkipCount) -> impl Fn([f64; 2]) -> f64 {
    move |x: [f64; 2]| match HelixParams::new(x[0], x[1]) {
        Ok(p) if region::is_inside(p, m_max) => analytic::srf(p, m_max).map_or(f64::INFINITY, |v| v.rho),
        _ => f64::INFINITY,
    }
}

/// Downhill simplex from a feasible start until the simplex diameter is
/// below `opts.tol`.
pub fn refine_local(start: HelixParams, opts: &RefineOptions) -> Result<OptimumReport> {
    if !(opts.tol >= 1e-14) {
        return Err(SrfError::spec(format!("refine tolerance {} below 1e-14", opts.tol)));
    }
    if !region::is_inside(start, opts.m_max) {
        return Err(SrfError::domain(format!(
            "refinement start ({}, {}) is outside the compact region",
            start.omega, start.alpha
        )));
    }
    let nm = NelderMeadOptions {
        tol: opts.tol,
        max_evals: opts.max_evals,
        initial_step: opts.initial_step,
    };
    let out = nelder_mead::minimize(barrier_objective(opts.m_max), [start.omega, start.alpha], nm)?;
    let p = HelixParams::new(out.point[0], out.point[1])?;
    OptimumReport::evaluate(p, opts.m_max, opts.tol, out.evaluations)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureConfig {
    pub grid: GridSpec,
    pub refine: RefineOptions,
    pub exec: Execution,
}

impl Default for ConjectureConfig {
    fn default() -> Self {
        ConjectureConfig {
            grid: GridSpec::new(400, 400),
            refine: RefineOptions::default(),
            exec: Execution::default(),
        }
    }
}

pub const CROSS_CHECK_PARAMS: f64 = 1e-8;
pub const CROSS_CHECK_RHO: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub rho_min: f64,
    #[serde(flatten)]
    pub optimum: OptimumReport,
    pub closed_form: f64,
    pub closed_form_error: f64,
    pub lower_bound: f64,
    pub grid_omega: f64,
    pub grid_alpha: f64,
    pub grid_rho: f64,
    /// Grid incumbent was mapped through `ω → 2π − ω` into `ω ≤ π`.
    pub mirrored: bool,
    pub triple_omega: f64,
    pub triple_alpha: f64,
    pub triple_rho: f64,
    pub triple_iterations: usize,
    pub step_distances: [f64; 3],
    /// `[ω, α, ρ]` of every lattice local minimum, in lattice order.
    pub local_minima: Vec<[f64; 3]>,
    pub provenance: String,
}

/// Lattice scan, simplex refinement and triple-point solve, cross-checked.
///
/// The ratio is invariant under `(ω, α) → (2π − ω, ωα / (2π − ω))`, which
/// maps the window onto itself; an incumbent with `ω > π` is moved to its
/// partner before refinement so the report is in the `ω ≤ π` half.
pub fn conjecture_report(config: &ConjectureConfig) -> Result<ConjectureReport> {
    let scan = grid_scan(config.grid, config.exec)?;
    let incumbent = scan.incumbent_cell().clone();
    let grid_rho = incumbent.rho().expect("incumbent is feasible");

    let mut start = incumbent.params;
    let mirrored = start.omega > PI;
    if mirrored {
        start = analytic::symmetry_image(start, 1)?;
    }

    let mut optimum = refine_local(start, &config.refine)?;
    optimum.grid_resolution = Some([config.grid.n_omega, config.grid.n_alpha]);

    let triple = solve_triple_point(optimum.params())?;
    let triple_rho = analytic::srf(triple.params(), config.refine.m_max)?.rho;

    let (dw, da) = (config.grid.omega_step(), config.grid.alpha_step());
    if (start.omega - optimum.omega).abs() > dw || (start.alpha - optimum.alpha).abs() > da {
        return Err(SrfError::CrossCheckFailure {
            left: "grid_scan",
            right: "refine_local",
            detail: format!(
                "incumbent ({}, {}) more than one lattice step from refined ({}, {})",
                start.omega, start.alpha, optimum.omega, optimum.alpha
            ),
        });
    }
    if grid_rho < optimum.rho - CROSS_CHECK_RHO {
        return Err(SrfError::CrossCheckFailure {
            left: "grid_scan",
            right: "refine_local",
            detail: format!("lattice value {grid_rho} below refined value {}", optimum.rho),
        });
    }
    let d_omega = (optimum.omega - triple.omega).abs();
    let d_alpha = (optimum.alpha - triple.alpha).abs();
    let d_rho = (optimum.rho - triple_rho).abs();
    if d_omega > CROSS_CHECK_PARAMS || d_alpha > CROSS_CHECK_PARAMS || d_rho > CROSS_CHECK_RHO {
        return Err(SrfError::CrossCheckFailure {
            left: "refine_local",
            right: "solve_triple_point",
            detail: format!("|d omega| = {d_omega:e}, |d alpha| = {d_alpha:e}, |d rho| = {d_rho:e}"),
        });
    }

    let closed_form = conjectured_ratio();
    let local_minima = scan
        .local_minima()
        .into_iter()
        .filter_map(|k| {
            let c = &scan.cells[k];
            c.rho().map(|r| [c.params.omega, c.params.alpha, r])
        })
        .collect();
    let provenance = format!(
        "{}x{} lattice over omega in [{:.10}, {:.10}], alpha in (0, {}] with m_max = {}; \
         downhill simplex to diameter {:e} ({} evaluations); damped Newton on d1^2 = d2^2 = d3^2 \
         ({} iterations). Closed form (3*sqrt(3) + sqrt(7))/10 = {closed_form}.",
        config.grid.n_omega,
        config.grid.n_alpha,
        config.grid.window.lo,
        config.grid.window.hi,
        config.grid.alpha_hi,
        config.refine.m_max,
        config.refine.tol,
        optimum.evaluations,
        triple.iterations,
    );

    Ok(ConjectureReport {
        rho_min: optimum.rho,
        closed_form,
        closed_form_error: (optimum.rho - closed_form).abs(),
        lower_bound: graham_hwang_bound(),
        grid_omega: incumbent.params.omega,
        grid_alpha: incumbent.params.alpha,
        grid_rho,
        mirrored,
        triple_omega: triple.omega,
        triple_alpha: triple.alpha,
        triple_rho,
        triple_iterations: triple.iterations,
        step_distances: triple.step_distances(),
        local_minima,
        provenance,
        optimum,
    })
}
