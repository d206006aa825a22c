use serde::Serialize;

use crate::analytic::{self, SrfValue};
use crate::error::{Result, SrfError};
use crate::exec::Execution;
use crate::helix::{HelixParams, SkipCount};
use crate::region::{self, OmegaWindow};

pub const MIN_RESOLUTION: usize = 64;

/// Lattice over `window × (0, alpha_hi]`.
///
/// `ω_i = lo + i (hi − lo) / (n_omega − 1)` and `α_j = alpha_hi (j + 1) / n_alpha`,
/// so the `α = 0` line (where skip classes coincide) is never sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub window: OmegaWindow,
    pub alpha_hi: f64,
    pub n_omega: usize,
    pub n_alpha: usize,
    pub m_max: SkipCount,
}

impl GridSpec {
    pub fn new(n_omega: usize, n_alpha: usize) -> Self {
        GridSpec {
            window: region::omega_window(),
            alpha_hi: 2.0,
            n_omega,
            n_alpha,
            m_max: SkipCount::new(analytic::DEFAULT_M_MAX).expect("nonzero"),
        }
    }

    pub fn with_alpha_hi(mut self, alpha_hi: f64) -> Self {
        self.alpha_hi = alpha_hi;
        self
    }

    pub fn with_m_max(mut self, m_max: SkipCount) -> Self {
        self.m_max = m_max;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_omega < MIN_RESOLUTION || self.n_alpha < MIN_RESOLUTION {
            return Err(SrfError::spec(format!(
                "grid {}x{} below the minimum {MIN_RESOLUTION}x{MIN_RESOLUTION}",
                self.n_omega, self.n_alpha
            )));
        }
        if !(self.alpha_hi > 0.0 && self.alpha_hi.is_finite()) {
            return Err(SrfError::spec(format!("alpha_hi = {} must be positive", self.alpha_hi)));
        }
        if !(self.window.lo < self.window.hi) {
            return Err(SrfError::spec("empty omega window"));
        }
        Ok(())
    }

    pub fn omega_step(&self) -> f64 {
        self.window.width() / (self.n_omega - 1) as f64
    }

    pub fn alpha_step(&self) -> f64 {
        self.alpha_hi / self.n_alpha as f64
    }

    pub fn params_at(&self, i: usize, j: usize) -> HelixParams {
        let omega = if i + 1 == self.n_omega {
            self.window.hi
        } else {
            self.window.lo + self.omega_step() * i as f64
        };
        HelixParams {
            omega,
            alpha: self.alpha_hi * (j + 1) as f64 / self.n_alpha as f64,
        }
    }

    pub fn len(&self) -> usize {
        self.n_omega * self.n_alpha
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub params: HelixParams,
    /// `None` outside the compact region.
    pub value: Option<SrfValue>,
}

impl GridCell {
    pub fn feasible(&self) -> bool {
        self.value.is_some()
    }

    pub fn rho(&self) -> Option<f64> {
        self.value.as_ref().map(|v| v.rho)
    }
}

#[derive(Debug, Clone)]
pub struct GridScan {
    pub spec: GridSpec,
    /// Row-major in `ω`: cell `(i, j)` is at `i * n_alpha + j`.
    pub cells: Vec<GridCell>,
    pub incumbent: usize,
}

impl GridScan {
    pub fn incumbent_cell(&self) -> &GridCell {
        &self.cells[self.incumbent]
    }

    pub fn feasible_count(&self) -> usize {
        self.cells.iter().filter(|c| c.feasible()).count()
    }

    /// Feasible cells no larger than any feasible 8-neighbour, in lattice order.
    pub fn local_minima(&self) -> Vec<usize> {
        let (no, na) = (self.spec.n_omega as isize, self.spec.n_alpha as isize);
        let rho_at = |i: isize, j: isize| -> Option<f64> {
            if i < 0 || j < 0 || i >= no || j >= na {
                return None;
            }
            self.cells[(i * na + j) as usize].rho()
        };
        let mut out = Vec::new();
        for i in 0..no {
            for j in 0..na {
                let Some(center) = rho_at(i, j) else { continue };
                let is_min = (-1..=1)
                    .flat_map(|di| (-1..=1).map(move |dj| (di, dj)))
                    .filter(|&d| d != (0, 0))
                    .all(|(di, dj)| rho_at(i + di, j + dj).is_none_or(|r| center <= r));
                if is_min {
                    out.push((i * na + j) as usize);
                }
            }
        }
        out
    }
}

/// Evaluates the ratio function on the lattice, masking cells outside the
/// compact region. The incumbent is the first feasible minimizer in lattice
/// order regardless of how cells were evaluated.
pub fn grid_scan(spec: GridSpec, exec: Execution) -> Result<GridScan> {
    spec.validate()?;
    let na = spec.n_alpha;
    let cells = exec.map_indexed(spec.len(), |idx| {
        let params = spec.params_at(idx / na, idx % na);
        let value = if region::is_inside(params, spec.m_max) {
            analytic::srf(params, spec.m_max).ok()
        } else {
            None
        };
        GridCell { params, value }
    });

    let incumbent = cells
        .iter()
        .enumerate()
        .filter_map(|(k, c)| c.rho().map(|r| (k, r)))
        .fold(None, |best: Option<(usize, f64)>, (k, r)| match best {
            Some((_, br)) if br <= r => best,
            _ => Some((k, r)),
        })
        .map(|(k, _)| k)
        .ok_or(SrfError::EmptyFeasibleSet)?;

    Ok(GridScan { spec, cells, incumbent })
}
