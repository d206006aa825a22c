//! CSV and JSON output.
//!
//! Floats are written in the shortest form that parses back to the same
//! `f64` (at most 17 significant digits). Undefined values are empty CSV
//! fields or absent JSON keys; NaN is never written.

use std::io::{self, Write};

use serde::Serialize;

use crate::exec::Execution;
use crate::helix::{HelixParams, SkipCount};
use crate::region::{self, OmegaWindow};
use crate::{analytic, error::Result};

pub const SURFACE_HEADER: [&str; 5] = ["omega", "alpha", "m", "rho_m", "feasible"];
pub const REGION_HEADER: [&str; 4] = ["series", "m", "omega", "alpha"];

/// Round-trip float text.
pub fn format_float(x: f64) -> String {
    debug_assert!(x.is_finite());
    format!("{x}")
}

fn format_opt(x: Option<f64>) -> String {
    x.filter(|v| v.is_finite()).map(format_float).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceRow {
    pub omega: f64,
    pub alpha: f64,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_m: Option<f64>,
    pub feasible: u8,
}

/// Inclusive `n`-point axis from `lo` to `hi`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// `ρ_m` on the lattice `omegas × alphas` for each `m` in `ms`, ordered by
/// `ω`, then `α`, then `m`. Cells outside the compact region carry no value.
pub fn surface_rows(
    omegas: &[f64],
    alphas: &[f64],
    ms: &[SkipCount],
    m_max: SkipCount,
    exec: Execution,
) -> Vec<SurfaceRow> {
    let na = alphas.len();
    let per_cell = exec.map_indexed(omegas.len() * na, |idx| {
        let (omega, alpha) = (omegas[idx / na], alphas[idx % na]);
        let feasible = HelixParams::new(omega, alpha).is_ok_and(|p| region::is_inside(p, m_max));
        ms.iter()
            .map(|&m| {
                let rho_m = if feasible {
                    analytic::rho_surface(m, HelixParams { omega, alpha }).ok()
                } else {
                    None
                };
                SurfaceRow {
                    omega,
                    alpha,
                    m: m.get(),
                    rho_m,
                    feasible: u8::from(rho_m.is_some()),
                }
            })
            .collect::<Vec<_>>()
    });
    per_cell.into_iter().flatten().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    UnitRho,
    Window,
}

impl Series {
    fn as_str(self) -> &'static str {
        match self {
            Series::UnitRho => "unit_rho",
            Series::Window => "window",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionRow {
    pub series: Series,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub omega: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

/// The `ρ_m = 1` curves over `samples` values of `ω` across the window,
/// followed by the two window edges.
pub fn region_rows(window: OmegaWindow, ms: &[SkipCount], samples: usize, exec: Execution) -> Result<Vec<RegionRow>> {
    let omegas = linspace(window.lo, window.hi, samples);
    let jobs: Vec<(SkipCount, f64)> = ms.iter().flat_map(|&m| omegas.iter().map(move |&w| (m, w))).collect();
    let roots = exec.map_slice(&jobs, |&(m, w)| region::unit_rho_curve(m, w));
    let mut rows = Vec::new();
    for (&(m, omega), found) in jobs.iter().zip(roots) {
        for alpha in found? {
            rows.push(RegionRow {
                series: Series::UnitRho,
                m: Some(m.get()),
                omega,
                alpha: Some(alpha),
            });
        }
    }
    for omega in [window.lo, window.hi] {
        rows.push(RegionRow {
            series: Series::Window,
            m: None,
            omega,
            alpha: None,
        });
    }
    Ok(rows)
}

pub fn write_surface_csv<W: Write>(rows: &[SurfaceRow], out: W) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(SURFACE_HEADER)?;
    for r in rows {
        w.write_record([
            format_float(r.omega),
            format_float(r.alpha),
            r.m.to_string(),
            format_opt(r.rho_m),
            r.feasible.to_string(),
        ])?;
    }
    w.flush()
}

pub fn write_region_csv<W: Write>(rows: &[RegionRow], out: W) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(REGION_HEADER)?;
    for r in rows {
        w.write_record([
            r.series.as_str().to_string(),
            r.m.map(|m| m.to_string()).unwrap_or_default(),
            format_float(r.omega),
            format_opt(r.alpha),
        ])?;
    }
    w.flush()
}

/// Compact JSON object followed by a newline.
pub fn write_report<T: Serialize, W: Write>(report: &T, mut out: W) -> io::Result<()> {
    serde_json::to_writer(&mut out, report).map_err(io::Error::from)?;
    out.write_all(b"\n")
}
