//! Finite-`n` check of the closed forms with explicit trees.
//!
//! Terminals are the first `n` helix points. The sausage tree starts from
//! the helical ansatz for its Steiner points and is relaxed with its
//! topology held fixed; the ratio is taken against the exact MST of the
//! same terminals.

pub mod mst;
pub mod relax;
pub mod topology;

use serde::Serialize;

use crate::analytic::{self, graham_hwang_bound};
use crate::error::{Result, SrfError};
use crate::exec::Execution;
use crate::helix::{self, HelixParams, Point3, SkipCount};

pub use mst::mst_length;
pub use relax::{angles_at_steiner, optimize_steiner_points, tree_length, RelaxOptions, Relaxation};
pub use topology::{build_sausage_topology, SausageTopology, Vertex};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub omega: f64,
    pub alpha: f64,
    pub mst_length: f64,
    /// Shorter of the relaxed sausage tree and the MST (itself a degenerate
    /// Steiner tree), so the ratio never exceeds one.
    pub steiner_length: f64,
    /// Relaxed sausage tree length.
    pub sausage_length: f64,
    /// Length of the unrelaxed ansatz tree.
    pub ansatz_length: f64,
    pub ratio: f64,
    /// The analytic ratio function at the same parameters.
    pub analytic_rho: f64,
    /// Worst deviation from 120° over the interior Steiner points of the
    /// unrelaxed ansatz tree.
    pub max_angle_error_deg: f64,
    pub iterations: usize,
    pub degenerate_edges: Vec<String>,
    /// `steiner_length / mst_length ≥ √3/3` held for the relaxed sausage.
    pub graham_hwang_ok: bool,
    /// Mean of `ω_{k+1} − ω_k` over recovered angles of the middle half of
    /// the relaxed Steiner points. Informational.
    pub angle_step_mean: Option<f64>,
}

/// Ansatz positions `S_1..S_{n-2}` on the `m = 1` Steiner helix.
pub fn ansatz_steiner_points(n: usize, p: HelixParams) -> Result<Vec<Point3>> {
    (1..=n.saturating_sub(2) as i64)
        .map(|k| helix::steiner_point_ansatz(k, p, SkipCount::ONE))
        .collect()
}

/// Worst `|angle − 120°|` at interior Steiner points `S_2..S_{n-3}`.
pub fn max_interior_angle_error(terminals: &[Point3], steiner: &[Point3], topo: &SausageTopology) -> Result<f64> {
    let at = |v: Vertex| match v {
        Vertex::Terminal(j) => terminals[j],
        Vertex::Steiner(k) => steiner[k - 1],
    };
    let mut worst: f64 = 0.0;
    for k in 2..topo.steiner_count() {
        let nb = topo.neighbors(k).map(at);
        for a in angles_at_steiner(steiner[k - 1], nb)? {
            worst = worst.max((a - 120.0).abs());
        }
    }
    Ok(worst)
}

fn mean_angle_step(steiner: &[Point3], alpha: f64) -> Option<f64> {
    // end effects decay geometrically along the backbone; keep the middle half
    let len = steiner.len();
    let interior = steiner.get(len / 4..len - len / 4)?;
    let angles: Vec<f64> = interior
        .iter()
        .filter_map(|&s| helix::recover_angle(s, alpha).ok())
        .collect();
    if angles.len() < 2 {
        return None;
    }
    let steps: Vec<f64> = angles.windows(2).map(|w| w[1] - w[0]).collect();
    Some(steps.iter().sum::<f64>() / steps.len() as f64)
}

/// Ratio of the relaxed sausage tree to the MST on `n` helix terminals.
pub fn steiner_ratio_finite(n: usize, p: HelixParams, opts: &RelaxOptions) -> Result<OracleReport> {
    if n < 3 {
        return Err(SrfError::spec(format!("oracle needs n >= 3, got {n}")));
    }
    if !(p.alpha > 0.0) {
        return Err(SrfError::domain("oracle runs need alpha > 0"));
    }
    let analytic_rho = analytic::srf(p, SkipCount::new(analytic::DEFAULT_M_MAX).expect("nonzero"))?.rho;

    let topo = build_sausage_topology(n)?;
    let terminals = helix::terminals(n, p);
    let ansatz = ansatz_steiner_points(n, p)?;
    let ansatz_length = tree_length(&terminals, &ansatz, &topo)?;
    let max_angle_error_deg = max_interior_angle_error(&terminals, &ansatz, &topo)?;

    let relaxed = optimize_steiner_points(&terminals, &topo, &ansatz, opts)?;
    let mst = mst_length(&terminals);
    let steiner_length = relaxed.length.min(mst);

    Ok(OracleReport {
        n,
        omega: p.omega,
        alpha: p.alpha,
        mst_length: mst,
        steiner_length,
        sausage_length: relaxed.length,
        ansatz_length,
        ratio: steiner_length / mst,
        analytic_rho,
        max_angle_error_deg,
        iterations: relaxed.sweeps,
        degenerate_edges: relaxed
            .degenerate_edges
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect(),
        graham_hwang_ok: relaxed.length >= (graham_hwang_bound() - 1e-9) * mst,
        angle_step_mean: mean_angle_step(&relaxed.positions, p.alpha),
    })
}

/// Independent oracle runs, one per `(n, params)` job, in job order.
pub fn steiner_ratio_batch(
    jobs: &[(usize, HelixParams)],
    opts: &RelaxOptions,
    exec: Execution,
) -> Vec<Result<OracleReport>> {
    exec.map_slice(jobs, |&(n, p)| steiner_ratio_finite(n, p, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{conjecture_point, conjectured_ratio};
    use std::f64::consts::PI;

    #[test]
    fn ansatz_angles_are_120() {
        let p = conjecture_point();
        let topo = build_sausage_topology(32).unwrap();
        let t = helix::terminals(32, p);
        let s = ansatz_steiner_points(32, p).unwrap();
        assert!(max_interior_angle_error(&t, &s, &topo).unwrap() < 1e-9);
    }

    #[test]
    fn ansatz_density_matches_closed_form() {
        let p = conjecture_point();
        let density = analytic::steiner_length_density(SkipCount::ONE, p).unwrap();
        let per_point = |n: usize| {
            let topo = build_sausage_topology(n).unwrap();
            tree_length(&helix::terminals(n, p), &ansatz_steiner_points(n, p).unwrap(), &topo).unwrap() / n as f64
        };
        let (e50, e400) = ((per_point(50) - density).abs(), (per_point(400) - density).abs());
        assert!(e400 < e50);
        assert!(e400 < 5.0 / 400.0);
    }

    #[test]
    fn conjecture_point_ratio_n100() {
        let rep = steiner_ratio_finite(100, conjecture_point(), &RelaxOptions::default()).unwrap();
        assert!((rep.ratio - conjectured_ratio()).abs() <= 0.02, "{rep:?}");
        assert!(rep.sausage_length <= rep.ansatz_length + 1e-12);
        assert!(rep.graham_hwang_ok);
        let step = rep.angle_step_mean.unwrap();
        assert!((step - conjecture_point().omega).abs() < 1e-6, "{step}");
    }

    #[test]
    fn relaxation_from_perturbed_ansatz() {
        let p = conjecture_point();
        let n = 32;
        let topo = build_sausage_topology(n).unwrap();
        let t = helix::terminals(n, p);
        let ansatz = ansatz_steiner_points(n, p).unwrap();
        let perturbed: Vec<Point3> = ansatz
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let phase = i as f64 * 1.7;
                s + Point3::new(phase.sin(), phase.cos(), (2.0 * phase).sin()) * 1e-3
            })
            .collect();
        let opts = RelaxOptions {
            tol: 1e-14,
            ..Default::default()
        };
        let clean = optimize_steiner_points(&t, &topo, &ansatz, &opts).unwrap();
        let noisy = optimize_steiner_points(&t, &topo, &perturbed, &opts).unwrap();

        // convex in the Steiner positions: both starts reach the same tree
        assert!((clean.length - noisy.length).abs() < 1e-10);
        for (a, b) in clean.positions.iter().zip(&noisy.positions) {
            assert!(a.distance(*b) < 1e-5);
        }
        // points at least 13 backbone steps from either end stay on the ansatz
        for k in 14..=n - 15 {
            assert!(noisy.positions[k - 1].distance(ansatz[k - 1]) < 1e-4, "S{k}");
        }
        // the end relaxation saves a fixed amount, independent of n
        let saving = |n: usize| {
            let topo = build_sausage_topology(n).unwrap();
            let t = helix::terminals(n, p);
            let a = ansatz_steiner_points(n, p).unwrap();
            tree_length(&t, &a, &topo).unwrap() - optimize_steiner_points(&t, &topo, &a, &opts).unwrap().length
        };
        assert!((saving(32) - saving(64)).abs() < 1e-6);
    }

    #[test]
    fn small_n_ratio_bounded() {
        let p = HelixParams::new(PI / 2.0, 0.1).unwrap();
        let rep = steiner_ratio_finite(3, p, &RelaxOptions::default()).unwrap();
        assert!(rep.ratio <= 1.0 && rep.ratio > 0.0);
    }

    #[test]
    fn domain_errors() {
        let p = HelixParams::new(0.5, 0.3).unwrap();
        assert!(matches!(
            steiner_ratio_finite(3, p, &RelaxOptions::default()),
            Err(SrfError::Domain(_))
        ));
        let p = HelixParams::new(2.0, 0.0).unwrap();
        assert!(steiner_ratio_finite(10, p, &RelaxOptions::default()).is_err());
        assert!(steiner_ratio_finite(2, conjecture_point(), &RelaxOptions::default()).is_err());
    }
}
