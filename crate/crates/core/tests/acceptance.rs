//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any FAIL.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use helix_srf::analytic::{self, conjectured_ratio, graham_hwang_bound, omega_r, symmetry_image};
use helix_srf::exec::Execution;
use helix_srf::helix::{self, HelixParams, SkipCount};
use helix_srf::optimize::{grid_scan, GridSpec};
use helix_srf::oracle::{self, OracleReport, RelaxOptions};
use helix_srf::region;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 0x5eed_2024;

fn m_max() -> SkipCount {
    SkipCount::new(analytic::DEFAULT_M_MAX).unwrap()
}

fn rho(p: HelixParams) -> f64 {
    analytic::srf(p, m_max()).unwrap().rho
}

fn feasible_samples(count: usize, seed: u64) -> Vec<HelixParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = region::omega_window();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = HelixParams::new(rng.gen_range(w.lo..w.hi), rng.gen_range(1e-3..2.0)).unwrap();
        if region::is_inside(p, m_max()) {
            out.push(p);
        }
    }
    out
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_helix-srf"))
        .arg("conjecture")
        .output()
        .unwrap();
    let secs = start.elapsed().as_secs_f64();
    if !output.status.success() {
        return outcome(false, format!("conjecture exited {:?}", output.status.code()));
    }
    let v: Value = serde_json::from_slice(&output.stdout).unwrap();
    let rho_min = v["rho_min"].as_f64().unwrap();
    let omega = v["omega"].as_f64().unwrap();
    let target_omega = PI - (2.0f64 / 3.0).acos();
    let (drho, domega) = ((rho_min - conjectured_ratio()).abs(), (omega - target_omega).abs());
    outcome(
        drho <= 1e-10 && domega <= 1e-6 && secs <= 60.0,
        format!("rho_min = {rho_min:.14} (err {drho:.2e}), omega err {domega:.2e}, {secs:.2} s"),
    )
}

fn criterion_2() -> Outcome {
    let output = Command::new(env!("CARGO_BIN_EXE_helix-srf"))
        .arg("conjecture")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&output.stdout).unwrap();
    let residuals: Vec<f64> = v["tie_residuals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let d_target = 10.0 * 3f64.sqrt() / 9.0;
    let d_err = v["step_distances"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| (d.as_f64().unwrap() - d_target).abs())
        .fold(0.0, f64::max);
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    outcome(
        worst <= 1e-10 && d_err <= 1e-12,
        format!("max |rho_1 - rho_k| = {worst:.2e}, max |d_m - 10 sqrt3/9| = {d_err:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let lhs = (1.0 + 21f64.sqrt() / 9.0) / (10.0 * 3f64.sqrt() / 9.0);
    let rhs = (3.0 * 3f64.sqrt() + 7f64.sqrt()) / 10.0;
    let identity = (lhs - rhs).abs();
    // division reading: alpha_R = sqrt(30) / (9 omega_R) puts u = (alpha omega)^2 at 10/27
    let u = (analytic::alpha_r() * omega_r()).powi(2);
    let u_err = (u - 10.0 / 27.0).abs();
    let rho_err = (rho(analytic::conjecture_point()) - rhs).abs();
    outcome(
        identity <= 1e-14 && u_err <= 1e-14 && rho_err <= 1e-14,
        format!(
            "identity err {identity:.2e}, (alpha omega)^2 err {u_err:.2e}, rho(omega_R, alpha_R) err {rho_err:.2e}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let worst = feasible_samples(1000, SEED)
        .into_iter()
        .map(|p| (rho(symmetry_image(p, 1).unwrap()) - rho(p)).abs())
        .fold(0.0, f64::max);
    let c = analytic::conjecture_point();
    let mirror = symmetry_image(c, 1).unwrap();
    let explicit_omega = PI + (2.0f64 / 3.0).acos();
    let mirror_err = (rho(mirror) - rho(c)).abs();
    let omega_err = (mirror.omega - explicit_omega).abs();
    outcome(
        worst <= 1e-12 && mirror_err <= 1e-12 && omega_err <= 1e-12,
        format!(
            "1000 points max |drho| = {worst:.2e}; mirror ({:.10}, {:.10}) |drho| = {mirror_err:.2e}",
            mirror.omega, mirror.alpha
        ),
    )
}

fn criterion_5() -> Outcome {
    let n = 32;
    let topo = oracle::build_sausage_topology(n).unwrap();
    let worst = feasible_samples(20, SEED + 5)
        .into_iter()
        .map(|p| {
            let t = helix::terminals(n, p);
            let s = oracle::ansatz_steiner_points(n, p).unwrap();
            oracle::max_interior_angle_error(&t, &s, &topo).unwrap()
        })
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-9,
        format!("worst |angle - 120| = {worst:.2e} deg over 20 points, n = {n}"),
    )
}

fn criterion_6(runs: &mut Vec<OracleReport>) -> Outcome {
    let start = Instant::now();
    let p = analytic::conjecture_point();
    let jobs: Vec<(usize, HelixParams)> = [100, 200, 400].into_iter().map(|n| (n, p)).collect();
    let reports: Vec<OracleReport> = oracle::steiner_ratio_batch(&jobs, &RelaxOptions::default(), Execution::Parallel)
        .into_iter()
        .map(|r| r.unwrap())
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let errs: Vec<f64> = reports.iter().map(|r| (r.ratio - conjectured_ratio()).abs()).collect();
    runs.extend(reports);
    let halving = errs.windows(2).all(|w| w[1] <= 1.5 * w[0] / 2.0);
    outcome(
        errs[0] <= 0.02 && halving && secs <= 120.0,
        format!(
            "err(100, 200, 400) = {:.3e}, {:.3e}, {:.3e}; {secs:.2} s",
            errs[0], errs[1], errs[2]
        ),
    )
}

fn criterion_7(runs: &mut Vec<OracleReport>) -> Outcome {
    let points = feasible_samples(10, SEED + 7);
    let jobs: Vec<(usize, HelixParams)> = [50usize, 200]
        .iter()
        .flat_map(|&n| points.iter().map(move |&p| (n, p)))
        .collect();
    let reports: Vec<OracleReport> = oracle::steiner_ratio_batch(&jobs, &RelaxOptions::default(), Execution::Parallel)
        .into_iter()
        .map(|r| r.unwrap())
        .collect();
    let mut worst_scaled: f64 = 0.0;
    let mut pass = true;
    for r in &reports {
        let p = HelixParams::new(r.omega, r.alpha).unwrap();
        let d_min = SkipCount::up_to(m_max())
            .map(|m| analytic::step_distance(m, p))
            .fold(f64::INFINITY, f64::min);
        let rel = (r.mst_length - (r.n - 1) as f64 * d_min).abs() / r.mst_length;
        pass &= rel <= 2.0 / r.n as f64;
        worst_scaled = worst_scaled.max(rel * r.n as f64);
    }
    runs.extend(reports);
    outcome(
        pass,
        format!("worst n * relative error = {worst_scaled:.3} (bound 2) over 20 runs"),
    )
}

fn criterion_8() -> Outcome {
    let spec = GridSpec::new(400, 400);
    let scan = grid_scan(spec, Execution::Parallel).unwrap();
    let (lo, hi) = (graham_hwang_bound(), 1.0);
    let bad = scan
        .cells
        .iter()
        .filter_map(|c| c.rho())
        .filter(|&r| !(lo <= r && r <= hi))
        .count();

    let probe = HelixParams::new(PI, 0.2).unwrap();
    let outside = !region::is_inside(probe, m_max());
    let probe_rho = rho(probe);

    let tangent = 2.0 * 3f64.sqrt() / PI;
    let flip = region::full_tree_alpha_limit(SkipCount::ONE, PI).unwrap().unwrap();
    let flip_err = (flip - tangent).abs();
    outcome(
        bad == 0 && outside && (probe_rho - 1.2287672).abs() <= 1e-4 && flip_err <= 1e-10,
        format!(
            "{} inside cells, {bad} outside [sqrt3/3, 1]; (pi, 0.2) outside = {outside}, rho = {probe_rho:.10}; \
             flip vs 2 sqrt3/pi err {flip_err:.2e}",
            scan.feasible_count()
        ),
    )
}

fn criterion_9(runs: &mut Vec<OracleReport>) -> Outcome {
    let jobs: Vec<(usize, HelixParams)> = feasible_samples(20, SEED + 9).into_iter().map(|p| (64, p)).collect();
    runs.extend(
        oracle::steiner_ratio_batch(&jobs, &RelaxOptions::default(), Execution::Parallel)
            .into_iter()
            .map(|r| r.unwrap()),
    );
    let bound = graham_hwang_bound() - 1e-9;
    let violations = runs.iter().filter(|r| r.sausage_length < bound * r.mst_length).count();
    let worst = runs
        .iter()
        .map(|r| r.sausage_length / r.mst_length)
        .fold(f64::INFINITY, f64::min);
    outcome(
        violations == 0 && runs.iter().all(|r| r.graham_hwang_ok),
        format!(
            "{} oracle runs, {violations} below the bound, smallest ratio {worst:.6}",
            runs.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut runs = Vec::new();
    let results = [
        ("1 conjecture value", criterion_1()),
        ("2 triple-point cross-check", criterion_2()),
        ("3 alpha_R resolution", criterion_3()),
        ("4 symmetry suite", criterion_4()),
        ("5 120-degree ansatz", criterion_5()),
        ("6 oracle convergence", criterion_6(&mut runs)),
        ("7 MST formula", criterion_7(&mut runs)),
        ("8 region consistency", criterion_8()),
        ("9 Graham-Hwang bound", criterion_9(&mut runs)),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "criterion {name}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
