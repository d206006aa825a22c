//! Fixed-topology relaxation of Steiner point positions.
//!
//! Each sweep visits `S_1..S_{n-2}` in order and moves the point toward the
//! Fermat point of its three current neighbours. Total length is a convex
//! function of the Steiner positions and every update is a descent step for
//! the one vertex it moves, so lengths are non-increasing across sweeps.

use serde::Serialize;

use super::topology::{SausageTopology, Vertex};
use crate::error::{Result, SrfError};
use crate::helix::Point3;

/// Edges shorter than this are reported as collapsed.
pub const DEGENERATE_EDGE: f64 = 1e-9;
/// Below this distance a Steiner point sits on its neighbour.
const COINCIDENT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxOptions {
    /// Stop when a sweep shortens the tree by less than this.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Fermat updates applied to a vertex per visit.
    pub inner_steps: usize,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        RelaxOptions {
            tol: 1e-12,
            max_sweeps: 100_000,
            inner_steps: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Relaxation {
    pub positions: Vec<Point3>,
    pub length: f64,
    pub sweeps: usize,
    /// Tree length before the first sweep and after each one.
    pub history: Vec<f64>,
    pub degenerate_edges: Vec<(Vertex, Vertex)>,
}

fn position(v: Vertex, terminals: &[Point3], steiner: &[Point3]) -> Point3 {
    match v {
        Vertex::Terminal(j) => terminals[j],
        Vertex::Steiner(k) => steiner[k - 1],
    }
}

fn check_cardinality(terminals: &[Point3], steiner: &[Point3], topo: &SausageTopology) -> Result<()> {
    if terminals.len() != topo.n() || steiner.len() != topo.steiner_count() {
        return Err(SrfError::spec(format!(
            "topology on {} terminals and {} Steiner points given {} and {}",
            topo.n(),
            topo.steiner_count(),
            terminals.len(),
            steiner.len()
        )));
    }
    Ok(())
}

pub fn tree_length(terminals: &[Point3], steiner: &[Point3], topo: &SausageTopology) -> Result<f64> {
    check_cardinality(terminals, steiner, topo)?;
    Ok(topo
        .edges()
        .iter()
        .map(|&(a, b)| position(a, terminals, steiner).distance(position(b, terminals, steiner)))
        .sum())
}

pub fn degenerate_edges(terminals: &[Point3], steiner: &[Point3], topo: &SausageTopology) -> Vec<(Vertex, Vertex)> {
    topo.edges()
        .iter()
        .copied()
        .filter(|&(a, b)| position(a, terminals, steiner).distance(position(b, terminals, steiner)) < DEGENERATE_EDGE)
        .collect()
}

/// Pairwise angles (degrees) between the three edges leaving `center`.
pub fn angles_at_steiner(center: Point3, neighbors: [Point3; 3]) -> Result<[f64; 3]> {
    let mut dirs = [Point3::ORIGIN; 3];
    for (d, q) in dirs.iter_mut().zip(neighbors) {
        let v = q - center;
        let len = v.norm();
        if !(len > 0.0) {
            return Err(SrfError::Degenerate("zero-length edge at Steiner point".into()));
        }
        *d = v * (1.0 / len);
    }
    let angle = |a: Point3, b: Point3| a.dot(b).clamp(-1.0, 1.0).acos().to_degrees();
    Ok([
        angle(dirs[0], dirs[1]),
        angle(dirs[0], dirs[2]),
        angle(dirs[1], dirs[2]),
    ])
}

/// Minimizer of `Σ |x − q_i|` over the three neighbours when it sits on one
/// of them: `q_j` is optimal iff the unit vectors from the other points
/// toward it sum to a vector of length at most the number of points at `q_j`.
fn optimal_vertex(q: &[Point3; 3]) -> Option<Point3> {
    for j in 0..3 {
        let mut pull = Point3::ORIGIN;
        let mut weight = 0.0;
        for i in 0..3 {
            let v = q[j] - q[i];
            let len = v.norm();
            if len < COINCIDENT {
                weight += 1.0;
            } else {
                pull = pull + v * (1.0 / len);
            }
        }
        if pull.norm() <= weight {
            return Some(q[j]);
        }
    }
    None
}

/// One Weiszfeld step, with the Vardi–Zhang modification when `x` sits on
/// a neighbour.
fn weiszfeld_step(x: Point3, q: &[Point3; 3]) -> Point3 {
    let mut num = Point3::ORIGIN;
    let mut den = 0.0;
    let mut resultant = Point3::ORIGIN;
    let mut coincident = 0.0;
    for &qi in q {
        let d = x.distance(qi);
        if d < COINCIDENT {
            coincident += 1.0;
            continue;
        }
        num = num + qi * (1.0 / d);
        den += 1.0 / d;
        resultant = resultant + (qi - x) * (1.0 / d);
    }
    if den == 0.0 {
        return x;
    }
    let target = num * (1.0 / den);
    if coincident == 0.0 {
        return target;
    }
    let r = resultant.norm();
    if r <= coincident {
        return x;
    }
    let keep = coincident / r;
    target * (1.0 - keep) + x * keep
}

fn local_cost(x: Point3, q: &[Point3; 3]) -> f64 {
    q.iter().map(|&qi| x.distance(qi)).sum()
}

/// Sweeps Fermat-point updates over `S_1..S_{n-2}` until a sweep shortens
/// the tree by less than `opts.tol`.
pub fn optimize_steiner_points(
    terminals: &[Point3],
    topo: &SausageTopology,
    init: &[Point3],
    opts: &RelaxOptions,
) -> Result<Relaxation> {
    check_cardinality(terminals, init, topo)?;
    if !(opts.tol > 0.0) {
        return Err(SrfError::spec("relaxation tolerance must be positive"));
    }
    if let Some(bad) = terminals.iter().chain(init).position(|p| !p.is_finite()) {
        return Err(SrfError::DegenerateInput(format!(
            "non-finite coordinate at input point {bad}"
        )));
    }

    let mut steiner = init.to_vec();
    let mut length = tree_length(terminals, &steiner, topo)?;
    let mut history = vec![length];

    for sweep in 1..=opts.max_sweeps {
        for k in 1..=topo.steiner_count() {
            let nb = topo.neighbors(k).map(|v| position(v, terminals, &steiner));
            let mut x = steiner[k - 1];
            if let Some(v) = optimal_vertex(&nb) {
                x = v;
            } else {
                for _ in 0..opts.inner_steps.max(1) {
                    let next = weiszfeld_step(x, &nb);
                    // guard against round-off ascent
                    if local_cost(next, &nb) > local_cost(x, &nb) {
                        break;
                    }
                    x = next;
                }
            }
            steiner[k - 1] = x;
        }
        let next = tree_length(terminals, &steiner, topo)?;
        history.push(next);
        let decrease = length - next;
        length = next;
        if decrease < opts.tol {
            let degenerate_edges = degenerate_edges(terminals, &steiner, topo);
            return Ok(Relaxation {
                positions: steiner,
                length,
                sweeps: sweep,
                history,
                degenerate_edges,
            });
        }
    }
    Err(SrfError::NonConvergence {
        method: "fermat relaxation",
        budget: opts.max_sweeps,
        unit: "sweeps",
    })
}
