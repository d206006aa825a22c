use std::fmt;

use serde::Serialize;

use crate::error::{Result, SrfError};

/// A vertex of the sausage tree: terminal `T_j` (0-based) or Steiner point
/// `S_k` (1-based, `1..=n-2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Vertex {
    Terminal(usize),
    Steiner(usize),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Terminal(j) => write!(f, "T{j}"),
            Vertex::Steiner(k) => write!(f, "S{k}"),
        }
    }
}

/// Path-shaped full Steiner topology on `n` terminals.
///
/// The backbone is `S_1 – S_2 – … – S_{n-2}`. Interior `S_k` carries `T_k`;
/// `S_1` carries `T_0` and `T_1`, and `S_{n-2}` carries `T_{n-2}` and `T_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SausageTopology {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    neighbors: Vec<[Vertex; 3]>,
}

impl SausageTopology {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steiner_count(&self) -> usize {
        self.n - 2
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// The three neighbours of `S_k`.
    pub fn neighbors(&self, k: usize) -> [Vertex; 3] {
        self.neighbors[k - 1]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Connected with `|V| − 1` edges.
    pub fn is_tree(&self) -> bool {
        let vertices = 2 * self.n - 2;
        if self.edges.len() != vertices - 1 {
            return false;
        }
        let index = |v: Vertex| match v {
            Vertex::Terminal(j) => j,
            Vertex::Steiner(k) => self.n + k - 1,
        };
        let mut parent: Vec<usize> = (0..vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, index(a)), find(&mut parent, index(b)));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

pub fn build_sausage_topology(n: usize) -> Result<SausageTopology> {
    if n < 3 {
        return Err(SrfError::spec(format!("sausage topology needs n >= 3, got {n}")));
    }
    let last = n - 2;
    let mut edges = Vec::with_capacity(2 * n - 3);
    let mut neighbors = Vec::with_capacity(last);
    for k in 1..=last {
        let s = Vertex::Steiner(k);
        let mut adj = Vec::with_capacity(3);
        if k == 1 {
            adj.push(Vertex::Terminal(0));
        }
        if k > 1 {
            adj.push(Vertex::Steiner(k - 1));
        }
        adj.push(Vertex::Terminal(k));
        if k < last {
            adj.push(Vertex::Steiner(k + 1));
        }
        if k == last {
            adj.push(Vertex::Terminal(n - 1));
        }
        for &v in &adj {
            // each backbone edge once, from its lower end
            if !matches!(v, Vertex::Steiner(j) if j < k) {
                edges.push((s, v));
            }
        }
        neighbors.push([adj[0], adj[1], adj[2]]);
    }
    Ok(SausageTopology { n, edges, neighbors })
}
