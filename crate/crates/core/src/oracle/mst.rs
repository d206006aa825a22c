use crate::helix::Point3;

/// Euclidean minimum spanning tree length over the complete graph.
///
/// Dense Prim, `O(n²)` time and `O(n)` memory. Fewer than two points span
/// nothing and give zero.
pub fn mst_length(points: &[Point3]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..n {
        let (u, d) = best
            .iter()
            .enumerate()
            .filter(|&(i, _)| !in_tree[i])
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, &d)| (i, d))
            .expect("vertices remain");
        in_tree[u] = true;
        total += d;
        let pu = points[u];
        for v in 0..n {
            if !in_tree[v] {
                let w = pu.distance(points[v]);
                if w < best[v] {
                    best[v] = w;
                }
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Kruskal over all pairs, for cross-checking.
    fn kruskal(points: &[Point3]) -> f64 {
        let n = points.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((points[i].distance(points[j]), i, j));
            }
        }
        edges.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut total = 0.0;
        for (w, i, j) in edges {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
                total += w;
            }
        }
        total
    }

    #[test]
    fn examples() {
        let pts = [
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(-1.0, 0.0, 0.0),
        ];
        assert!((mst_length(&pts) - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        let two = [Point3::new(0.0, 0.0, 0.0), Point3::new(3.0, 4.0, 0.0)];
        assert_eq!(mst_length(&two), 5.0);
        assert_eq!(mst_length(&two[..1]), 0.0);
    }

    #[test]
    fn agrees_with_kruskal() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in [5, 17, 60] {
            let pts: Vec<Point3> = (0..n).map(|_| Point3::new(next(), next(), next())).collect();
            assert!((mst_length(&pts) - kruskal(&pts)).abs() < 1e-12);
        }
    }
}
