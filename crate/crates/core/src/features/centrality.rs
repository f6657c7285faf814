use std::collections::VecDeque;

use rayon::prelude::*;

use crate::graph::{bfs_distances, components, Graph};
use super::FeatureError;

/// Sources per parallel work unit. Partial sums are combined in chunk order,
/// so the result does not depend on the thread count.
const SOURCE_CHUNK: usize = 64;

pub const EIGENVECTOR_TOLERANCE: f64 = 1e-9;
pub const EIGENVECTOR_MAX_ITERATIONS: usize = 100_000;

/// Shortest-path betweenness (Brandes), normalized by the number of node
/// pairs `(n-1)(n-2)/2` of the whole graph.
pub fn betweenness_centrality(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut state = BrandesState::new(n);
            for &s in chunk {
                state.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    if n <= 2 {
        return vec![0.0; n];
    }
    // each unordered pair was counted from both endpoints
    let pairs = ((n - 1) * (n - 2)) as f64;
    total.into_iter().map(|b| b / pairs).collect()
}

struct BrandesState {
    sigma: Vec<f64>,
    dist: Vec<i64>,
    delta: Vec<f64>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl BrandesState {
    fn new(n: usize) -> Self {
        BrandesState {
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
        }
    }

    fn accumulate(&mut self, g: &Graph, s: usize, acc: &mut [f64]) {
        self.sigma.fill(0.0);
        self.dist.fill(-1);
        self.delta.fill(0.0);
        self.order.clear();
        self.sigma[s] = 1.0;
        self.dist[s] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            for &w in g.neighbors(v) {
                if self.dist[w] < 0 {
                    self.dist[w] = self.dist[v] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
        for &w in self.order.iter().rev() {
            for &v in g.neighbors(w) {
                if self.dist[v] == self.dist[w] - 1 {
                    self.delta[v] += self.sigma[v] / self.sigma[w] * (1.0 + self.delta[w]);
                }
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }
}

/// Closeness restricted to each node's component:
/// `(n_c - 1) / sum of distances`; isolated nodes get 0.
pub fn closeness_centrality(g: &Graph) -> Vec<f64> {
    (0..g.node_count())
        .into_par_iter()
        .map(|v| {
            let (reached, total) = bfs_distances(g, v)
                .into_iter()
                .filter(|&d| d != usize::MAX)
                .fold((0usize, 0usize), |(c, s), d| (c + 1, s + d));
            if total == 0 {
                0.0
            } else {
                (reached - 1) as f64 / total as f64
            }
        })
        .collect()
}

/// Principal eigenvector of the largest connected component, scaled so its
/// largest entry is 1. Nodes outside that component get 0.
///
/// Iterates on `A + I` so bipartite components converge instead of
/// oscillating; the shift leaves the eigenvectors unchanged.
pub fn eigenvector_centrality(g: &Graph) -> Result<Vec<f64>, FeatureError> {
    let n = g.node_count();
    let mut out = vec![0.0; n];
    let lcc = match components(g).into_iter().next() {
        Some(c) => c,
        None => return Ok(out),
    };
    if lcc.len() == 1 {
        out[lcc[0]] = 1.0;
        return Ok(out);
    }
    let mut x = vec![0.0; n];
    for &v in &lcc {
        x[v] = 1.0;
    }
    let mut y = vec![0.0; n];
    for _ in 0..EIGENVECTOR_MAX_ITERATIONS {
        let mut peak = 0.0f64;
        for &v in &lcc {
            y[v] = x[v] + g.neighbors(v).iter().map(|&w| x[w]).sum::<f64>();
            peak = peak.max(y[v]);
        }
        let mut change = 0.0f64;
        for &v in &lcc {
            let next = y[v] / peak;
            change = change.max((next - x[v]).abs());
            x[v] = next;
        }
        if change < EIGENVECTOR_TOLERANCE {
            for &v in &lcc {
                out[v] = x[v];
            }
            return Ok(out);
        }
    }
    Err(FeatureError::EigenvectorNoConvergence(
        EIGENVECTOR_MAX_ITERATIONS,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn betweenness_star_and_path() {
        let b = betweenness_centrality(&star(4));
        assert!(close(&b, &[1.0, 0.0, 0.0, 0.0, 0.0], 1e-12));
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(close(&betweenness_centrality(&path), &[0.0, 1.0, 0.0], 1e-12));
    }

    #[test]
    fn closeness_cases() {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert!(close(&closeness_centrality(&k2), &[1.0, 1.0], 1e-12));
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(close(&closeness_centrality(&path), &[2.0 / 3.0, 1.0, 2.0 / 3.0], 1e-12));
        let with_isolate = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(closeness_centrality(&with_isolate)[2], 0.0);
    }

    #[test]
    fn eigenvector_cases() {
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(close(&eigenvector_centrality(&k3).unwrap(), &[1.0; 3], 1e-8));
        let s = eigenvector_centrality(&star(4)).unwrap();
        assert!(close(&s, &[1.0, 0.5, 0.5, 0.5, 0.5], 1e-8), "{s:?}");
        assert!(close(&eigenvector_centrality(&cycle(6)).unwrap(), &[1.0; 6], 1e-8));
    }

    #[test]
    fn eigenvector_zero_outside_largest_component() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let e = eigenvector_centrality(&g).unwrap();
        assert_eq!(&e[3..], &[0.0, 0.0]);
        assert!((e[1] - 1.0).abs() < 1e-12);
    }
}
