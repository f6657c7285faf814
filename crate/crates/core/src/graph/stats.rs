use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use super::{largest_component, Graph};

/// Network characteristics reported per topology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkStats {
    pub n: usize,
    pub m: usize,
    /// Average local clustering coefficient.
    pub c: f64,
    /// Population standard deviation of the degree sequence.
    pub sigma: f64,
    /// Adjusted Fisher-Pearson skewness of the degree sequence.
    pub s: f64,
    /// Diameter of the largest connected component, in hops.
    pub d: usize,
    /// False when the degree sequence has zero variance or fewer than three
    /// entries; `s` is then reported as 0.
    pub skewness_defined: bool,
}

/// Compute n, m, c, sigma, s and d for `g`.
///
/// Degree moments run over every node; the diameter runs over the largest
/// connected component with one BFS per source.
pub fn network_stats(g: &Graph) -> NetworkStats {
    let n = g.node_count();
    let degrees: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    let (sigma, s, skewness_defined) = degree_moments(&degrees);
    NetworkStats {
        n,
        m: g.edge_count(),
        c: average_clustering(g),
        sigma,
        s,
        d: diameter_of_largest_component(g),
        skewness_defined,
    }
}

fn degree_moments(degrees: &[f64]) -> (f64, f64, bool) {
    let n = degrees.len();
    if n == 0 {
        return (0.0, 0.0, false);
    }
    let nf = n as f64;
    let mean = degrees.iter().sum::<f64>() / nf;
    let m2 = degrees.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / nf;
    let m3 = degrees.iter().map(|d| (d - mean).powi(3)).sum::<f64>() / nf;
    let sigma = m2.sqrt();
    if n < 3 || m2 <= f64::EPSILON * mean.abs().max(1.0) {
        return (sigma, 0.0, false);
    }
    let g1 = m3 / m2.powf(1.5);
    let adjusted = g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0);
    (sigma, adjusted, true)
}

/// Mean over all nodes of the local clustering coefficient; nodes of degree
/// below two contribute zero.
pub fn average_clustering(g: &Graph) -> f64 {
    let n = g.node_count();
    if n == 0 {
        return 0.0;
    }
    let total: f64 = (0..n)
        .map(|v| {
            let nbrs = g.neighbors(v);
            let k = nbrs.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for &u in nbrs {
                links += sorted_intersection_count(nbrs, g.neighbors(u));
            }
            // every neighbor-neighbor link was seen from both ends
            let triangles = links as f64 / 2.0;
            triangles / (k * (k - 1)) as f64 * 2.0
        })
        .sum();
    total / n as f64
}

fn sorted_intersection_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Hop distances from `source`; unreachable nodes get `usize::MAX`.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.node_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

fn eccentricity(g: &Graph, source: usize) -> usize {
    bfs_distances(g, source)
        .into_iter()
        .filter(|&d| d != usize::MAX)
        .max()
        .unwrap_or(0)
}

/// Exact diameter of the largest connected component.
pub fn diameter_of_largest_component(g: &Graph) -> usize {
    let lcc = largest_component(g);
    if lcc.len() < 2 {
        return 0;
    }
    lcc.par_iter()
        .map(|&v| eccentricity(g, v))
        .max()
        .unwrap_or(0)
}
