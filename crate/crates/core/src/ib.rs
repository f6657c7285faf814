//! Infection Betweenness.
//!
//! `N = sum_r alpha^r A^r = (I - alpha A)^-1` weighs every walk between two
//! nodes by `alpha^length`. The share of the walk mass between infected nodes
//! `i` and `j` that passes through `u` is approximated by
//! `B_u(i, j) = N_iu N_uj / (N^2)_ij`, and a hidden node's infection
//! probability combines the shares over all infected pairs:
//! `P(u) = 1 - prod_{i<j} (1 - B_u(i, j))`.

use std::collections::BTreeMap;

use nalgebra::{Cholesky, DMatrix, Dyn};
use thiserror::Error;

use crate::graph::Graph;

/// Relative tolerance of the spectral-radius power iteration.
pub const SPECTRAL_TOLERANCE: f64 = 1e-9;
pub const SPECTRAL_MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum IbError {
    #[error("power iteration did not converge after {iterations} iterations (last estimate {estimate})")]
    NoConvergence { iterations: usize, estimate: f64 },
    #[error(
        "alpha = {alpha} does not satisfy alpha < 1/rho = {bound} (spectral radius {spectral_radius}); \
         the walk series diverges"
    )]
    Divergence {
        alpha: f64,
        spectral_radius: f64,
        bound: f64,
    },
    #[error("alpha must be finite and non-negative, got {0}")]
    InvalidAlpha(f64),
    #[error("I - alpha A is numerically singular")]
    Singular,
    #[error("node {node} out of range for {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("B_u(i, j) needs two distinct nodes, got i = j = {0}")]
    SameEndpoints(usize),
    #[error("(N^2)_ij is zero for i = {i}, j = {j}; the pair has no connecting walk")]
    UndefinedPair { i: usize, j: usize },
}

/// Largest adjacency eigenvalue by power iteration from the all-ones vector.
///
/// The iteration runs on `A + I`, whose dominant eigenvalue `rho + 1` is
/// strictly larger in modulus than every other one even on bipartite graphs
/// (where `A` alone has `-rho` as well and plain power iteration oscillates).
pub fn spectral_radius(g: &Graph) -> Result<f64, IbError> {
    let n = g.node_count();
    if n == 0 || g.edge_count() == 0 {
        return Ok(0.0);
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    let mut estimate = f64::NAN;
    for _ in 0..SPECTRAL_MAX_ITERATIONS {
        for v in 0..n {
            y[v] = x[v] + g.neighbors(v).iter().map(|&w| x[w]).sum::<f64>();
        }
        // Rayleigh quotient of A + I at x (x has unit norm)
        let next = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() - 1.0;
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (xv, yv) in x.iter_mut().zip(&y) {
            *xv = yv / norm;
        }
        if (next - estimate).abs() <= SPECTRAL_TOLERANCE * next.abs().max(1.0) {
            return Ok(next);
        }
        estimate = next;
    }
    Err(IbError::NoConvergence {
        iterations: SPECTRAL_MAX_ITERATIONS,
        estimate,
    })
}

/// Spectral radius of `g`, or an error when the walk series for `alpha`
/// does not converge.
pub fn check_alpha(g: &Graph, alpha: f64) -> Result<f64, IbError> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(IbError::InvalidAlpha(alpha));
    }
    let rho = spectral_radius(g)?;
    if alpha * rho >= 1.0 {
        return Err(IbError::Divergence {
            alpha,
            spectral_radius: rho,
            bound: 1.0 / rho,
        });
    }
    Ok(rho)
}

fn shifted_system(g: &Graph, alpha: f64) -> DMatrix<f64> {
    let n = g.node_count();
    let mut m = DMatrix::<f64>::identity(n, n);
    for (u, v) in g.edges() {
        m[(u, v)] = -alpha;
        m[(v, u)] = -alpha;
    }
    m
}

fn factor(g: &Graph, alpha: f64) -> Result<Cholesky<f64, Dyn>, IbError> {
    // I - alpha A is symmetric positive definite whenever alpha * rho < 1
    Cholesky::new(shifted_system(g, alpha)).ok_or(IbError::Singular)
}

/// Dense walk-weight matrix `N = (I - alpha A)^-1` of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PathWeightMatrix {
    /// Column-major and symmetric, so column `i` is also row `i`.
    data: Vec<f64>,
    n: usize,
    alpha: f64,
    spectral_radius: f64,
}

impl PathWeightMatrix {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn spectral_radius(&self) -> f64 {
        self.spectral_radius
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.n + i]
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_column_slice(self.n, self.n, &self.data)
    }

    /// `max |((I - alpha A) N - I)_ij|` against the adjacency of `g`.
    pub fn residual(&self, g: &Graph) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for j in 0..n {
            let col = self.column(j);
            for i in 0..n {
                let walk: f64 = g.neighbors(i).iter().map(|&k| col[k]).sum();
                let value = col[i] - self.alpha * walk - if i == j { 1.0 } else { 0.0 };
                worst = worst.max(value.abs());
            }
        }
        worst
    }
}

/// Compute `N = (I - alpha A)^-1` by dense Cholesky factorization.
///
/// Fails with [`IbError::Divergence`] when `alpha >= 1/rho(A)`.
pub fn path_weight_matrix(g: &Graph, alpha: f64) -> Result<PathWeightMatrix, IbError> {
    let rho = check_alpha(g, alpha)?;
    let n = g.node_count();
    let inverse = factor(g, alpha)?.inverse();
    let mut data = inverse.as_slice().to_vec();
    for j in 0..n {
        for i in j + 1..n {
            let mean = 0.5 * (data[j * n + i] + data[i * n + j]);
            data[j * n + i] = mean;
            data[i * n + j] = mean;
        }
    }
    Ok(PathWeightMatrix {
        data,
        n,
        alpha,
        spectral_radius: rho,
    })
}

/// Truncated walk series `sum_{r=0}^{R} alpha^r A^r`, with `R` the smallest
/// order for which `(alpha rho)^R < tolerance`.
///
/// This is the independent route to `N`, and the fallback when a dense
/// factorization is too large. The truncation error is bounded by
/// `(alpha rho)^(R+1) / (1 - alpha rho)` in spectral norm.
pub fn neumann_path_weights(g: &Graph, alpha: f64, tolerance: f64) -> Result<DMatrix<f64>, IbError> {
    let rho = check_alpha(g, alpha)?;
    let n = g.node_count();
    let ratio = alpha * rho;
    let order = if ratio <= 0.0 {
        0
    } else {
        (tolerance.ln() / ratio.ln()).ceil().max(0.0) as usize + 1
    };
    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for _ in 0..order {
        // term <- alpha * A * term, using the adjacency lists
        let mut next = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                let s: f64 = g.neighbors(i).iter().map(|&k| term[(k, j)]).sum();
                next[(i, j)] = alpha * s;
            }
        }
        sum += &next;
        term = next;
    }
    Ok(sum)
}

/// Columns of `N` for a set of anchor nodes, from one factorization and a
/// solve per anchor. This is all that [`infection_probability`] needs.
#[derive(Debug, Clone)]
pub struct AnchorColumns {
    n: usize,
    anchors: Vec<usize>,
    data: Vec<f64>,
}

impl AnchorColumns {
    pub fn solve(g: &Graph, alpha: f64, anchors: &[usize]) -> Result<Self, IbError> {
        let n = g.node_count();
        for &a in anchors {
            if a >= n {
                return Err(IbError::NodeOutOfRange { node: a, node_count: n });
            }
        }
        check_alpha(g, alpha)?;
        let chol = factor(g, alpha)?;
        let mut rhs = DMatrix::<f64>::zeros(n, anchors.len());
        for (k, &a) in anchors.iter().enumerate() {
            rhs[(a, k)] = 1.0;
        }
        let solved = chol.solve(&rhs);
        Ok(AnchorColumns {
            n,
            anchors: anchors.to_vec(),
            data: solved.as_slice().to_vec(),
        })
    }

    pub fn anchors(&self) -> &[usize] {
        &self.anchors
    }

    pub fn column(&self, k: usize) -> &[f64] {
        &self.data[k * self.n..(k + 1) * self.n]
    }

    /// Infection probabilities of every non-anchor node.
    pub fn infection_probability(&self) -> BTreeMap<usize, f64> {
        let columns: Vec<&[f64]> = (0..self.anchors.len()).map(|k| self.column(k)).collect();
        probability_from_columns(self.n, &self.anchors, &columns)
    }
}

/// `B_u(i, j) = N_iu N_uj / (N^2)_ij`.
pub fn infection_betweenness(
    pwm: &PathWeightMatrix,
    u: usize,
    i: usize,
    j: usize,
) -> Result<f64, IbError> {
    let n = pwm.node_count();
    for node in [u, i, j] {
        if node >= n {
            return Err(IbError::NodeOutOfRange { node, node_count: n });
        }
    }
    if i == j {
        return Err(IbError::SameEndpoints(i));
    }
    let total = dot(pwm.column(i), pwm.column(j));
    if total <= 0.0 {
        return Err(IbError::UndefinedPair { i, j });
    }
    Ok(pwm.get(i, u) * pwm.get(u, j) / total)
}

/// Infection probability of every node of the (reduced) graph that is not in
/// `observed_infected`, combining unordered distinct infected pairs.
///
/// Fewer than two infected nodes give an empty product and `P = 0`. Pairs
/// with `(N^2)_ij = 0` (only possible with `alpha = 0`) carry no evidence.
pub fn infection_probability(pwm: &PathWeightMatrix, observed_infected: &[usize]) -> BTreeMap<usize, f64> {
    let columns: Vec<&[f64]> = observed_infected.iter().map(|&i| pwm.column(i)).collect();
    probability_from_columns(pwm.node_count(), observed_infected, &columns)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn probability_from_columns(n: usize, anchors: &[usize], columns: &[&[f64]]) -> BTreeMap<usize, f64> {
    let mut is_anchor = vec![false; n];
    for &a in anchors {
        is_anchor[a] = true;
    }
    let mut log_survival = vec![0.0f64; n];
    let mut certain = vec![false; n];
    for a in 0..columns.len() {
        for b in a + 1..columns.len() {
            if anchors[a] == anchors[b] {
                continue;
            }
            let (ci, cj) = (columns[a], columns[b]);
            let total = dot(ci, cj);
            if !(total > 0.0) {
                continue;
            }
            for u in 0..n {
                if is_anchor[u] || certain[u] {
                    continue;
                }
                let share = ci[u] * cj[u] / total;
                if share >= 1.0 {
                    certain[u] = true;
                } else {
                    log_survival[u] += (-share).ln_1p();
                }
            }
        }
    }
    (0..n)
        .filter(|&u| !is_anchor[u])
        .map(|u| {
            let p = if certain[u] { 1.0 } else { -log_survival[u].exp_m1() };
            (u, p.clamp(0.0, 1.0))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn spectral_radius_small_cases() {
        let k2 = graph(2, &[(0, 1)]);
        assert!((spectral_radius(&k2).unwrap() - 1.0).abs() < 1e-8);
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!((spectral_radius(&c4).unwrap() - 2.0).abs() < 1e-8);
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!((spectral_radius(&star).unwrap() - 2.0).abs() < 1e-8);
        assert_eq!(spectral_radius(&graph(3, &[])).unwrap(), 0.0);
    }

    #[test]
    fn alpha_zero_gives_identity() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let pwm = path_weight_matrix(&g, 0.0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(pwm.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn k2_closed_form() {
        let pwm = path_weight_matrix(&graph(2, &[(0, 1)]), 0.5).unwrap();
        assert!((pwm.get(0, 0) - 4.0 / 3.0).abs() < 1e-12);
        assert!((pwm.get(1, 1) - 4.0 / 3.0).abs() < 1e-12);
        assert!((pwm.get(0, 1) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(pwm.get(0, 1), pwm.get(1, 0));
    }

    #[test]
    fn divergent_alpha_is_rejected() {
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(matches!(path_weight_matrix(&c4, 0.5), Err(IbError::Divergence { .. })));
        assert!(matches!(path_weight_matrix(&c4, 0.7), Err(IbError::Divergence { .. })));
        assert!(matches!(path_weight_matrix(&c4, -0.1), Err(IbError::InvalidAlpha(_))));
        assert!(matches!(
            AnchorColumns::solve(&c4, 0.5, &[0]),
            Err(IbError::Divergence { .. })
        ));
    }

    #[test]
    fn path_of_three_betweenness_against_explicit_inverse() {
        // (I - 0.1 A) for the path 0-1-2 inverted by cofactors
        let a = 0.1f64;
        let det = 1.0 - 2.0 * a * a;
        let n = [
            [(1.0 - a * a) / det, a / det, a * a / det],
            [a / det, 1.0 / det, a / det],
            [a * a / det, a / det, (1.0 - a * a) / det],
        ];
        let m02: f64 = (0..3).map(|k| n[0][k] * n[k][2]).sum();
        let expected = n[0][1] * n[1][2] / m02;

        let pwm = path_weight_matrix(&graph(3, &[(0, 1), (1, 2)]), a).unwrap();
        let b = infection_betweenness(&pwm, 1, 0, 2).unwrap();
        assert!((b - expected).abs() < 1e-12, "{b} vs {expected}");
    }

    #[test]
    fn betweenness_argument_errors() {
        let pwm = path_weight_matrix(&graph(3, &[(0, 1), (1, 2)]), 0.1).unwrap();
        assert_eq!(infection_betweenness(&pwm, 0, 1, 1), Err(IbError::SameEndpoints(1)));
        assert!(matches!(
            infection_betweenness(&pwm, 5, 0, 1),
            Err(IbError::NodeOutOfRange { .. })
        ));
        let identity = path_weight_matrix(&graph(3, &[(0, 1), (1, 2)]), 0.0).unwrap();
        assert_eq!(
            infection_betweenness(&identity, 1, 0, 2),
            Err(IbError::UndefinedPair { i: 0, j: 2 })
        );
    }

    #[test]
    fn single_anchor_gives_zero_probability() {
        let pwm = path_weight_matrix(&graph(4, &[(0, 1), (1, 2), (2, 3)]), 0.1).unwrap();
        let p = infection_probability(&pwm, &[1]);
        assert_eq!(p.len(), 3);
        assert!(p.values().all(|&v| v == 0.0));
    }

    #[test]
    fn anchor_columns_match_dense_inverse() {
        let g = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)]);
        let pwm = path_weight_matrix(&g, 0.2).unwrap();
        let cols = AnchorColumns::solve(&g, 0.2, &[1, 3, 5]).unwrap();
        for (k, &a) in cols.anchors().iter().enumerate() {
            for i in 0..6 {
                assert!((cols.column(k)[i] - pwm.get(i, a)).abs() < 1e-12);
            }
        }
        let dense = infection_probability(&pwm, &[1, 3, 5]);
        let sparse = cols.infection_probability();
        for (u, p) in &dense {
            assert!((p - sparse[u]).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_is_tiny() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 2)]);
        let pwm = path_weight_matrix(&g, 0.3).unwrap();
        assert!(pwm.residual(&g) < 1e-12);
    }
}
