use latent_infection::graph::{components, generate, Graph, GraphModel};
use latent_infection::ib::{
    check_alpha, infection_betweenness, infection_probability, neumann_path_weights, path_weight_matrix,
    spectral_radius, AnchorColumns, IbError,
};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (0usize..3, 4usize..max_n, any::<u64>()).prop_map(|(kind, n, seed)| {
        let model = match kind {
            0 => GraphModel::ErdosRenyi { n, p: 0.2 },
            1 => GraphModel::BarabasiAlbert { n, k: 2 },
            _ => GraphModel::WattsStrogatz { n, k: 2, beta: 0.3 },
        };
        generate(model, seed).unwrap()
    })
}

/// Gauss-Jordan inverse of `I - alpha A` with partial pivoting.
fn invert(g: &Graph, alpha: f64) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; 2 * n]; n];
    for i in 0..n {
        a[i][i] = 1.0;
        a[i][n + i] = 1.0;
        for &j in g.neighbors(i) {
            a[i][j] -= alpha;
        }
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
        a.swap(col, pivot);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for c in 0..2 * n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn betweenness_sums_to_one(g in graph_strategy(60), scale in 0.05f64..0.95, pick in any::<u64>()) {
        let rho = spectral_radius(&g).unwrap();
        prop_assume!(rho > 0.0);
        let pwm = path_weight_matrix(&g, scale / rho).unwrap();
        let lcc = &components(&g)[0];
        prop_assume!(lcc.len() >= 2);
        let i = lcc[(pick % lcc.len() as u64) as usize];
        let j = lcc[((pick / 7 + 1) % lcc.len() as u64) as usize];
        prop_assume!(i != j);
        let mut total = 0.0;
        for u in 0..g.node_count() {
            let b = infection_betweenness(&pwm, u, i, j).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&b));
            total += b;
        }
        prop_assert!((total - 1.0).abs() < 1e-9, "sum {}", total);
    }

    #[test]
    fn dense_inverse_matches_walk_series(g in graph_strategy(50), scale in 0.05f64..0.6) {
        let rho = spectral_radius(&g).unwrap();
        let alpha = if rho > 0.0 { scale / rho } else { 0.3 };
        let pwm = path_weight_matrix(&g, alpha).unwrap();
        prop_assert!(pwm.residual(&g) < 1e-8);
        let series = neumann_path_weights(&g, alpha, 1e-13).unwrap();
        prop_assert!((pwm.to_matrix() - series).abs().max() < 1e-8);
    }

    #[test]
    fn probabilities_are_bounded_and_grow_with_anchors(
        g in graph_strategy(40),
        scale in 0.1f64..0.9,
        mask in any::<u64>(),
    ) {
        let rho = spectral_radius(&g).unwrap();
        prop_assume!(rho > 0.0);
        let alpha = scale / rho;
        let pwm = path_weight_matrix(&g, alpha).unwrap();
        let lcc = &components(&g)[0];
        let anchors: Vec<usize> = lcc.iter().copied().filter(|&v| mask >> (v % 64) & 1 == 1).collect();
        prop_assume!(anchors.len() >= 2);
        let p = infection_probability(&pwm, &anchors);
        let solved = AnchorColumns::solve(&g, alpha, &anchors).unwrap().infection_probability();
        prop_assert_eq!(p.len(), g.node_count() - anchors.len());
        for (&u, &pu) in &p {
            prop_assert!((0.0..=1.0).contains(&pu));
            prop_assert!((pu - solved[&u]).abs() < 1e-10);
        }
        let fewer = &anchors[..anchors.len() - 1];
        let q = infection_probability(&pwm, fewer);
        for (&u, &pu) in &p {
            prop_assert!(q[&u] <= pu + 1e-12);
        }
        let mut reversed = anchors.clone();
        reversed.reverse();
        let r = infection_probability(&pwm, &reversed);
        for (&u, &pu) in &p {
            prop_assert!((r[&u] - pu).abs() < 1e-12);
        }
    }
}

#[test]
fn ten_node_product_oracle() {
    let g = generate(GraphModel::ErdosRenyi { n: 10, p: 0.35 }, 4).unwrap();
    let rho = spectral_radius(&g).unwrap();
    let alpha = 0.5 / rho;
    let n_inv = invert(&g, alpha);
    let anchors = [0usize, 3, 7];
    let lcc = &components(&g)[0];
    assert!(anchors.iter().all(|a| lcc.contains(a)), "pick a connected draw");

    let walks = |i: usize, j: usize| (0..10).map(|k| n_inv[i][k] * n_inv[k][j]).sum::<f64>();
    let pwm = path_weight_matrix(&g, alpha).unwrap();
    let p = infection_probability(&pwm, &anchors);
    for u in (0..10).filter(|u| !anchors.contains(u)) {
        let mut keep = 1.0;
        for (a, &i) in anchors.iter().enumerate() {
            for &j in &anchors[a + 1..] {
                keep *= 1.0 - n_inv[i][u] * n_inv[u][j] / walks(i, j);
            }
        }
        assert!((p[&u] - (1.0 - keep)).abs() < 1e-12, "node {u}: {} vs {}", p[&u], 1.0 - keep);
    }
}

#[test]
fn alpha_above_bound_diverges() {
    let g = Graph::from_edges(11, (0..11).flat_map(|i| (i + 1..11).map(move |j| (i, j)))).unwrap();
    assert!(matches!(check_alpha(&g, 0.2), Err(IbError::Divergence { .. })));
    assert!(matches!(path_weight_matrix(&g, 0.11), Err(IbError::Divergence { .. })));
    assert!(check_alpha(&g, 0.099).is_ok());
}

#[test]
fn fewer_than_two_anchors_give_zero() {
    let g = generate(GraphModel::BarabasiAlbert { n: 30, k: 2 }, 1).unwrap();
    let cols = AnchorColumns::solve(&g, 0.05, &[4]).unwrap();
    assert!(cols.infection_probability().values().all(|&p| p == 0.0));
    let none = AnchorColumns::solve(&g, 0.05, &[]).unwrap();
    assert_eq!(none.infection_probability().len(), 30);
}
