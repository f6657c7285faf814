//! Walk-based infection probabilities between observed infected nodes.

use latent_infection::graph::{generate, Graph, GraphModel};
use latent_infection::ib::{
    infection_betweenness, infection_probability, path_weight_matrix, spectral_radius, AnchorColumns,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a path 0-1-2-3-4 with both ends infected
    let path = Graph::from_edges(5, (0..4).map(|i| (i, i + 1)))?;
    let pwm = path_weight_matrix(&path, 0.3)?;
    for u in 0..5 {
        println!("B_{u}(0, 4) = {:.4}", infection_betweenness(&pwm, u, 0, 4)?);
    }
    for (u, p) in infection_probability(&pwm, &[0, 4]) {
        println!("P({u}) = {p:.4}");
    }

    let g = generate(GraphModel::BarabasiAlbert { n: 2000, k: 2 }, 5)?;
    let rho = spectral_radius(&g)?;
    println!("ba(2000,2): spectral radius {rho:.3}, alpha must stay below {:.4}", 1.0 / rho);
    let anchors = [0, 17, 250, 1999];
    let probs = AnchorColumns::solve(&g, 0.01, &anchors)?.infection_probability();
    let mut top: Vec<(usize, f64)> = probs.into_iter().collect();
    top.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (u, p) in top.iter().take(5) {
        println!("  node {u:>4}: P = {p:.4}, degree {}", g.degree(*u));
    }
    Ok(())
}
