//! Topology statistics of edge-list files, or of three generated graphs when
//! no paths are given.
//!
//! ```text
//! cargo run --release --example network_stats -- data/yeast.txt
//! ```

use latent_infection::graph::{generate, network_stats, read_edge_list, Graph, GraphModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let paths: Vec<String> = std::env::args().skip(1).collect();
    let graphs: Vec<(String, Graph)> = if paths.is_empty() {
        [
            GraphModel::ErdosRenyi { n: 1000, p: 0.004 },
            GraphModel::BarabasiAlbert { n: 1000, k: 2 },
            GraphModel::WattsStrogatz { n: 1000, k: 4, beta: 0.1 },
        ]
        .into_iter()
        .map(|m| Ok((m.to_string(), generate(m, 1)?)))
        .collect::<Result<_, latent_infection::graph::GraphError>>()?
    } else {
        paths
            .iter()
            .map(|p| Ok((p.clone(), read_edge_list(p)?)))
            .collect::<Result<_, latent_infection::graph::GraphError>>()?
    };

    println!("{:<20} {:>7} {:>7} {:>8} {:>8} {:>8} {:>4}", "network", "n", "m", "c", "sigma", "s", "d");
    for (name, g) in &graphs {
        let s = network_stats(g);
        println!(
            "{:<20} {:>7} {:>7} {:>8.4} {:>8.4} {:>8.4} {:>4}",
            name, s.n, s.m, s.c, s.sigma, s.s, s.d
        );
    }
    Ok(())
}
