//! Pruning hidden nodes that observed-susceptible nodes cut off from every
//! observed infection.

use latent_infection::cascade::{observe, simulate_si, Observation};
use latent_infection::graph::{generate, Graph, GraphModel};
use latent_infection::reduction::reduce_property1;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // 1-2, 1-3, 2-4, 3-4, 4-5, 5-6, 6-7 with 1 and 4 infected, 5 susceptible
    let g = Graph::from_edges(7, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6)])?;
    let obs = Observation::from_sets(7, &[0, 3], &[4]);
    let red = reduce_property1(&g, &obs)?;
    for (v, verdict) in red.verdicts(&obs).iter().enumerate() {
        println!("node {}: {}", v + 1, verdict.as_str());
    }

    let g = generate(GraphModel::WattsStrogatz { n: 1000, k: 4, beta: 0.05 }, 3)?;
    let mut pruned = 0;
    let mut hidden = 0;
    for run in 0..20 {
        let c = simulate_si(&g, 0.5, 0.1, run)?;
        let obs = observe(&c, &g, 0.15, run + 100);
        let red = reduce_property1(&g, &obs)?;
        assert!(red.deterministic_susceptible().iter().all(|&v| !c.is_infected(v)));
        pruned += red.deterministic_susceptible().len();
        hidden += obs.hidden().len();
    }
    println!(
        "ws(1000,4,0.05): {pruned} of {hidden} hidden nodes proven susceptible over 20 runs ({:.1}%)",
        100.0 * pruned as f64 / hidden as f64
    );
    Ok(())
}
