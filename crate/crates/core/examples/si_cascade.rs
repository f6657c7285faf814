//! One SI cascade on a scale-free graph and a partial observation of it.

use latent_infection::cascade::{observe, simulate_si, NodeState};
use latent_infection::graph::{generate, GraphModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(GraphModel::BarabasiAlbert { n: 500, k: 2 }, 7)?;
    let cascade = simulate_si(&g, 0.5, 0.1, 42)?;
    println!(
        "seed node {} (degree {}), {} infected",
        cascade.seed_node(),
        g.degree(cascade.seed_node()),
        cascade.infected().len()
    );
    for &v in cascade.infected().iter().take(10) {
        println!("  node {v:>3} infected at t = {:.3}", cascade.infection_time(v).unwrap());
    }

    let obs = observe(&cascade, &g, 0.15, 43);
    let count = |s: NodeState| obs.states().iter().filter(|&&x| x == s).count();
    println!(
        "observed {} infected, {} susceptible; {} hidden",
        count(NodeState::ObservedInfected),
        count(NodeState::ObservedSusceptible),
        count(NodeState::Hidden)
    );

    let mut csv = Vec::new();
    cascade.write_csv(&g, &mut csv)?;
    println!("{}", String::from_utf8(csv)?.lines().take(3).collect::<Vec<_>>().join("\n"));
    Ok(())
}
