//! The six per-node features of one simulated run, written as CSV.

use latent_infection::eval::{simulate_run, Network, Protocol};
use latent_infection::features::Feature;
use latent_infection::graph::{generate, GraphModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(GraphModel::WattsStrogatz { n: 300, k: 4, beta: 0.1 }, 2)?;
    let net = Network::new("ws", g)?;
    let run = simulate_run(&net, &Protocol::default(), 1, 0)?;
    println!(
        "{} hidden nodes, {} observed infected, {} pruned",
        run.features.len(),
        run.observation.observed_infected().len(),
        run.reduced.deterministic_susceptible().len()
    );

    let infected: Vec<_> = run.features.rows().iter().filter(|r| r.label == Some(true)).collect();
    let others: Vec<_> = run.features.rows().iter().filter(|r| r.label == Some(false)).collect();
    for f in Feature::ALL {
        let mean = |rows: &[&latent_infection::features::FeatureVector]| {
            rows.iter().map(|r| r.get(f)).sum::<f64>() / rows.len().max(1) as f64
        };
        println!("{:>3}: infected {:.4}  susceptible {:.4}", f.name(), mean(&infected), mean(&others));
    }

    let mut out = std::io::stdout().lock();
    run.features.write_csv(&mut out, |v| net.graph().label(v))?;
    Ok(())
}
