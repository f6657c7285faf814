//! Mean F of each classifier as the observed fraction grows, printed as
//! gnuplot data.

use latent_infection::classifiers::ClassifierKind;
use latent_infection::eval::{sweep_observed_fraction, write_sweep_dat, Network, Protocol};
use latent_infection::graph::{generate, GraphModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(GraphModel::BarabasiAlbert { n: 1000, k: 2 }, 1)?;
    let net = Network::new("ba", g)?;
    let protocol = Protocol {
        n_train_runs: 10,
        n_test_runs: 20,
        classifiers: vec![ClassifierKind::Gnb, ClassifierKind::C45, ClassifierKind::Random(0.1)],
        ..Protocol::default()
    };
    let fractions = [0.05, 0.10, 0.15, 0.20, 0.25];
    let sweep = sweep_observed_fraction(&net, &fractions, &protocol, 1)?;
    let summaries: Vec<_> = sweep.into_iter().flat_map(|e| e.summaries).collect();
    write_sweep_dat(std::io::stdout().lock(), &summaries)?;
    Ok(())
}
