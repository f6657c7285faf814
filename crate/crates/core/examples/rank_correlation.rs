//! Spearman correlation between network characteristics and classifier
//! performance across synthetic topologies.

use latent_infection::classifiers::ClassifierKind;
use latent_infection::eval::{rank_correlation, run_experiment, Network, Protocol};
use latent_infection::graph::{generate, network_stats, GraphModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let models = [
        GraphModel::WattsStrogatz { n: 1000, k: 4, beta: 0.05 },
        GraphModel::WattsStrogatz { n: 1000, k: 6, beta: 0.2 },
        GraphModel::ErdosRenyi { n: 1000, p: 0.006 },
        GraphModel::BarabasiAlbert { n: 1000, k: 3 },
        GraphModel::BarabasiAlbert { n: 1000, k: 2 },
    ];
    let protocol = Protocol {
        n_train_runs: 10,
        n_test_runs: 20,
        classifiers: vec![ClassifierKind::Gnb],
        ..Protocol::default()
    };
    let (mut c, mut sigma, mut s, mut f) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for model in models {
        let g = generate(model, 1)?;
        let stats = network_stats(&g);
        let exp = run_experiment(&Network::new(model.to_string(), g)?, &protocol, 1)?;
        let score = exp.summaries[0].f_mean;
        println!(
            "{model:<16} c {:.3}  sigma {:.3}  s {:>6.3}  F {score:.3}",
            stats.c,
            stats.sigma,
            stats.s
        );
        c.push(stats.c);
        sigma.push(stats.sigma);
        s.push(stats.s);
        f.push(score);
    }
    println!("clustering {:+.2}", rank_correlation(&c, &f)?);
    println!("degree sd  {:+.2}", rank_correlation(&sigma, &f)?);
    println!("skewness   {:+.2}", rank_correlation(&s, &f)?);
    Ok(())
}
