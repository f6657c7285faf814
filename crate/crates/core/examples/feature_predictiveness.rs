//! Mean F of every classifier trained on one feature at a time.

use latent_infection::classifiers::ClassifierKind;
use latent_infection::eval::{feature_predictiveness, Network, Protocol};
use latent_infection::graph::{generate, GraphModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(GraphModel::WattsStrogatz { n: 1000, k: 4, beta: 0.1 }, 1)?;
    let net = Network::new("ws", g)?;
    let protocol = Protocol {
        n_train_runs: 10,
        n_test_runs: 20,
        classifiers: vec![ClassifierKind::Gnb, ClassifierKind::C45],
        ..Protocol::default()
    };
    let m = feature_predictiveness(&net, &protocol, 1)?;
    print!("{:>6}", "");
    for f in &m.features {
        print!("{:>8}", f.name());
    }
    println!();
    for (kind, row) in m.classifiers.iter().zip(&m.f_mean) {
        print!("{kind:>6}");
        for v in row {
            print!("{v:>8.3}");
        }
        println!();
    }
    for &kind in &m.classifiers {
        let best: Vec<&str> = m.best_features(kind).iter().map(|f| f.name()).collect();
        println!("best for {kind}: {}", best.join(", "));
    }
    Ok(())
}
