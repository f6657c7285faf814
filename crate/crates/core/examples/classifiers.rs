//! Train every classifier on pooled runs and score it on held-out runs.

use latent_infection::classifiers::{fit, predict, ClassifierKind, Dataset, Model};
use latent_infection::eval::{score, simulate_runs, Confusion, Network, Protocol};
use latent_infection::features::{FeatureMatrix, FeatureSet};
use latent_infection::graph::{generate, GraphModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(GraphModel::WattsStrogatz { n: 1000, k: 4, beta: 0.1 }, 1)?;
    let net = Network::new("ws", g)?;
    let protocol = Protocol {
        n_train_runs: 10,
        n_test_runs: 10,
        ..Protocol::default()
    };
    let runs = simulate_runs(&net, &protocol, 9)?;
    let (train, test) = runs.split_at(protocol.n_train_runs);
    let set = FeatureSet::all();
    let pooled = FeatureMatrix::concat(train.iter().map(|r| &r.features))?;
    let train_set = Dataset::from_features(&pooled, &set);
    println!("{} training rows", train_set.len());

    for kind in [ClassifierKind::Gnb, ClassifierKind::Nbk, ClassifierKind::C45, ClassifierKind::Random(0.1)] {
        let model = fit(kind, &train_set, 0)?;
        let mut total = Confusion::default();
        for (i, run) in test.iter().enumerate() {
            let rows = Dataset::from_features(&run.features, &set);
            let preds = predict(&model, &rows, i as u64)?;
            total.add(&score(&preds, &run.cascade, run.observation.hidden())?);
        }
        println!(
            "{kind:>12}: precision {:.3} recall {:.3} F {:.3}",
            total.precision(),
            total.recall(),
            total.f_measure()
        );
        // models survive a JSON round trip unchanged
        assert_eq!(Model::from_json(&model.to_json())?, model);
    }
    Ok(())
}
