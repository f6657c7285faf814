//! Metrics, the train/test simulation protocol, observed-fraction sweeps,
//! per-feature predictiveness and rank correlation.

mod metrics;
mod output;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use metrics::{average_ranks, f_measure, mean_and_se, rank_correlation, score, Confusion};
pub use output::{
    write_predictions_csv, write_predictiveness_csv, write_results_csv, write_summary_csv, write_sweep_dat, RESULTS_HEADER,
    PREDICTIONS_HEADER, SUMMARY_HEADER,
};

use crate::cascade::{observe, simulate_si, Cascade, CascadeError, Observation};
use crate::classifiers::{self, ClassifierError, ClassifierKind, Dataset, Prediction};
use crate::features::{build_features_with_probabilities, Feature, FeatureError, FeatureMatrix, FeatureSet, TopologyFeatures};
use crate::graph::Graph;
use crate::ib::{check_alpha, spectral_radius, AnchorColumns, IbError};
use crate::reduction::{reduce_property1, ReducedGraph, ReductionError};
use crate::rng::{derive_seed, stage};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Cascade(#[from] CascadeError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Ib(#[from] IbError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("predictions do not cover the hidden nodes: {0}")]
    Coverage(String),
    #[error("rank correlation is undefined when a rank vector is constant")]
    UndefinedCorrelation,
}

/// Graph on which centralities are computed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentralityScope {
    #[default]
    Original,
    Reduced,
}

impl std::str::FromStr for CentralityScope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "original" => Ok(CentralityScope::Original),
            "reduced" => Ok(CentralityScope::Reduced),
            other => Err(format!("unknown centrality scope `{other}` (original or reduced)")),
        }
    }
}

/// Simulation and classification settings of one experiment cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Protocol {
    pub lambda: f64,
    pub stop_fraction: f64,
    pub observed_fraction: f64,
    pub alpha: f64,
    pub n_train_runs: usize,
    pub n_test_runs: usize,
    pub classifiers: Vec<ClassifierKind>,
    pub feature_sets: Vec<FeatureSet>,
    pub centrality_scope: CentralityScope,
}

impl Default for Protocol {
    fn default() -> Self {
        Protocol {
            lambda: 0.5,
            stop_fraction: 0.1,
            observed_fraction: 0.15,
            alpha: 0.01,
            n_train_runs: 30,
            n_test_runs: 70,
            classifiers: vec![
                ClassifierKind::Gnb,
                ClassifierKind::Nbk,
                ClassifierKind::C45,
                ClassifierKind::Random(0.1),
            ],
            feature_sets: vec![FeatureSet::all()],
            centrality_scope: CentralityScope::Original,
        }
    }
}

impl Protocol {
    pub fn validate(&self) -> Result<(), EvalError> {
        let bad = |msg: String| Err(EvalError::InvalidProtocol(msg));
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if !(self.stop_fraction > 0.0 && self.stop_fraction <= 1.0) {
            return bad(format!("stop fraction must lie in (0, 1], got {}", self.stop_fraction));
        }
        if !(self.observed_fraction > 0.0 && self.observed_fraction < 1.0) {
            return bad(format!(
                "observed fraction must lie in (0, 1), got {}",
                self.observed_fraction
            ));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return bad(format!("alpha must be non-negative, got {}", self.alpha));
        }
        if self.n_train_runs == 0 || self.n_test_runs == 0 {
            return bad("need at least one training and one test run".into());
        }
        if self.classifiers.is_empty() || self.feature_sets.is_empty() {
            return bad("need at least one classifier and one feature set".into());
        }
        Ok(())
    }

    pub fn total_runs(&self) -> usize {
        self.n_train_runs + self.n_test_runs
    }
}

/// A named graph with its observation-independent centralities and
/// spectral radius cached.
#[derive(Debug, Clone)]
pub struct Network {
    name: String,
    graph: Graph,
    topology: TopologyFeatures,
    spectral_radius: f64,
}

impl Network {
    pub fn new(name: impl Into<String>, graph: Graph) -> Result<Self, EvalError> {
        let topology = TopologyFeatures::compute(&graph)?;
        let spectral_radius = spectral_radius(&graph)?;
        Ok(Network {
            name: name.into(),
            graph,
            topology,
            spectral_radius,
        })
    }

    pub fn spectral_radius(&self) -> f64 {
        self.spectral_radius
    }

    /// Reject an `alpha` whose walk series diverges on the whole network.
    /// Reduced graphs are subgraphs, so their spectral radius is no larger.
    pub fn check_alpha(&self, alpha: f64) -> Result<(), IbError> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(IbError::InvalidAlpha(alpha));
        }
        if alpha * self.spectral_radius >= 1.0 {
            return Err(IbError::Divergence {
                alpha,
                spectral_radius: self.spectral_radius,
                bound: 1.0 / self.spectral_radius,
            });
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn topology(&self) -> &TopologyFeatures {
        &self.topology
    }
}

/// Everything one simulated run produces.
#[derive(Debug, Clone)]
pub struct RunData {
    pub run: usize,
    pub cascade: Cascade,
    pub observation: Observation,
    pub reduced: ReducedGraph,
    /// Labeled rows for every hidden node, all six features.
    pub features: FeatureMatrix,
}

/// Infection probabilities on the reduced graph. Fewer than two anchors
/// give no pairs, so every node gets 0; `alpha` is still checked.
pub fn reduced_probabilities(red: &ReducedGraph, alpha: f64) -> Result<BTreeMap<usize, f64>, IbError> {
    let anchors = red.retained_observed_infected();
    if anchors.len() < 2 {
        check_alpha(red.graph(), alpha)?;
        return Ok(BTreeMap::new());
    }
    Ok(AnchorColumns::solve(red.graph(), alpha, anchors)?.infection_probability())
}

/// Simulate, observe, reduce and featurize run `run` of an experiment.
/// Seeds depend only on `(master_seed, run)`.
pub fn simulate_run(net: &Network, protocol: &Protocol, master_seed: u64, run: usize) -> Result<RunData, EvalError> {
    net.check_alpha(protocol.alpha)?;
    let g = net.graph();
    let cascade = simulate_si(
        g,
        protocol.lambda,
        protocol.stop_fraction,
        derive_seed(master_seed, run as u64, stage::CASCADE),
    )?;
    let observation = observe(
        &cascade,
        g,
        protocol.observed_fraction,
        derive_seed(master_seed, run as u64, stage::OBSERVE),
    );
    let reduced = reduce_property1(g, &observation)?;
    let probabilities = reduced_probabilities(&reduced, protocol.alpha)?;
    let scoped;
    let topology = match protocol.centrality_scope {
        CentralityScope::Original => net.topology(),
        CentralityScope::Reduced => {
            scoped = TopologyFeatures::on_reduced(&reduced)?;
            &scoped
        }
    };
    let features =
        build_features_with_probabilities(g, topology, &observation, &reduced, &probabilities, Some(&cascade))?;
    Ok(RunData {
        run,
        cascade,
        observation,
        reduced,
        features,
    })
}

/// Simulate runs `0..total_runs` in parallel; order is preserved.
pub fn simulate_runs(net: &Network, protocol: &Protocol, master_seed: u64) -> Result<Vec<RunData>, EvalError> {
    protocol.validate()?;
    (0..protocol.total_runs())
        .into_par_iter()
        .map(|run| simulate_run(net, protocol, master_seed, run))
        .collect()
}

/// Scores of one classifier on one test run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub network: String,
    pub classifier: ClassifierKind,
    pub features: FeatureSet,
    pub observed_fraction: f64,
    pub infected_fraction: f64,
    pub run: usize,
    pub confusion: Confusion,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// Per-node predictions of this run.
    #[serde(skip)]
    pub predictions: Vec<Prediction>,
}

/// Aggregate over the test runs of one (classifier, feature set) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub network: String,
    pub classifier: ClassifierKind,
    pub features: FeatureSet,
    pub observed_fraction: f64,
    pub runs: usize,
    pub precision_mean: f64,
    pub precision_se: f64,
    pub recall_mean: f64,
    pub recall_se: f64,
    pub f_mean: f64,
    pub f_se: f64,
    /// Confusion counts summed over runs.
    pub pooled: Confusion,
}

impl Summary {
    fn from_reports(reports: &[EvalReport]) -> Summary {
        let first = &reports[0];
        let col = |f: fn(&EvalReport) -> f64| reports.iter().map(f).collect::<Vec<_>>();
        let (precision_mean, precision_se) = mean_and_se(&col(|r| r.precision));
        let (recall_mean, recall_se) = mean_and_se(&col(|r| r.recall));
        let (f_mean, f_se) = mean_and_se(&col(|r| r.f_measure));
        let mut pooled = Confusion::default();
        for r in reports {
            pooled.add(&r.confusion);
        }
        Summary {
            network: first.network.clone(),
            classifier: first.classifier,
            features: first.features.clone(),
            observed_fraction: first.observed_fraction,
            runs: reports.len(),
            precision_mean,
            precision_se,
            recall_mean,
            recall_se,
            f_mean,
            f_se,
            pooled,
        }
    }
}

/// Reports of one experiment cell, grouped by feature set, then classifier,
/// then test run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Experiment {
    pub reports: Vec<EvalReport>,
    pub summaries: Vec<Summary>,
}

impl Experiment {
    pub fn summary(&self, classifier: ClassifierKind, features: &FeatureSet) -> Option<&Summary> {
        self.summaries
            .iter()
            .find(|s| s.classifier == classifier && &s.features == features)
    }
}

/// Train on the pooled training runs and score every test run.
pub fn run_experiment(net: &Network, protocol: &Protocol, master_seed: u64) -> Result<Experiment, EvalError> {
    let runs = simulate_runs(net, protocol, master_seed)?;
    evaluate_runs(net, protocol, master_seed, &runs)
}

/// [`run_experiment`] on runs that were already simulated with the same
/// protocol and seed.
pub fn evaluate_runs(
    net: &Network,
    protocol: &Protocol,
    master_seed: u64,
    runs: &[RunData],
) -> Result<Experiment, EvalError> {
    protocol.validate()?;
    if runs.len() != protocol.total_runs() {
        return Err(EvalError::InvalidInput(format!(
            "expected {} runs, got {}",
            protocol.total_runs(),
            runs.len()
        )));
    }
    let (train, test) = runs.split_at(protocol.n_train_runs);
    let train_matrix = FeatureMatrix::concat(train.iter().map(|r| &r.features))?;
    let mut reports = Vec::new();
    let mut summaries = Vec::new();
    for set in &protocol.feature_sets {
        let train_set = Dataset::from_features(&train_matrix, set);
        let test_sets: Vec<Dataset> = test.iter().map(|r| Dataset::from_features(&r.features, set)).collect();
        for &kind in &protocol.classifiers {
            let model = classifiers::fit(kind, &train_set, derive_seed(master_seed, 0, stage::FIT))?;
            let cell: Vec<EvalReport> = test
                .par_iter()
                .zip(&test_sets)
                .map(|(run, rows)| {
                    let preds = classifiers::predict(
                        &model,
                        rows,
                        derive_seed(master_seed, run.run as u64, stage::PREDICT),
                    )?;
                    let confusion = score(&preds, &run.cascade, run.observation.hidden())?;
                    Ok(EvalReport {
                        network: net.name().to_string(),
                        classifier: kind,
                        features: set.clone(),
                        observed_fraction: protocol.observed_fraction,
                        infected_fraction: protocol.stop_fraction,
                        run: run.run,
                        confusion,
                        precision: confusion.precision(),
                        recall: confusion.recall(),
                        f_measure: confusion.f_measure(),
                        predictions: preds,
                    })
                })
                .collect::<Result<_, EvalError>>()?;
            summaries.push(Summary::from_reports(&cell));
            reports.extend(cell);
        }
    }
    Ok(Experiment { reports, summaries })
}

/// Predictions of `model` for the hidden nodes of one run.
pub fn predict_run(model: &classifiers::Model, run: &RunData, set: &FeatureSet, seed: u64) -> Result<Vec<Prediction>, EvalError> {
    let rows = Dataset::from_features(&run.features, set);
    Ok(classifiers::predict(model, &rows, seed)?)
}

/// One experiment per observed fraction, all with the same master seed, so
/// the cascades are shared and only the observations change.
pub fn sweep_observed_fraction(
    net: &Network,
    fractions: &[f64],
    protocol: &Protocol,
    master_seed: u64,
) -> Result<Vec<Experiment>, EvalError> {
    if fractions.is_empty() {
        return Err(EvalError::InvalidInput("no observed fractions".into()));
    }
    fractions
        .iter()
        .map(|&f| {
            let p = Protocol {
                observed_fraction: f,
                ..protocol.clone()
            };
            run_experiment(net, &p, master_seed)
        })
        .collect()
}

/// Mean F of each classifier trained on each single feature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictivenessMatrix {
    pub network: String,
    pub classifiers: Vec<ClassifierKind>,
    pub features: Vec<Feature>,
    /// `f_mean[c][f]` for classifier `c` and feature `f`.
    pub f_mean: Vec<Vec<f64>>,
}

impl PredictivenessMatrix {
    pub fn get(&self, classifier: ClassifierKind, feature: Feature) -> Option<f64> {
        let c = self.classifiers.iter().position(|&k| k == classifier)?;
        let f = self.features.iter().position(|&x| x == feature)?;
        Some(self.f_mean[c][f])
    }

    /// Features with the highest mean F for `classifier`.
    pub fn best_features(&self, classifier: ClassifierKind) -> Vec<Feature> {
        let Some(c) = self.classifiers.iter().position(|&k| k == classifier) else {
            return Vec::new();
        };
        let row = &self.f_mean[c];
        let top = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.features
            .iter()
            .zip(row)
            .filter(|(_, &v)| v == top)
            .map(|(&f, _)| f)
            .collect()
    }
}

/// Run the protocol once per single feature, sharing the simulated runs.
/// `protocol.feature_sets` is ignored.
pub fn feature_predictiveness(
    net: &Network,
    protocol: &Protocol,
    master_seed: u64,
) -> Result<PredictivenessMatrix, EvalError> {
    let p = Protocol {
        feature_sets: Feature::ALL.iter().map(|&f| FeatureSet::single(f)).collect(),
        ..protocol.clone()
    };
    let exp = run_experiment(net, &p, master_seed)?;
    let f_mean = p
        .classifiers
        .iter()
        .map(|&kind| {
            Feature::ALL
                .iter()
                .map(|&f| exp.summary(kind, &FeatureSet::single(f)).map_or(0.0, |s| s.f_mean))
                .collect()
        })
        .collect();
    Ok(PredictivenessMatrix {
        network: net.name().to_string(),
        classifiers: p.classifiers.clone(),
        features: Feature::ALL.to_vec(),
        f_mean,
    })
}
