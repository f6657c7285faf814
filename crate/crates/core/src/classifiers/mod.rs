//! Gaussian naive Bayes, kernel-density naive Bayes, a C4.5-style decision
//! tree, and the biased-coin baseline.
//!
//! Class index 0 is susceptible and 1 is infected throughout.

mod c45;
mod gnb;
mod nbk;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use c45::{best_split, DecisionTree, SplitChoice, TreeNode, TreeParams};
pub use gnb::{GaussianNb, VARIANCE_FLOOR};
pub use nbk::{FeatureKernel, KernelNb};

use crate::features::{FeatureMatrix, FeatureSet};
use crate::rng;

pub const MODEL_FORMAT: &str = "latent-infection-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("training set has no {0} instances")]
    MissingClass(&'static str),
    #[error("training rows must be labeled")]
    Unlabeled,
    #[error("model expects features {expected:?} but rows have {found:?}")]
    ShapeMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("row {row} has {found} values, expected {expected}")]
    RowWidth {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("unknown classifier `{0}` (expected gnb, nbk, c45 or random(q))")]
    UnknownKind(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("model file: {0}")]
    Format(String),
}

pub(crate) fn class_name(class: usize) -> &'static str {
    if class == 1 {
        "infected"
    } else {
        "susceptible"
    }
}

/// Which classifier to train.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ClassifierKind {
    Gnb,
    Nbk,
    C45,
    /// Declares each node infected with probability `q`.
    Random(f64),
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifierKind::Gnb => f.pad("gnb"),
            ClassifierKind::Nbk => f.pad("nbk"),
            ClassifierKind::C45 => f.pad("c45"),
            ClassifierKind::Random(q) => f.pad(&format!("random({q})")),
        }
    }
}

impl FromStr for ClassifierKind {
    type Err = ClassifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "gnb" => return Ok(ClassifierKind::Gnb),
            "nbk" => return Ok(ClassifierKind::Nbk),
            "c45" => return Ok(ClassifierKind::C45),
            "random" => return Ok(ClassifierKind::Random(0.1)),
            _ => {}
        }
        let q = s
            .strip_prefix("random(")
            .and_then(|rest| rest.strip_suffix(')'))
            .and_then(|q| q.parse::<f64>().ok())
            .ok_or_else(|| ClassifierError::UnknownKind(s.clone()))?;
        if !(0.0..=1.0).contains(&q) {
            return Err(ClassifierError::InvalidParameter(format!(
                "random rate {q} outside [0, 1]"
            )));
        }
        Ok(ClassifierKind::Random(q))
    }
}

impl TryFrom<String> for ClassifierKind {
    type Error = ClassifierError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<ClassifierKind> for String {
    fn from(value: ClassifierKind) -> Self {
        value.to_string()
    }
}

/// Row-major feature values with named columns and optional labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    feature_names: Vec<String>,
    values: Vec<f64>,
    labels: Option<Vec<bool>>,
    nodes: Vec<usize>,
}

impl Dataset {
    pub fn new(
        feature_names: Vec<String>,
        rows: &[Vec<f64>],
        labels: Option<Vec<bool>>,
    ) -> Result<Self, ClassifierError> {
        let width = feature_names.len();
        for (row, values) in rows.iter().enumerate() {
            if values.len() != width {
                return Err(ClassifierError::RowWidth {
                    row,
                    expected: width,
                    found: values.len(),
                });
            }
        }
        if let Some(l) = &labels {
            if l.len() != rows.len() {
                return Err(ClassifierError::InvalidParameter(format!(
                    "{} labels for {} rows",
                    l.len(),
                    rows.len()
                )));
            }
        }
        Ok(Dataset {
            feature_names,
            values: rows.concat(),
            labels,
            nodes: (0..rows.len()).collect(),
        })
    }

    /// Project a feature matrix onto `set`, keeping node ids and labels.
    pub fn from_features(matrix: &FeatureMatrix, set: &FeatureSet) -> Self {
        let columns: Vec<usize> = set.features().iter().map(|f| f.index()).collect();
        let values = matrix
            .rows()
            .iter()
            .flat_map(|r| columns.iter().map(move |&c| r.values[c]))
            .collect();
        let labels = matrix
            .is_labeled()
            .then(|| matrix.rows().iter().map(|r| r.label.unwrap()).collect());
        Dataset {
            feature_names: set.names(),
            values,
            labels,
            nodes: matrix.rows().iter().map(|r| r.node).collect(),
        }
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn width(&self) -> usize {
        self.feature_names.len()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.width();
        &self.values[i * w..(i + 1) * w]
    }

    pub fn value(&self, i: usize, feature: usize) -> f64 {
        self.values[i * self.width() + feature]
    }

    pub fn labels(&self) -> Option<&[bool]> {
        self.labels.as_deref()
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    fn require_labels(&self) -> Result<&[bool], ClassifierError> {
        if self.is_empty() {
            return Err(ClassifierError::EmptyTrainingSet);
        }
        self.labels().ok_or(ClassifierError::Unlabeled)
    }
}

/// One classified node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub node: usize,
    pub infected: bool,
    pub posterior_infected: f64,
}

/// Decision rule for probabilistic models: infected iff the posterior is
/// strictly above one half, so exact ties go to susceptible.
pub fn decide(posterior_infected: f64) -> bool {
    posterior_infected > 0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelParams {
    Gnb(GaussianNb),
    Nbk(KernelNb),
    C45(DecisionTree),
    Random { q: f64 },
}

/// A fitted classifier plus the feature columns it was trained on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    format: String,
    version: u32,
    feature_names: Vec<String>,
    params: ModelParams,
}

impl Model {
    pub fn kind(&self) -> ClassifierKind {
        match &self.params {
            ModelParams::Gnb(_) => ClassifierKind::Gnb,
            ModelParams::Nbk(_) => ClassifierKind::Nbk,
            ModelParams::C45(_) => ClassifierKind::C45,
            ModelParams::Random { q } => ClassifierKind::Random(*q),
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Class posteriors `[susceptible, infected]` of one row. The random
    /// baseline reports `[1 - q, q]`.
    pub fn posteriors(&self, row: &[f64]) -> [f64; 2] {
        match &self.params {
            ModelParams::Gnb(m) => m.posteriors(row),
            ModelParams::Nbk(m) => m.posteriors(row),
            ModelParams::C45(m) => m.posteriors(row),
            ModelParams::Random { q } => [1.0 - q, *q],
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ClassifierError> {
        let model: Model =
            serde_json::from_str(text).map_err(|e| ClassifierError::Format(e.to_string()))?;
        if model.format != MODEL_FORMAT {
            return Err(ClassifierError::Format(format!(
                "expected format `{MODEL_FORMAT}`, found `{}`",
                model.format
            )));
        }
        if model.version != MODEL_VERSION {
            return Err(ClassifierError::Format(format!(
                "unsupported model version {}",
                model.version
            )));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ClassifierError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| ClassifierError::Format(format!("{}: {e}", path.as_ref().display())))?;
        Model::from_json(&text)
    }
}

/// Fit a classifier of `kind` on labeled rows. The C4.5 tree uses
/// [`TreeParams::default`].
pub fn fit(kind: ClassifierKind, train: &Dataset, _rng_seed: u64) -> Result<Model, ClassifierError> {
    let params = match kind {
        ClassifierKind::Gnb => ModelParams::Gnb(GaussianNb::fit(train)?),
        ClassifierKind::Nbk => ModelParams::Nbk(KernelNb::fit(train)?),
        ClassifierKind::C45 => ModelParams::C45(DecisionTree::fit(train, TreeParams::default())?),
        ClassifierKind::Random(q) => {
            if !(0.0..=1.0).contains(&q) {
                return Err(ClassifierError::InvalidParameter(format!(
                    "random rate {q} outside [0, 1]"
                )));
            }
            if train.is_empty() {
                return Err(ClassifierError::EmptyTrainingSet);
            }
            ModelParams::Random { q }
        }
    };
    Ok(Model::from_params(train.feature_names().to_vec(), params))
}

impl Model {
    pub fn from_params(feature_names: Vec<String>, params: ModelParams) -> Self {
        Model {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            feature_names,
            params,
        }
    }
}

/// Classify every row. Probabilistic models use [`decide`]; the random
/// baseline draws its labels from `rng_seed`.
pub fn predict(model: &Model, rows: &Dataset, rng_seed: u64) -> Result<Vec<Prediction>, ClassifierError> {
    if rows.feature_names() != model.feature_names() {
        return Err(ClassifierError::ShapeMismatch {
            expected: model.feature_names().to_vec(),
            found: rows.feature_names().to_vec(),
        });
    }
    if let ModelParams::Random { q } = model.params {
        let mut rng = rng::from_seed(rng_seed);
        return Ok(rows
            .nodes()
            .iter()
            .map(|&node| Prediction {
                node,
                infected: rng.random::<f64>() < q,
                posterior_infected: q,
            })
            .collect());
    }
    Ok((0..rows.len())
        .into_par_iter()
        .map(|i| {
            let posterior = model.posteriors(rows.row(i))[1];
            Prediction {
                node: rows.nodes()[i],
                infected: decide(posterior),
                posterior_infected: posterior,
            }
        })
        .collect())
}

/// Log-space two-class softmax.
pub(crate) fn normalize_log(log_joint: [f64; 2]) -> [f64; 2] {
    let top = log_joint[0].max(log_joint[1]);
    let e0 = (log_joint[0] - top).exp();
    let e1 = (log_joint[1] - top).exp();
    let z = e0 + e1;
    [e0 / z, e1 / z]
}

/// Class counts and frequency priors of labeled data.
pub(crate) fn class_priors(labels: &[bool]) -> ([usize; 2], [f64; 2]) {
    let infected = labels.iter().filter(|&&l| l).count();
    let counts = [labels.len() - infected, infected];
    let total = labels.len() as f64;
    (counts, [counts[0] as f64 / total, counts[1] as f64 / total])
}

/// Column `feature` of the rows of class `class`, sorted ascending.
pub(crate) fn sorted_class_column(data: &Dataset, labels: &[bool], class: usize, feature: usize) -> Vec<f64> {
    let mut values: Vec<f64> = (0..data.len())
        .filter(|&i| usize::from(labels[i]) == class)
        .map(|i| data.value(i, feature))
        .collect();
    values.sort_by(f64::total_cmp);
    values
}
