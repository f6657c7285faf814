//! Per-node features of hidden nodes.
//!
//! Column order is fixed: `D, R, Cb, Cc, Ce, P`.
//!
//! * `D`  degree over the maximum degree of the graph
//! * `R`  observed-infected neighbors over degree
//! * `Cb` shortest-path betweenness
//! * `Cc` component-restricted closeness
//! * `Ce` eigenvector centrality of the largest component
//! * `P`  infection-betweenness probability on the reduced graph

mod centrality;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use centrality::{betweenness_centrality, closeness_centrality, eigenvector_centrality};

use crate::cascade::{Cascade, NodeState, Observation};
use crate::graph::Graph;
use crate::ib::{infection_probability, PathWeightMatrix};
use crate::reduction::ReducedGraph;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("eigenvector centrality did not converge after {0} iterations")]
    EigenvectorNoConvergence(usize),
    #[error("inconsistent inputs: {0}")]
    Consistency(String),
    #[error("unknown feature `{0}` (expected D, R, Cb, Cc, Ce, P or `all`)")]
    UnknownFeature(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Feature {
    D,
    R,
    Cb,
    Cc,
    Ce,
    P,
}

impl Feature {
    pub const ALL: [Feature; 6] = [
        Feature::D,
        Feature::R,
        Feature::Cb,
        Feature::Cc,
        Feature::Ce,
        Feature::P,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Feature::D => "D",
            Feature::R => "R",
            Feature::Cb => "Cb",
            Feature::Cc => "Cc",
            Feature::Ce => "Ce",
            Feature::P => "P",
        }
    }
}

impl FromStr for Feature {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Feature::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| FeatureError::UnknownFeature(s.to_string()))
    }
}

/// An ordered subset of the six features. Written as `all` or as names
/// joined with `+`, e.g. `P` or `D+R+P`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FeatureSet(Vec<Feature>);

impl FeatureSet {
    pub fn all() -> Self {
        FeatureSet(Feature::ALL.to_vec())
    }

    pub fn single(feature: Feature) -> Self {
        FeatureSet(vec![feature])
    }

    /// Features in canonical column order, duplicates removed.
    pub fn new(mut features: Vec<Feature>) -> Self {
        features.sort();
        features.dedup();
        FeatureSet(features)
    }

    pub fn features(&self) -> &[Feature] {
        &self.0
    }

    pub fn names(&self) -> Vec<String> {
        self.0.iter().map(|f| f.name().to_string()).collect()
    }

    pub fn is_all(&self) -> bool {
        self.0.len() == Feature::ALL.len()
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_all() {
            return f.pad("all");
        }
        let names: Vec<&str> = self.0.iter().map(|x| x.name()).collect();
        f.pad(&names.join("+"))
    }
}

impl FromStr for FeatureSet {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(FeatureSet::all());
        }
        let features = s
            .split('+')
            .map(str::parse)
            .collect::<Result<Vec<Feature>, _>>()?;
        if features.is_empty() {
            return Err(FeatureError::UnknownFeature(s.to_string()));
        }
        Ok(FeatureSet::new(features))
    }
}

impl TryFrom<String> for FeatureSet {
    type Error = FeatureError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<FeatureSet> for String {
    fn from(value: FeatureSet) -> Self {
        value.to_string()
    }
}

/// Observation-independent columns (`D`, `Cb`, `Cc`, `Ce`) for every node of
/// one graph. Computed once and reused across runs.
#[derive(Debug, Clone, PartialEq)]
pub struct TopologyFeatures {
    pub degree: Vec<f64>,
    pub betweenness: Vec<f64>,
    pub closeness: Vec<f64>,
    pub eigenvector: Vec<f64>,
}

impl TopologyFeatures {
    pub fn compute(g: &Graph) -> Result<Self, FeatureError> {
        let max_degree = g.max_degree();
        let degree = (0..g.node_count())
            .map(|v| {
                if max_degree == 0 {
                    0.0
                } else {
                    g.degree(v) as f64 / max_degree as f64
                }
            })
            .collect();
        let eigenvector = eigenvector_centrality(g)?;
        Ok(TopologyFeatures {
            degree,
            betweenness: betweenness_centrality(g),
            closeness: closeness_centrality(g),
            eigenvector,
        })
    }

    pub fn node_count(&self) -> usize {
        self.degree.len()
    }

    /// Topology columns computed on the reduced graph instead, lifted back
    /// to original ids; nodes outside the reduced graph get zeros.
    pub fn on_reduced(red: &ReducedGraph) -> Result<Self, FeatureError> {
        let inner = TopologyFeatures::compute(red.graph())?;
        let n = red.original_node_count();
        let lift = |values: &[f64]| {
            let mut out = vec![0.0; n];
            for (k, &v) in red.to_original().iter().enumerate() {
                out[v] = values[k];
            }
            out
        };
        Ok(TopologyFeatures {
            degree: lift(&inner.degree),
            betweenness: lift(&inner.betweenness),
            closeness: lift(&inner.closeness),
            eigenvector: lift(&inner.eigenvector),
        })
    }
}

/// Feature values of one hidden node.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    /// Node id: the internal graph id when built from a graph, the id from
    /// the file when read from CSV.
    pub node: usize,
    /// Values in [`Feature::ALL`] order.
    pub values: [f64; 6],
    /// `Some(true)` for infected.
    pub label: Option<bool>,
}

impl FeatureVector {
    pub fn get(&self, feature: Feature) -> f64 {
        self.values[feature.index()]
    }
}

/// Rows of hidden-node features; either every row is labeled or none is.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureMatrix {
    rows: Vec<FeatureVector>,
}

pub const CSV_HEADER: &str = "node,D,R,Cb,Cc,Ce,P,label";

impl FeatureMatrix {
    pub fn new(rows: Vec<FeatureVector>) -> Result<Self, FeatureError> {
        let labeled = rows.iter().filter(|r| r.label.is_some()).count();
        if labeled != 0 && labeled != rows.len() {
            return Err(FeatureError::Consistency(
                "rows must be all labeled or all unlabeled".into(),
            ));
        }
        Ok(FeatureMatrix { rows })
    }

    pub fn rows(&self) -> &[FeatureVector] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn feature_names() -> [&'static str; 6] {
        Feature::ALL.map(Feature::name)
    }

    pub fn is_labeled(&self) -> bool {
        self.rows.first().is_some_and(|r| r.label.is_some())
    }

    /// Concatenate matrices (all labeled or all unlabeled).
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a FeatureMatrix>) -> Result<Self, FeatureError> {
        let rows = parts.into_iter().flat_map(|m| m.rows.iter().cloned()).collect();
        FeatureMatrix::new(rows)
    }

    /// Write [`CSV_HEADER`] rows; `node_label` maps row ids to output ids.
    pub fn write_csv<W: Write>(&self, mut out: W, node_label: impl Fn(usize) -> u64) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for row in &self.rows {
            write!(out, "{}", node_label(row.node))?;
            for v in row.values {
                write!(out, ",{v}")?;
            }
            match row.label {
                Some(true) => writeln!(out, ",1")?,
                Some(false) => writeln!(out, ",0")?,
                None => writeln!(out, ",")?,
            }
        }
        Ok(())
    }

    pub fn read_csv(text: &str) -> Result<Self, FeatureError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == CSV_HEADER => {}
            _ => {
                return Err(FeatureError::Parse {
                    line: 1,
                    reason: format!("expected header `{CSV_HEADER}`"),
                })
            }
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = |reason: String| FeatureError::Parse { line: line_no, reason };
            if fields.len() != 8 {
                return Err(bad(format!("expected 8 fields, found {}", fields.len())));
            }
            let node = fields[0]
                .parse::<usize>()
                .map_err(|_| bad(format!("bad node id `{}`", fields[0])))?;
            let mut values = [0.0; 6];
            for (slot, field) in values.iter_mut().zip(&fields[1..7]) {
                *slot = field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad(format!("bad feature value `{field}`")))?;
            }
            let label = match fields[7] {
                "" => None,
                "1" => Some(true),
                "0" => Some(false),
                other => return Err(bad(format!("label must be 0, 1 or empty, got `{other}`"))),
            };
            rows.push(FeatureVector { node, values, label });
        }
        FeatureMatrix::new(rows)
    }
}

/// Assemble one row per hidden node of `g`, with `P` from the dense matrix
/// built on `red.graph()`.
pub fn build_features(
    g: &Graph,
    topology: &TopologyFeatures,
    obs: &Observation,
    red: &ReducedGraph,
    pwm: &PathWeightMatrix,
    truth: Option<&Cascade>,
) -> Result<FeatureMatrix, FeatureError> {
    if pwm.node_count() != red.graph().node_count() {
        return Err(FeatureError::Consistency(format!(
            "path-weight matrix has {} nodes but the reduced graph has {}",
            pwm.node_count(),
            red.graph().node_count()
        )));
    }
    let probabilities = infection_probability(pwm, red.retained_observed_infected());
    build_features_with_probabilities(g, topology, obs, red, &probabilities, truth)
}

/// As [`build_features`], with `P` supplied as reduced-id → probability.
/// Hidden nodes absent from the map (pruned by the reduction) get `P = 0`.
pub fn build_features_with_probabilities(
    g: &Graph,
    topology: &TopologyFeatures,
    obs: &Observation,
    red: &ReducedGraph,
    probabilities: &BTreeMap<usize, f64>,
    truth: Option<&Cascade>,
) -> Result<FeatureMatrix, FeatureError> {
    let n = g.node_count();
    let sizes = [
        ("observation", obs.node_count()),
        ("reduction", red.original_node_count()),
        ("topology features", topology.node_count()),
    ];
    for (what, size) in sizes {
        if size != n {
            return Err(FeatureError::Consistency(format!(
                "{what} covers {size} nodes but the graph has {n}"
            )));
        }
    }
    if let Some(c) = truth {
        if c.node_count() != n {
            return Err(FeatureError::Consistency(format!(
                "cascade covers {} nodes but the graph has {n}",
                c.node_count()
            )));
        }
    }
    if red.to_original().iter().any(|&v| v >= n) {
        return Err(FeatureError::Consistency(
            "reduced graph maps to nodes outside the graph".into(),
        ));
    }

    let rows = obs
        .hidden()
        .iter()
        .map(|&v| {
            let degree = g.degree(v);
            let infected_nbrs = g
                .neighbors(v)
                .iter()
                .filter(|&&w| obs.state(w) == NodeState::ObservedInfected)
                .count();
            let ratio = if degree == 0 {
                0.0
            } else {
                infected_nbrs as f64 / degree as f64
            };
            let p = red
                .reduced_node(v)
                .and_then(|k| probabilities.get(&k).copied())
                .unwrap_or(0.0);
            FeatureVector {
                node: v,
                values: [
                    topology.degree[v],
                    ratio,
                    topology.betweenness[v],
                    topology.closeness[v],
                    topology.eigenvector[v],
                    p,
                ],
                label: truth.map(|c| c.is_infected(v)),
            }
        })
        .collect();
    FeatureMatrix::new(rows)
}
