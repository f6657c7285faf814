//! Pruning of provably susceptible nodes and separator checks.
//!
//! Under single-source SI spread the infected set is connected. Deleting the
//! observed-susceptible nodes therefore leaves every infected node in one
//! component, the one holding the observed-infected nodes; hidden nodes in
//! any other component cannot be infected.

use std::collections::VecDeque;

use thiserror::Error;

use crate::cascade::{NodeState, Observation};
use crate::graph::{components_excluding, Graph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error(
        "observed infected nodes {first} and {second} are separated by observed susceptible nodes; \
         no single-source SI cascade produces this observation"
    )]
    InconsistentObservation { first: usize, second: usize },
    #[error("observation covers {observation} nodes but the graph has {graph}")]
    SizeMismatch { observation: usize, graph: usize },
}

/// The graph left after removing observed-susceptible nodes and every
/// component without an observed-infected node.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedGraph {
    graph: Graph,
    to_original: Vec<usize>,
    from_original: Vec<Option<usize>>,
    deterministic_susceptible: Vec<usize>,
    retained_observed_infected: Vec<usize>,
    anchored: bool,
}

/// Per-node outcome of the reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Kept,
    DeterministicSusceptible,
    ObservedSusceptible,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Kept => "kept",
            Verdict::DeterministicSusceptible => "det_susceptible",
            Verdict::ObservedSusceptible => "observed_susceptible",
        }
    }
}

impl ReducedGraph {
    /// The reduced graph; node `k` stands for original node `to_original()[k]`.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn to_original(&self) -> &[usize] {
        &self.to_original
    }

    pub fn original_node(&self, reduced: usize) -> usize {
        self.to_original[reduced]
    }

    pub fn reduced_node(&self, original: usize) -> Option<usize> {
        self.from_original.get(original).copied().flatten()
    }

    /// Hidden original nodes proven susceptible, ascending.
    pub fn deterministic_susceptible(&self) -> &[usize] {
        &self.deterministic_susceptible
    }

    /// Observed-infected nodes in reduced ids, ascending.
    pub fn retained_observed_infected(&self) -> &[usize] {
        &self.retained_observed_infected
    }

    /// False when there was no observed-infected node to anchor the
    /// reduction; the graph is then everything except `S_o`.
    pub fn is_anchored(&self) -> bool {
        self.anchored
    }

    pub fn original_node_count(&self) -> usize {
        self.from_original.len()
    }

    /// Verdict for every original node.
    pub fn verdicts(&self, obs: &Observation) -> Vec<Verdict> {
        (0..self.original_node_count())
            .map(|v| {
                if obs.state(v) == NodeState::ObservedSusceptible {
                    Verdict::ObservedSusceptible
                } else if self.from_original[v].is_some() {
                    Verdict::Kept
                } else {
                    Verdict::DeterministicSusceptible
                }
            })
            .collect()
    }
}

/// Remove `S_o`, keep the component containing `I_o`, and report the hidden
/// nodes of every other component as deterministically susceptible.
pub fn reduce_property1(g: &Graph, obs: &Observation) -> Result<ReducedGraph, ReductionError> {
    let n = g.node_count();
    if obs.node_count() != n {
        return Err(ReductionError::SizeMismatch {
            observation: obs.node_count(),
            graph: n,
        });
    }
    let removed: Vec<bool> = obs
        .states()
        .iter()
        .map(|&s| s == NodeState::ObservedSusceptible)
        .collect();
    let parts = components_excluding(g, &removed);

    let anchored = !obs.observed_infected().is_empty();
    let kept: Vec<usize> = if anchored {
        let mut component_of = vec![usize::MAX; n];
        for (c, members) in parts.iter().enumerate() {
            for &v in members {
                component_of[v] = c;
            }
        }
        let infected = obs.observed_infected();
        let first = infected[0];
        if let Some(&second) = infected
            .iter()
            .find(|&&v| component_of[v] != component_of[first])
        {
            return Err(ReductionError::InconsistentObservation { first, second });
        }
        parts[component_of[first]].clone()
    } else {
        (0..n).filter(|&v| !removed[v]).collect()
    };

    let mut from_original = vec![None; n];
    for (k, &v) in kept.iter().enumerate() {
        from_original[v] = Some(k);
    }
    let deterministic_susceptible = (0..n)
        .filter(|&v| from_original[v].is_none() && obs.state(v) == NodeState::Hidden)
        .collect();
    let retained_observed_infected = obs
        .observed_infected()
        .iter()
        .map(|&v| from_original[v].expect("anchor component holds every observed infected node"))
        .collect();

    Ok(ReducedGraph {
        graph: g.induced_subgraph(&kept),
        to_original: kept,
        from_original,
        deterministic_susceptible,
        retained_observed_infected,
        anchored,
    })
}

/// True iff deleting `separator` from `g` leaves no path between `i` and `j`.
pub fn is_separator(g: &Graph, separator: &[usize], i: usize, j: usize) -> bool {
    let mut blocked = vec![false; g.node_count()];
    for &s in separator {
        blocked[s] = true;
    }
    if blocked[i] || blocked[j] {
        return true;
    }
    let mut queue = VecDeque::from([i]);
    blocked[i] = true;
    while let Some(v) = queue.pop_front() {
        if v == j {
            return false;
        }
        for &w in g.neighbors(v) {
            if !blocked[w] {
                blocked[w] = true;
                queue.push_back(w);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Nodes 1..=7 as ids 0..=6: edges 1-2,1-3,2-4,3-4,4-5,5-6,6-7.
    fn figure_graph() -> Graph {
        let edges = [(1, 2), (1, 3), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7)];
        Graph::from_edges(7, edges.iter().map(|&(a, b)| (a - 1, b - 1)))
            .unwrap()
            .with_labels((1..=7).collect())
    }

    #[test]
    fn figure_example() {
        let g = figure_graph();
        let obs = Observation::from_sets(7, &[0, 3], &[4]);
        let red = reduce_property1(&g, &obs).unwrap();
        let labels = |nodes: &[usize]| nodes.iter().map(|&v| g.label(v)).collect::<Vec<_>>();
        assert_eq!(labels(red.deterministic_susceptible()), vec![6, 7]);
        assert_eq!(labels(red.to_original()), vec![1, 2, 3, 4]);
        assert_eq!(red.graph().labels(), &[1, 2, 3, 4]);
        assert_eq!(red.retained_observed_infected(), &[0, 3]);
        assert!(red.is_anchored());
        let verdicts = red.verdicts(&obs);
        assert_eq!(verdicts[4], Verdict::ObservedSusceptible);
        assert_eq!(verdicts[5], Verdict::DeterministicSusceptible);
        assert_eq!(verdicts[1], Verdict::Kept);
    }

    #[test]
    fn no_observed_susceptible_keeps_anchor_component() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let obs = Observation::from_sets(5, &[1], &[]);
        let red = reduce_property1(&g, &obs).unwrap();
        assert_eq!(red.to_original(), &[0, 1, 2]);
        assert_eq!(red.deterministic_susceptible(), &[3, 4]);
    }

    #[test]
    fn infected_in_two_components_is_inconsistent() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let obs = Observation::from_sets(4, &[0, 2], &[]);
        assert_eq!(
            reduce_property1(&g, &obs),
            Err(ReductionError::InconsistentObservation { first: 0, second: 2 })
        );
    }

    #[test]
    fn no_anchor_is_identity_minus_susceptible() {
        let g = figure_graph();
        let obs = Observation::from_sets(7, &[], &[4]);
        let red = reduce_property1(&g, &obs).unwrap();
        assert!(!red.is_anchored());
        assert_eq!(red.to_original(), &[0, 1, 2, 3, 5, 6]);
        assert!(red.deterministic_susceptible().is_empty());
    }

    #[test]
    fn separator_cases() {
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(is_separator(&path, &[1], 0, 2));
        let triangle = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        for s in 0..3 {
            let others: Vec<usize> = (0..3).filter(|&v| v != s).collect();
            assert!(!is_separator(&triangle, &[s], others[0], others[1]));
        }
        let g = figure_graph();
        assert!(is_separator(&g, &[1, 2], 0, 3));
        assert!(!is_separator(&g, &[1], 0, 3));
    }
}
