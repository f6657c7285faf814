//! Undirected simple graphs, edge-list ingestion and connected components.

mod generate;
mod stats;

use std::collections::{HashMap, VecDeque};
use std::io::Write;
use std::path::Path;

use thiserror::Error;

pub use generate::{generate, GraphModel};
pub use stats::{bfs_distances, network_stats, NetworkStats};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("node {node} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParameter(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Immutable undirected simple graph over contiguous ids `0..node_count`.
///
/// Neighbor lists are sorted and free of duplicates and self-loops. Every
/// node also carries an external label (the id it had in the source file),
/// which reports use instead of the internal index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
    labels: Vec<u64>,
}

impl Graph {
    /// Build a graph from an edge iterator. Self-loops and repeated edges
    /// (in either orientation) are dropped. Labels default to the ids.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); node_count];
        for (u, v) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange { node, node_count });
                }
            }
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        Ok(Self::from_adjacency(adjacency))
    }

    pub(crate) fn from_adjacency(mut adjacency: Vec<Vec<usize>>) -> Self {
        let mut degree_sum = 0;
        for (v, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            list.retain(|&w| w != v);
            degree_sum += list.len();
        }
        let labels = (0..adjacency.len() as u64).collect();
        Graph {
            adjacency,
            edge_count: degree_sum / 2,
            labels,
        }
    }

    /// Replace the external labels. `labels.len()` must equal the node count.
    pub fn with_labels(mut self, labels: Vec<u64>) -> Self {
        assert_eq!(labels.len(), self.node_count(), "one label per node");
        self.labels = labels;
        self
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Map from external label back to internal id.
    pub fn label_index(&self) -> HashMap<u64, usize> {
        self.labels
            .iter()
            .enumerate()
            .map(|(v, &label)| (label, v))
            .collect()
    }

    /// Subgraph induced by `nodes` (which must be sorted and distinct).
    /// Node `k` of the result corresponds to `nodes[k]` and keeps its label.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let mut position = vec![usize::MAX; self.node_count()];
        for (k, &v) in nodes.iter().enumerate() {
            position[v] = k;
        }
        let adjacency: Vec<Vec<usize>> = nodes
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter_map(|&w| (position[w] != usize::MAX).then_some(position[w]))
                    .collect()
            })
            .collect();
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Graph {
            adjacency,
            edge_count,
            labels: nodes.iter().map(|&v| self.labels[v]).collect(),
        }
    }

    /// Write the graph as a whitespace-separated edge list using labels.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "# nodes: {} edges: {}",
            self.node_count(),
            self.edge_count()
        )?;
        for (u, v) in self.edges() {
            writeln!(out, "{} {}", self.labels[u], self.labels[v])?;
        }
        Ok(())
    }
}

/// Parse a whitespace-separated edge list.
///
/// Lines starting with `#` and blank lines are skipped. Ids are remapped to a
/// contiguous range in ascending order of the original id, so the result does
/// not depend on line order or edge orientation; the original ids are kept as
/// node labels.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut raw_edges = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(GraphError::Parse {
                line: line_no,
                reason: format!("expected 2 node ids, found {} tokens", tokens.len()),
            });
        }
        let mut ids = [0u64; 2];
        for (slot, token) in ids.iter_mut().zip(&tokens) {
            *slot = token.parse().map_err(|_| GraphError::Parse {
                line: line_no,
                reason: format!("`{token}` is not a non-negative integer node id"),
            })?;
        }
        raw_edges.push((ids[0], ids[1]));
    }

    let mut labels: Vec<u64> = raw_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    labels.sort_unstable();
    labels.dedup();
    let index: HashMap<u64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let edges = raw_edges.iter().map(|(a, b)| (index[a], index[b]));
    Ok(Graph::from_edges(labels.len(), edges)?.with_labels(labels))
}

/// Read and parse an edge-list file.
pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_edge_list(&text)
}

/// Connected components, largest first; ties go to the component holding the
/// smaller node id. Each component lists its nodes in ascending order.
pub fn components(g: &Graph) -> Vec<Vec<usize>> {
    components_excluding(g, &vec![false; g.node_count()])
}

/// Components of `g` with the `removed` nodes deleted, same ordering as
/// [`components`]. Removed nodes belong to no component.
pub fn components_excluding(g: &Graph, removed: &[bool]) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut members = Vec::new();
        while let Some(v) = queue.pop_front() {
            members.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    // Discovery order already follows the smallest member, so a stable sort
    // by size keeps the tie rule.
    out.sort_by_key(|c| std::cmp::Reverse(c.len()));
    out
}

/// Nodes of the largest connected component (empty for an empty graph).
pub fn largest_component(g: &Graph) -> Vec<usize> {
    components(g).into_iter().next().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_basic() {
        let g = parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
    }

    #[test]
    fn parse_drops_reverse_duplicates_and_self_loops() {
        let g = parse_edge_list("0 1\n1 0\n0 0").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
    }

    #[test]
    fn parse_comments_and_remapping() {
        let g = parse_edge_list("# header\n\n10\t30\n30 20\n").unwrap();
        assert_eq!(g.labels(), &[10, 20, 30]);
        assert!(g.has_edge(0, 2));
        assert!(g.has_edge(1, 2));
        assert!(!g.has_edge(0, 1));
    }

    #[test]
    fn parse_errors_name_the_line() {
        match parse_edge_list("0 1\n1 x\n") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("# c\n0 1 2\n") {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_edge_list("-1 2").is_err());
    }

    #[test]
    fn components_cases() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(components(&g), vec![vec![0, 1], vec![2, 3]]);
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(components(&path), vec![vec![0, 1, 2]]);
        let empty = Graph::from_edges(0, []).unwrap();
        assert!(components(&empty).is_empty());
    }

    #[test]
    fn components_largest_first() {
        let g = Graph::from_edges(6, [(0, 1), (2, 3), (3, 4)]).unwrap();
        assert_eq!(components(&g), vec![vec![2, 3, 4], vec![0, 1], vec![5]]);
    }

    #[test]
    fn induced_subgraph_keeps_labels() {
        let g = parse_edge_list("5 6\n6 7\n7 8").unwrap();
        let sub = g.induced_subgraph(&[1, 2, 3]);
        assert_eq!(sub.labels(), &[6, 7, 8]);
        assert_eq!(sub.edge_count(), 2);
    }

    #[test]
    fn write_then_parse_round_trips() {
        let g = parse_edge_list("3 9\n9 4\n4 3\n12 3").unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let again = parse_edge_list(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(g, again);
    }

    proptest! {
        #[test]
        fn parse_ignores_order_and_orientation(
            edges in prop::collection::vec((0u64..30, 0u64..30), 1..60),
            flips in prop::collection::vec(any::<bool>(), 60),
            rotate in 0usize..60,
        ) {
            let text: String = edges.iter().map(|(a, b)| format!("{a} {b}\n")).collect();
            let mut shuffled: Vec<(u64, u64)> = edges
                .iter()
                .zip(&flips)
                .map(|(&(a, b), &f)| if f { (b, a) } else { (a, b) })
                .collect();
            let k = rotate % shuffled.len();
            shuffled.rotate_left(k);
            let other: String = shuffled.iter().map(|(a, b)| format!("{a} {b}\n")).collect();
            let g = parse_edge_list(&text).unwrap();
            prop_assert_eq!(&g, &parse_edge_list(&other).unwrap());
            prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        }
    }
}
