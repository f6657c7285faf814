use std::collections::BTreeSet;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};
use crate::rng;

/// Synthetic random-graph models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum GraphModel {
    /// G(n, p): every pair independently with probability `p`.
    ErdosRenyi { n: usize, p: f64 },
    /// Preferential attachment: a `(k+1)`-clique seed, then each new node
    /// links to `k` distinct existing nodes chosen proportionally to degree.
    BarabasiAlbert { n: usize, k: usize },
    /// Ring lattice with `k/2` neighbors per side, each lattice edge rewired
    /// with probability `beta`.
    WattsStrogatz { n: usize, k: usize, beta: f64 },
}

impl GraphModel {
    fn validate(&self) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::InvalidParameter(msg));
        match *self {
            GraphModel::ErdosRenyi { p, .. } if !(0.0..=1.0).contains(&p) => {
                bad(format!("erdos_renyi p={p} outside [0,1]"))
            }
            GraphModel::BarabasiAlbert { n, k } if k < 1 || k >= n => {
                bad(format!("barabasi_albert needs 1 <= k < n (n={n}, k={k})"))
            }
            GraphModel::WattsStrogatz { n, k, .. } if k < 1 || k >= n => {
                bad(format!("watts_strogatz needs 1 <= k < n (n={n}, k={k})"))
            }
            GraphModel::WattsStrogatz { beta, .. } if !(0.0..=1.0).contains(&beta) => {
                bad(format!("watts_strogatz beta={beta} outside [0,1]"))
            }
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for GraphModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match *self {
            GraphModel::ErdosRenyi { n, p } => format!("er({n},{p})"),
            GraphModel::BarabasiAlbert { n, k } => format!("ba({n},{k})"),
            GraphModel::WattsStrogatz { n, k, beta } => format!("ws({n},{k},{beta})"),
        };
        f.pad(&text)
    }
}

impl std::str::FromStr for GraphModel {
    type Err = GraphError;

    /// Parses the [`Display`](std::fmt::Display) form: `er(n,p)`, `ba(n,k)`
    /// or `ws(n,k,beta)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::InvalidParameter(format!("cannot parse graph model `{s}`"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let args: Vec<&str> = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(bad)?
            .split(',')
            .map(str::trim)
            .collect();
        let int = |i: usize| args.get(i).and_then(|a| a.parse::<usize>().ok()).ok_or_else(bad);
        let real = |i: usize| args.get(i).and_then(|a| a.parse::<f64>().ok()).ok_or_else(bad);
        let model = match (&s[..open], args.len()) {
            ("er", 2) => GraphModel::ErdosRenyi { n: int(0)?, p: real(1)? },
            ("ba", 2) => GraphModel::BarabasiAlbert { n: int(0)?, k: int(1)? },
            ("ws", 3) => GraphModel::WattsStrogatz {
                n: int(0)?,
                k: int(1)?,
                beta: real(2)?,
            },
            _ => return Err(bad()),
        };
        model.validate()?;
        Ok(model)
    }
}

/// Sample a graph from `model`; identical seeds give identical graphs.
pub fn generate(model: GraphModel, rng_seed: u64) -> Result<Graph, GraphError> {
    model.validate()?;
    let mut rng = rng::from_seed(rng_seed);
    let graph = match model {
        GraphModel::ErdosRenyi { n, p } => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges)?
        }
        GraphModel::BarabasiAlbert { n, k } => {
            let mut edges = Vec::new();
            // each node appears once per incident edge end
            let mut pool = Vec::new();
            for u in 0..=k {
                for v in u + 1..=k {
                    edges.push((u, v));
                    pool.push(u);
                    pool.push(v);
                }
            }
            for v in k + 1..n {
                let mut targets = BTreeSet::new();
                while targets.len() < k {
                    targets.insert(pool[rng.random_range(0..pool.len())]);
                }
                for t in targets {
                    edges.push((v, t));
                    pool.push(v);
                    pool.push(t);
                }
            }
            Graph::from_edges(n, edges)?
        }
        GraphModel::WattsStrogatz { n, k, beta } => {
            let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
            let half = k / 2;
            for u in 0..n {
                for j in 1..=half {
                    let v = (u + j) % n;
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
            for j in 1..=half {
                for u in 0..n {
                    if rng.random::<f64>() >= beta {
                        continue;
                    }
                    let v = (u + j) % n;
                    if !adj[u].contains(&v) || adj[u].len() >= n - 1 {
                        continue;
                    }
                    let mut w = rng.random_range(0..n);
                    while w == u || adj[u].contains(&w) {
                        w = rng.random_range(0..n);
                    }
                    adj[u].remove(&v);
                    adj[v].remove(&u);
                    adj[u].insert(w);
                    adj[w].insert(u);
                }
            }
            Graph::from_adjacency(adj.into_iter().map(|s| s.into_iter().collect()).collect())
        }
    };
    Ok(graph)
}
