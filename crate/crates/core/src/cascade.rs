//! Continuous-time SI cascades and partial observations of them.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::io::Write;

use rand_distr::{Distribution, Exp};
use thiserror::Error;

use crate::graph::{components, Graph};
use crate::rng;

#[derive(Debug, Error)]
pub enum CascadeError {
    #[error("infection rate must be positive and finite, got {0}")]
    InvalidRate(f64),
    #[error("stop fraction must lie in (0, 1], got {0}")]
    InvalidStopFraction(f64),
    #[error("cascade needs {needed} infections but the reachable component has {available} nodes")]
    Unreachable { needed: usize, available: usize },
    #[error("seed node {0} is not in the graph")]
    UnknownSeed(usize),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Ground truth of one SI run.
#[derive(Debug, Clone, PartialEq)]
pub struct Cascade {
    seed_node: usize,
    infection_time: Vec<Option<f64>>,
    /// Infected nodes in order of infection.
    infected: Vec<usize>,
    lambda: f64,
}

impl Cascade {
    pub fn seed_node(&self) -> usize {
        self.seed_node
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn infection_time(&self, v: usize) -> Option<f64> {
        self.infection_time[v]
    }

    pub fn is_infected(&self, v: usize) -> bool {
        self.infection_time[v].is_some()
    }

    /// Infected nodes in infection order (seed first).
    pub fn infected(&self) -> &[usize] {
        &self.infected
    }

    pub fn node_count(&self) -> usize {
        self.infection_time.len()
    }

    /// Write `node,infection_time` rows for infected nodes, in node order.
    pub fn write_csv<W: Write>(&self, g: &Graph, mut out: W) -> std::io::Result<()> {
        writeln!(out, "node,infection_time")?;
        for (v, t) in self.infection_time.iter().enumerate() {
            if let Some(t) = t {
                writeln!(out, "{},{}", g.label(v), t)?;
            }
        }
        Ok(())
    }

    /// Read a cascade dump written by [`Cascade::write_csv`].
    pub fn read_csv(text: &str, g: &Graph, lambda: f64) -> Result<Cascade, CascadeError> {
        let index = g.label_index();
        let mut infection_time = vec![None; g.node_count()];
        for (line, fields) in csv_records(text, "node,infection_time")? {
            let node = lookup(&index, fields[0], line)?;
            let t: f64 = fields[1].parse().map_err(|_| CascadeError::Parse {
                line,
                reason: format!("bad infection time `{}`", fields[1]),
            })?;
            infection_time[node] = Some(t);
        }
        let mut infected: Vec<usize> = (0..g.node_count())
            .filter(|&v| infection_time[v].is_some())
            .collect();
        infected.sort_by(|&a, &b| {
            infection_time[a]
                .unwrap()
                .total_cmp(&infection_time[b].unwrap())
                .then(a.cmp(&b))
        });
        let seed_node = *infected.first().ok_or(CascadeError::Parse {
            line: 1,
            reason: "cascade has no infected node".into(),
        })?;
        Ok(Cascade {
            seed_node,
            infection_time,
            infected,
            lambda,
        })
    }
}

/// Number of infections at which a cascade stops: `ceil(fraction * n)`.
///
/// A tolerance of 1e-9 absorbs products such as `0.1 * 30` landing just above
/// an integer.
pub fn stop_count(node_count: usize, stop_fraction: f64) -> usize {
    ((stop_fraction * node_count as f64 - 1e-9).ceil().max(1.0)) as usize
}

#[derive(Debug, PartialEq)]
struct Event {
    time: f64,
    node: usize,
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.node.cmp(&other.node))
    }
}

fn validate(lambda: f64, stop_fraction: f64) -> Result<(), CascadeError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(CascadeError::InvalidRate(lambda));
    }
    if !(stop_fraction > 0.0 && stop_fraction <= 1.0) {
        return Err(CascadeError::InvalidStopFraction(stop_fraction));
    }
    Ok(())
}

/// Run an SI cascade from a seed drawn uniformly from the largest connected
/// component, stopping once `ceil(stop_fraction * n)` nodes are infected.
pub fn simulate_si(
    g: &Graph,
    lambda: f64,
    stop_fraction: f64,
    rng_seed: u64,
) -> Result<Cascade, CascadeError> {
    use rand::Rng as _;

    validate(lambda, stop_fraction)?;
    let needed = stop_count(g.node_count(), stop_fraction);
    let lcc = components(g).into_iter().next().unwrap_or_default();
    if lcc.len() < needed {
        return Err(CascadeError::Unreachable {
            needed,
            available: lcc.len(),
        });
    }
    let mut rng = rng::from_seed(rng_seed);
    let seed_node = lcc[rng.random_range(0..lcc.len())];
    Ok(run_si(g, seed_node, lambda, needed, &mut rng))
}

/// Same dynamics as [`simulate_si`] but from a fixed seed node.
pub fn simulate_si_from(
    g: &Graph,
    seed_node: usize,
    lambda: f64,
    stop_fraction: f64,
    rng_seed: u64,
) -> Result<Cascade, CascadeError> {
    validate(lambda, stop_fraction)?;
    if seed_node >= g.node_count() {
        return Err(CascadeError::UnknownSeed(seed_node));
    }
    let needed = stop_count(g.node_count(), stop_fraction);
    let reachable = components(g)
        .into_iter()
        .find(|c| c.binary_search(&seed_node).is_ok())
        .map_or(0, |c| c.len());
    if reachable < needed {
        return Err(CascadeError::Unreachable {
            needed,
            available: reachable,
        });
    }
    let mut rng = rng::from_seed(rng_seed);
    Ok(run_si(g, seed_node, lambda, needed, &mut rng))
}

/// Event-queue execution: every infected-susceptible edge fires after an
/// independent Exp(lambda) delay; the earliest firing infects the target.
fn run_si(g: &Graph, seed_node: usize, lambda: f64, needed: usize, rng: &mut rng::Rng) -> Cascade {
    let delay = Exp::new(lambda).expect("rate validated");
    let mut infection_time = vec![None; g.node_count()];
    let mut infected = Vec::with_capacity(needed);
    let mut queue = BinaryHeap::new();
    queue.push(Reverse(Event {
        time: 0.0,
        node: seed_node,
    }));
    while let Some(Reverse(Event { time, node })) = queue.pop() {
        if infection_time[node].is_some() {
            continue;
        }
        infection_time[node] = Some(time);
        infected.push(node);
        if infected.len() >= needed {
            break;
        }
        for &w in g.neighbors(node) {
            if infection_time[w].is_none() {
                queue.push(Reverse(Event {
                    time: time + delay.sample(rng),
                    node: w,
                }));
            }
        }
    }
    Cascade {
        seed_node,
        infection_time,
        infected,
        lambda,
    }
}

/// What is known about a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeState {
    ObservedInfected,
    ObservedSusceptible,
    Hidden,
}

/// Partition of the nodes into observed-infected, observed-susceptible and
/// hidden. Each list is sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    states: Vec<NodeState>,
    observed_infected: Vec<usize>,
    observed_susceptible: Vec<usize>,
    hidden: Vec<usize>,
}

impl Observation {
    pub fn from_states(states: Vec<NodeState>) -> Self {
        let pick = |want: NodeState| -> Vec<usize> {
            (0..states.len()).filter(|&v| states[v] == want).collect()
        };
        Observation {
            observed_infected: pick(NodeState::ObservedInfected),
            observed_susceptible: pick(NodeState::ObservedSusceptible),
            hidden: pick(NodeState::Hidden),
            states,
        }
    }

    /// Build from explicit observed sets; every other node is hidden.
    pub fn from_sets(node_count: usize, infected: &[usize], susceptible: &[usize]) -> Self {
        let mut states = vec![NodeState::Hidden; node_count];
        for &v in infected {
            states[v] = NodeState::ObservedInfected;
        }
        for &v in susceptible {
            states[v] = NodeState::ObservedSusceptible;
        }
        Self::from_states(states)
    }

    pub fn state(&self, v: usize) -> NodeState {
        self.states[v]
    }

    pub fn states(&self) -> &[NodeState] {
        &self.states
    }

    pub fn observed_infected(&self) -> &[usize] {
        &self.observed_infected
    }

    pub fn observed_susceptible(&self) -> &[usize] {
        &self.observed_susceptible
    }

    pub fn hidden(&self) -> &[usize] {
        &self.hidden
    }

    pub fn node_count(&self) -> usize {
        self.states.len()
    }

    /// True when no observed label contradicts `cascade`.
    pub fn is_consistent_with(&self, cascade: &Cascade) -> bool {
        self.observed_infected.iter().all(|&v| cascade.is_infected(v))
            && self
                .observed_susceptible
                .iter()
                .all(|&v| !cascade.is_infected(v))
    }

    /// Write `node,state` rows (`I` or `S`) for observed nodes.
    pub fn write_csv<W: Write>(&self, g: &Graph, mut out: W) -> std::io::Result<()> {
        writeln!(out, "node,state")?;
        for (v, state) in self.states.iter().enumerate() {
            let tag = match state {
                NodeState::ObservedInfected => "I",
                NodeState::ObservedSusceptible => "S",
                NodeState::Hidden => continue,
            };
            writeln!(out, "{},{}", g.label(v), tag)?;
        }
        Ok(())
    }

    /// Read an observation dump; nodes without a row are hidden.
    pub fn read_csv(text: &str, g: &Graph) -> Result<Observation, CascadeError> {
        let index = g.label_index();
        let mut states = vec![NodeState::Hidden; g.node_count()];
        for (line, fields) in csv_records(text, "node,state")? {
            let node = lookup(&index, fields[0], line)?;
            states[node] = match fields[1] {
                "I" => NodeState::ObservedInfected,
                "S" => NodeState::ObservedSusceptible,
                other => {
                    return Err(CascadeError::Parse {
                        line,
                        reason: format!("state must be I or S, got `{other}`"),
                    })
                }
            };
        }
        Ok(Observation::from_states(states))
    }
}

/// Reveal the true state of `round(observed_fraction * n)` nodes sampled
/// uniformly without replacement; all other nodes are hidden.
pub fn observe(cascade: &Cascade, g: &Graph, observed_fraction: f64, rng_seed: u64) -> Observation {
    let n = g.node_count();
    let k = ((observed_fraction.clamp(0.0, 1.0) * n as f64).round() as usize).min(n);
    let mut rng = rng::from_seed(rng_seed);
    let mut states = vec![NodeState::Hidden; n];
    for v in rand::seq::index::sample(&mut rng, n, k) {
        states[v] = if cascade.is_infected(v) {
            NodeState::ObservedInfected
        } else {
            NodeState::ObservedSusceptible
        };
    }
    Observation::from_states(states)
}

fn csv_records<'a>(
    text: &'a str,
    header: &str,
) -> Result<Vec<(usize, Vec<&'a str>)>, CascadeError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first.trim() == header => {}
        _ => {
            return Err(CascadeError::Parse {
                line: 1,
                reason: format!("expected header `{header}`"),
            })
        }
    }
    let width = header.split(',').count();
    let mut out = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != width {
            return Err(CascadeError::Parse {
                line: i + 1,
                reason: format!("expected {width} fields"),
            });
        }
        out.push((i + 1, fields));
    }
    Ok(out)
}

fn lookup(index: &HashMap<u64, usize>, field: &str, line: usize) -> Result<usize, CascadeError> {
    field
        .parse::<u64>()
        .ok()
        .and_then(|label| index.get(&label).copied())
        .ok_or_else(|| CascadeError::Parse {
            line,
            reason: format!("unknown node `{field}`"),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphModel};

    fn k2() -> Graph {
        Graph::from_edges(2, [(0, 1)]).unwrap()
    }

    #[test]
    fn k2_full_cascade() {
        let c = simulate_si(&k2(), 0.5, 1.0, 3).unwrap();
        assert_eq!(c.infected().len(), 2);
        let other = 1 - c.seed_node();
        assert_eq!(c.infection_time(c.seed_node()), Some(0.0));
        assert!(c.infection_time(other).unwrap() > 0.0);
    }

    #[test]
    fn stops_at_ten_percent() {
        let g = generate(GraphModel::WattsStrogatz { n: 100, k: 4, beta: 0.2 }, 1).unwrap();
        for seed in 0..20 {
            let c = simulate_si(&g, 0.5, 0.1, seed).unwrap();
            assert_eq!(c.infected().len(), 10);
        }
    }

    #[test]
    fn stop_count_rounding() {
        assert_eq!(stop_count(100, 0.1), 10);
        assert_eq!(stop_count(30, 0.1), 3);
        assert_eq!(stop_count(101, 0.1), 11);
        assert_eq!(stop_count(5, 0.01), 1);
    }

    #[test]
    fn unreachable_fraction_is_rejected() {
        let g = Graph::from_edges(10, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            simulate_si(&g, 0.5, 0.5, 0),
            Err(CascadeError::Unreachable { needed: 5, available: 2 })
        ));
        assert!(matches!(simulate_si(&g, 0.0, 0.1, 0), Err(CascadeError::InvalidRate(_))));
        assert!(matches!(
            simulate_si(&g, 1.0, 0.0, 0),
            Err(CascadeError::InvalidStopFraction(_))
        ));
    }

    #[test]
    fn star_leaf_times_have_exponential_mean() {
        // centre 0 with four leaves; each leaf is infected by its own edge
        let star = Graph::from_edges(5, (1..5).map(|v| (0, v))).unwrap();
        let lambda = 0.5;
        let runs = 10_000;
        let mut total = 0.0;
        for seed in 0..runs {
            let c = simulate_si_from(&star, 0, lambda, 1.0, seed).unwrap();
            total += (1..5).map(|v| c.infection_time(v).unwrap()).sum::<f64>();
        }
        let mean = total / (4 * runs) as f64;
        assert!((mean - 1.0 / lambda).abs() < 0.05 / lambda, "mean {mean}");
    }

    #[test]
    fn observe_extremes() {
        let g = generate(GraphModel::ErdosRenyi { n: 60, p: 0.1 }, 2).unwrap();
        let c = simulate_si(&g, 0.5, 0.2, 1).unwrap();
        let all = observe(&c, &g, 1.0, 9);
        assert!(all.hidden().is_empty());
        assert_eq!(all.observed_infected(), {
            let mut v = c.infected().to_vec();
            v.sort_unstable();
            v
        });
        let none = observe(&c, &g, 0.0, 9);
        assert_eq!(none.hidden().len(), 60);
    }

    #[test]
    fn observe_fifteen_percent_of_hundred() {
        let g = generate(GraphModel::BarabasiAlbert { n: 100, k: 2 }, 4).unwrap();
        let c = simulate_si(&g, 0.5, 0.1, 1).unwrap();
        for seed in 0..10 {
            let obs = observe(&c, &g, 0.15, seed);
            assert_eq!(obs.observed_infected().len() + obs.observed_susceptible().len(), 15);
            assert!(obs.is_consistent_with(&c));
        }
    }

    #[test]
    fn csv_round_trips() {
        let g = generate(GraphModel::BarabasiAlbert { n: 50, k: 2 }, 4).unwrap();
        let c = simulate_si(&g, 0.5, 0.3, 8).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&g, &mut buf).unwrap();
        let back = Cascade::read_csv(std::str::from_utf8(&buf).unwrap(), &g, 0.5).unwrap();
        assert_eq!(back, c);

        let obs = observe(&c, &g, 0.4, 1);
        let mut buf = Vec::new();
        obs.write_csv(&g, &mut buf).unwrap();
        let back = Observation::read_csv(std::str::from_utf8(&buf).unwrap(), &g).unwrap();
        assert_eq!(back, obs);
    }

    #[test]
    fn observation_reader_rejects_unknown_state() {
        let g = k2();
        assert!(Observation::read_csv("node,state\n0,X\n", &g).is_err());
        assert!(Observation::read_csv("node,state\n7,I\n", &g).is_err());
        assert!(Observation::read_csv("wrong\n", &g).is_err());
    }
}
