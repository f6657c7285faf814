use latent_infection::cascade::{observe, simulate_si, NodeState, Observation};
use latent_infection::graph::{generate, Graph, GraphModel};
use latent_infection::reduction::{is_separator, reduce_property1, Verdict};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (0usize..3, 6usize..max_n, any::<u64>()).prop_map(|(kind, n, seed)| {
        let model = match kind {
            0 => GraphModel::ErdosRenyi { n, p: 0.15 },
            1 => GraphModel::BarabasiAlbert { n, k: 1 },
            _ => GraphModel::WattsStrogatz { n, k: 2, beta: 0.3 },
        };
        generate(model, seed).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pruned_nodes_are_never_infected(
        g in graph_strategy(150),
        stop in 0.05f64..0.7,
        frac in 0.05f64..0.7,
        seed in any::<u64>(),
    ) {
        let Ok(c) = simulate_si(&g, 0.8, stop, seed) else { return Ok(()); };
        let obs = observe(&c, &g, frac, seed.wrapping_add(1));
        let red = reduce_property1(&g, &obs).unwrap();
        for &v in red.deterministic_susceptible() {
            prop_assert!(!c.is_infected(v));
        }
        // every truly infected node survives unless it was observed
        for &v in c.infected() {
            if obs.state(v) == NodeState::Hidden {
                prop_assert!(red.reduced_node(v).is_some());
            }
        }
    }

    #[test]
    fn pruned_iff_cut_off_by_observed_susceptibles(
        g in graph_strategy(80),
        frac in 0.1f64..0.8,
        seed in any::<u64>(),
    ) {
        let Ok(c) = simulate_si(&g, 1.0, 0.4, seed) else { return Ok(()); };
        let obs = observe(&c, &g, frac, seed ^ 0xff);
        let red = reduce_property1(&g, &obs).unwrap();
        let verdicts = red.verdicts(&obs);
        let anchors = obs.observed_infected();
        let cut = obs.observed_susceptible();
        for v in 0..g.node_count() {
            match obs.state(v) {
                NodeState::ObservedSusceptible => {
                    prop_assert_eq!(verdicts[v], Verdict::ObservedSusceptible);
                    prop_assert!(red.reduced_node(v).is_none());
                }
                NodeState::ObservedInfected => prop_assert_eq!(verdicts[v], Verdict::Kept),
                NodeState::Hidden => {
                    let separated = !anchors.is_empty() && anchors.iter().all(|&a| is_separator(&g, cut, v, a));
                    prop_assert_eq!(verdicts[v] == Verdict::DeterministicSusceptible, separated);
                }
            }
        }
        prop_assert_eq!(red.retained_observed_infected().len(), anchors.len());
    }

    #[test]
    fn separating_sets_hold_an_infected_node(
        g in graph_strategy(11),
        frac in 0.3f64..0.9,
        seed in any::<u64>(),
    ) {
        let n = g.node_count();
        let Ok(c) = simulate_si(&g, 1.0, 0.6, seed) else { return Ok(()); };
        let obs = observe(&c, &g, frac, seed ^ 3);
        let anchors = obs.observed_infected();
        for mask in 0u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            if set.iter().any(|v| anchors.contains(v)) {
                continue;
            }
            let separates = anchors
                .iter()
                .enumerate()
                .any(|(k, &a)| anchors[k + 1..].iter().any(|&b| is_separator(&g, &set, a, b)));
            if separates {
                prop_assert!(set.iter().any(|&v| c.is_infected(v)));
            }
        }
    }

    #[test]
    fn reducing_twice_changes_nothing(g in graph_strategy(120), frac in 0.05f64..0.6, seed in any::<u64>()) {
        let Ok(c) = simulate_si(&g, 0.8, 0.3, seed) else { return Ok(()); };
        let obs = observe(&c, &g, frac, seed ^ 77);
        let red = reduce_property1(&g, &obs).unwrap();
        let states: Vec<NodeState> = red.to_original().iter().map(|&v| obs.state(v)).collect();
        let inner = Observation::from_states(states);
        let again = reduce_property1(red.graph(), &inner).unwrap();
        prop_assert!(again.deterministic_susceptible().is_empty());
        prop_assert_eq!(again.graph(), red.graph());
        prop_assert_eq!(again.retained_observed_infected(), red.retained_observed_infected());
    }
}
