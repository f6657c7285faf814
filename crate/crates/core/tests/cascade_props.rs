use latent_infection::cascade::{observe, simulate_si, simulate_si_from, stop_count, NodeState};
use latent_infection::graph::{generate, Graph, GraphModel};
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (0usize..3, 10usize..120, any::<u64>()).prop_map(|(kind, n, seed)| {
        let model = match kind {
            0 => GraphModel::ErdosRenyi { n, p: 0.08 },
            1 => GraphModel::BarabasiAlbert { n, k: 2 },
            _ => GraphModel::WattsStrogatz { n, k: 4, beta: 0.2 },
        };
        generate(model, seed).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cascade_is_a_connected_infection_tree(
        g in graph_strategy(),
        lambda in 0.05f64..3.0,
        stop in 0.02f64..0.8,
        seed in any::<u64>(),
    ) {
        let Ok(c) = simulate_si(&g, lambda, stop, seed) else { return Ok(()); };
        prop_assert_eq!(c.infected().len(), stop_count(g.node_count(), stop));
        prop_assert_eq!(c.infected()[0], c.seed_node());
        prop_assert_eq!(c.infection_time(c.seed_node()), Some(0.0));
        for &v in &c.infected()[1..] {
            let t = c.infection_time(v).unwrap();
            // some neighbor was infected strictly earlier
            let parent = g
                .neighbors(v)
                .iter()
                .filter_map(|&w| c.infection_time(w))
                .any(|tw| tw < t);
            prop_assert!(parent, "node {} has no earlier infected neighbor", v);
        }
        for w in c.infected().windows(2) {
            prop_assert!(c.infection_time(w[0]) <= c.infection_time(w[1]));
        }
        let count = (0..g.node_count()).filter(|&v| c.is_infected(v)).count();
        prop_assert_eq!(count, c.infected().len());
    }

    #[test]
    fn cascade_and_observation_are_deterministic(
        g in graph_strategy(),
        seed in any::<u64>(),
        frac in 0.0f64..1.0,
    ) {
        let Ok(a) = simulate_si(&g, 0.5, 0.3, seed) else { return Ok(()); };
        let b = simulate_si(&g, 0.5, 0.3, seed).unwrap();
        prop_assert_eq!(a.infected(), b.infected());
        let oa = observe(&a, &g, frac, seed ^ 1);
        let ob = observe(&b, &g, frac, seed ^ 1);
        prop_assert_eq!(oa.states(), ob.states());
        prop_assert!(oa.is_consistent_with(&a));
        let observed = oa.states().iter().filter(|&&s| s != NodeState::Hidden).count();
        prop_assert_eq!(observed, (frac * g.node_count() as f64).round() as usize);
        prop_assert_eq!(oa.hidden().len() + observed, g.node_count());
    }
}

#[test]
fn edge_delay_is_exponential() {
    // Kolmogorov-Smirnov against 1 - exp(-lambda t) at the 1% level
    let g = Graph::from_edges(2, [(0, 1)]).unwrap();
    let lambda = 0.7;
    let n = 10_000;
    let mut times: Vec<f64> = (0..n)
        .map(|s| {
            simulate_si_from(&g, 0, lambda, 1.0, s as u64)
                .unwrap()
                .infection_time(1)
                .unwrap()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    let mut d = 0.0f64;
    for (i, &t) in times.iter().enumerate() {
        let cdf = 1.0 - (-lambda * t).exp();
        d = d.max((cdf - i as f64 / n as f64).abs());
        d = d.max(((i + 1) as f64 / n as f64 - cdf).abs());
    }
    let critical = 1.628 / (n as f64).sqrt();
    assert!(d < critical, "KS statistic {d} >= {critical}");
}

#[test]
fn unreachable_stop_fraction_is_an_error() {
    let g = Graph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
    assert!(simulate_si(&g, 1.0, 0.5, 1).is_err());
    assert!(simulate_si(&g, 1.0, 0.3, 1).is_ok());
}
