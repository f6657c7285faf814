mod common;

use common::{brute_force_split, random_dataset};
use latent_infection::classifiers::{
    best_split, fit, predict, ClassifierKind, Dataset, DecisionTree, Model, TreeNode, TreeParams,
};
use proptest::prelude::*;

fn names(width: usize) -> Vec<String> {
    (0..width).map(|f| format!("x{f}")).collect()
}

fn labeled(rows: &[Vec<f64>], labels: &[bool]) -> Dataset {
    Dataset::new(names(rows[0].len()), rows, Some(labels.to_vec())).unwrap()
}

fn data_strategy() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<bool>)> {
    (4usize..60, 1usize..5).prop_flat_map(|(n, width)| {
        (
            prop::collection::vec(prop::collection::vec(-50.0f64..50.0, width), n),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(rows, mut labels)| {
                labels[0] = true;
                labels[1] = false;
                (rows, labels)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn posteriors_are_distributions((rows, labels) in data_strategy(), probe in prop::collection::vec(-1e3f64..1e3, 4)) {
        let data = labeled(&rows, &labels);
        let row = &probe[..data.width()];
        for kind in [ClassifierKind::Gnb, ClassifierKind::Nbk, ClassifierKind::C45] {
            let p = fit(kind, &data, 0).unwrap().posteriors(row);
            prop_assert!(p.iter().all(|v| (0.0..=1.0).contains(v) && v.is_finite()));
            prop_assert!((p[0] + p[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn naive_bayes_ignores_row_order((rows, labels) in data_strategy(), shift in 1usize..50) {
        let data = labeled(&rows, &labels);
        let k = shift % rows.len();
        let mut r2 = rows.clone();
        let mut l2 = labels.clone();
        r2.rotate_left(k);
        l2.rotate_left(k);
        r2.reverse();
        l2.reverse();
        let permuted = labeled(&r2, &l2);
        for kind in [ClassifierKind::Gnb, ClassifierKind::Nbk] {
            let a = fit(kind, &data, 0).unwrap();
            let b = fit(kind, &permuted, 0).unwrap();
            for row in &rows {
                let (pa, pb) = (a.posteriors(row), b.posteriors(row));
                prop_assert_eq!(pa[1].to_bits(), pb[1].to_bits());
            }
        }
    }

    #[test]
    fn unpruned_tree_fits_conflict_free_data((rows, labels) in data_strategy()) {
        let data = labeled(&rows, &labels);
        let tree = DecisionTree::fit(&data, TreeParams::unpruned()).unwrap();
        for (row, &label) in rows.iter().zip(&labels) {
            prop_assert_eq!(tree.posteriors(row)[1] > 0.5, label);
        }
    }

    #[test]
    fn split_choice_matches_enumeration(seed in any::<u64>(), n in 4usize..=20) {
        let data = random_dataset(seed, n, 2, 5);
        let all: Vec<usize> = (0..n).collect();
        let ours = best_split(&data, data.labels().unwrap(), &all, 2).map(|s| (s.feature, s.threshold));
        prop_assert_eq!(ours, brute_force_split(&data, 2));
    }

    #[test]
    fn identical_class_data_returns_the_prior(
        rows in prop::collection::vec(prop::collection::vec(0.0f64..10.0, 3), 2..30),
        copies in 1usize..4,
        probe in prop::collection::vec(-5.0f64..15.0, 3),
    ) {
        // each row appears once as infected and `copies` times as susceptible
        let mut all = Vec::new();
        let mut labels = Vec::new();
        for r in &rows {
            all.push(r.clone());
            labels.push(true);
            for _ in 0..copies {
                all.push(r.clone());
                labels.push(false);
            }
        }
        let model = fit(ClassifierKind::Gnb, &labeled(&all, &labels), 0).unwrap();
        let prior = 1.0 / (1.0 + copies as f64);
        prop_assert!((model.posteriors(&probe)[1] - prior).abs() < 1e-9);
    }

    #[test]
    fn more_infected_training_rows_raise_the_posterior(
        (rows, labels) in data_strategy(),
        probe in prop::collection::vec(-50.0f64..50.0, 4),
    ) {
        let data = labeled(&rows, &labels);
        let row = &probe[..data.width()];
        // duplicating every infected row leaves the class statistics alone
        let mut r2 = rows.clone();
        let mut l2 = labels.clone();
        for (r, &l) in rows.iter().zip(&labels) {
            if l {
                r2.push(r.clone());
                l2.push(true);
            }
        }
        let base = fit(ClassifierKind::Gnb, &data, 0).unwrap().posteriors(row)[1];
        let boosted = fit(ClassifierKind::Gnb, &labeled(&r2, &l2), 0).unwrap().posteriors(row)[1];
        prop_assert!(boosted >= base - 1e-12);
    }

    #[test]
    fn log_joints_are_finite((rows, labels) in data_strategy(), far in 1e3f64..1e6) {
        let data = labeled(&rows, &labels);
        let row = vec![far; data.width()];
        for kind in [ClassifierKind::Gnb, ClassifierKind::Nbk] {
            let p = fit(kind, &data, 0).unwrap().posteriors(&row);
            prop_assert!(p[0].is_finite() && p[1].is_finite());
        }
    }
}

#[test]
fn xor_needs_depth_two() {
    let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![(i % 2) as f64, (i / 2 % 2) as f64]).collect();
    let labels: Vec<bool> = rows.iter().map(|r| r[0] != r[1]).collect();
    let tree = DecisionTree::fit(&labeled(&rows, &labels), TreeParams::unpruned()).unwrap();
    assert_eq!(tree.depth(), 2);
    assert_eq!(tree.leaf_count(), 4);
}

#[test]
fn pure_data_is_a_single_leaf() {
    let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
    let tree = DecisionTree::fit(&labeled(&rows, &[true; 10]), TreeParams::default()).unwrap();
    assert!(matches!(tree.root(), TreeNode::Leaf { counts: [0, 10] }));
}

#[test]
fn random_baseline_rate() {
    let data = random_dataset(3, 10_000, 2, 10);
    let model = fit(ClassifierKind::Random(0.1), &data, 0).unwrap();
    let preds = predict(&model, &data, 77).unwrap();
    let rate = preds.iter().filter(|p| p.infected).count() as f64 / preds.len() as f64;
    assert!((0.08..=0.12).contains(&rate), "rate {rate}");
}

#[test]
fn saved_models_reload() {
    let data = random_dataset(4, 200, 3, 20);
    let dir = tempfile::tempdir().unwrap();
    for kind in [ClassifierKind::Gnb, ClassifierKind::Nbk, ClassifierKind::C45, ClassifierKind::Random(0.2)] {
        let model = fit(kind, &data, 0).unwrap();
        let path = dir.path().join(format!("{kind}.json"));
        model.save(&path).unwrap();
        let back = Model::load(&path).unwrap();
        assert_eq!(back, model);
        assert_eq!(back.kind(), kind);
    }
}
