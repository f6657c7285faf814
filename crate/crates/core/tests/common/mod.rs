//! Helpers shared by integration tests.

#![allow(dead_code)]

use latent_infection::classifiers::Dataset;
use latent_infection::rng::from_seed;
use rand::Rng;

/// Integer-valued features in `0..levels` with labels drawn at rate 0.4;
/// rows 0 and 1 fix one label of each class.
pub fn random_dataset(seed: u64, rows: usize, width: usize, levels: u32) -> Dataset {
    let mut rng = from_seed(seed);
    let names = (0..width).map(|f| format!("x{f}")).collect();
    let values: Vec<Vec<f64>> = (0..rows)
        .map(|_| (0..width).map(|_| rng.random_range(0..levels) as f64).collect())
        .collect();
    let mut labels: Vec<bool> = (0..rows).map(|_| rng.random_bool(0.4)).collect();
    labels[0] = true;
    labels[1] = false;
    Dataset::new(names, &values, Some(labels)).unwrap()
}

pub fn log2_entropy(pos: usize, total: usize) -> f64 {
    let mut h = 0.0;
    for c in [pos, total - pos] {
        if c > 0 {
            let p = c as f64 / total as f64;
            h -= p * p.ln();
        }
    }
    h / std::f64::consts::LN_2
}

/// Enumerate every threshold of every feature, keep splits whose gain is at
/// least the mean gain, and return the best gain ratio with ties broken by
/// threshold then feature.
pub fn brute_force_split(data: &Dataset, min_leaf: usize) -> Option<(usize, f64)> {
    let labels = data.labels().unwrap();
    let n = data.len();
    let pos = labels.iter().filter(|&&l| l).count();
    let parent = log2_entropy(pos, n);
    let mut cands = Vec::new();
    for f in 0..data.width() {
        let mut vals: Vec<f64> = (0..n).map(|i| data.value(i, f)).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for w in vals.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let left: Vec<usize> = (0..n).filter(|&i| data.value(i, f) <= t).collect();
            let nl = left.len();
            let nr = n - nl;
            if nl < min_leaf || nr < min_leaf {
                continue;
            }
            let lp = left.iter().filter(|&&i| labels[i]).count();
            let rp = pos - lp;
            let gain = parent
                - nl as f64 / n as f64 * log2_entropy(lp, nl)
                - nr as f64 / n as f64 * log2_entropy(rp, nr);
            let gain = gain.max(0.0);
            cands.push((f, t, gain, gain / log2_entropy(nl, n)));
        }
    }
    if cands.is_empty() {
        return None;
    }
    let mean = cands.iter().map(|c| c.2).sum::<f64>() / cands.len() as f64;
    let mut best: Option<(usize, f64, f64)> = None;
    for &(f, t, gain, ratio) in &cands {
        if gain < mean - 1e-12 {
            continue;
        }
        let better = match best {
            None => true,
            Some((_, bt, br)) => ratio > br + 1e-12 || ((ratio - br).abs() <= 1e-12 && t < bt),
        };
        if better {
            best = Some((f, t, ratio));
        }
    }
    best.map(|(f, t, _)| (f, t))
}

