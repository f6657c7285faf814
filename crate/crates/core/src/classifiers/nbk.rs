use serde::{Deserialize, Serialize};

use super::{class_name, class_priors, normalize_log, sorted_class_column, ClassifierError, Dataset};

/// Smallest bandwidth used when a feature has zero range.
const ABSOLUTE_BANDWIDTH_FLOOR: f64 = 1e-6;
/// Relative bandwidth floor, as a share of the feature's training range.
const RELATIVE_BANDWIDTH_FLOOR: f64 = 1e-6;
/// Kernel terms more than `LOG_CUTOFF + ln(total)` nats below the largest
/// term are skipped; together they weigh under `e^-40` of the sum.
const LOG_CUTOFF: f64 = 40.0;

/// Gaussian kernel density of one feature within one class. Repeated
/// training values share a center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureKernel {
    centers: Vec<f64>,
    counts: Vec<u32>,
    max_count: u32,
    total: usize,
    bandwidth: f64,
}

impl FeatureKernel {
    /// `values` must be sorted. `range` is the feature's spread over the
    /// whole training set.
    fn from_sorted(values: &[f64], range: f64) -> Self {
        let m = values.len() as f64;
        let mean = values.iter().sum::<f64>() / m;
        let sd = if values.len() > 1 {
            (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
        } else {
            0.0
        };
        let floor = if range > 0.0 {
            RELATIVE_BANDWIDTH_FLOOR * range
        } else {
            ABSOLUTE_BANDWIDTH_FLOOR
        };
        let bandwidth = (1.06 * sd * m.powf(-0.2)).max(floor);
        let mut centers: Vec<f64> = Vec::new();
        let mut counts: Vec<u32> = Vec::new();
        for &x in values {
            if centers.last() == Some(&x) {
                *counts.last_mut().unwrap() += 1;
            } else {
                centers.push(x);
                counts.push(1);
            }
        }
        FeatureKernel {
            max_count: counts.iter().copied().max().unwrap_or(1),
            centers,
            counts,
            total: values.len(),
            bandwidth,
        }
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn log_density(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let term = |k: usize| (self.counts[k] as f64).ln() - ((x - self.centers[k]) / h).powi(2) / 2.0;
        let max_log_count = (self.max_count as f64).ln();
        let cutoff = LOG_CUTOFF + (self.total as f64).ln();
        // scan outward from the nearest center until terms cannot matter
        let start = self.centers.partition_point(|&c| c < x);
        let mut best = f64::NEG_INFINITY;
        let mut lo = start;
        while lo > 0 {
            let t = term(lo - 1);
            best = best.max(t);
            let bound = max_log_count - ((x - self.centers[lo - 1]) / h).powi(2) / 2.0;
            if bound < best - cutoff {
                break;
            }
            lo -= 1;
        }
        let mut hi = start;
        while hi < self.centers.len() {
            let t = term(hi);
            best = best.max(t);
            let bound = max_log_count - ((x - self.centers[hi]) / h).powi(2) / 2.0;
            if bound < best - cutoff {
                break;
            }
            hi += 1;
        }
        if lo == hi {
            // every term underflows; keep the closest one so the log stays finite
            let k = if start == self.centers.len() {
                start - 1
            } else if start == 0 {
                0
            } else if x - self.centers[start - 1] <= self.centers[start] - x {
                start - 1
            } else {
                start
            };
            return term(k) - self.log_norm();
        }
        let sum: f64 = (lo..hi).map(|k| (term(k) - best).exp()).sum();
        best + sum.ln() - self.log_norm()
    }

    fn log_norm(&self) -> f64 {
        (self.total as f64 * self.bandwidth * (2.0 * std::f64::consts::PI).sqrt()).ln()
    }
}

/// Naive Bayes with a Gaussian kernel density per feature and class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelNb {
    priors: [f64; 2],
    kernels: [Vec<FeatureKernel>; 2],
}

impl KernelNb {
    pub fn fit(data: &Dataset) -> Result<Self, ClassifierError> {
        let labels = data.require_labels()?;
        let (counts, priors) = class_priors(labels);
        for (class, &count) in counts.iter().enumerate() {
            if count == 0 {
                return Err(ClassifierError::MissingClass(class_name(class)));
            }
        }
        let mut kernels: [Vec<FeatureKernel>; 2] = Default::default();
        for f in 0..data.width() {
            let columns = [
                sorted_class_column(data, labels, 0, f),
                sorted_class_column(data, labels, 1, f),
            ];
            let min = columns.iter().map(|c| c[0]).fold(f64::INFINITY, f64::min);
            let max = columns.iter().map(|c| c[c.len() - 1]).fold(f64::NEG_INFINITY, f64::max);
            for class in 0..2 {
                kernels[class].push(FeatureKernel::from_sorted(&columns[class], max - min));
            }
        }
        Ok(KernelNb { priors, kernels })
    }

    pub fn kernel(&self, class: usize, feature: usize) -> &FeatureKernel {
        &self.kernels[class][feature]
    }

    pub fn log_joint(&self, row: &[f64]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (class, slot) in out.iter_mut().enumerate() {
            *slot = self.priors[class].ln()
                + row
                    .iter()
                    .zip(&self.kernels[class])
                    .map(|(&x, k)| k.log_density(x))
                    .sum::<f64>();
        }
        out
    }

    pub fn posteriors(&self, row: &[f64]) -> [f64; 2] {
        normalize_log(self.log_joint(row))
    }
}
