use serde::{Deserialize, Serialize};

use super::{class_name, class_priors, normalize_log, sorted_class_column, ClassifierError, Dataset};

/// Lower bound on every per-class variance.
pub const VARIANCE_FLOOR: f64 = 1e-9;

/// Gaussian naive Bayes with maximum-likelihood means and variances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    priors: [f64; 2],
    means: [Vec<f64>; 2],
    variances: [Vec<f64>; 2],
}

impl GaussianNb {
    pub fn fit(data: &Dataset) -> Result<Self, ClassifierError> {
        let labels = data.require_labels()?;
        let (counts, priors) = class_priors(labels);
        for (class, &count) in counts.iter().enumerate() {
            if count == 0 {
                return Err(ClassifierError::MissingClass(class_name(class)));
            }
        }
        let mut means: [Vec<f64>; 2] = Default::default();
        let mut variances: [Vec<f64>; 2] = Default::default();
        for class in 0..2 {
            for f in 0..data.width() {
                // sorted so the sums do not depend on row order
                let values = sorted_class_column(data, labels, class, f);
                let m = values.len() as f64;
                let mean = values.iter().sum::<f64>() / m;
                let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m;
                means[class].push(mean);
                variances[class].push(var.max(VARIANCE_FLOOR));
            }
        }
        Ok(GaussianNb {
            priors,
            means,
            variances,
        })
    }

    pub fn priors(&self) -> [f64; 2] {
        self.priors
    }

    pub fn means(&self, class: usize) -> &[f64] {
        &self.means[class]
    }

    pub fn variances(&self, class: usize) -> &[f64] {
        &self.variances[class]
    }

    /// Log prior plus log likelihood of each class.
    pub fn log_joint(&self, row: &[f64]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (class, slot) in out.iter_mut().enumerate() {
            *slot = self.priors[class].ln()
                + row
                    .iter()
                    .zip(&self.means[class])
                    .zip(&self.variances[class])
                    .map(|((x, mu), var)| {
                        -0.5 * (2.0 * std::f64::consts::PI * var).ln() - (x - mu).powi(2) / (2.0 * var)
                    })
                    .sum::<f64>();
        }
        out
    }

    pub fn posteriors(&self, row: &[f64]) -> [f64; 2] {
        normalize_log(self.log_joint(row))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimates_match_hand_computation() {
        let rows = vec![vec![1.0, 0.0], vec![3.0, 0.0], vec![10.0, 2.0], vec![14.0, 4.0], vec![12.0, 6.0]];
        let data = Dataset::new(
            vec!["a".into(), "b".into()],
            &rows,
            Some(vec![false, false, true, true, true]),
        )
        .unwrap();
        let m = GaussianNb::fit(&data).unwrap();
        assert_eq!(m.priors(), [0.4, 0.6]);
        assert_eq!(m.means(0), &[2.0, 0.0]);
        assert_eq!(m.means(1), &[12.0, 4.0]);
        assert_eq!(m.variances(0), &[1.0, VARIANCE_FLOOR]);
        assert!((m.variances(1)[0] - 8.0 / 3.0).abs() < 1e-12);
        assert!((m.variances(1)[1] - 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn posterior_matches_closed_form() {
        let rows = vec![vec![0.0], vec![2.0], vec![4.0], vec![8.0]];
        let data = Dataset::new(vec!["x".into()], &rows, Some(vec![false, false, true, true])).unwrap();
        let m = GaussianNb::fit(&data).unwrap();
        // class 0: mean 1, var 1; class 1: mean 6, var 4; equal priors
        let x: f64 = 3.0;
        let p0 = (-(x - 1.0).powi(2) / 2.0).exp() / 1.0;
        let p1 = (-(x - 6.0).powi(2) / 8.0).exp() / 2.0;
        let expected = p1 / (p0 + p1);
        assert!((m.posteriors(&[x])[1] - expected).abs() < 1e-12);
    }
}
