//! Linear readout: pseudo-inverse training, prediction and the NMSE metric.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative singular-value cutoff for the pseudo-inverse.
pub const SVD_CUTOFF: f64 = 1e-10;

/// Variance below which a normalizing series counts as constant.
pub const ZERO_VARIANCE_TOL: f64 = 1e-14;

/// Trained output weights, one per reservoir signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutWeights {
    pub weights: Vec<f64>,
    pub intercept: Option<f64>,
}

/// Washout / train / test partition of an L-step run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub discard: usize,
    pub train_len: usize,
    pub test_len: usize,
}

impl SplitSpec {
    pub fn new(discard: usize, train_len: usize, test_len: usize) -> SplitSpec {
        SplitSpec {
            discard,
            train_len,
            test_len,
        }
    }

    /// Simulator protocol: discard 10, train 35, test 15 (L = 60).
    pub fn simulator() -> SplitSpec {
        SplitSpec::new(10, 35, 15)
    }

    /// Hardware protocol: discard 4, train 19, test 7 (L = 30).
    pub fn hardware() -> SplitSpec {
        SplitSpec::new(4, 19, 7)
    }

    pub fn total_len(&self) -> usize {
        self.discard + self.train_len + self.test_len
    }

    pub fn validate_for(&self, sequence_len: usize) -> Result<()> {
        if self.total_len() != sequence_len {
            return Err(Error::Config(format!(
                "split {} + {} + {} does not cover sequence of length {sequence_len}",
                self.discard, self.train_len, self.test_len
            )));
        }
        if self.train_len == 0 || self.test_len == 0 {
            return Err(Error::Config("empty train or test window".into()));
        }
        Ok(())
    }

    /// Zero-based half-open row range of the training window.
    pub fn train_range(&self) -> std::ops::Range<usize> {
        self.discard..self.discard + self.train_len
    }

    /// Zero-based half-open row range of the test window.
    pub fn test_range(&self) -> std::ops::Range<usize> {
        self.discard + self.train_len..self.total_len()
    }
}

/// Least-squares fit W = X^+ Y via a rank-revealing SVD pseudo-inverse.
/// Singular values below `SVD_CUTOFF * sigma_max` are truncated, giving the
/// minimum-norm solution for rank-deficient X.
pub fn train_readout(x: &DMatrix<f64>, y: &[f64], intercept: bool) -> Result<ReadoutWeights> {
    if x.nrows() == 0 || x.ncols() == 0 {
        return Err(Error::InvalidArgument("empty design matrix".into()));
    }
    if y.len() != x.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "{} targets for {} rows",
            y.len(),
            x.nrows()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite target value".into()));
    }
    let cols = x.ncols() + usize::from(intercept);
    if x.nrows() < cols {
        return Err(Error::InvalidArgument(format!(
            "{} rows is fewer than {} unknowns",
            x.nrows(),
            cols
        )));
    }

    let design = if intercept {
        let mut with_ones = DMatrix::zeros(x.nrows(), cols);
        with_ones.view_mut((0, 0), (x.nrows(), x.ncols())).copy_from(x);
        with_ones.column_mut(cols - 1).fill(1.0);
        with_ones
    } else {
        x.clone()
    };

    let rhs = DVector::from_column_slice(y);
    let solution = pseudo_inverse_solve(&design, &rhs)?;
    let mut weights: Vec<f64> = solution.iter().cloned().collect();
    let fitted_intercept = if intercept { weights.pop() } else { None };
    Ok(ReadoutWeights {
        weights,
        intercept: fitted_intercept,
    })
}

fn pseudo_inverse_solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = SVD_CUTOFF * sigma_max;

    let utb = u.transpose() * b;
    let mut scaled = DVector::zeros(svd.singular_values.len());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff {
            scaled[i] = utb[i] / s;
        }
    }
    Ok(vt.transpose() * scaled)
}

/// Y_hat = X W (+ intercept).
pub fn predict(x: &DMatrix<f64>, w: &ReadoutWeights) -> Result<Vec<f64>> {
    if x.ncols() != w.weights.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} columns vs {} weights",
            x.ncols(),
            w.weights.len()
        )));
    }
    let weights = DVector::from_column_slice(&w.weights);
    let base = x * weights;
    let offset = w.intercept.unwrap_or(0.0);
    Ok(base.iter().map(|v| v + offset).collect())
}

/// Which series the NMSE denominator is computed from. The target series is
/// the stable conventional choice; `Predicted` replicates the literal
/// published formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum NmseNormalization {
    #[default]
    Target,
    Predicted,
}

/// Normalized mean squared error:
/// sum |pred - target|^2 / sum (norm_series - mean(norm_series))^2.
pub fn nmse(y_pred: &[f64], y_target: &[f64], normalization: NmseNormalization) -> Result<f64> {
    if y_pred.len() != y_target.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} predictions vs {} targets",
            y_pred.len(),
            y_target.len()
        )));
    }
    if y_pred.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two points for NMSE".into(),
        ));
    }
    let numerator: f64 = y_pred
        .iter()
        .zip(y_target)
        .map(|(p, t)| (p - t) * (p - t))
        .sum();
    let series = match normalization {
        NmseNormalization::Target => y_target,
        NmseNormalization::Predicted => y_pred,
    };
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    let denominator: f64 = series.iter().map(|v| (v - mean) * (v - mean)).sum();
    if denominator / series.len() as f64 <= ZERO_VARIANCE_TOL {
        return Err(Error::DegenerateNormalization);
    }
    Ok(numerator / denominator)
}
