//! Evaluation statistics: Pearson's r, MAE, EMR, R², adjusted R² and
//! extreme-value counts.
//!
//! All moments are computed in two passes (mean first, then centred sums).
//! Sums over 100k or more terms use Neumaier compensated summation.
//! Degenerate inputs are reported as errors instead of NaN.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::Dataset;
use crate::models::ModelSpec;

/// Length from which sums switch to compensated accumulation.
pub const COMPENSATED_SUM_THRESHOLD: usize = 100_000;

fn sum<I: ExactSizeIterator<Item = f64>>(values: I) -> f64 {
    if values.len() < COMPENSATED_SUM_THRESHOLD {
        return values.sum();
    }
    let mut total = 0.0f64;
    let mut compensation = 0.0f64;
    for v in values {
        let t = total + v;
        if total.abs() >= v.abs() {
            compensation += (total - t) + v;
        } else {
            compensation += (v - t) + total;
        }
        total = t;
    }
    total + compensation
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    sum(values.iter().copied()) / values.len() as f64
}

fn check_pair(t: &[f64], t_hat: &[f64]) -> Result<()> {
    if t.len() != t_hat.len() {
        return Err(Error::Shape(format!(
            "length mismatch: {} observed vs {} predicted",
            t.len(),
            t_hat.len()
        )));
    }
    if t.is_empty() {
        return Err(Error::Shape("empty input".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub r: f64,
    pub n: usize,
}

/// Pearson product-moment correlation between `x` and `t`.
pub fn pearson_r(x: &[f64], t: &[f64]) -> Result<Correlation> {
    if x.len() != t.len() {
        return Err(Error::Shape(format!(
            "length mismatch: {} vs {}",
            x.len(),
            t.len()
        )));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::SampleCount {
            required: 2,
            actual: n,
        });
    }
    let (mx, mt) = (mean(x), mean(t));
    let sxt = sum(x.iter().zip(t).map(|(a, b)| (a - mx) * (b - mt)));
    let sxx = sum(x.iter().map(|a| (a - mx) * (a - mx)));
    let stt = sum(t.iter().map(|b| (b - mt) * (b - mt)));
    if sxx == 0.0 {
        return Err(Error::Degenerate("first series is constant".into()));
    }
    if stt == 0.0 {
        return Err(Error::Degenerate("second series is constant".into()));
    }
    let r = sxt / (sxx.sqrt() * stt.sqrt());
    Ok(Correlation {
        r: r.clamp(-1.0, 1.0),
        n,
    })
}

/// Mean absolute error of `t_hat` against observations `t`.
pub fn mae(t: &[f64], t_hat: &[f64]) -> Result<f64> {
    check_pair(t, t_hat)?;
    Ok(sum(t.iter().zip(t_hat).map(|(a, b)| (a - b).abs())) / t.len() as f64)
}

/// Error mean ratio: MAE divided by the mean observation.
pub fn emr(t: &[f64], t_hat: &[f64]) -> Result<f64> {
    let m = mae(t, t_hat)?;
    let t_bar = mean(t);
    if t_bar <= 0.0 {
        return Err(Error::Degenerate(format!(
            "mean observation {t_bar} is not positive"
        )));
    }
    Ok(m / t_bar)
}

/// Coefficient of determination. May be negative for models worse than the mean.
pub fn r_squared(t: &[f64], t_hat: &[f64]) -> Result<f64> {
    check_pair(t, t_hat)?;
    if t.len() < 2 {
        return Err(Error::SampleCount {
            required: 2,
            actual: t.len(),
        });
    }
    let t_bar = mean(t);
    let ss_tot = sum(t.iter().map(|a| (a - t_bar) * (a - t_bar)));
    if ss_tot == 0.0 {
        return Err(Error::Degenerate("observed series is constant".into()));
    }
    let ss_res = sum(t.iter().zip(t_hat).map(|(a, b)| (a - b) * (a - b)));
    Ok(1.0 - ss_res / ss_tot)
}

/// Adjusted R² for `n` samples and `p` predictors. Requires `n > p + 1`.
pub fn adjusted_r_squared(r2: f64, n: usize, p: usize) -> Result<f64> {
    if n <= p + 1 {
        return Err(Error::SampleCount {
            required: p + 2,
            actual: n,
        });
    }
    Ok(1.0 - (1.0 - r2) * (n - 1) as f64 / (n - p - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremeValues {
    pub max_prediction_us: f64,
    /// Observations strictly above the largest prediction.
    pub n_exceeding_max_prediction: usize,
    pub max_abs_error_us: f64,
}

pub fn extreme_value_report(t: &[f64], t_hat: &[f64]) -> Result<ExtremeValues> {
    check_pair(t, t_hat)?;
    let max_prediction_us = t_hat.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ExtremeValues {
        max_prediction_us,
        n_exceeding_max_prediction: t.iter().filter(|&&a| a > max_prediction_us).count(),
        max_abs_error_us: t
            .iter()
            .zip(t_hat)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
    })
}

/// Every statistic for one model evaluated on one set of observations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n: usize,
    pub mae_us: f64,
    pub emr: f64,
    pub r2: f64,
    pub adj_r2: f64,
    pub max_abs_error_us: f64,
    pub max_prediction_us: f64,
    pub n_exceeding_max_prediction: usize,
    pub mean_observed_us: f64,
}

impl EvalReport {
    /// Fraction of observations above the largest prediction.
    pub fn exceeding_fraction(&self) -> f64 {
        self.n_exceeding_max_prediction as f64 / self.n as f64
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Builds an [`EvalReport`] from observations, predictions and the
/// model's predictor count `p`.
pub fn evaluate_predictions(t: &[f64], t_hat: &[f64], p: usize) -> Result<EvalReport> {
    let r2 = r_squared(t, t_hat)?;
    let extremes = extreme_value_report(t, t_hat)?;
    Ok(EvalReport {
        n: t.len(),
        mae_us: mae(t, t_hat)?,
        emr: emr(t, t_hat)?,
        r2,
        adj_r2: adjusted_r_squared(r2, t.len(), p)?,
        max_abs_error_us: extremes.max_abs_error_us,
        max_prediction_us: extremes.max_prediction_us,
        n_exceeding_max_prediction: extremes.n_exceeding_max_prediction,
        mean_observed_us: mean(t),
    })
}

/// Evaluates `model` on every sample of `ds`, with `p` taken from the model kind.
pub fn evaluate(model: &ModelSpec, ds: &Dataset) -> Result<EvalReport> {
    let t = ds.times_us();
    let t_hat: Vec<f64> = ds.iter().map(|s| model.predict(&s.features)).collect();
    evaluate_predictions(&t, &t_hat, model.kind().predictor_count())
}
