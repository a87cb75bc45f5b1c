use serde::{Deserialize, Serialize};

use super::rng::SplitMix64;
use crate::error::{Error, Result};
use crate::features::Dataset;

/// How to divide a dataset into a fitting and a prediction part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub seed: u64,
    pub n_fit: usize,
    pub n_predict: usize,
}

impl SplitPlan {
    pub fn new(seed: u64, n_fit: usize, n_predict: usize) -> Result<Self> {
        if n_fit == 0 || n_predict == 0 {
            return Err(Error::InvalidArgument(format!(
                "split sizes must be at least 1 (n_fit = {n_fit}, n_predict = {n_predict})"
            )));
        }
        Ok(SplitPlan {
            seed,
            n_fit,
            n_predict,
        })
    }

    /// Fits on `n_fit` samples and predicts on the rest of `ds`.
    pub fn for_dataset(seed: u64, n_fit: usize, ds: &Dataset) -> Result<Self> {
        SplitPlan::new(seed, n_fit, ds.len().saturating_sub(n_fit))
    }

    /// Label such as `5000/10000`.
    pub fn label(&self) -> String {
        format!("{}/{}", self.n_fit, self.n_predict)
    }
}

/// Random partition of `ds` into `(fit_set, predict_set)`.
///
/// Sample indices `0..n` (in height order) are shuffled with
/// [`SplitMix64::shuffle`] seeded by `plan.seed`; the first `n_fit`
/// shuffled indices form the fit set. Both parts come back sorted by height.
pub fn split(ds: &Dataset, plan: &SplitPlan) -> Result<(Dataset, Dataset)> {
    if plan.n_fit == 0 || plan.n_predict == 0 {
        return Err(Error::InvalidArgument(
            "split sizes must be at least 1".into(),
        ));
    }
    if plan.n_fit + plan.n_predict != ds.len() {
        return Err(Error::Shape(format!(
            "split plan {} + {} does not match dataset size {}",
            plan.n_fit,
            plan.n_predict,
            ds.len()
        )));
    }
    let mut order: Vec<usize> = (0..ds.len()).collect();
    SplitMix64::new(plan.seed).shuffle(&mut order);
    let (fit_idx, predict_idx) = order.split_at_mut(plan.n_fit);
    fit_idx.sort_unstable();
    predict_idx.sort_unstable();
    let pick = |idx: &[usize]| Dataset::new(idx.iter().map(|&i| ds.samples()[i]).collect());
    Ok((pick(fit_idx)?, pick(predict_idx)?))
}
