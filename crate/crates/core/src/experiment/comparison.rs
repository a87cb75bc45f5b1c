use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::split::{split, SplitPlan};
use crate::error::Result;
use crate::features::Dataset;
use crate::fit::ols_fit;
use crate::models::{ModelKind, ModelSpec};
use crate::stats::{evaluate, EvalReport};

pub const COMPARISON_HEADER: &str =
    "model,split,n,mae_us,emr,r2,adj_r2,max_abs_error_us,max_prediction_us,n_exceeding";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model_kind: ModelKind,
    pub split_label: String,
    /// The evaluated model: fitted on the fit set, or the given baseline.
    pub model: ModelSpec,
    pub fitted: bool,
    pub report: EvalReport,
}

/// Splits `ds` by `plan`, fits every kind in `kinds` on the fit set, and
/// evaluates the fitted models and the fixed `baselines` on the predict set.
///
/// Rows come back fitted kinds first (in the given order), then baselines.
pub fn run_comparison(
    ds: &Dataset,
    plan: &SplitPlan,
    kinds: &[ModelKind],
    baselines: &[ModelSpec],
) -> Result<Vec<ComparisonRow>> {
    let (fit_set, predict_set) = split(ds, plan)?;
    let label = plan.label();

    let mut candidates = Vec::with_capacity(kinds.len() + baselines.len());
    for &kind in kinds {
        let fit = ols_fit(kind, &fit_set)?;
        if let Some(w) = &fit.condition_warning {
            log::warn!("{kind}: {w}");
        }
        candidates.push((fit.model, true));
    }
    candidates.extend(baselines.iter().cloned().map(|m| (m, false)));

    // Models are independent; evaluate them side by side on the shared predict set.
    let reports: Vec<Result<EvalReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = candidates
            .iter()
            .map(|(model, _)| scope.spawn(|| evaluate(model, &predict_set)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("evaluation thread panicked"))
            .collect()
    });

    candidates
        .into_iter()
        .zip(reports)
        .map(|((model, fitted), report)| {
            Ok(ComparisonRow {
                model_kind: model.kind(),
                split_label: label.clone(),
                model,
                fitted,
                report: report?,
            })
        })
        .collect()
}

/// Renders rows as comparison CSV, header included.
pub fn comparison_to_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from(COMPARISON_HEADER);
    out.push('\n');
    for row in rows {
        let r = &row.report;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            row.model_kind,
            row.split_label,
            r.n,
            r.mae_us,
            r.emr,
            r.r2,
            r.adj_r2,
            r.max_abs_error_us,
            r.max_prediction_us,
            r.n_exceeding_max_prediction
        )
        .expect("writing to a String cannot fail");
    }
    out
}
