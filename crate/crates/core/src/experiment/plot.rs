use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::Dataset;
use crate::fit::fit_line;
use crate::models::ModelSpec;

pub const PLOT_HEADER: &str = "height,measured_us,predicted_us";

/// Least-squares line of measured time on predicted time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionLine {
    pub slope: f64,
    pub intercept_us: f64,
}

/// Sidecar path for a plot CSV: `plot.csv` becomes `plot.line.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("line.json")
}

/// Per-block measured and predicted times, plus the regression line.
pub fn plot_data(predict_set: &Dataset, model: &ModelSpec) -> Result<(String, RegressionLine)> {
    let measured = predict_set.times_us();
    let predicted: Vec<f64> = predict_set
        .iter()
        .map(|s| model.predict(&s.features))
        .collect();
    let (slope, intercept_us) = fit_line(&predicted, &measured, "predicted_us")?;

    let mut csv = String::from(PLOT_HEADER);
    csv.push('\n');
    for (s, p) in predict_set.iter().zip(&predicted) {
        writeln!(csv, "{},{},{}", s.height(), s.verify_time_us, p)
            .expect("writing to a String cannot fail");
    }
    Ok((
        csv,
        RegressionLine {
            slope,
            intercept_us,
        },
    ))
}

/// Writes the plot CSV to `out` and the regression line to [`sidecar_path`].
pub fn emit_plot_data(
    predict_set: &Dataset,
    model: &ModelSpec,
    out: impl AsRef<Path>,
) -> Result<RegressionLine> {
    let out = out.as_ref();
    let (csv, line) = plot_data(predict_set, model)?;
    fs::write(out, csv).map_err(|e| Error::io(out, e))?;
    let sidecar = sidecar_path(out);
    let json = serde_json::to_string(&line).expect("line serialization cannot fail") + "\n";
    fs::write(&sidecar, json).map_err(|e| Error::io(&sidecar, e))?;
    Ok(line)
}
