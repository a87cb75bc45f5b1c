//! Ordinary least squares via Householder QR.
//!
//! The design matrix is never squared: columns are reduced one at a time
//! with Householder reflections, and a column whose remaining norm falls
//! below `RANK_TOLERANCE` times its original norm is reported as rank
//! deficient by predictor name. The intercept column is reduced first, so a
//! constant predictor is the one named rather than the intercept.

use crate::error::{Error, Result};
use crate::features::Dataset;
use crate::models::{predictor_vector, ModelKind, ModelSpec};

/// Relative remaining-norm threshold under which a column counts as dependent.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Scaled condition estimate above which a fit carries a warning.
const CONDITION_WARNING_THRESHOLD: f64 = 1e8;

#[derive(Debug, Clone, PartialEq)]
pub struct StandardErrors {
    /// In the order of the kind's predictor names.
    pub coefficients: Vec<f64>,
    pub intercept_us: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: ModelSpec,
    pub n_samples: usize,
    pub residual_sum_squares: f64,
    /// Residual-based standard errors; `None` when there are no residual
    /// degrees of freedom (`n_samples == p + 1`).
    pub standard_errors: Option<StandardErrors>,
    pub condition_warning: Option<String>,
}

/// Solution of a dense least-squares problem with an intercept.
#[derive(Debug, Clone)]
pub(crate) struct LeastSquares {
    pub slopes: Vec<f64>,
    pub intercept: f64,
    pub rss: f64,
    pub slope_se: Option<Vec<f64>>,
    pub intercept_se: Option<f64>,
    pub condition: f64,
}

/// Fits `y ≈ X b + c` where `columns[j]` is predictor column `j` (length n).
pub(crate) fn least_squares_with_intercept(
    columns: &[Vec<f64>],
    names: &[&str],
    y: &[f64],
) -> Result<LeastSquares> {
    let n = y.len();
    let p = columns.len();
    debug_assert_eq!(names.len(), p);
    if n < p + 1 {
        return Err(Error::SampleCount {
            required: p + 1,
            actual: n,
        });
    }
    let m = p + 1;

    // Column-major working copy; column 0 is the intercept.
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(m);
    a.push(vec![1.0; n]);
    for col in columns {
        debug_assert_eq!(col.len(), n);
        a.push(col.clone());
    }
    let original_norms: Vec<f64> = a.iter().map(|c| norm(c)).collect();

    let mut qty = y.to_vec();
    let mut deficient = Vec::new();
    let mut rank = 0usize;
    // Reflection vectors, each acting on rows rank..n at the time it was built.
    for j in 0..m {
        let remaining = norm(&a[j][rank..]);
        if original_norms[j] == 0.0 || remaining <= RANK_TOLERANCE * original_norms[j] {
            deficient.push(j);
            continue;
        }
        let alpha = if a[j][rank] > 0.0 {
            -remaining
        } else {
            remaining
        };
        let mut v: Vec<f64> = a[j][rank..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            for col in a.iter_mut().skip(j) {
                apply_reflection(&v, vnorm2, &mut col[rank..]);
            }
            apply_reflection(&v, vnorm2, &mut qty[rank..]);
        }
        a[j][rank] = alpha;
        for x in a[j][rank + 1..].iter_mut() {
            *x = 0.0;
        }
        rank += 1;
    }

    if !deficient.is_empty() {
        let predictors = deficient
            .into_iter()
            .map(|j| {
                if j == 0 {
                    "intercept".to_string()
                } else {
                    names[j - 1].to_string()
                }
            })
            .collect();
        return Err(Error::RankDeficient { predictors });
    }

    // R is the leading m x m block: r[i][j] = a[j][i] for i <= j.
    let r = |i: usize, j: usize| a[j][i];
    let mut beta = vec![0.0; m];
    for i in (0..m).rev() {
        let mut s = qty[i];
        for (k, b) in beta.iter().enumerate().take(m).skip(i + 1) {
            s -= r(i, k) * b;
        }
        beta[i] = s / r(i, i);
    }

    let rss: f64 = (0..n)
        .map(|row| {
            let pred = beta[0] + (0..p).map(|k| beta[k + 1] * columns[k][row]).sum::<f64>();
            let e = y[row] - pred;
            e * e
        })
        .sum();

    // Inverse of R, for standard errors.
    #[allow(clippy::needless_range_loop)]
    let r_inv = {
        let mut r_inv = vec![vec![0.0; m]; m];
        for j in 0..m {
            r_inv[j][j] = 1.0 / r(j, j);
            for i in (0..j).rev() {
                let s: f64 = (i + 1..=j).map(|k| r(i, k) * r_inv[k][j]).sum();
                r_inv[i][j] = -s / r(i, i);
            }
        }
        r_inv
    };
    let (slope_se, intercept_se) = if n > m {
        let sigma = (rss / (n - m) as f64).sqrt();
        let se: Vec<f64> = r_inv.iter().map(|row| sigma * norm(row)).collect();
        (Some(se[1..].to_vec()), Some(se[0]))
    } else {
        (None, None)
    };

    let scaled_diag: Vec<f64> = (0..m).map(|j| r(j, j).abs() / original_norms[j]).collect();
    let condition = scaled_diag.iter().copied().fold(0.0, f64::max)
        / scaled_diag.iter().copied().fold(f64::INFINITY, f64::min);

    Ok(LeastSquares {
        slopes: beta[1..].to_vec(),
        intercept: beta[0],
        rss,
        slope_se,
        intercept_se,
        condition,
    })
}

fn norm(v: &[f64]) -> f64 {
    // Scaled to avoid overflow on byte-sized columns over many rows.
    let scale = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale
        * v.iter()
            .map(|x| (x / scale) * (x / scale))
            .sum::<f64>()
            .sqrt()
}

fn apply_reflection(v: &[f64], vnorm2: f64, x: &mut [f64]) {
    let d: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    let f = 2.0 * d / vnorm2;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= f * vi;
    }
}

/// Fits a model of `kind` to `train` by ordinary least squares.
///
/// The fixed-rate kind is rejected: its rate is a given constant.
pub fn ols_fit(kind: ModelKind, train: &Dataset) -> Result<FitResult> {
    if !kind.has_intercept() {
        return Err(Error::UnsupportedKind(kind.to_string()));
    }
    let p = kind.predictor_count();
    let mut columns = vec![Vec::with_capacity(train.len()); p];
    for s in train {
        for (col, v) in columns.iter_mut().zip(predictor_vector(kind, &s.features)) {
            col.push(v);
        }
    }
    let y = train.times_us();
    let ls = least_squares_with_intercept(&columns, kind.predictor_names(), &y)?;
    let condition_warning = (ls.condition > CONDITION_WARNING_THRESHOLD).then(|| {
        format!(
            "design matrix is ill-conditioned (scaled condition estimate {:.3e})",
            ls.condition
        )
    });
    if let Some(w) = &condition_warning {
        log::warn!("{w}");
    }
    Ok(FitResult {
        model: ModelSpec::new(kind, ls.slopes, ls.intercept)?,
        n_samples: train.len(),
        residual_sum_squares: ls.rss,
        standard_errors: ls
            .slope_se
            .zip(ls.intercept_se)
            .map(|(coefficients, intercept_us)| StandardErrors {
                coefficients,
                intercept_us,
            }),
        condition_warning,
    })
}

/// Least-squares line `y ≈ slope * x + intercept`.
pub fn fit_line(x: &[f64], y: &[f64], x_name: &str) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let ls = least_squares_with_intercept(&[x.to_vec()], &[x_name], y)?;
    Ok((ls.slopes[0], ls.intercept))
}
