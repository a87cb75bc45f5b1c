//! Generate a synthetic dataset from a known model, fit on a seeded subset
//! and compare the recovered coefficients with the truth.
//!
//! ```text
//! cargo run --example fit_synthetic -- [n_blocks] [noise_sigma_us] [seed]
//! ```

use joist::experiment::{generate_synthetic, split, SplitPlan, SynthSpec};
use joist::fit::ols_fit;
use joist::models::ModelKind;
use joist::stats::evaluate;

fn arg<T: std::str::FromStr>(i: usize, default: T) -> T {
    std::env::args()
        .nth(i)
        .and_then(|a| a.parse().ok())
        .unwrap_or(default)
}

fn main() -> joist::Result<()> {
    let (n, sigma, seed) = (arg(1, 6_000usize), arg(2, 2_000.0f64), arg(3, 7u64));
    let spec = SynthSpec::new(n, sigma, seed);
    let ds = generate_synthetic(&spec)?;
    let plan = SplitPlan::for_dataset(seed, n / 3, &ds)?;
    let (fit_set, predict_set) = split(&ds, &plan)?;

    let fit = ols_fit(ModelKind::Joist, &fit_set)?;
    let se = fit.standard_errors.clone();
    println!(
        "fitted on {} blocks ({}), sigma = {sigma} us",
        fit.n_samples,
        plan.label()
    );
    println!(
        "{:<16} {:>12} {:>12} {:>10}",
        "term", "true", "fitted", "std_err"
    );
    let truth = &spec.true_model;
    for (j, name) in ModelKind::Joist.predictor_names().iter().enumerate() {
        let e = se.as_ref().map_or(f64::NAN, |s| s.coefficients[j]);
        println!(
            "{name:<16} {:>12.3} {:>12.3} {e:>10.3}",
            truth.coefficients()[j],
            fit.model.coefficients()[j]
        );
    }
    let e = se.as_ref().map_or(f64::NAN, |s| s.intercept_us);
    println!(
        "{:<16} {:>12.3} {:>12.3} {e:>10.3}",
        "intercept",
        truth.intercept_us(),
        fit.model.intercept_us()
    );
    if let Some(w) = &fit.condition_warning {
        println!("warning: {w}");
    }

    let report = evaluate(&fit.model, &predict_set)?;
    println!("held-out: {}", report.to_json_line());
    Ok(())
}
