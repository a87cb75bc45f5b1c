//! Write measured-versus-predicted points and the fitted regression line
//! for a held-out set.
//!
//! ```text
//! cargo run --example plot_data -- <out.csv>
//! ```
//!
//! The line parameters go to `<out>.line.json` next to the CSV.

use joist::experiment::{
    emit_plot_data, generate_synthetic, sidecar_path, split, SplitPlan, SynthSpec,
};
use joist::fit::ols_fit;
use joist::models::ModelKind;

fn main() -> joist::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "plot.csv".to_string());
    let ds = generate_synthetic(&SynthSpec::new(3_000, 2_000.0, 5))?;
    let plan = SplitPlan::for_dataset(5, 1_000, &ds)?;
    let (fit_set, predict_set) = split(&ds, &plan)?;
    let model = ols_fit(ModelKind::Joist, &fit_set)?.model;

    let line = emit_plot_data(&predict_set, &model, &out)?;
    println!("wrote {} points to {out}", predict_set.len());
    println!(
        "measured = {:.4} * predicted + {:.1} us ({})",
        line.slope,
        line.intercept_us,
        sidecar_path(out.as_ref()).display()
    );
    Ok(())
}
