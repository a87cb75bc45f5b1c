//! Accuracy metrics for a saved model on a dataset, or for a reference
//! model on synthetic data when no arguments are given.
//!
//! ```text
//! cargo run --example evaluation_metrics -- [model.json dataset.csv]
//! ```

use joist::experiment::{generate_synthetic, SynthSpec};
use joist::ingest::{read_dataset, DatasetFile};
use joist::models::{ModelSpec, ReferenceSetup};
use joist::stats::evaluate;

fn main() -> joist::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (models, ds) = match args.as_slice() {
        [model, data] => (
            vec![ModelSpec::load(model)?],
            read_dataset(&DatasetFile::csv(data))?,
        ),
        _ => {
            let ds = generate_synthetic(&SynthSpec::new(2_000, 1_500.0, 21))?;
            let setup = ReferenceSetup::Ssd5k;
            (
                vec![setup.joist(), setup.block_size(), ModelSpec::gervais()],
                ds,
            )
        }
    };
    for model in &models {
        let r = evaluate(model, &ds)?;
        println!("{}", model.kind());
        println!("  n                  {}", r.n);
        println!("  MAE                {:.1} us", r.mae_us);
        println!("  EMR                {:.4}", r.emr);
        println!("  R2 / adjusted R2   {:.4} / {:.4}", r.r2, r.adj_r2);
        println!("  max |error|        {:.1} us", r.max_abs_error_us);
        println!(
            "  above max predict  {} ({:.2}% of blocks)",
            r.n_exceeding_max_prediction,
            100.0 * r.exceeding_fraction()
        );
    }
    Ok(())
}
