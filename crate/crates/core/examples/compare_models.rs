//! Fit the description-count and block-size models on the same split and
//! rank them against the fixed-rate baseline.
//!
//! ```text
//! cargo run --example compare_models -- [dataset.csv]
//! ```
//!
//! Without an argument a synthetic dataset is used.

use joist::experiment::{
    comparison_to_csv, generate_synthetic, run_comparison, SplitPlan, SynthSpec,
};
use joist::ingest::{read_dataset, DatasetFile};
use joist::models::{ModelKind, ModelSpec};

fn main() -> joist::Result<()> {
    let ds = match std::env::args().nth(1) {
        Some(path) => read_dataset(&DatasetFile::csv(path))?,
        None => generate_synthetic(&SynthSpec::new(15_000, 2_000.0, 7))?,
    };
    let n_fit = ds.len() / 3;
    for seed in [1, 2] {
        let plan = SplitPlan::for_dataset(seed, n_fit, &ds)?;
        let rows = run_comparison(
            &ds,
            &plan,
            &[ModelKind::Joist, ModelKind::BlockSize],
            &[ModelSpec::gervais()],
        )?;
        println!("# split seed {seed}");
        print!("{}", comparison_to_csv(&rows));
        for row in rows.iter().filter(|r| r.fitted) {
            println!("# {} model: {}", row.model_kind, row.model.to_json());
        }
    }
    Ok(())
}
