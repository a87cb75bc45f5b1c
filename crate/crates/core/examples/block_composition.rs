//! Share of each description family in every block, plus the mean shares.
//!
//! ```text
//! cargo run --example block_composition -- [dataset.csv]
//! ```

use joist::experiment::{composition_analysis, generate_synthetic, SynthSpec};
use joist::ingest::{read_dataset, DatasetFile};

fn main() -> joist::Result<()> {
    let ds = match std::env::args().nth(1) {
        Some(path) => read_dataset(&DatasetFile::csv(path))?,
        None => generate_synthetic(&SynthSpec::new(20, 0.0, 3))?,
    };
    let report = composition_analysis(&ds);
    print!("{}", report.to_csv());
    if report.n_excluded > 0 {
        eprintln!(
            "{} blocks without descriptions were excluded",
            report.n_excluded
        );
    }
    Ok(())
}
