//! Predict verification time for a few blocks with the published parameter
//! sets and the fixed-rate baseline.
//!
//! ```text
//! cargo run --example reference_predictions
//! ```

use joist::models::{ModelSpec, ReferenceSetup};
use joist::BlockFeatures;

fn main() {
    // (joinsplits, outputs, transparent inputs, spends), size in bytes.
    let blocks = [
        ("empty", BlockFeatures::empty(1, 2_000)),
        (
            "shielded",
            BlockFeatures::empty(2, 20_000).with_counts(1, 2, 3, 4),
        ),
        (
            "busy",
            BlockFeatures::empty(3, 458_263).with_counts(2, 7, 150, 3),
        ),
    ];
    let setups = [
        ReferenceSetup::Hdd5k,
        ReferenceSetup::Ssd5k,
        ReferenceSetup::Hdd20k,
        ReferenceSetup::Ssd20k,
    ];
    let gervais = ModelSpec::gervais();

    println!(
        "{:<10} {:<10} {:>14} {:>14} {:>14}",
        "block", "setup", "joist_us", "size_us", "fixed_rate_us"
    );
    for (name, block) in &blocks {
        for setup in setups {
            println!(
                "{:<10} {:<10} {:>14.3} {:>14.3} {:>14.3}",
                name,
                setup.label(),
                setup.joist().predict(block),
                setup.block_size().predict(block),
                gervais.predict(block),
            );
        }
    }
}
