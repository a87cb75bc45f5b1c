//! Pearson correlation between each description count and verification time.
//!
//! ```text
//! cargo run --example correlation_table -- [dataset.csv]
//! ```

use joist::experiment::{correlation_table, generate_synthetic, SynthSpec};
use joist::ingest::{read_dataset, DatasetFile};

fn main() -> joist::Result<()> {
    let ds = match std::env::args().nth(1) {
        Some(path) => read_dataset(&DatasetFile::csv(path))?,
        None => generate_synthetic(&SynthSpec::new(5_000, 2_000.0, 11))?,
    };
    let table = correlation_table(&ds);
    print!("{}", table.to_csv());

    let mut ranked: Vec<(&str, f64)> = table
        .entries
        .iter()
        .filter_map(|e| Some((e.feature.as_str(), e.r?)))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    let order: Vec<&str> = ranked.iter().map(|(f, _)| *f).collect();
    println!("# strongest first: {}", order.join(" > "));
    Ok(())
}
