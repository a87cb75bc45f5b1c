//! Evaluation pipelines: seeded splits, model comparison, correlation and
//! composition tables, synthetic ground-truth data and plot data.

mod analysis;
mod comparison;
mod plot;
pub mod rng;
mod split;
mod synth;

pub use analysis::{
    composition_analysis, correlation_table, BlockComposition, CompositionRatios,
    CompositionReport, CorrelationEntry, CorrelationTable, CORRELATION_FEATURES,
};
pub use comparison::{comparison_to_csv, run_comparison, ComparisonRow, COMPARISON_HEADER};
pub use plot::{emit_plot_data, plot_data, sidecar_path, RegressionLine, PLOT_HEADER};
pub use rng::SplitMix64;
pub use split::{split, SplitPlan};
pub use synth::{generate_synthetic, CountRange, CountRanges, SizeModel, SynthSpec};
