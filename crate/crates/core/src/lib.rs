//! Block verification time modeling from per-block transaction features.
//!
//! The crate reduces blocks to counts of transparent inputs, Sapling Spend
//! and Output descriptions and JoinSplit descriptions, fits linear
//! predictors of verification time to measured data, and evaluates them
//! against size-based baselines.
//!
//! ```
//! use joist::features::BlockFeatures;
//! use joist::models::ReferenceSetup;
//!
//! let model = ReferenceSetup::Ssd5k.joist();
//! let block = BlockFeatures::empty(1, 2_000).with_counts(1, 2, 3, 4);
//! assert!((model.predict(&block) - 89_115.990).abs() < 1e-6);
//! ```
//!
//! Runnable examples for each capability live in `examples/`; the `joist`
//! binary exposes the same pipelines on the command line.

pub mod cli;
pub mod error;
pub mod experiment;
pub mod features;
pub mod fit;
pub mod ingest;
pub mod models;
pub mod stats;

pub use error::{Error, ErrorClass, Result};
pub use features::{BlockFeatures, Dataset, TxFeatures, VerificationSample};
pub use fit::{ols_fit, FitResult};
pub use models::{ModelKind, ModelSpec, ReferenceSetup};
pub use stats::EvalReport;
