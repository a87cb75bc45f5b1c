//! Synthetic datasets with a known JOIST ground truth.
//!
//! Per block the generator draws, in this order and all from one
//! [`SplitMix64`] stream: JoinSplit, Output, transparent input, Spend and
//! transparent output counts (uniform over the configured inclusive
//! ranges), a size jitter in `0..=jitter_bytes`, and one standard normal
//! deviate. The normal draw is taken even when `noise_sigma_us` is 0, so the
//! counts for a seed do not depend on the noise level.
//!
//! The measured time is the ground-truth prediction plus scaled noise,
//! rounded to whole microseconds and clamped to at least 1. Block size is an
//! affine function of the counts plus the jitter, which makes size-based
//! models correlated with the truth but worse than it.

use serde::{Deserialize, Serialize};

use super::rng::SplitMix64;
use crate::error::{Error, Result};
use crate::features::{BlockFeatures, Dataset, VerificationSample};
use crate::models::{ModelKind, ModelSpec, ReferenceSetup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRange {
    pub min: u64,
    pub max: u64,
}

impl CountRange {
    pub const fn new(min: u64, max: u64) -> Self {
        CountRange { min, max }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRanges {
    pub joinsplit: CountRange,
    pub output: CountRange,
    pub transparent_in: CountRange,
    pub spend: CountRange,
    pub transparent_out: CountRange,
}

impl Default for CountRanges {
    fn default() -> Self {
        CountRanges {
            joinsplit: CountRange::new(0, 2),
            output: CountRange::new(0, 6),
            transparent_in: CountRange::new(0, 150),
            spend: CountRange::new(0, 3),
            transparent_out: CountRange::new(1, 60),
        }
    }
}

/// Bytes contributed per block and per component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeModel {
    pub base_bytes: u64,
    pub per_joinsplit: u64,
    pub per_output: u64,
    pub per_transparent_in: u64,
    pub per_spend: u64,
    pub per_transparent_out: u64,
    pub jitter_bytes: u64,
}

impl Default for SizeModel {
    fn default() -> Self {
        SizeModel {
            base_bytes: 1_700,
            per_joinsplit: 1_802,
            per_output: 948,
            per_transparent_in: 148,
            per_spend: 384,
            per_transparent_out: 34,
            jitter_bytes: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    /// Ground truth; must be a JOIST model.
    pub true_model: ModelSpec,
    pub noise_sigma_us: f64,
    #[serde(default)]
    pub ranges: CountRanges,
    #[serde(default)]
    pub size: SizeModel,
    pub n_blocks: usize,
    pub seed: u64,
    #[serde(default = "default_start_height")]
    pub start_height: u64,
}

fn default_start_height() -> u64 {
    1
}

impl SynthSpec {
    /// Default ranges and size model around the published 5k SSD parameters.
    pub fn new(n_blocks: usize, noise_sigma_us: f64, seed: u64) -> Self {
        SynthSpec {
            true_model: ReferenceSetup::Ssd5k.joist(),
            noise_sigma_us,
            ranges: CountRanges::default(),
            size: SizeModel::default(),
            n_blocks,
            seed,
            start_height: default_start_height(),
        }
    }

    pub fn with_true_model(mut self, model: ModelSpec) -> Self {
        self.true_model = model;
        self
    }

    pub fn with_ranges(mut self, ranges: CountRanges) -> Self {
        self.ranges = ranges;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.true_model.kind() != ModelKind::Joist {
            return Err(Error::InvalidSpec(format!(
                "ground truth must be a joist model, got {}",
                self.true_model.kind()
            )));
        }
        if self.n_blocks == 0 {
            return Err(Error::InvalidSpec("n_blocks must be at least 1".into()));
        }
        if !(self.noise_sigma_us.is_finite() && self.noise_sigma_us >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "noise_sigma_us must be finite and >= 0, got {}",
                self.noise_sigma_us
            )));
        }
        let r = &self.ranges;
        for (name, range) in [
            ("joinsplit", r.joinsplit),
            ("output", r.output),
            ("transparent_in", r.transparent_in),
            ("spend", r.spend),
            ("transparent_out", r.transparent_out),
        ] {
            if range.min > range.max {
                return Err(Error::InvalidSpec(format!(
                    "{name} range has min {} > max {}",
                    range.min, range.max
                )));
            }
        }
        if self
            .start_height
            .checked_add(self.n_blocks as u64)
            .is_none()
        {
            return Err(Error::InvalidSpec("height overflow".into()));
        }
        // Largest achievable noiseless time over the count box.
        let best: f64 = self
            .true_model
            .coefficients()
            .iter()
            .zip([r.joinsplit, r.output, r.transparent_in, r.spend])
            .map(|(c, range)| {
                if *c > 0.0 {
                    c * range.max as f64
                } else {
                    c * range.min as f64
                }
            })
            .sum::<f64>()
            + self.true_model.intercept_us();
        if best <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "ground truth cannot produce a positive time over these ranges (maximum {best} us)"
            )));
        }
        Ok(())
    }
}

/// Draws a synthetic dataset from `spec`. Deterministic in the spec.
pub fn generate_synthetic(spec: &SynthSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    let r = &spec.ranges;
    let sz = &spec.size;
    let samples = (0..spec.n_blocks as u64)
        .map(|i| {
            let n_joinsplit = rng.in_range(r.joinsplit.min, r.joinsplit.max);
            let n_output = rng.in_range(r.output.min, r.output.max);
            let n_transparent_in = rng.in_range(r.transparent_in.min, r.transparent_in.max);
            let n_spend = rng.in_range(r.spend.min, r.spend.max);
            let n_transparent_out = rng.in_range(r.transparent_out.min, r.transparent_out.max);
            let jitter = rng.in_range(0, sz.jitter_bytes);
            let z = rng.standard_normal();

            let size_bytes = sz.base_bytes
                + sz.per_joinsplit * n_joinsplit
                + sz.per_output * n_output
                + sz.per_transparent_in * n_transparent_in
                + sz.per_spend * n_spend
                + sz.per_transparent_out * n_transparent_out
                + jitter;
            let features = BlockFeatures {
                height: spec.start_height + i,
                size_bytes: size_bytes.max(1),
                n_transparent_in,
                n_transparent_out,
                n_spend,
                n_output,
                n_joinsplit,
            };
            let t = spec.true_model.predict(&features) + spec.noise_sigma_us * z;
            VerificationSample {
                features,
                verify_time_us: t.round().max(1.0) as u64,
            }
        })
        .collect();
    Dataset::new(samples)
}
