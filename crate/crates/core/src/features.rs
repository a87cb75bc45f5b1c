//! Per-transaction and per-block feature counts.
//!
//! A block is reduced to the number of transparent inputs, transparent
//! outputs, Sapling Spend and Output descriptions, and JoinSplit
//! descriptions summed over its transactions. Transparent outputs are kept
//! for correlation reporting only; no model uses them as a predictor.

use std::ops::Add;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Feature counts of a single transaction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TxFeatures {
    /// Inputs spending a previous output. The coinbase input is never counted.
    pub n_transparent_in: u64,
    pub n_transparent_out: u64,
    pub n_spend: u64,
    pub n_output: u64,
    /// JoinSplit descriptions, one unit each regardless of proof count.
    pub n_joinsplit: u64,
    pub is_coinbase: bool,
}

/// Feature counts of a whole block, plus its height and serialized size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFeatures {
    pub height: u64,
    pub size_bytes: u64,
    pub n_transparent_in: u64,
    pub n_transparent_out: u64,
    pub n_spend: u64,
    pub n_output: u64,
    pub n_joinsplit: u64,
}

impl BlockFeatures {
    /// Block with the given height and size and all counts zero.
    pub fn empty(height: u64, size_bytes: u64) -> Self {
        BlockFeatures {
            height,
            size_bytes,
            n_transparent_in: 0,
            n_transparent_out: 0,
            n_spend: 0,
            n_output: 0,
            n_joinsplit: 0,
        }
    }

    /// Builder-style setter for the four model counts, in the order
    /// joinsplit, output, transparent input, spend.
    pub fn with_counts(
        mut self,
        n_joinsplit: u64,
        n_output: u64,
        n_transparent_in: u64,
        n_spend: u64,
    ) -> Self {
        self.n_joinsplit = n_joinsplit;
        self.n_output = n_output;
        self.n_transparent_in = n_transparent_in;
        self.n_spend = n_spend;
        self
    }

    /// Sum of the description counts that make up a block's composition.
    pub fn total_descriptions(&self) -> u64 {
        self.n_transparent_in + self.n_spend + self.n_output + self.n_joinsplit
    }
}

/// Element-wise sum of counts and sizes. The height of the left operand is kept.
impl Add for BlockFeatures {
    type Output = BlockFeatures;

    fn add(self, rhs: BlockFeatures) -> BlockFeatures {
        BlockFeatures {
            height: self.height,
            size_bytes: self.size_bytes + rhs.size_bytes,
            n_transparent_in: self.n_transparent_in + rhs.n_transparent_in,
            n_transparent_out: self.n_transparent_out + rhs.n_transparent_out,
            n_spend: self.n_spend + rhs.n_spend,
            n_output: self.n_output + rhs.n_output,
            n_joinsplit: self.n_joinsplit + rhs.n_joinsplit,
        }
    }
}

/// Counts the features of one decoded transaction.
///
/// `tx` is a transaction object as returned by a node's block query with
/// decoded transactions: `vin` and `vout` are mandatory arrays, while
/// `vShieldedSpend`, `vShieldedOutput` and `vjoinsplit` may be absent
/// (absent means zero). An input carrying a `coinbase` key marks the
/// transaction as coinbase and is not counted.
pub fn extract_tx_features(tx: &Value) -> Result<TxFeatures> {
    let obj = tx.as_object().ok_or_else(|| Error::parse("transaction"))?;

    let vin = required_list(obj, "vin")?;
    let vout = required_list(obj, "vout")?;

    let mut n_transparent_in = 0;
    let mut is_coinbase = false;
    for input in vin {
        let input = input.as_object().ok_or_else(|| Error::parse("vin"))?;
        if input.contains_key("coinbase") {
            is_coinbase = true;
        } else {
            n_transparent_in += 1;
        }
    }

    Ok(TxFeatures {
        n_transparent_in,
        n_transparent_out: vout.len() as u64,
        n_spend: optional_list_len(obj, "vShieldedSpend")?,
        n_output: optional_list_len(obj, "vShieldedOutput")?,
        n_joinsplit: optional_list_len(obj, "vjoinsplit")?,
        is_coinbase,
    })
}

fn required_list<'a>(
    obj: &'a serde_json::Map<String, Value>,
    field: &str,
) -> Result<&'a Vec<Value>> {
    match obj.get(field) {
        Some(Value::Array(items)) => Ok(items),
        _ => Err(Error::parse(field)),
    }
}

fn optional_list_len(obj: &serde_json::Map<String, Value>, field: &str) -> Result<u64> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(0),
        Some(Value::Array(items)) => Ok(items.len() as u64),
        Some(_) => Err(Error::parse(field)),
    }
}

/// Sums per-transaction counts into block-level counts.
pub fn aggregate_block(txs: &[TxFeatures], height: u64, size_bytes: u64) -> Result<BlockFeatures> {
    if txs.is_empty() {
        return Err(Error::Integrity(format!(
            "block at height {height} has no transactions"
        )));
    }
    if size_bytes == 0 {
        return Err(Error::Integrity(format!(
            "block at height {height} has size 0"
        )));
    }
    Ok(txs
        .iter()
        .fold(BlockFeatures::empty(height, size_bytes), |mut acc, tx| {
            acc.n_transparent_in += tx.n_transparent_in;
            acc.n_transparent_out += tx.n_transparent_out;
            acc.n_spend += tx.n_spend;
            acc.n_output += tx.n_output;
            acc.n_joinsplit += tx.n_joinsplit;
            acc
        }))
}

/// One observation: a block's features and its measured verification time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationSample {
    pub features: BlockFeatures,
    pub verify_time_us: u64,
}

impl VerificationSample {
    pub fn new(features: BlockFeatures, verify_time_us: u64) -> Result<Self> {
        if verify_time_us == 0 {
            return Err(Error::Integrity(format!(
                "height {}: verify_time_us must be positive",
                features.height
            )));
        }
        if features.size_bytes == 0 {
            return Err(Error::Integrity(format!(
                "height {}: size_bytes must be positive",
                features.height
            )));
        }
        Ok(VerificationSample {
            features,
            verify_time_us,
        })
    }

    pub fn height(&self) -> u64 {
        self.features.height
    }
}

/// Non-empty sequence of samples with strictly increasing heights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    samples: Vec<VerificationSample>,
}

impl Dataset {
    /// Validates and wraps samples that are already in height order.
    pub fn new(samples: Vec<VerificationSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Integrity("dataset is empty".into()));
        }
        for s in &samples {
            VerificationSample::new(s.features, s.verify_time_us)?;
        }
        for pair in samples.windows(2) {
            let (a, b) = (pair[0].height(), pair[1].height());
            if a == b {
                return Err(Error::Integrity(format!("duplicate height {a}")));
            }
            if a > b {
                return Err(Error::Integrity(format!(
                    "height {b} follows height {a}; heights must increase"
                )));
            }
        }
        Ok(Dataset { samples })
    }

    /// Sorts by height first, then validates. Duplicates are still rejected.
    pub fn from_unsorted(mut samples: Vec<VerificationSample>) -> Result<Self> {
        samples.sort_by_key(VerificationSample::height);
        Dataset::new(samples)
    }

    pub fn samples(&self) -> &[VerificationSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, VerificationSample> {
        self.samples.iter()
    }

    /// Measured times as floating point microseconds.
    pub fn times_us(&self) -> Vec<f64> {
        self.samples
            .iter()
            .map(|s| s.verify_time_us as f64)
            .collect()
    }

    pub fn into_samples(self) -> Vec<VerificationSample> {
        self.samples
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a VerificationSample;
    type IntoIter = std::slice::Iter<'a, VerificationSample>;

    fn into_iter(self) -> Self::IntoIter {
        self.samples.iter()
    }
}
