//! Feature correlation and block composition over a dataset.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::features::{BlockFeatures, Dataset};
use crate::stats::pearson_r;

/// Feature columns reported in the correlation table, in display order.
pub const CORRELATION_FEATURES: [&str; 5] = [
    "transparent_in",
    "transparent_out",
    "spend",
    "output",
    "joinsplit",
];

fn feature_value(block: &BlockFeatures, name: &str) -> f64 {
    (match name {
        "transparent_in" => block.n_transparent_in,
        "transparent_out" => block.n_transparent_out,
        "spend" => block.n_spend,
        "output" => block.n_output,
        "joinsplit" => block.n_joinsplit,
        _ => unreachable!("unknown feature {name}"),
    }) as f64
}

/// Correlation of one feature with verification time; `None` when the
/// feature column (or the time column) is constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEntry {
    pub feature: String,
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    pub n: usize,
    pub entries: Vec<CorrelationEntry>,
}

impl CorrelationTable {
    pub fn get(&self, feature: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.feature == feature)
            .and_then(|e| e.r)
    }

    pub fn is_degenerate(&self, feature: &str) -> bool {
        self.entries
            .iter()
            .any(|e| e.feature == feature && e.r.is_none())
    }

    /// CSV with header `feature,r,n`; degenerate entries print `degenerate`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("feature,r,n\n");
        for e in &self.entries {
            match e.r {
                Some(r) => writeln!(out, "{},{},{}", e.feature, r, self.n),
                None => writeln!(out, "{},degenerate,{}", e.feature, self.n),
            }
            .expect("writing to a String cannot fail");
        }
        out
    }
}

/// Pearson's r between each feature column and the verification time.
pub fn correlation_table(ds: &Dataset) -> CorrelationTable {
    let t = ds.times_us();
    let entries = CORRELATION_FEATURES
        .iter()
        .map(|&name| {
            let x: Vec<f64> = ds
                .iter()
                .map(|s| feature_value(&s.features, name))
                .collect();
            let r = match pearson_r(&x, &t) {
                Ok(c) => Some(c.r),
                Err(Error::Degenerate(_) | Error::SampleCount { .. }) => None,
                Err(e) => unreachable!("columns share the dataset length: {e}"),
            };
            CorrelationEntry {
                feature: name.to_string(),
                r,
            }
        })
        .collect();
    CorrelationTable {
        n: ds.len(),
        entries,
    }
}

/// Share of transparent inputs, Sapling descriptions (Spend plus Output) and
/// JoinSplit descriptions among a block's descriptions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompositionRatios {
    pub transparent_in: f64,
    pub spend_output: f64,
    pub joinsplit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockComposition {
    pub height: u64,
    pub ratios: CompositionRatios,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionReport {
    pub per_block: Vec<BlockComposition>,
    /// Mean of the per-block ratios; `None` if every block was excluded.
    pub mean: Option<CompositionRatios>,
    /// Blocks without any description (for example coinbase-only blocks).
    pub n_excluded: usize,
}

impl CompositionReport {
    /// CSV with one row per included block and a final `mean` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("height,transparent_in,spend_output,joinsplit\n");
        for b in &self.per_block {
            let r = b.ratios;
            writeln!(
                out,
                "{},{},{},{}",
                b.height, r.transparent_in, r.spend_output, r.joinsplit
            )
            .unwrap();
        }
        if let Some(m) = self.mean {
            writeln!(
                out,
                "mean,{},{},{}",
                m.transparent_in, m.spend_output, m.joinsplit
            )
            .unwrap();
        }
        out
    }
}

pub fn composition_analysis(ds: &Dataset) -> CompositionReport {
    let mut per_block = Vec::with_capacity(ds.len());
    let mut n_excluded = 0;
    for s in ds {
        let f = &s.features;
        let total = f.total_descriptions();
        if total == 0 {
            n_excluded += 1;
            continue;
        }
        let total = total as f64;
        per_block.push(BlockComposition {
            height: f.height,
            ratios: CompositionRatios {
                transparent_in: f.n_transparent_in as f64 / total,
                spend_output: (f.n_spend + f.n_output) as f64 / total,
                joinsplit: f.n_joinsplit as f64 / total,
            },
        });
    }
    let mean = (!per_block.is_empty()).then(|| {
        let n = per_block.len() as f64;
        let avg = |pick: fn(&CompositionRatios) -> f64| {
            per_block.iter().map(|b| pick(&b.ratios)).sum::<f64>() / n
        };
        CompositionRatios {
            transparent_in: avg(|r| r.transparent_in),
            spend_output: avg(|r| r.spend_output),
            joinsplit: avg(|r| r.joinsplit),
        }
    });
    CompositionReport {
        per_block,
        mean,
        n_excluded,
    }
}
