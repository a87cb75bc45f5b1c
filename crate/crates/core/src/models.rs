//! Linear predictors of block verification time.
//!
//! Three families are supported:
//!
//! * [`ModelKind::Joist`]: `t = b_j*n_j + b_o*n_o + b_i*n_i + b_s*n_s + k` over
//!   JoinSplit, Output, transparent input and Spend counts.
//! * [`ModelKind::BlockSize`]: `t = b*size + k`.
//! * [`ModelKind::FixedRate`]: `t = b*size` with a given rate and no intercept.
//!
//! Coefficients are in microseconds per unit (per description, per input or
//! per byte); intercepts are in microseconds.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::BlockFeatures;

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Joist,
    BlockSize,
    FixedRate,
}

const JOIST_PREDICTORS: &[&str] = &["joinsplit", "output", "transparent_in", "spend"];
const SIZE_PREDICTORS: &[&str] = &["byte"];

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Joist, ModelKind::BlockSize, ModelKind::FixedRate];

    /// Predictor names in design-matrix column order.
    pub fn predictor_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Joist => JOIST_PREDICTORS,
            ModelKind::BlockSize | ModelKind::FixedRate => SIZE_PREDICTORS,
        }
    }

    /// Number of predictors `p`, excluding the intercept.
    pub fn predictor_count(self) -> usize {
        self.predictor_names().len()
    }

    pub fn has_intercept(self) -> bool {
        !matches!(self, ModelKind::FixedRate)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Joist => "joist",
            ModelKind::BlockSize => "block_size",
            ModelKind::FixedRate => "fixed_rate",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidModel(format!("unknown model kind `{s}`")))
    }
}

/// Design-matrix row for `block`, in the order of [`ModelKind::predictor_names`]:
/// `[n_j, n_o, n_i, n_s]` for JOIST and `[size]` for the size-based kinds.
pub fn predictor_vector(kind: ModelKind, block: &BlockFeatures) -> Vec<f64> {
    match kind {
        ModelKind::Joist => vec![
            block.n_joinsplit as f64,
            block.n_output as f64,
            block.n_transparent_in as f64,
            block.n_spend as f64,
        ],
        ModelKind::BlockSize | ModelKind::FixedRate => vec![block.size_bytes as f64],
    }
}

/// A parametrized predictor. Immutable once built; construct through
/// [`ModelSpec::new`] or one of the reference constructors. Serializes as
/// the model file document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelFile", into = "ModelFile")]
pub struct ModelSpec {
    kind: ModelKind,
    coefficients: Vec<f64>,
    intercept_us: f64,
}

impl ModelSpec {
    /// `coefficients` follow the kind's predictor order.
    pub fn new(kind: ModelKind, coefficients: Vec<f64>, intercept_us: f64) -> Result<Self> {
        if coefficients.len() != kind.predictor_count() {
            return Err(Error::InvalidModel(format!(
                "{kind} takes {} coefficient(s), got {}",
                kind.predictor_count(),
                coefficients.len()
            )));
        }
        if let Some(bad) = coefficients
            .iter()
            .chain(Some(&intercept_us))
            .find(|v| !v.is_finite())
        {
            return Err(Error::InvalidModel(format!("non-finite parameter {bad}")));
        }
        if !kind.has_intercept() && intercept_us != 0.0 {
            return Err(Error::InvalidModel(format!(
                "{kind} intercept must be 0, got {intercept_us}"
            )));
        }
        Ok(ModelSpec {
            kind,
            coefficients,
            intercept_us,
        })
    }

    /// JOIST model from its four coefficients and intercept.
    pub fn joist(
        joinsplit: f64,
        output: f64,
        transparent_in: f64,
        spend: f64,
        intercept_us: f64,
    ) -> Result<Self> {
        ModelSpec::new(
            ModelKind::Joist,
            vec![joinsplit, output, transparent_in, spend],
            intercept_us,
        )
    }

    pub fn block_size(per_byte: f64, intercept_us: f64) -> Result<Self> {
        ModelSpec::new(ModelKind::BlockSize, vec![per_byte], intercept_us)
    }

    pub fn fixed_rate(per_byte: f64) -> Result<Self> {
        ModelSpec::new(ModelKind::FixedRate, vec![per_byte], 0.0)
    }

    /// Fixed-rate baseline of Gervais et al.: 0.3796 us per byte, no intercept.
    pub fn gervais() -> Self {
        ModelSpec {
            kind: ModelKind::FixedRate,
            coefficients: vec![GERVAIS_US_PER_BYTE],
            intercept_us: 0.0,
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn intercept_us(&self) -> f64 {
        self.intercept_us
    }

    /// Coefficient by predictor name.
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.kind
            .predictor_names()
            .iter()
            .position(|n| *n == name)
            .map(|i| self.coefficients[i])
    }

    /// Predicted verification time in microseconds. Not clamped; may be negative.
    pub fn predict(&self, block: &BlockFeatures) -> f64 {
        let row = predictor_vector(self.kind, block);
        dot(&self.coefficients, &row) + self.intercept_us
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidModel(format!("malformed model file: {e}")))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ModelSpec::from_json(&text)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub const GERVAIS_US_PER_BYTE: f64 = 0.3796;

/// On-disk model document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    kind: ModelKind,
    coefficients: BTreeMap<String, f64>,
    intercept_us: f64,
    schema_version: u32,
}

impl From<ModelSpec> for ModelFile {
    fn from(m: ModelSpec) -> Self {
        ModelFile {
            kind: m.kind,
            coefficients: m
                .kind
                .predictor_names()
                .iter()
                .zip(&m.coefficients)
                .map(|(n, v)| (n.to_string(), *v))
                .collect(),
            intercept_us: m.intercept_us,
            schema_version: MODEL_SCHEMA_VERSION,
        }
    }
}

impl TryFrom<ModelFile> for ModelSpec {
    type Error = Error;

    fn try_from(mut file: ModelFile) -> Result<Self> {
        if file.schema_version != MODEL_SCHEMA_VERSION {
            return Err(Error::InvalidModel(format!(
                "unsupported schema_version {}",
                file.schema_version
            )));
        }
        let names = file.kind.predictor_names();
        let mut coefficients = Vec::with_capacity(names.len());
        for name in names {
            let v = file.coefficients.remove(*name).ok_or_else(|| {
                Error::InvalidModel(format!(
                    "{} model is missing coefficient `{name}`",
                    file.kind
                ))
            })?;
            coefficients.push(v);
        }
        if let Some(extra) = file.coefficients.keys().next() {
            return Err(Error::InvalidModel(format!(
                "unexpected coefficient `{extra}` for {} model",
                file.kind
            )));
        }
        ModelSpec::new(file.kind, coefficients, file.intercept_us)
    }
}

/// Benchmark setups for which published fitting parameters exist: sample
/// count used for fitting (5k or 20k blocks) and storage class of the host.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceSetup {
    Hdd5k,
    Ssd5k,
    Hdd20k,
    Ssd20k,
}

impl ReferenceSetup {
    pub const ALL: [ReferenceSetup; 4] = [
        ReferenceSetup::Hdd5k,
        ReferenceSetup::Ssd5k,
        ReferenceSetup::Hdd20k,
        ReferenceSetup::Ssd20k,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ReferenceSetup::Hdd5k => "5k, HDD",
            ReferenceSetup::Ssd5k => "5k, SSD",
            ReferenceSetup::Hdd20k => "20k, HDD",
            ReferenceSetup::Ssd20k => "20k, SSD",
        }
    }

    /// Published JOIST parameters for this setup.
    pub fn joist(self) -> ModelSpec {
        let (j, o, i, s, k) = match self {
            ReferenceSetup::Hdd5k => (10999.119, 9862.146, 246.312, 39760.496, 13209.042),
            ReferenceSetup::Ssd5k => (5359.094, 5726.675, 61.411, 16912.591, 4468.949),
            ReferenceSetup::Hdd20k => (10784.519, 12607.155, 139.676, 25227.674, 21760.549),
            ReferenceSetup::Ssd20k => (5349.659, 5782.956, 40.339, 12067.658, 5928.899),
        };
        ModelSpec {
            kind: ModelKind::Joist,
            coefficients: vec![j, o, i, s],
            intercept_us: k,
        }
    }

    /// Published block-size model parameters for this setup.
    pub fn block_size(self) -> ModelSpec {
        let (b, k) = match self {
            ReferenceSetup::Hdd5k => (4.345, 8784.760),
            ReferenceSetup::Ssd5k => (1.717, 3584.715),
            ReferenceSetup::Hdd20k => (2.232, 28445.511),
            ReferenceSetup::Ssd20k => (0.910, 9647.374),
        };
        ModelSpec {
            kind: ModelKind::BlockSize,
            coefficients: vec![b],
            intercept_us: k,
        }
    }
}
