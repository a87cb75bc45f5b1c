//! Dataset CSV: one verification sample per line, all fields base-10
//! integers, LF line endings, no quoting, fixed header.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::features::{BlockFeatures, Dataset, VerificationSample};

pub const DATASET_HEADER: &str = "height,size_bytes,n_transparent_in,n_transparent_out,n_spend,n_output,n_joinsplit,verify_time_us";

const COLUMNS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DatasetFormat {
    #[default]
    Csv,
}

/// Location and format of a dataset on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetFile {
    pub path: PathBuf,
    pub format: DatasetFormat,
}

impl DatasetFile {
    pub fn csv(path: impl Into<PathBuf>) -> Self {
        DatasetFile {
            path: path.into(),
            format: DatasetFormat::Csv,
        }
    }
}

pub fn read_dataset(file: &DatasetFile) -> Result<Dataset> {
    let DatasetFormat::Csv = file.format;
    let f = File::open(&file.path).map_err(|e| Error::io(&file.path, e))?;
    read_dataset_csv(BufReader::new(f))
}

pub fn write_dataset(ds: &Dataset, file: &DatasetFile) -> Result<()> {
    let DatasetFormat::Csv = file.format;
    write_rows(
        &file.path,
        ds.iter().map(|s| (s.features, s.verify_time_us)),
    )
}

/// Writes fetched features with every `verify_time_us` set to 0. Such a
/// file is rejected by [`read_dataset`] until real times are filled in.
pub fn write_features_csv(blocks: &[BlockFeatures], path: impl AsRef<Path>) -> Result<()> {
    write_rows(path.as_ref(), blocks.iter().map(|b| (*b, 0)))
}

fn write_rows(path: &Path, rows: impl Iterator<Item = (BlockFeatures, u64)>) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(f);
    write_csv(&mut out, rows).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// Serializes `ds` to the dataset CSV format.
pub fn dataset_to_csv_string(ds: &Dataset) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, ds.iter().map(|s| (s.features, s.verify_time_us)))
        .expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is ASCII")
}

fn write_csv<W: Write>(
    out: W,
    rows: impl Iterator<Item = (BlockFeatures, u64)>,
) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Never)
        .from_writer(out);
    w.write_record(DATASET_HEADER.split(','))?;
    for (b, t) in rows {
        w.serialize((
            b.height,
            b.size_bytes,
            b.n_transparent_in,
            b.n_transparent_out,
            b.n_spend,
            b.n_output,
            b.n_joinsplit,
            t,
        ))
        .map_err(std::io::Error::other)?;
    }
    w.flush()
}

/// Parses the dataset CSV format from any reader. Rows are sorted by height.
pub fn read_dataset_csv<R: Read>(input: R) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .quoting(false)
        .flexible(true)
        .trim(csv::Trim::None)
        .from_reader(input);

    let mut records = reader.records();
    let header = match records.next() {
        Some(Ok(h)) => h.iter().collect::<Vec<_>>().join(","),
        Some(Err(e)) => {
            return Err(Error::Format {
                line: 1,
                message: e.to_string(),
            })
        }
        None => String::new(),
    };
    if header != DATASET_HEADER {
        return Err(Error::Header {
            expected: DATASET_HEADER.into(),
            found: header,
        });
    }

    let mut samples = Vec::new();
    for (idx, record) in records.enumerate() {
        let line = idx + 2;
        let record = record.map_err(|e| Error::Format {
            line,
            message: e.to_string(),
        })?;
        if record.len() != COLUMNS {
            return Err(Error::Format {
                line,
                message: format!("expected {COLUMNS} fields, found {}", record.len()),
            });
        }
        let mut v = [0u64; COLUMNS];
        for (slot, (field, name)) in v
            .iter_mut()
            .zip(record.iter().zip(DATASET_HEADER.split(',')))
        {
            *slot = parse_uint(field).ok_or_else(|| Error::Format {
                line,
                message: format!("field `{name}` is not a base-10 unsigned integer: `{field}`"),
            })?;
        }
        let features = BlockFeatures {
            height: v[0],
            size_bytes: v[1],
            n_transparent_in: v[2],
            n_transparent_out: v[3],
            n_spend: v[4],
            n_output: v[5],
            n_joinsplit: v[6],
        };
        samples.push(VerificationSample::new(features, v[7])?);
    }
    Dataset::from_unsorted(samples)
}

fn parse_uint(field: &str) -> Option<u64> {
    if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    field.parse().ok()
}
