//! fvecs / ivecs vector files and ACNG graph files.
//!
//! Both vector formats are a sequence of records `[i32 dim][dim values]`,
//! little-endian, with one `dim` shared by every record. fvecs values are
//! `f32`, ivecs values are `i32`.

use std::fs;
use std::path::Path;

use acng_core::{Dataset, Error as CoreError, GroundTruth, ProximityGraph};

use crate::error::{CliError, CliResult};

/// Decodes an fvecs byte buffer.
pub fn parse_fvecs(bytes: &[u8]) -> Result<Dataset, CoreError> {
    let (dim, values) = parse_records(bytes, f32::from_le_bytes)?;
    if let Some(at) = values.iter().position(|v| !v.is_finite()) {
        let record = at / dim;
        let offset = record * (4 + 4 * dim) + 4 + 4 * (at % dim);
        return Err(format_err(
            offset,
            format!("non-finite value in record {record}"),
        ));
    }
    Dataset::new(dim, values)
}

/// Decodes an ivecs byte buffer into rows.
pub fn parse_ivecs(bytes: &[u8]) -> Result<Vec<Vec<i32>>, CoreError> {
    let (dim, values) = parse_records(bytes, i32::from_le_bytes)?;
    Ok(values.chunks_exact(dim).map(<[i32]>::to_vec).collect())
}

fn format_err(offset: usize, reason: String) -> CoreError {
    CoreError::Format {
        offset: offset as u64,
        reason,
    }
}

fn parse_records<T>(
    bytes: &[u8],
    decode: impl Fn([u8; 4]) -> T,
) -> Result<(usize, Vec<T>), CoreError> {
    if bytes.is_empty() {
        return Err(format_err(0, "empty file".into()));
    }
    let word = |at: usize| -> [u8; 4] { bytes[at..at + 4].try_into().expect("four bytes") };
    let mut pos = 0;
    let mut dim = None;
    let mut values = Vec::new();
    while pos < bytes.len() {
        if bytes.len() - pos < 4 {
            return Err(format_err(pos, "truncated dimension header".into()));
        }
        let d = i32::from_le_bytes(word(pos));
        if d <= 0 {
            return Err(format_err(pos, format!("dimension {d} is not positive")));
        }
        let d = d as usize;
        match dim {
            None => dim = Some(d),
            Some(expected) if expected != d => {
                return Err(format_err(
                    pos,
                    format!("dimension {d} differs from the first record's {expected}"),
                ));
            }
            Some(_) => {}
        }
        let body = pos + 4;
        if (bytes.len() - body) / 4 < d {
            return Err(format_err(
                body,
                format!("record truncated, wanted {d} values"),
            ));
        }
        values.extend((0..d).map(|i| decode(word(body + 4 * i))));
        pos = body + 4 * d;
    }
    Ok((dim.expect("at least one record"), values))
}

pub fn encode_fvecs(data: &Dataset) -> Vec<u8> {
    let dim = data.dim();
    let mut out = Vec::with_capacity(data.len() * (4 + 4 * dim));
    for row in data.rows() {
        out.extend_from_slice(&(dim as i32).to_le_bytes());
        for v in row {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn encode_ivecs<R: AsRef<[u32]>>(rows: &[R]) -> Vec<u8> {
    let mut out = Vec::new();
    for row in rows {
        let row = row.as_ref();
        out.extend_from_slice(&(row.len() as i32).to_le_bytes());
        for &v in row {
            out.extend_from_slice(&(v as i32).to_le_bytes());
        }
    }
    out
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn read_fvecs(path: &Path) -> CliResult<Dataset> {
    parse_fvecs(&read(path)?).map_err(|e| CliError::data(path, e))
}

pub fn write_fvecs(path: &Path, data: &Dataset) -> CliResult<()> {
    write(path, &encode_fvecs(data))
}

/// Reads ground truth: one row of ids per query, all rows the same length.
pub fn read_ground_truth(path: &Path) -> CliResult<GroundTruth> {
    let rows = parse_ivecs(&read(path)?).map_err(|e| CliError::data(path, e))?;
    let k = rows[0].len();
    let mut ids = Vec::with_capacity(rows.len());
    for (q, row) in rows.into_iter().enumerate() {
        if let Some(&bad) = row.iter().find(|&&v| v < 0) {
            return Err(CliError::Format(format!(
                "{}: negative id {bad} in ground-truth row {q}",
                path.display()
            )));
        }
        ids.push(row.into_iter().map(|v| v as u32).collect());
    }
    GroundTruth::new(k, ids).map_err(|e| CliError::data(path, e))
}

pub fn write_ground_truth(path: &Path, truth: &GroundTruth) -> CliResult<()> {
    write(path, &encode_ivecs(truth.rows()))
}

pub fn read_graph(path: &Path) -> CliResult<ProximityGraph> {
    ProximityGraph::from_bytes(&read(path)?).map_err(|e| CliError::data(path, e))
}

pub fn write_graph(path: &Path, graph: &ProximityGraph) -> CliResult<()> {
    write(path, &graph.to_bytes())
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    write(path, text.as_bytes())
}
