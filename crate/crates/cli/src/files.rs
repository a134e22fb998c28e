//! Reading matrix and channel files.

use std::fs;
use std::io::Read;

use hsdual_core::{Complex64, ComplexMatrix, KrausList};
use serde::Deserialize;

use crate::Failure;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    format: Option<u32>,
    rows: usize,
    cols: usize,
    data: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    format: Option<u32>,
    dim: usize,
    kraus: Vec<MatrixFile>,
}

/// Reads a file, with `-` meaning standard input.
fn read_source(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::parse(format!("cannot read standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::parse(format!("cannot read {path}: {e}")))
}

fn check_version(format: Option<u32>, path: &str) -> Result<(), Failure> {
    match format {
        None | Some(FORMAT_VERSION) => Ok(()),
        Some(v) => Err(Failure::parse(format!(
            "{path}: unsupported format version {v}"
        ))),
    }
}

fn to_matrix(file: MatrixFile, path: &str) -> Result<ComplexMatrix, Failure> {
    check_version(file.format, path)?;
    if file.rows == 0 || file.cols == 0 {
        return Err(Failure::parse(format!(
            "{path}: rows and cols must be positive"
        )));
    }
    if file.data.len() != file.rows || file.data.iter().any(|r| r.len() != file.cols) {
        return Err(Failure::parse(format!(
            "{path}: data does not have {} rows of {} entries",
            file.rows, file.cols
        )));
    }
    let entries: Vec<Complex64> = file
        .data
        .iter()
        .flatten()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    if entries
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Failure::parse(format!("{path}: entries must be finite")));
    }
    ComplexMatrix::new(file.rows, file.cols, entries)
        .map_err(|e| Failure::parse(format!("{path}: {e}")))
}

pub fn parse_matrix(text: &str, path: &str) -> Result<ComplexMatrix, Failure> {
    let file: MatrixFile = serde_json::from_str(text)
        .map_err(|e| Failure::parse(format!("{path}: malformed matrix file: {e}")))?;
    to_matrix(file, path)
}

pub fn read_matrix(path: &str) -> Result<ComplexMatrix, Failure> {
    parse_matrix(&read_source(path)?, path)
}

pub fn parse_channel(text: &str, path: &str) -> Result<KrausList, Failure> {
    let file: ChannelFile = serde_json::from_str(text)
        .map_err(|e| Failure::parse(format!("{path}: malformed channel file: {e}")))?;
    check_version(file.format, path)?;
    if file.dim == 0 || file.kraus.is_empty() {
        return Err(Failure::parse(format!(
            "{path}: a channel needs dim > 0 and at least one Kraus operator"
        )));
    }
    let mut ops = Vec::with_capacity(file.kraus.len());
    for (k, m) in file.kraus.into_iter().enumerate() {
        let m = to_matrix(m, path)?;
        if m.shape() != (file.dim, file.dim) {
            return Err(Failure::dimension(format!(
                "{path}: Kraus operator {k} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                file.dim,
                file.dim
            )));
        }
        ops.push(m);
    }
    KrausList::new(ops).map_err(|e| Failure::from_core(e, path))
}

pub fn read_channel(path: &str) -> Result<KrausList, Failure> {
    parse_channel(&read_source(path)?, path)
}
