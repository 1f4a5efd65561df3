//! Matrix files: JSON `{"n": n, "data": [[re, im], ...]}` (row-major, with an
//! optional `"cols"` for rectangular bases) or CSV rows of complex tokens
//! such as `1.5`, `-2e-3+4i`, `0-1i`.

use std::path::Path;

use num_complex::Complex64;
use opangle_core::numkernel::CMat;
use opangle_core::ComplexMatrix;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<CMat, String> {
        let cols = self.cols.unwrap_or(self.n);
        if self.n == 0 || cols == 0 {
            return Err("matrix has no entries".into());
        }
        if self.data.len() != self.n * cols {
            return Err(format!("data has {} entries, expected {}", self.data.len(), self.n * cols));
        }
        if self.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err("non-finite entry".into());
        }
        let entries: Vec<Complex64> = self.data.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        Ok(CMat::from_row_slice(self.n, cols, &entries))
    }
}

/// Parses one complex token: `a`, `a+bi` or `a-bi` with decimal or
/// scientific `a` and `b`, no spaces.
pub fn parse_complex(token: &str) -> Result<Complex64, String> {
    let bad = || format!("malformed complex token {token:?}");
    let real_part = |s: &str| -> Result<f64, String> {
        let valid = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'));
        let v: f64 = if valid { s.parse().map_err(|_| bad())? } else { return Err(bad()) };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite value in {token:?}"))
        }
    };
    let Some(body) = token.strip_suffix('i') else {
        return Ok(Complex64::new(real_part(token)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let (re, im) = body.split_at(split);
    if im.len() < 2 {
        return Err(bad());
    }
    Ok(Complex64::new(real_part(re)?, real_part(im)?))
}

pub fn parse_csv(text: &str) -> Result<CMat, String> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|t| parse_complex(t.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(format!("line {}: {} entries, expected {}", lineno + 1, row.len(), first.len()));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err("no rows".into());
    }
    let cols = rows[0].len();
    let entries: Vec<Complex64> = rows.iter().flatten().copied().collect();
    Ok(CMat::from_row_slice(rows.len(), cols, &entries))
}

pub fn parse_json(text: &str) -> Result<CMat, String> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    file.to_matrix()
}

/// Reads a matrix of any shape. The format follows the extension, falling
/// back to JSON when the content starts with `{`.
pub fn read_matrix(path: &Path) -> Result<CMat, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    let is_json = match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => true,
        Some(e) if e.eq_ignore_ascii_case("csv") => false,
        _ => text.trim_start().starts_with('{'),
    };
    let parsed = if is_json { parse_json(&text) } else { parse_csv(&text) };
    parsed.map_err(|message| CliError::Parse { path: path.to_path_buf(), message })
}

pub fn read_square(path: &Path) -> Result<ComplexMatrix, CliError> {
    let m = read_matrix(path)?;
    if m.nrows() != m.ncols() {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            message: format!("matrix is {}x{}, expected square", m.nrows(), m.ncols()),
        });
    }
    ComplexMatrix::new(m).map_err(|e| CliError::Parse { path: path.to_path_buf(), message: e.to_string() })
}
