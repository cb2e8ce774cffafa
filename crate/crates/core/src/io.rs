//! Binary matrix export: column-major `(re, im)` little-endian `f64` pairs
//! plus a JSON sidecar describing shape, layout and provenance.

use std::fs;
use std::path::{Path, PathBuf};

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{write_atomic, BASIS_CONVENTION};
use crate::numerics::{c64, ComplexDense};

pub const ELEMENT_FORMAT: &str = "complex128 little-endian (re, im) pairs";
pub const ORDER: &str = "column-major";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixSidecar {
    pub rows: usize,
    pub cols: usize,
    pub element: String,
    pub order: String,
    pub basis: String,
    pub seed: Option<u64>,
    pub description: String,
}

impl MatrixSidecar {
    pub fn new(m: &ComplexDense, seed: Option<u64>, description: impl Into<String>) -> Self {
        MatrixSidecar {
            rows: m.nrows(),
            cols: m.ncols(),
            element: ELEMENT_FORMAT.into(),
            order: ORDER.into(),
            basis: BASIS_CONVENTION.into(),
            seed,
            description: description.into(),
        }
    }
}

/// `path` with `.json` appended.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn matrix_bytes(m: &ComplexDense) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 * m.nrows() * m.ncols());
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

/// Write `path` and `path.json`.
pub fn export_matrix(path: &Path, m: &ComplexDense, sidecar: &MatrixSidecar) -> Result<()> {
    if sidecar.rows != m.nrows() || sidecar.cols != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows() * m.ncols(),
            found: sidecar.rows * sidecar.cols,
        });
    }
    write_atomic(path, &matrix_bytes(m))?;
    write_atomic(&sidecar_path(path), serde_json::to_string_pretty(sidecar)?.as_bytes())
}

pub fn import_matrix(path: &Path) -> Result<(ComplexDense, MatrixSidecar)> {
    let side_path = sidecar_path(path);
    let text = fs::read_to_string(&side_path).map_err(|e| Error::io(&side_path, e))?;
    let sidecar: MatrixSidecar = serde_json::from_str(&text)?;
    if sidecar.element != ELEMENT_FORMAT || sidecar.order != ORDER {
        return Err(Error::Schema(format!(
            "unsupported layout `{}` / `{}`",
            sidecar.element, sidecar.order
        )));
    }
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let (rows, cols) = (sidecar.rows, sidecar.cols);
    if bytes.len() != 16 * rows * cols {
        return Err(Error::Schema(format!(
            "{} holds {} bytes, sidecar promises {rows}x{cols}",
            path.display(),
            bytes.len()
        )));
    }
    let word = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().expect("8-byte slice"));
    let m = Mat::from_fn(rows, cols, |i, j| {
        let k = 2 * (j * rows + i);
        c64::new(word(k), word(k + 1))
    });
    Ok((m, sidecar))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_column_major_pairs() {
        let m = Mat::from_fn(2, 2, |i, j| c64::new((10 * i + j) as f64, -1.0));
        let b = matrix_bytes(&m);
        let first = |k: usize| f64::from_le_bytes(b[8 * k..8 * k + 8].try_into().unwrap());
        // (0,0), (1,0), (0,1), (1,1)
        assert_eq!([first(0), first(2), first(4), first(6)], [0.0, 10.0, 1.0, 11.0]);
        assert_eq!(first(1), -1.0);
    }

    #[test]
    fn export_import_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("h.bin");
        let m = Mat::from_fn(3, 2, |i, j| c64::new(i as f64 * 0.1, j as f64 + 1e-300));
        export_matrix(&p, &m, &MatrixSidecar::new(&m, Some(42), "test")).unwrap();
        let (back, side) = import_matrix(&p).unwrap();
        assert_eq!(back, m);
        assert_eq!(side.seed, Some(42));
        fs::write(&p, [0u8; 5]).unwrap();
        assert!(matches!(import_matrix(&p), Err(Error::Schema(_))));
    }
}
