//! Matrix JSON schema: `{"dim": d, "re": [[...]], "im": [[...]]}` with
//! row-major nested arrays. The writer emits 17 significant digits so values
//! round-trip exactly.

use num_complex::Complex64;
use serde::Deserialize;

use crate::util::fmt_f64;

use super::matrix::{GeneralMatrix, HermitianMatrix};
use super::AlgebraError;

#[derive(Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn rows_to_string(rows: &[Vec<f64>]) -> String {
    let body: Vec<String> = rows
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", body.join(","))
}

/// Serializes a general matrix to the matrix JSON schema.
pub fn general_to_json(m: &GeneralMatrix) -> String {
    let d = m.dim();
    let mut re = vec![vec![0.0; d]; d];
    let mut im = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            let z = m.get(i, j);
            re[i][j] = z.re;
            im[i][j] = z.im;
        }
    }
    format!(
        "{{\"dim\":{},\"re\":{},\"im\":{}}}",
        d,
        rows_to_string(&re),
        rows_to_string(&im)
    )
}

pub fn hermitian_to_json(m: &HermitianMatrix) -> String {
    general_to_json(m.as_general())
}

pub fn general_from_json(text: &str) -> Result<GeneralMatrix, AlgebraError> {
    let parsed: MatrixJson =
        serde_json::from_str(text).map_err(|e| AlgebraError::BadMatrixJson(e.to_string()))?;
    matrix_from_parts(parsed)
}

pub fn hermitian_from_json(text: &str) -> Result<HermitianMatrix, AlgebraError> {
    let g = general_from_json(text)?;
    HermitianMatrix::new(g.dim(), g.entries().to_vec())
}

fn matrix_from_parts(parsed: MatrixJson) -> Result<GeneralMatrix, AlgebraError> {
    let d = parsed.dim;
    if d == 0 {
        return Err(AlgebraError::BadDimension { dim: 0 });
    }
    if parsed.re.len() != d || parsed.im.len() != d {
        return Err(AlgebraError::BadMatrixJson(format!(
            "expected {d} rows, got re: {}, im: {}",
            parsed.re.len(),
            parsed.im.len()
        )));
    }
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        if parsed.re[i].len() != d || parsed.im[i].len() != d {
            return Err(AlgebraError::BadMatrixJson(format!("row {i} has wrong length")));
        }
        for j in 0..d {
            entries.push(Complex64::new(parsed.re[i][j], parsed.im[i][j]));
        }
    }
    GeneralMatrix::new(d, entries)
}
