//! JSON encoding of complex matrices: row-major nested arrays of `[re, im]`
//! pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};

/// A matrix as stored in documents and reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixDoc(pub Vec<Vec<[f64; 2]>>);

impl MatrixDoc {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self(
            (0..m.nrows())
                .map(|r| {
                    (0..m.ncols())
                        .map(|c| [m[(r, c)].re, m[(r, c)].im])
                        .collect()
                })
                .collect(),
        )
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let rows = self.0.len();
        let cols = self.0.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidShape("empty matrix".into()));
        }
        if let Some(r) = self.0.iter().position(|row| row.len() != cols) {
            return Err(Error::InvalidShape(format!(
                "row {r} has {} entries, expected {cols}",
                self.0[r].len()
            )));
        }
        Ok(ComplexMatrix::from_fn(rows, cols, |r, c| {
            let [re, im] = self.0[r][c];
            Complex64::new(re, im)
        }))
    }
}

/// A vector as a flat array of `[re, im]` pairs.
pub fn vector_to_pairs(v: &ComplexVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn matrix_to_value(m: &ComplexMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixDoc::from_matrix(m)).expect("finite matrix serializes")
}

pub fn vector_to_value(v: &ComplexVector) -> serde_json::Value {
    serde_json::to_value(vector_to_pairs(v)).expect("finite vector serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn round_trip_is_exact() {
        let m = ComplexMatrix::from_row_slice(
            2,
            3,
            &[
                c(0.1, -2.0),
                c(1e-17, 3.0),
                c(0., 0.),
                c(5., 6.),
                c(-7., 0.125),
                c(1. / 3., 0.),
            ],
        );
        let json = serde_json::to_string(&MatrixDoc::from_matrix(&m)).unwrap();
        let back: MatrixDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let doc = MatrixDoc(vec![vec![[1.0, 0.0]], vec![[1.0, 0.0], [0.0, 0.0]]]);
        assert!(matches!(doc.to_matrix(), Err(Error::InvalidShape(_))));
    }
}
