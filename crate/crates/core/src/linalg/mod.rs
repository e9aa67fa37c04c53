//! Dense real matrices, thin Householder QR and the two small solvers the
//! regression code needs.

mod qr;
mod solve;

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::LinalgError;

pub use qr::{qr_decompose, QrResult, ORTHONORMALITY_TOL, RANK_TOL};
pub use solve::{solve_lower_triangular, solve_upper_triangular, spd_solve};

/// Row-major dense matrix with at least one row and column and only finite
/// entries.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl TryFrom<RawMatrix> for Matrix {
    type Error = LinalgError;

    fn try_from(raw: RawMatrix) -> Result<Self, Self::Error> {
        Matrix::new(raw.rows, raw.cols, raw.data)
    }
}

impl From<Matrix> for RawMatrix {
    fn from(m: Matrix) -> Self {
        RawMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data,
        }
    }
}

impl Matrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let n = rows.len();
        let k = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n * k);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != k {
                return Err(LinalgError::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {k}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(n, k, data)
    }

    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self, LinalgError> {
        let k = columns.len();
        let n = columns.first().map_or(0, |c| c.as_ref().len());
        if let Some(bad) = columns.iter().position(|c| c.as_ref().len() != n) {
            return Err(LinalgError::DimensionMismatch(format!(
                "column {bad} has {} entries, expected {n}",
                columns[bad].as_ref().len()
            )));
        }
        let mut data = vec![0.0; n * k];
        for (j, c) in columns.iter().enumerate() {
            for (i, &v) in c.as_ref().iter().enumerate() {
                data[i * k + j] = v;
            }
        }
        Self::new(n, k, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self::from_parts(n, n, data)
    }

    /// Unchecked constructor for results computed from valid matrices.
    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.cols).map(move |j| self.column(j))
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.get(i, j);
            }
        }
        Matrix::from_parts(self.cols, self.rows, data)
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = vec![0.0; self.rows * other.cols];
        for i in 0..self.rows {
            let out = &mut data[i * other.cols..(i + 1) * other.cols];
            for (l, &a) in self.row(i).iter().enumerate() {
                for (o, &b) in out.iter_mut().zip(other.row(l)) {
                    *o += a * b;
                }
            }
        }
        Ok(Matrix::from_parts(self.rows, other.cols, data))
    }

    /// `self · v`
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} for {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `selfᵀ · v`
    pub fn tr_matvec(&self, v: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} for transposed {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        Ok(out)
    }

    /// Gram matrix `selfᵀ · self`.
    pub fn gram(&self) -> Matrix {
        let k = self.cols;
        let mut data = vec![0.0; k * k];
        for i in 0..self.rows {
            let r = self.row(i);
            for a in 0..k {
                for b in a..k {
                    data[a * k + b] += r[a] * r[b];
                }
            }
        }
        for a in 0..k {
            for b in 0..a {
                data[a * k + b] = data[b * k + a];
            }
        }
        Matrix::from_parts(k, k, data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Copy of the matrix with column `j` removed, or `None` when it is the
    /// only column.
    pub fn without_column(&self, j: usize) -> Option<Matrix> {
        if self.cols <= 1 || j >= self.cols {
            return None;
        }
        let keep: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        Some(self.select_columns(&keep))
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            let r = self.row(i);
            data.extend(idx.iter().map(|&j| r[j]));
        }
        Matrix::from_parts(self.rows, idx.len(), data)
    }

    /// Multiplies column `j` by `factor`.
    pub fn scale_column(&mut self, j: usize, factor: f64) {
        for i in 0..self.rows {
            self.data[i * self.cols + j] *= factor;
        }
    }

    /// Multiplies row `i` by `factor`.
    pub fn scale_row(&mut self, i: usize, factor: f64) {
        for v in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *v *= factor;
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    // scaled to avoid overflow on large entries
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert_eq!(
            Matrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(LinalgError::NonFinite { row: 0, col: 1 })
        );
        assert!(matches!(
            Matrix::new(0, 2, vec![]),
            Err(LinalgError::Empty { .. })
        ));
        assert!(matches!(
            Matrix::new(2, 2, vec![1.0; 3]),
            Err(LinalgError::EntryCount { .. })
        ));
    }

    #[test]
    fn products() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]).unwrap();
        let g = a.gram();
        assert_eq!(g, a.transpose().matmul(&a).unwrap());
        assert_eq!(a.matvec(&[1.0, 1.0]).unwrap(), vec![3.0, 7.0, 11.0]);
        assert_eq!(a.tr_matvec(&[1.0, 0.0, 1.0]).unwrap(), vec![6.0, 8.0]);
        assert_eq!(
            a.without_column(0).unwrap(),
            Matrix::from_rows(&[[2.0], [4.0], [6.0]]).unwrap()
        );
        assert_eq!(
            Matrix::from_columns(&a.columns().collect::<Vec<_>>()).unwrap(),
            a
        );
    }

    #[test]
    fn serde_validates() {
        let raw = RawMatrix {
            rows: 2,
            cols: 1,
            data: vec![1.0],
        };
        assert!(Matrix::try_from(raw).is_err());
    }
}
