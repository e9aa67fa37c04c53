use serde::{Deserialize, Serialize};

use super::{dot, norm2, Matrix};
use crate::error::LinalgError;

/// Relative size below which a diagonal entry of the triangular factor marks
/// the column as linearly dependent on the preceding ones.
pub const RANK_TOL: f64 = 1e-12;

/// Maximum per-entry deviation of `QᵀQ` from the identity.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Thin QR factorization `A = Q·P` with `Q` (n×k) orthonormal and `P` (k×k)
/// upper triangular with a strictly positive diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QrResult {
    q: Matrix,
    p: Matrix,
}

impl QrResult {
    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn p(&self) -> &Matrix {
        &self.p
    }

    pub fn into_parts(self) -> (Matrix, Matrix) {
        (self.q, self.p)
    }
}

/// Householder thin QR of an `n×k` matrix with `n ≥ k`.
///
/// The sign of each Householder step is normalized afterwards so that the
/// diagonal of `P` is positive, which makes the factorization unique for full
/// column rank input. Columns whose diagonal entry falls below
/// `RANK_TOL × max|Pⱼⱼ|` are reported as [`LinalgError::RankDeficient`].
pub fn qr_decompose(a: &Matrix) -> Result<QrResult, LinalgError> {
    let (n, k) = (a.rows(), a.cols());
    if n < k {
        return Err(LinalgError::DimensionMismatch(format!(
            "QR needs rows >= cols, got {n}x{k}"
        )));
    }

    // column-major working copy; becomes R in its upper triangle
    let mut cols: Vec<Vec<f64>> = a.columns().collect();
    let mut reflectors: Vec<Option<Vec<f64>>> = Vec::with_capacity(k);
    let mut diag = vec![0.0; k];

    for j in 0..k {
        let x = &cols[j][j..];
        let norm_x = norm2(x);
        if norm_x == 0.0 {
            reflectors.push(None);
            continue;
        }
        let alpha = if x[0] >= 0.0 { -norm_x } else { norm_x };
        let mut v = x.to_vec();
        v[0] -= alpha;
        let norm_v = norm2(&v);
        v.iter_mut().for_each(|e| *e /= norm_v);

        for col in cols.iter_mut().skip(j + 1) {
            let s = 2.0 * dot(&v, &col[j..]);
            for (c, &vi) in col[j..].iter_mut().zip(&v) {
                *c -= s * vi;
            }
        }
        diag[j] = alpha;
        cols[j][j] = alpha;
        cols[j][j + 1..].iter_mut().for_each(|e| *e = 0.0);
        reflectors.push(Some(v));
    }

    // accumulate Q = H_0 · H_1 ⋯ H_{k-1} · [I_k; 0]
    let mut q_cols: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    for (j, v) in reflectors.iter().enumerate().rev() {
        let Some(v) = v else { continue };
        for col in q_cols.iter_mut() {
            let s = 2.0 * dot(v, &col[j..]);
            if s != 0.0 {
                for (c, &vi) in col[j..].iter_mut().zip(v) {
                    *c -= s * vi;
                }
            }
        }
    }

    let mut p = vec![0.0; k * k];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..=j {
            p[i * k + j] = col[i];
        }
    }
    let mut p = Matrix::from_parts(k, k, p);
    let mut q = Matrix::from_columns(&q_cols)?;

    for (j, d) in diag.iter_mut().enumerate() {
        if *d < 0.0 {
            p.scale_row(j, -1.0);
            q.scale_column(j, -1.0);
            *d = -*d;
        }
    }

    let largest = diag.iter().fold(0.0_f64, |m, &d| m.max(d));
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN counts as deficient
    if let Some(column) = diag.iter().position(|&d| !(d > RANK_TOL * largest)) {
        return Err(LinalgError::RankDeficient { column });
    }

    Ok(QrResult { q, p })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &Matrix, b: &Matrix, tol: f64) {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    fn check_invariants(a: &Matrix, qr: &QrResult) {
        let recon = qr.q().matmul(qr.p()).unwrap();
        let diff: Vec<f64> = recon
            .as_slice()
            .iter()
            .zip(a.as_slice())
            .map(|(x, y)| x - y)
            .collect();
        assert!(norm2(&diff) <= 1e-12 * a.frobenius_norm());
        assert_close(
            &qr.q().gram(),
            &Matrix::identity(a.cols()),
            ORTHONORMALITY_TOL,
        );
        for i in 0..a.cols() {
            assert!(qr.p()[(i, i)] > 0.0);
            for j in 0..i {
                assert_eq!(qr.p()[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn identity_is_fixed_point() {
        let i3 = Matrix::identity(3);
        let qr = qr_decompose(&i3).unwrap();
        assert_close(qr.q(), &i3, 1e-15);
        assert_close(qr.p(), &i3, 1e-15);
    }

    #[test]
    fn scaled_identity() {
        let a = Matrix::from_rows(&[[2.0, 0.0], [0.0, 3.0]]).unwrap();
        let qr = qr_decompose(&a).unwrap();
        assert_close(qr.q(), &Matrix::identity(2), 1e-15);
        assert_close(qr.p(), &a, 1e-15);
    }

    #[test]
    fn tall_matrix_invariants() {
        let a = Matrix::from_rows(&[
            [1.0, 2.0, -1.0],
            [1.0, -3.0, 0.5],
            [1.0, 4.0, 2.0],
            [1.0, 0.0, 7.0],
            [1.0, 1.5, -2.0],
        ])
        .unwrap();
        let qr = qr_decompose(&a).unwrap();
        check_invariants(&a, &qr);
        assert_eq!(qr, qr_decompose(&a).unwrap());
    }

    #[test]
    fn duplicated_column_is_rank_deficient() {
        let a = Matrix::from_rows(&[
            [1.0, 2.0, 2.0],
            [1.0, 3.0, 3.0],
            [1.0, 5.0, 5.0],
            [1.0, 7.0, 7.0],
        ])
        .unwrap();
        assert_eq!(
            qr_decompose(&a),
            Err(LinalgError::RankDeficient { column: 2 })
        );
    }

    #[test]
    fn zero_column_is_rank_deficient() {
        let a = Matrix::from_rows(&[[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(
            qr_decompose(&a),
            Err(LinalgError::RankDeficient { column: 1 })
        );
    }

    #[test]
    fn wide_matrix_rejected() {
        let a = Matrix::from_rows(&[[1.0, 2.0]]).unwrap();
        assert!(matches!(
            qr_decompose(&a),
            Err(LinalgError::DimensionMismatch(_))
        ));
    }
}
