use super::Matrix;
use crate::error::LinalgError;

const SYMMETRY_TOL: f64 = 1e-10;

fn check_square(m: &Matrix, b: &[f64]) -> Result<(), LinalgError> {
    if !m.is_square() || b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "cannot solve {}x{} system with right-hand side of length {}",
            m.rows(),
            m.cols(),
            b.len()
        )));
    }
    Ok(())
}

/// Back substitution for `P·x = b`. Only the upper triangle of `p` is read.
pub fn solve_upper_triangular(p: &Matrix, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    check_square(p, b)?;
    let k = p.rows();
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let d = p[(i, i)];
        if d == 0.0 {
            return Err(LinalgError::SingularTriangular { index: i });
        }
        let row = p.row(i);
        let s: f64 = (i + 1..k).map(|j| row[j] * x[j]).sum();
        x[i] = (b[i] - s) / d;
    }
    Ok(x)
}

/// Forward substitution for `L·x = b`. Only the lower triangle of `l` is read.
pub fn solve_lower_triangular(l: &Matrix, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    check_square(l, b)?;
    let k = l.rows();
    let mut x = vec![0.0; k];
    for i in 0..k {
        let d = l[(i, i)];
        if d == 0.0 {
            return Err(LinalgError::SingularTriangular { index: i });
        }
        let row = l.row(i);
        let s: f64 = (0..i).map(|j| row[j] * x[j]).sum();
        x[i] = (b[i] - s) / d;
    }
    Ok(x)
}

/// Solves `G·x = b` for symmetric positive definite `G` by Cholesky.
///
/// A pivot that is not positive, or that has lost all but a few ulps of the
/// original diagonal entry, is reported as [`LinalgError::NotPositiveDefinite`].
pub fn spd_solve(g: &Matrix, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    check_square(g, b)?;
    let k = g.rows();
    let scale = g.max_abs();
    for i in 0..k {
        for j in 0..i {
            if (g[(i, j)] - g[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(LinalgError::NotSymmetric);
            }
        }
    }

    let mut l = vec![0.0; k * k];
    for j in 0..k {
        let s: f64 = (0..j).map(|c| l[j * k + c] * l[j * k + c]).sum();
        let d = g[(j, j)] - s;
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(d > 4.0 * f64::EPSILON * k as f64 * g[(j, j)].abs()) {
            return Err(LinalgError::NotPositiveDefinite { pivot: j });
        }
        let d = d.sqrt();
        l[j * k + j] = d;
        for i in j + 1..k {
            let s: f64 = (0..j).map(|c| l[i * k + c] * l[j * k + c]).sum();
            l[i * k + j] = (g[(i, j)] - s) / d;
        }
    }
    let l = Matrix::from_parts(k, k, l);
    let z = solve_lower_triangular(&l, b)?;
    solve_upper_triangular(&l.transpose(), &z)
}
