//! Ordinary least squares for the main model and for the auxiliary
//! regressions of each column on the others.

use serde::{Deserialize, Serialize};

use crate::collinearity::OrthonormalFit;
use crate::distributions::f_sf;
use crate::error::{Error, LinalgError, Result};
use crate::linalg::{
    dot, norm2, qr_decompose, solve_upper_triangular, spd_solve, Matrix, QrResult, RANK_TOL,
};

/// Relative tolerance for the intercept column being constant.
pub const INTERCEPT_TOL: f64 = 1e-12;

/// A residual norm below this fraction of `‖y‖` counts as a perfect fit.
pub const PERFECT_FIT_TOL: f64 = 1e-12;

/// Design matrix, response and column metadata of `y = X·β + u`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSpec {
    design: Matrix,
    response: Vec<f64>,
    column_names: Vec<String>,
    intercept_index: Option<usize>,
    response_name: String,
}

impl ModelSpec {
    pub fn new(
        design: Matrix,
        response: Vec<f64>,
        column_names: Vec<String>,
        intercept_index: Option<usize>,
    ) -> Result<Self> {
        let (n, k) = (design.rows(), design.cols());
        if response.len() != n {
            return Err(Error::InvalidInput(format!(
                "response has {} values but the design has {n} rows",
                response.len()
            )));
        }
        if column_names.len() != k {
            return Err(Error::InvalidInput(format!(
                "{} column names for {k} columns",
                column_names.len()
            )));
        }
        if let Some(pos) = response.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite response value at row {pos}"
            )));
        }
        if let Some(idx) = intercept_index {
            if idx >= k {
                return Err(Error::ColumnOutOfRange { index: idx, k });
            }
            let col = design.column(idx);
            let first = col[0];
            let scale = col.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let constant = first != 0.0
                && col
                    .iter()
                    .all(|&v| (v - first).abs() <= INTERCEPT_TOL * scale);
            if !constant {
                return Err(Error::InvalidIntercept {
                    index: idx,
                    name: column_names[idx].clone(),
                });
            }
            if k == 1 {
                return Err(Error::NoRegressors);
            }
        }
        if n <= k {
            return Err(Error::InsufficientData { n, k });
        }
        Ok(Self {
            design,
            response,
            column_names,
            intercept_index,
            response_name: "y".to_string(),
        })
    }

    /// Prepends a constant column named `Constant` to `features` and flags it
    /// as the intercept.
    pub fn with_intercept(
        features: &Matrix,
        response: Vec<f64>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        let mut columns = vec![vec![1.0; features.rows()]];
        columns.extend(features.columns());
        let design = Matrix::from_columns(&columns)?;
        let mut names = vec!["Constant".to_string()];
        names.extend(feature_names);
        Self::new(design, response, names, Some(0))
    }

    pub fn with_response_name(mut self, name: impl Into<String>) -> Self {
        self.response_name = name.into();
        self
    }

    pub fn design(&self) -> &Matrix {
        &self.design
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn intercept_index(&self) -> Option<usize> {
        self.intercept_index
    }

    pub fn response_name(&self) -> &str {
        &self.response_name
    }

    pub fn n(&self) -> usize {
        self.design.rows()
    }

    pub fn k(&self) -> usize {
        self.design.cols()
    }

    pub fn is_intercept(&self, i: usize) -> bool {
        self.intercept_index == Some(i)
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.k() {
            Ok(())
        } else {
            Err(Error::ColumnOutOfRange {
                index: i,
                k: self.k(),
            })
        }
    }

    pub(crate) fn collinearity_error(&self, index: usize) -> Error {
        Error::ExactCollinearity {
            index,
            name: self.column_names[index].clone(),
        }
    }

    /// Total sum of squares of `y`: centered when the model has an intercept.
    fn total_sum_of_squares(&self) -> f64 {
        sum_of_squares(&self.response, self.intercept_index.is_some())
    }

    fn check_not_perfect(&self, ssr: f64) -> Result<()> {
        let bound = PERFECT_FIT_TOL * norm2(&self.response);
        if ssr <= bound * bound {
            Err(Error::PerfectFit)
        } else {
            Ok(())
        }
    }
}

/// OLS estimates and summary statistics of the main model.
///
/// `t_stats` hold absolute values. Column variances use the divide-by-`n`
/// convention so that `n·var(Xᵢ)` is the centered sum of squares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub n: usize,
    pub k: usize,
    pub intercept_index: Option<usize>,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub ssr: f64,
    pub sigma2_hat: f64,
    pub tss: f64,
    pub r2: f64,
    pub f_stat: f64,
    pub f_pvalue: f64,
    pub residuals: Vec<f64>,
    pub col_means: Vec<f64>,
    pub col_pop_variances: Vec<f64>,
    pub col_sumsq: Vec<f64>,
    /// Diagonal of `(XᵀX)⁻¹`.
    pub xtx_inv_diag: Vec<f64>,
}

impl OlsFit {
    pub fn df_resid(&self) -> usize {
        self.n - self.k
    }

    /// Numerator degrees of freedom of the global F test.
    pub fn f_df1(&self) -> usize {
        if self.intercept_index.is_some() {
            self.k - 1
        } else {
            self.k
        }
    }

    pub fn sigma_hat(&self) -> f64 {
        self.sigma2_hat.sqrt()
    }

    /// Centered sum of squares `n·var(Xᵢ)`.
    pub fn centered_sumsq(&self, i: usize) -> f64 {
        self.n as f64 * self.col_pop_variances[i]
    }
}

/// Result of regressing column `target_index` on the remaining columns.
///
/// `r2_aux` is `None` for the intercept column. `sst_aux` is centered when the
/// auxiliary regression contains the intercept and uncentered otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxiliaryFit {
    pub target_index: usize,
    pub has_intercept: bool,
    pub r2_aux: Option<f64>,
    pub ssr_aux: f64,
    pub sst_aux: f64,
    pub coefficients: Vec<f64>,
}

fn sum_of_squares(v: &[f64], centered: bool) -> f64 {
    if centered {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|x| (x - mean).powi(2)).sum()
    } else {
        v.iter().map(|x| x * x).sum()
    }
}

fn global_f(ssr: f64, tss: f64, df1: usize, df2: usize) -> (f64, f64, f64) {
    let r2 = 1.0 - ssr / tss;
    let f = ((tss - ssr) / df1 as f64) / (ssr / df2 as f64);
    let f = f.max(0.0);
    (r2, f, f_sf(f, df1 as u32, df2 as u32))
}

fn map_rank(err: LinalgError, spec: &ModelSpec, to_original: impl Fn(usize) -> usize) -> Error {
    match err {
        LinalgError::RankDeficient { column } => spec.collinearity_error(to_original(column)),
        other => other.into(),
    }
}

pub(crate) fn fit_with_qr(spec: &ModelSpec) -> Result<(OlsFit, QrResult)> {
    let x = spec.design();
    let y = spec.response();
    let (n, k) = (spec.n(), spec.k());

    let qr = qr_decompose(x).map_err(|e| map_rank(e, spec, |c| c))?;
    let qty = qr.q().tr_matvec(y)?;
    let coefficients = solve_upper_triangular(qr.p(), &qty)?;

    let fitted = x.matvec(&coefficients)?;
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let ssr = dot(&residuals, &residuals);
    spec.check_not_perfect(ssr)?;
    let sigma2_hat = ssr / (n - k) as f64;

    // (XᵀX)⁻¹ = P⁻¹·P⁻ᵀ, so its diagonal is the squared row norms of P⁻¹
    let mut p_inv_rows = vec![0.0; k];
    for j in 0..k {
        let mut e = vec![0.0; k];
        e[j] = 1.0;
        let col = solve_upper_triangular(qr.p(), &e)?;
        for (acc, v) in p_inv_rows.iter_mut().zip(col) {
            *acc += v * v;
        }
    }
    let xtx_inv_diag = p_inv_rows;
    let std_errors: Vec<f64> = xtx_inv_diag
        .iter()
        .map(|d| (sigma2_hat * d).sqrt())
        .collect();
    let t_stats = coefficients
        .iter()
        .zip(&std_errors)
        .map(|(b, s)| (b / s).abs())
        .collect();

    let tss = spec.total_sum_of_squares();
    let df1 = if spec.intercept_index().is_some() {
        k - 1
    } else {
        k
    };
    let (r2, f_stat, f_pvalue) = global_f(ssr, tss, df1, n - k);

    let mut col_means = Vec::with_capacity(k);
    let mut col_pop_variances = Vec::with_capacity(k);
    let mut col_sumsq = Vec::with_capacity(k);
    for col in x.columns() {
        let mean = col.iter().sum::<f64>() / n as f64;
        col_means.push(mean);
        col_pop_variances.push(col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64);
        col_sumsq.push(dot(&col, &col));
    }

    let fit = OlsFit {
        n,
        k,
        intercept_index: spec.intercept_index(),
        coefficients,
        std_errors,
        t_stats,
        ssr,
        sigma2_hat,
        tss,
        r2,
        f_stat,
        f_pvalue,
        residuals,
        col_means,
        col_pop_variances,
        col_sumsq,
        xtx_inv_diag,
    };
    Ok((fit, qr))
}

/// Fits `y = X·β + u` by least squares through the QR factorization of `X`.
pub fn ols_fit(spec: &ModelSpec) -> Result<OlsFit> {
    fit_with_qr(spec).map(|(fit, _)| fit)
}

/// Fits the orthonormal reparameterization `y = Q·β_o + w` of the model,
/// where `X = Q·P` is the thin QR factorization with positive diagonal.
pub fn orthonormal_fit(spec: &ModelSpec) -> Result<OrthonormalFit> {
    let (_, qr) = fit_with_qr(spec)?;
    orthonormal_fit_from_factors(spec, qr.q(), qr.p())
}

/// Main and orthonormal fits sharing one factorization.
pub fn fit_both(spec: &ModelSpec) -> Result<(OlsFit, OrthonormalFit)> {
    let (fit, qr) = fit_with_qr(spec)?;
    let ofit = orthonormal_fit_from_factors(spec, qr.q(), qr.p())?;
    Ok((fit, ofit))
}

/// Orthonormal fit for any factorization `X = Q·P` with `QᵀQ = I`, regardless
/// of the sign convention of its columns.
pub fn orthonormal_fit_from_factors(
    spec: &ModelSpec,
    q: &Matrix,
    p: &Matrix,
) -> Result<OrthonormalFit> {
    let (n, k) = (spec.n(), spec.k());
    if q.rows() != n || q.cols() != k || p.rows() != k || p.cols() != k {
        return Err(LinalgError::DimensionMismatch(format!(
            "factors {}x{} and {}x{} do not match a {n}x{k} design",
            q.rows(),
            q.cols(),
            p.rows(),
            p.cols()
        ))
        .into());
    }
    let y = spec.response();
    let beta_o = q.tr_matvec(y)?;
    let fitted = q.matvec(&beta_o)?;
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let ssr = dot(&residuals, &residuals);
    spec.check_not_perfect(ssr)?;
    let sigma2_hat = ssr / (n - k) as f64;
    let sigma_hat = sigma2_hat.sqrt();

    // var(β̂_o) = σ²·(QᵀQ)⁻¹
    let gram = q.gram();
    let mut std_errors = Vec::with_capacity(k);
    for j in 0..k {
        let mut e = vec![0.0; k];
        e[j] = 1.0;
        let col = spd_solve(&gram, &e)?;
        std_errors.push(sigma_hat * col[j].sqrt());
    }

    let t_exp_o = beta_o.iter().map(|b| b.abs() / sigma_hat).collect();
    let tss = spec.total_sum_of_squares();
    let df1 = if spec.intercept_index().is_some() {
        k - 1
    } else {
        k
    };
    let (r2, f_stat, _) = global_f(ssr, tss, df1, n - k);

    Ok(OrthonormalFit {
        beta_o,
        t_exp_o,
        p_matrix: p.clone(),
        sigma_hat,
        sigma2_hat,
        std_errors,
        residuals,
        r2,
        f_stat,
    })
}

/// Regresses column `i` on all other columns.
///
/// When `i` is the intercept the regressors are the remaining columns with no
/// constant and `r2_aux` is `None`.
pub fn auxiliary_fit(spec: &ModelSpec, i: usize) -> Result<AuxiliaryFit> {
    spec.check_index(i)?;
    let x = spec.design();
    let target = x.column(i);
    let has_intercept = spec.intercept_index().is_some() && !spec.is_intercept(i);
    let sst_aux = sum_of_squares(&target, has_intercept);

    let (residuals, coefficients) = match x.without_column(i) {
        None => (target.clone(), Vec::new()),
        Some(others) => {
            let orig = |c: usize| if c < i { c } else { c + 1 };
            let qr = qr_decompose(&others).map_err(|e| map_rank(e, spec, orig))?;
            let qtx = qr.q().tr_matvec(&target)?;
            let projected = qr.q().matvec(&qtx)?;
            let coefficients = solve_upper_triangular(qr.p(), &qtx)?;
            let residuals = target.iter().zip(&projected).map(|(a, b)| a - b).collect();
            (residuals, coefficients)
        }
    };
    let ssr_aux = dot(&residuals, &residuals);
    let floor = RANK_TOL * norm2(&target);
    if ssr_aux <= floor * floor {
        return Err(spec.collinearity_error(i));
    }

    let r2_aux = (!spec.is_intercept(i)).then(|| 1.0 - ssr_aux / sst_aux);
    Ok(AuxiliaryFit {
        target_index: i,
        has_intercept,
        r2_aux,
        ssr_aux,
        sst_aux,
        coefficients,
    })
}
