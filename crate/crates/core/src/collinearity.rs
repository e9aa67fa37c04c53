//! Collinearity measures, their significance thresholds and the per-variable
//! decision of whether multicollinearity distorts inference.
//!
//! Notation used below, for column `i` of the design `X`:
//!
//! * `SSRᵢ`, `SSTᵢ`: residual and total sums of squares of the auxiliary
//!   regression of `Xᵢ` on the other columns.
//! * `VIF(i) = 1/(1 − R²ᵢ)`, undefined for the intercept.
//! * `TVIF(i) = 1/SSRᵢ = [(XᵀX)⁻¹]ᵢᵢ`, defined for every column.
//! * `S²ᵢ = TVIF(i)·‖Xᵢ‖²`, Stewart's index.
//! * `t*` the two-sided critical value `t_{n−k}(1 − α/2)`.
//!
//! The thresholds compare against the significance test of the original
//! model (`c0`, `c1`) and of the orthonormal model `y = Q·β_o + w` (`c2`,
//! `c3`). Every comparison is strict; ties count as "not affected".

use serde::{Deserialize, Serialize};

use crate::distributions::{t_quantile, TailProbability};
use crate::error::{Error, LinalgError, Result};
use crate::linalg::{dot, norm2, spd_solve, Matrix};
use crate::regression::{auxiliary_fit, fit_both, AuxiliaryFit, ModelSpec, OlsFit};

/// Maximum relative disagreement between the two TVIF computations.
pub const TVIF_ROUTE_TOL: f64 = 1e-8;

/// `|β̂ᵢ,o| ≤ ZERO_COEF_TOL · ‖β̂_o‖` is treated as an exactly zero
/// orthonormal coefficient.
pub const ZERO_COEF_TOL: f64 = 1e-14;

/// Estimates of the orthonormal model `y = Q·β_o + w` where `X = Q·P`.
///
/// Residuals, `σ̂²`, `R²` and `F` coincide with the original model; every
/// standard error equals `σ̂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthonormalFit {
    pub beta_o: Vec<f64>,
    /// `|β̂ᵢ,o| / σ̂`
    pub t_exp_o: Vec<f64>,
    pub p_matrix: Matrix,
    pub sigma_hat: f64,
    pub sigma2_hat: f64,
    pub std_errors: Vec<f64>,
    pub residuals: Vec<f64>,
    pub r2: f64,
    pub f_stat: f64,
}

impl OrthonormalFit {
    fn coefficient_is_zero(&self, i: usize) -> bool {
        self.beta_o[i].abs() <= ZERO_COEF_TOL * norm2(&self.beta_o)
    }
}

/// Position of a variable in the significance classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    /// Significant in the original model.
    A,
    /// Not significant in either model.
    B1,
    /// Not significant in the original model but significant in the
    /// orthonormal one: multicollinearity drives the non-rejection.
    B2,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseLabel::A => "A",
            CaseLabel::B1 => "B1",
            CaseLabel::B2 => "B2",
        })
    }
}

/// All measures and thresholds for one design column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableDiagnostic {
    pub index: usize,
    pub name: String,
    pub is_intercept: bool,
    pub vif: Option<f64>,
    pub tvif: f64,
    pub stewart_s2: f64,
    pub c0: f64,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
    pub stewart_threshold: Option<f64>,
    pub t_exp_original: f64,
    pub t_exp_orthonormal: f64,
    pub significant_original: bool,
    pub significant_orthonormal: bool,
    pub case_label: CaseLabel,
    pub theorem1_affects: bool,
    pub orthonormal_coefficient_zero: bool,
    pub vif_exceeds_c1: Option<bool>,
    pub vif_exceeds_c2: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollinearityReport {
    pub response_name: String,
    pub n: usize,
    pub k: usize,
    pub alpha: TailProbability,
    pub t_critical: f64,
    pub sigma_hat: f64,
    pub r2: f64,
    pub global_f: f64,
    pub global_f_df1: usize,
    pub global_f_df2: usize,
    pub global_f_pvalue: f64,
    pub overall_troubling: bool,
    pub per_variable: Vec<VariableDiagnostic>,
}

/// Classical variance inflation factor `1/(1 − R²ᵢ)`.
pub fn vif(aux: &AuxiliaryFit) -> Result<f64> {
    let r2 = aux.r2_aux.ok_or(Error::UndefinedForIntercept {
        index: aux.target_index,
    })?;
    Ok(1.0 / (1.0 - r2))
}

/// The two independent evaluations of `TVIF(i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvifRoutes {
    /// `(XᵢᵀXᵢ − XᵢᵀX₋ᵢ(X₋ᵢᵀX₋ᵢ)⁻¹X₋ᵢᵀXᵢ)⁻¹` via Cholesky.
    pub normal_equations: f64,
    /// `1/SSRᵢ` from the QR-based auxiliary regression.
    pub inverse_ssr: f64,
}

impl TvifRoutes {
    pub fn relative_gap(&self) -> f64 {
        (self.normal_equations - self.inverse_ssr).abs()
            / self.normal_equations.abs().max(self.inverse_ssr.abs())
    }
}

fn tvif_normal_equations(spec: &ModelSpec, i: usize) -> Result<f64> {
    let x = spec.design();
    let target = x.column(i);
    let xtx = dot(&target, &target);
    let denom = match x.without_column(i) {
        None => xtx,
        Some(others) => {
            let b = others.tr_matvec(&target)?;
            let z = spd_solve(&others.gram(), &b).map_err(|e| match e {
                LinalgError::NotPositiveDefinite { pivot } => {
                    spec.collinearity_error(if pivot < i { pivot } else { pivot + 1 })
                }
                other => other.into(),
            })?;
            xtx - dot(&b, &z)
        }
    };
    // negated so that NaN is rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(denom > 0.0) {
        return Err(spec.collinearity_error(i));
    }
    Ok(1.0 / denom)
}

fn routes_from_aux(spec: &ModelSpec, i: usize, aux: &AuxiliaryFit) -> Result<TvifRoutes> {
    Ok(TvifRoutes {
        normal_equations: tvif_normal_equations(spec, i)?,
        inverse_ssr: 1.0 / aux.ssr_aux,
    })
}

fn checked_tvif(spec: &ModelSpec, i: usize, routes: TvifRoutes) -> Result<f64> {
    if routes.relative_gap() > TVIF_ROUTE_TOL {
        return Err(Error::IllConditioned {
            index: i,
            name: spec.column_names()[i].clone(),
            normal_equations: routes.normal_equations,
            inverse_ssr: routes.inverse_ssr,
        });
    }
    Ok(routes.normal_equations)
}

/// Both TVIF evaluations for column `i`, without the agreement check.
pub fn tvif_routes(spec: &ModelSpec, i: usize) -> Result<TvifRoutes> {
    let aux = auxiliary_fit(spec, i)?;
    routes_from_aux(spec, i, &aux)
}

/// Redefined variance inflation factor `TVIF(i)`, defined for every column
/// including the intercept.
///
/// Fails with [`Error::IllConditioned`] when the normal-equations value and
/// `1/SSRᵢ` differ by more than [`TVIF_ROUTE_TOL`].
pub fn tvif(spec: &ModelSpec, i: usize) -> Result<f64> {
    let routes = tvif_routes(spec, i)?;
    checked_tvif(spec, i, routes)
}

/// Stewart's index `S²ᵢ = TVIF(i)·Σⱼ Xⱼᵢ²`.
pub fn stewart_s2(spec: &ModelSpec, i: usize) -> Result<f64> {
    let t = tvif(spec, i)?;
    let col = spec.design().column(i);
    Ok(t * dot(&col, &col))
}

/// `S²ᵢ` recovered from the VIF: `VIF(i) + n·X̄ᵢ²/SSRᵢ`.
pub fn stewart_s2_from_vif(vif: f64, n: usize, mean: f64, ssr_aux: f64) -> f64 {
    vif + n as f64 * mean * mean / ssr_aux
}

/// `c0(i) = (β̂ᵢ / (σ̂·t*))²`: the original test fails to reject iff
/// `TVIF(i) > c0(i)`.
pub fn bound_c0(fit: &OlsFit, i: usize, t_crit: f64) -> f64 {
    (fit.coefficients[i] / (fit.sigma_hat() * t_crit)).powi(2)
}

/// `c1(i) = (t* / t_exp(βᵢ))²`, the VIF level above which the traditional
/// orthogonal model would reject.
pub fn bound_c1(fit: &OlsFit, i: usize, t_crit: f64) -> Result<f64> {
    if fit.intercept_index == Some(i) {
        return Err(Error::UndefinedForIntercept { index: i });
    }
    let t = fit.t_stats[i];
    if t == 0.0 {
        return Err(Error::ZeroTStatistic { index: i });
    }
    Ok((t_crit / t).powi(2))
}

fn c3_raw(fit: &OlsFit, ofit: &OrthonormalFit, i: usize, t_crit: f64) -> Result<f64> {
    if ofit.coefficient_is_zero(i) {
        return Err(Error::ZeroOrthonormalCoefficient { index: i });
    }
    let var_hat = fit.std_errors[i].powi(2);
    Ok((t_crit / ofit.beta_o[i]).powi(2) * var_hat)
}

/// `c2(i) = (t*/β̂ᵢ,o)²·var̂(β̂ᵢ)·n·var(Xᵢ)`: the orthonormal model rejects iff
/// `VIF(i) > c2(i)`.
pub fn bound_c2(fit: &OlsFit, ofit: &OrthonormalFit, i: usize, t_crit: f64) -> Result<f64> {
    if fit.intercept_index == Some(i) {
        return Err(Error::UndefinedForIntercept { index: i });
    }
    Ok(c3_raw(fit, ofit, i, t_crit)? * fit.centered_sumsq(i))
}

/// `c3(i) = (t*/β̂ᵢ,o)²·var̂(β̂ᵢ)`: the orthonormal model rejects iff
/// `TVIF(i) > c3(i)`.
pub fn bound_c3(fit: &OlsFit, ofit: &OrthonormalFit, i: usize, t_crit: f64) -> Result<f64> {
    c3_raw(fit, ofit, i, t_crit)
}

/// Threshold for Stewart's index, `c3(i)·Σⱼ Xⱼᵢ²`.
pub fn stewart_threshold(
    fit: &OlsFit,
    ofit: &OrthonormalFit,
    i: usize,
    t_crit: f64,
) -> Result<f64> {
    Ok(c3_raw(fit, ofit, i, t_crit)? * fit.col_sumsq[i])
}

pub fn classify_case(significant_original: bool, significant_orthonormal: bool) -> CaseLabel {
    match (significant_original, significant_orthonormal) {
        (true, _) => CaseLabel::A,
        (false, false) => CaseLabel::B1,
        (false, true) => CaseLabel::B2,
    }
}

fn optional<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(
            Error::UndefinedForIntercept { .. }
            | Error::ZeroTStatistic { .. }
            | Error::ZeroOrthonormalCoefficient { .. },
        ) => Ok(None),
        Err(e) => Err(e),
    }
}

fn diagnose_variable(
    spec: &ModelSpec,
    fit: &OlsFit,
    ofit: &OrthonormalFit,
    i: usize,
    t_crit: f64,
) -> Result<VariableDiagnostic> {
    let aux = auxiliary_fit(spec, i)?;
    let tvif = checked_tvif(spec, i, routes_from_aux(spec, i, &aux)?)?;
    let is_intercept = spec.is_intercept(i);
    let vif = optional(vif(&aux))?;
    let stewart_s2 = tvif * fit.col_sumsq[i];

    // c1/c2 are relative to the centered VIF, which needs an intercept
    let centered = fit.intercept_index.is_some();
    let c0 = bound_c0(fit, i, t_crit);
    let c1 = if centered {
        optional(bound_c1(fit, i, t_crit))?
    } else {
        None
    };
    let c2 = if centered {
        optional(bound_c2(fit, ofit, i, t_crit))?
    } else {
        None
    };
    let c3 = optional(bound_c3(fit, ofit, i, t_crit))?;
    let stewart_threshold = optional(stewart_threshold(fit, ofit, i, t_crit))?;

    let t_exp_original = fit.t_stats[i];
    let t_exp_orthonormal = ofit.t_exp_o[i];
    let significant_original = t_exp_original > t_crit;
    let significant_orthonormal = t_exp_orthonormal > t_crit;
    let theorem1_affects = c3.is_some_and(|c3| tvif > c0.max(c3));

    Ok(VariableDiagnostic {
        index: i,
        name: spec.column_names()[i].clone(),
        is_intercept,
        vif,
        tvif,
        stewart_s2,
        c0,
        c1,
        c2,
        c3,
        stewart_threshold,
        t_exp_original,
        t_exp_orthonormal,
        significant_original,
        significant_orthonormal,
        case_label: classify_case(significant_original, significant_orthonormal),
        theorem1_affects,
        orthonormal_coefficient_zero: c3.is_none(),
        vif_exceeds_c1: vif.zip(c1).map(|(v, c)| v > c),
        vif_exceeds_c2: vif.zip(c2).map(|(v, c)| v > c),
    })
}

/// Builds the full report from already computed fits.
///
/// `ofit` may come from any orthonormal factorization of the design, so the
/// sign convention of `Q` can be varied independently of `fit`.
pub fn diagnose(
    spec: &ModelSpec,
    fit: &OlsFit,
    ofit: &OrthonormalFit,
    alpha: TailProbability,
) -> Result<CollinearityReport> {
    let df2 = fit.df_resid();
    let t_critical = t_quantile(alpha.two_sided_level(), df2 as u32);
    let per_variable = (0..spec.k())
        .map(|i| diagnose_variable(spec, fit, ofit, i, t_critical))
        .collect::<Result<Vec<_>>>()?;
    Ok(CollinearityReport {
        response_name: spec.response_name().to_string(),
        n: fit.n,
        k: fit.k,
        alpha,
        t_critical,
        sigma_hat: fit.sigma_hat(),
        r2: fit.r2,
        global_f: fit.f_stat,
        global_f_df1: fit.f_df1(),
        global_f_df2: df2,
        global_f_pvalue: fit.f_pvalue,
        overall_troubling: per_variable.iter().any(|v| v.theorem1_affects),
        per_variable,
    })
}

/// Fits the model and its orthonormal counterpart and flags every variable
/// with `TVIF(i) > max(c0(i), c3(i))`.
pub fn theorem1_test(spec: &ModelSpec, alpha: TailProbability) -> Result<CollinearityReport> {
    let (fit, ofit) = fit_both(spec)?;
    diagnose(spec, &fit, &ofit, alpha)
}
