//! Multicollinearity diagnostics built on a QR-based orthonormal reference model.
//!
//! The crate fits a linear model `y = X·β + u` by ordinary least squares,
//! reparameterizes it through the thin QR factorization `X = Q·P` and compares
//! the individual significance tests of both models. From that comparison it
//! derives:
//!
//! * the classical variance inflation factor (VIF) and the redefined factor
//!   TVIF, the reciprocal of the residual sum of squares of each auxiliary
//!   regression (defined for the intercept too);
//! * Stewart's collinearity index `S²ᵢ = TVIF(i)·‖Xᵢ‖²`;
//! * the thresholds `c0..c3` and the matching threshold for `S²ᵢ`;
//! * a per-variable decision: multicollinearity is statistically troubling
//!   for variable `i` when `TVIF(i) > max(c0(i), c3(i))`.
//!
//! ```
//! use tvif::{datasets, theorem1_test, TailProbability};
//!
//! let data = datasets::builtin("wissel").unwrap();
//! let spec = data.model_spec("D", &datasets::FeatureSelection::AllOthers, true).unwrap();
//! let report = theorem1_test(&spec, TailProbability::new(0.05).unwrap()).unwrap();
//! let verdicts: Vec<bool> = report.per_variable.iter().map(|v| v.theorem1_affects).collect();
//! assert_eq!(verdicts, [true, true, false, false]);
//! ```

pub mod collinearity;
pub mod datasets;
pub mod distributions;
pub mod error;
pub mod linalg;
pub mod regression;

pub use collinearity::{
    bound_c0, bound_c1, bound_c2, bound_c3, classify_case, diagnose, stewart_s2, stewart_threshold,
    theorem1_test, tvif, tvif_routes, vif, CaseLabel, CollinearityReport, OrthonormalFit,
    TvifRoutes, VariableDiagnostic,
};
pub use distributions::{f_sf, t_cdf, t_quantile, TailProbability};
pub use error::{Error, LinalgError, Result};
pub use linalg::{qr_decompose, solve_upper_triangular, spd_solve, Matrix, QrResult};
pub use regression::{auxiliary_fit, ols_fit, orthonormal_fit, AuxiliaryFit, ModelSpec, OlsFit};
