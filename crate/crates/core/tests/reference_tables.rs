//! Golden checks against the published Wissel and Klein-Goldberger results.

mod common;

use common::{normal_equations_r2, rel};
use tvif::datasets::{builtin, FeatureSelection};
use tvif::regression::fit_both;
use tvif::{
    auxiliary_fit, bound_c0, bound_c1, bound_c2, bound_c3, ols_fit, orthonormal_fit, qr_decompose,
    stewart_s2, stewart_threshold, t_quantile, theorem1_test, tvif, tvif_routes, vif, Matrix,
    ModelSpec, TailProbability,
};

fn spec(name: &str) -> ModelSpec {
    let d = builtin(name).unwrap();
    let response = d.default_response.clone().unwrap();
    d.model_spec(&response, &FeatureSelection::AllOthers, true)
        .unwrap()
}

fn alpha() -> TailProbability {
    TailProbability::new(0.05).unwrap()
}

fn t_crit(spec: &ModelSpec) -> f64 {
    t_quantile(alpha().two_sided_level(), (spec.n() - spec.k()) as u32)
}

fn assert_rel(label: &str, got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len(), "{label}");
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert!(
            rel(*g, *w) <= tol,
            "{label}[{i}]: got {g}, want {w} (tol {tol})"
        );
    }
}

/// Half a unit of the last printed digit, plus the display rounding of the
/// reference, i.e. one unit of that digit.
fn assert_display(label: &str, got: &[f64], want: &[(f64, u32)]) {
    for (i, (g, (w, decimals))) in got.iter().zip(want).enumerate() {
        let unit = 10f64.powi(-(*decimals as i32));
        assert!((g - w).abs() <= unit, "{label}[{i}]: got {g}, want {w}");
    }
}

#[test]
fn wissel_qr_reconstructs_design() {
    let s = spec("wissel");
    let qr = qr_decompose(s.design()).unwrap();
    let recon = qr.q().matmul(qr.p()).unwrap();
    let diff: Vec<f64> = recon
        .as_slice()
        .iter()
        .zip(s.design().as_slice())
        .map(|(a, b)| a - b)
        .collect();
    let diff = Matrix::new(17, 4, diff).unwrap();
    assert!(diff.frobenius_norm() / s.design().frobenius_norm() < 1e-12);
    let gram = qr.q().gram();
    for i in 0..4 {
        for j in 0..4 {
            let e = if i == j { 1.0 } else { 0.0 };
            assert!((gram[(i, j)] - e).abs() < 1e-10);
        }
    }
}

#[test]
fn wissel_ols_table() {
    let fit = ols_fit(&spec("wissel")).unwrap();
    assert_display(
        "beta",
        &fit.coefficients,
        &[(5.469, 3), (-4.252, 3), (3.1203, 4), (0.0028, 4)],
    );
    assert_display(
        "se",
        &fit.std_errors,
        &[(13.016, 3), (5.135, 3), (2.035, 3), (0.0057, 4)],
    );
    for (t, want) in fit.t_stats.iter().zip([0.420, 0.828, 1.533, 0.499]) {
        assert!((t - want).abs() <= 0.02);
    }
    assert!((fit.sigma_hat() - 0.9325).abs() <= 1e-4);
    assert!((fit.r2 - 0.9235).abs() <= 1e-4);
    assert!((fit.f_stat - 52.3).abs() <= 0.1);
}

#[test]
fn klein_goldberger_ols_table() {
    let fit = ols_fit(&spec("klein-goldberger")).unwrap();
    assert_display(
        "beta",
        &fit.coefficients,
        &[(18.7021, 4), (0.3803, 4), (1.4186, 4), (0.5331, 4)],
    );
    assert_display(
        "se",
        &fit.std_errors,
        &[(6.8454, 4), (0.3121, 4), (0.7204, 4), (1.3998, 4)],
    );
    for (t, want) in fit.t_stats.iter().zip([2.732, 1.218, 1.969, 0.381]) {
        assert!((t - want).abs() <= 0.02);
    }
    assert!((fit.sigma_hat() - 6.06).abs() <= 0.01);
    assert!((fit.r2 - 0.9187).abs() <= 1e-4);
    assert!((fit.f_stat - 37.68).abs() <= 0.05);
}

#[test]
fn wissel_orthonormal_table() {
    let s = spec("wissel");
    let fit = ols_fit(&s).unwrap();
    let ofit = orthonormal_fit(&s).unwrap();
    let abs: Vec<f64> = ofit.beta_o.iter().map(|b| b.abs()).collect();
    // the last printed estimate (0.04657) is off by a factor of ten against
    // its own t statistic 0.499 = 0.4657 / 0.9325
    assert_rel("|beta_o|", &abs[..3], &[27.8823, 11.5925, 1.3549], 1e-3);
    assert!((abs[3] / fit.sigma_hat() - 0.499).abs() <= 0.02);
    for se in &ofit.std_errors {
        assert!((se - ofit.sigma_hat).abs() <= 1e-10);
    }
    for (t, want) in ofit.t_exp_o.iter().zip([29.902, 12.432, 1.453, 0.499]) {
        assert!((t - want).abs() <= 0.02);
    }
    assert!(rel(ofit.sigma2_hat, fit.sigma2_hat) <= 1e-12);
    assert!(rel(ofit.r2, fit.r2) <= 1e-12);
    assert!(rel(ofit.f_stat, fit.f_stat) <= 1e-12);
}

#[test]
fn wissel_classical_vif_and_c1() {
    let s = spec("wissel");
    let fit = ols_fit(&s).unwrap();
    let t = t_crit(&s);
    assert!((t - 2.16037).abs() < 5e-6);
    let vifs: Vec<f64> = (1..4)
        .map(|i| vif(&auxiliary_fit(&s, i).unwrap()).unwrap())
        .collect();
    assert_rel("vif", &vifs, &[589.754, 281.8862, 189.4874], 1e-3);
    let c1: Vec<f64> = (1..4).map(|i| bound_c1(&fit, i, t).unwrap()).collect();
    assert_rel("c1", &c1, &[6.807627, 1.985966, 18.7437], 2e-2);
}

#[test]
fn wissel_c2_and_the_orthonormal_reading() {
    let s = spec("wissel");
    let (fit, ofit) = fit_both(&s).unwrap();
    let t = t_crit(&s);
    let c2: Vec<f64> = (1..4)
        .map(|i| bound_c2(&fit, &ofit, i, t).unwrap())
        .collect();
    assert_rel("c2", &c2, &[17.80933, 623.1276, 3545.1672], 1e-3);
    let exceeds: Vec<bool> = (1..4)
        .map(|i| vif(&auxiliary_fit(&s, i).unwrap()).unwrap() > c2[i - 1])
        .collect();
    assert_eq!(exceeds, [true, false, false]);
}

#[test]
fn wissel_auxiliary_ssr() {
    let s = spec("wissel");
    let aux = auxiliary_fit(&s, 1).unwrap();
    assert!(rel(1.0 / aux.ssr_aux, 30.32628) <= 1e-4);
}

#[test]
fn tvif_tables() {
    let cases = [
        ("wissel", [194.8661, 30.32628, 4.765888, 0.00003821626]),
        (
            "klein-goldberger",
            [1.275947615, 0.002652862, 0.014130621, 0.053354814],
        ),
    ];
    for (name, want) in cases {
        let s = spec(name);
        let got: Vec<f64> = (0..4).map(|i| tvif(&s, i).unwrap()).collect();
        assert_rel(name, &got, &want, 1e-4);
        for i in 0..4 {
            assert!(tvif_routes(&s, i).unwrap().relative_gap() <= 1e-8);
        }
    }
}

#[test]
fn threshold_tables() {
    let s = spec("wissel");
    let (fit, ofit) = fit_both(&s).unwrap();
    let t = t_crit(&s);
    let c3: Vec<f64> = (0..4)
        .map(|i| bound_c3(&fit, &ofit, i, t).unwrap())
        .collect();
    assert_rel(
        "wissel c3",
        &c3,
        &[1.017198, 0.9157898, 10.53598, 0.0007149977],
        1e-3,
    );
    let c0: Vec<f64> = (0..4).map(|i| bound_c0(&fit, i, t)).collect();
    assert_rel(
        "wissel c0",
        &c0,
        &[7.371069, 4.456018, 2.399341, 0.000002042640],
        6e-2,
    );

    let s = spec("klein-goldberger");
    let (fit, ofit) = fit_both(&s).unwrap();
    let t = t_crit(&s);
    let c3: Vec<f64> = (0..4)
        .map(|i| bound_c3(&fit, &ofit, i, t).unwrap())
        .collect();
    assert_rel(
        "kg c3",
        &c3,
        &[0.0021892653, 0.0001206694, 0.0187393601, 1.8265885762],
        1e-3,
    );
    assert!(rel(bound_c0(&fit, 1, t), 0.0007931658) <= 1e-3);
}

#[test]
fn theorem1_verdicts() {
    for (name, want) in [
        ("wissel", [true, true, false, false]),
        ("klein-goldberger", [false, true, false, false]),
    ] {
        let report = theorem1_test(&spec(name), alpha()).unwrap();
        let got: Vec<bool> = report
            .per_variable
            .iter()
            .map(|v| v.theorem1_affects)
            .collect();
        assert_eq!(got, want, "{name}");
        assert!(report.overall_troubling);
    }
}

#[test]
fn stewart_routes_and_thresholds_on_reference_columns() {
    for name in ["wissel", "klein-goldberger"] {
        let s = spec(name);
        let (fit, ofit) = fit_both(&s).unwrap();
        let t = t_crit(&s);
        for i in 0..4 {
            let s2 = stewart_s2(&s, i).unwrap();
            let tv = tvif(&s, i).unwrap();
            let c3 = bound_c3(&fit, &ofit, i, t).unwrap();
            let thr = stewart_threshold(&fit, &ofit, i, t).unwrap();
            assert_eq!(s2 > thr, tv > c3, "{name} column {i}");
            if i > 0 {
                let aux = auxiliary_fit(&s, i).unwrap();
                let v = vif(&aux).unwrap();
                let other = tvif::collinearity::stewart_s2_from_vif(
                    v,
                    s.n(),
                    fit.col_means[i],
                    aux.ssr_aux,
                );
                assert!(rel(s2, other) <= 1e-8, "{name} column {i}");
                let c2 = bound_c2(&fit, &ofit, i, t).unwrap();
                assert_eq!(v > c2, tv > c3);
            }
        }
    }
    // Wissel personal consumption: product of the tabulated TVIF and Σ C²
    let s = spec("wissel");
    let sum_sq: f64 = s.design().column(1).iter().map(|c| c * c).sum();
    assert!(rel(stewart_s2(&s, 1).unwrap(), 30.32628 * sum_sq) <= 1e-4);
    let (fit, ofit) = fit_both(&s).unwrap();
    let thr = stewart_threshold(&fit, &ofit, 1, t_crit(&s)).unwrap();
    assert!(rel(thr, 0.9157898 * sum_sq) <= 1e-3);
}

#[test]
fn toy_auxiliary_against_normal_equations() {
    let x2 = vec![1.0, 2.0, 3.0, 4.0, 5.0];
    let x3 = vec![1.0, 2.0, 3.0, 4.0, 6.0];
    let feats = Matrix::from_columns(&[x2.clone(), x3.clone()]).unwrap();
    let s = ModelSpec::with_intercept(
        &feats,
        vec![1.2, 1.9, 3.3, 3.8, 5.4],
        vec!["x2".into(), "x3".into()],
    )
    .unwrap();
    let oracle = normal_equations_r2(&[vec![1.0; 5], x2.clone()], &x3);
    let aux = auxiliary_fit(&s, 2).unwrap();
    assert!(rel(aux.r2_aux.unwrap(), oracle) <= 1e-10);
    assert!(rel(vif(&aux).unwrap(), 1.0 / (1.0 - oracle)) <= 1e-9);
    let oracle = normal_equations_r2(&[vec![1.0; 5], x3], &x2);
    assert!(rel(auxiliary_fit(&s, 1).unwrap().r2_aux.unwrap(), oracle) <= 1e-10);
}

#[test]
fn klein_goldberger_worked_inequality() {
    let report = theorem1_test(&spec("klein-goldberger"), alpha()).unwrap();
    let wage = &report.per_variable[1];
    assert!(!wage.significant_original);
    assert!(wage.tvif > wage.c3.unwrap());
    assert!(rel(wage.tvif, 0.002652862) <= 1e-4);
    assert!(rel(wage.c3.unwrap(), 0.0001206694) <= 1e-3);
}
