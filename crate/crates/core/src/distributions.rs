//! Student-t and F distribution functions.
//!
//! Everything reduces to the regularized incomplete beta function, evaluated
//! by its continued fraction with the modified Lentz method. Quantiles are
//! found by bracketing and bisection on the CDF, followed by Newton polish.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const CF_EPS: f64 = 1e-15;
const CF_MAX_ITER: usize = 2_000;
const CF_TINY: f64 = 1e-300;

/// Probability strictly inside `(0, 1)`, e.g. a significance level.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct TailProbability(f64);

impl TailProbability {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidProbability(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 − α/2`, the CDF level of a two-sided critical value.
    pub fn two_sided_level(self) -> TailProbability {
        TailProbability(1.0 - self.0 / 2.0)
    }
}

impl TryFrom<f64> for TailProbability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<TailProbability> for f64 {
    fn from(p: TailProbability) -> f64 {
        p.0
    }
}

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    #[allow(clippy::excessive_precision)]
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Continued fraction for the incomplete beta function.
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)` where the caller also supplies
/// `y = 1 − x`, so that neither tail loses precision to cancellation.
fn reg_inc_beta_split(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_cf(a, b, x) / a
    } else {
        1.0 - ln_front.exp() * beta_cf(b, a, y) / b
    }
}

/// Regularized incomplete beta function `I_x(a, b)` for `x ∈ [0, 1]`.
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    reg_inc_beta_split(a, b, x, 1.0 - x)
}

/// `I_x(df/2, 1/2)` with `x = df/(df + t²)`: twice the upper tail `P(T > |t|)`.
fn t_two_tail(t: f64, df: f64) -> f64 {
    let t2 = t * t;
    if !t2.is_finite() {
        return 0.0;
    }
    let denom = df + t2;
    reg_inc_beta_split(df / 2.0, 0.5, df / denom, t2 / denom)
}

fn check_df(df: u32) {
    assert!(df >= 1, "degrees of freedom must be at least 1");
}

/// Student-t cumulative distribution function.
///
/// # Panics
///
/// If `df == 0`.
pub fn t_cdf(x: f64, df: u32) -> f64 {
    check_df(df);
    if x.is_nan() {
        return f64::NAN;
    }
    let tail = 0.5 * t_two_tail(x, df as f64);
    if x > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Student-t density.
pub fn t_pdf(x: f64, df: u32) -> f64 {
    check_df(df);
    let nu = df as f64;
    let ln = ln_gamma((nu + 1.0) / 2.0)
        - ln_gamma(nu / 2.0)
        - 0.5 * (nu * PI).ln()
        - (nu + 1.0) / 2.0 * (x * x / nu).ln_1p();
    ln.exp()
}

/// Student-t quantile: the `t` with `t_cdf(t, df) = p`.
///
/// # Panics
///
/// If `df == 0`.
pub fn t_quantile(p: TailProbability, df: u32) -> f64 {
    check_df(df);
    let p = p.value();
    if p == 0.5 {
        return 0.0;
    }
    let f = |t: f64| t_cdf(t, df) - p;

    let (mut lo, mut hi) = if p > 0.5 { (0.0, 1.0) } else { (-1.0, 0.0) };
    while p > 0.5 && f(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while p < 0.5 && f(lo) > 0.0 {
        hi = lo;
        lo *= 2.0;
    }

    while hi - lo > 1e-12 * lo.abs().max(hi.abs()).max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut t = 0.5 * (lo + hi);
    let mut err = f(t);
    for _ in 0..2 {
        let step = err / t_pdf(t, df);
        let next = t - step;
        if !next.is_finite() {
            break;
        }
        let next_err = f(next);
        if next_err.abs() < err.abs() {
            t = next;
            err = next_err;
        }
    }
    t
}

/// Survival function `P(F > x)` of the F distribution with `(df1, df2)`
/// degrees of freedom.
///
/// # Panics
///
/// If either degrees-of-freedom argument is zero.
pub fn f_sf(x: f64, df1: u32, df2: u32) -> f64 {
    check_df(df1);
    check_df(df2);
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let (d1, d2) = (df1 as f64, df2 as f64);
    let denom = d2 + d1 * x;
    reg_inc_beta_split(d2 / 2.0, d1 / 2.0, d2 / denom, d1 * x / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(p: f64) -> TailProbability {
        TailProbability::new(p).unwrap()
    }

    #[test]
    fn tail_probability_bounds() {
        assert!(TailProbability::new(0.0).is_err());
        assert!(TailProbability::new(1.0).is_err());
        assert!(TailProbability::new(f64::NAN).is_err());
        assert_eq!(tp(0.05).two_sided_level().value(), 0.975);
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5) - PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn t_cdf_symmetry_point_and_cauchy() {
        assert_eq!(t_cdf(0.0, 7), 0.5);
        assert!((t_cdf(1.0, 1) - 0.75).abs() < 1e-14);
        assert!((t_cdf(-1.0, 1) - 0.25).abs() < 1e-14);
        assert!((t_cdf(2.16037, 13) - 0.975).abs() < 1e-5);
    }

    #[test]
    fn t_quantile_reference() {
        assert!((t_quantile(tp(0.975), 13) - 2.16037).abs() < 5e-6);
        assert_eq!(t_quantile(tp(0.5), 3), 0.0);
        let v = t_quantile(tp(0.975), 10);
        assert!((t_cdf(v, 10) - 0.975).abs() < 1e-10);
        let lo = t_quantile(tp(0.025), 10);
        assert!((lo + v).abs() < 1e-10);
    }

    #[test]
    fn f_sf_edges() {
        assert_eq!(f_sf(0.0, 3, 13), 1.0);
        assert!(f_sf(52.3, 3, 13) < 1e-6);
        for &t in &[0.3_f64, 1.0, 2.5, 7.0] {
            let lhs = f_sf(t * t, 1, 9);
            let rhs = 2.0 * (1.0 - t_cdf(t, 9));
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }

    #[test]
    #[should_panic]
    fn zero_df_panics() {
        t_cdf(1.0, 0);
    }
}
