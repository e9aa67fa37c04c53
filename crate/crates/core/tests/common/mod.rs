#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvif::{Matrix, ModelSpec};

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Random full-rank model with an intercept and `k - 1` mildly correlated
/// features.
pub fn random_spec(seed: u64, n: usize, k: usize) -> ModelSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for j in 1..k {
        let shift = rng.gen_range(-5.0..5.0);
        let scale = rng.gen_range(0.5..20.0);
        let col: Vec<f64> = (0..n)
            .map(|i| {
                let base = shift + scale * rng.gen_range(-1.0..1.0);
                match cols.last() {
                    Some(prev) if j % 2 == 0 => base + 0.8 * prev[i],
                    _ => base,
                }
            })
            .collect();
        cols.push(col);
    }
    let beta: Vec<f64> = (0..k).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let noise = rng.gen_range(0.1..5.0);
    let y: Vec<f64> = (0..n)
        .map(|i| {
            beta[0]
                + cols
                    .iter()
                    .zip(&beta[1..])
                    .map(|(c, b)| c[i] * b)
                    .sum::<f64>()
                + noise * rng.gen_range(-1.0..1.0)
        })
        .collect();
    let x = Matrix::from_columns(&cols).unwrap();
    let names = (1..k).map(|j| format!("x{}", j + 1)).collect();
    ModelSpec::with_intercept(&x, y, names).unwrap()
}

/// Naive Gauss-Jordan inverse with partial pivoting, used only as an
/// independent oracle.
pub fn gauss_jordan_inverse(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..k).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k)
            .max_by(|&x, &y| m[x][c].abs().partial_cmp(&m[y][c].abs()).unwrap())
            .unwrap();
        m.swap(c, p);
        let d = m[c][c];
        for v in m[c].iter_mut() {
            *v /= d;
        }
        for r in 0..k {
            if r != c {
                let f = m[r][c];
                let pivot = m[c].clone();
                for (v, pv) in m[r].iter_mut().zip(pivot) {
                    *v -= f * pv;
                }
            }
        }
    }
    m.into_iter().map(|r| r[k..].to_vec()).collect()
}

/// R² of regressing `target` on `regressors` (first regressor is the
/// constant) through explicit normal equations.
pub fn normal_equations_r2(regressors: &[Vec<f64>], target: &[f64]) -> f64 {
    let k = regressors.len();
    let g: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    regressors[a]
                        .iter()
                        .zip(&regressors[b])
                        .map(|(x, y)| x * y)
                        .sum()
                })
                .collect()
        })
        .collect();
    let xty: Vec<f64> = regressors
        .iter()
        .map(|c| c.iter().zip(target).map(|(x, y)| x * y).sum())
        .collect();
    let inv = gauss_jordan_inverse(&g);
    let coef: Vec<f64> = inv
        .iter()
        .map(|r| r.iter().zip(&xty).map(|(a, b)| a * b).sum())
        .collect();
    let mean = target.iter().sum::<f64>() / target.len() as f64;
    let mut ssr = 0.0;
    let mut sst = 0.0;
    for i in 0..target.len() {
        let fitted: f64 = regressors.iter().zip(&coef).map(|(c, b)| c[i] * b).sum();
        ssr += (target[i] - fitted).powi(2);
        sst += (target[i] - mean).powi(2);
    }
    1.0 - ssr / sst
}
