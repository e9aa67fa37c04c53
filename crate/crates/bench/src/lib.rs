//! Workloads shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvif::datasets::{builtin, FeatureSelection};
use tvif::{Matrix, ModelSpec};

/// Default model of a built-in dataset.
pub fn builtin_spec(name: &str) -> ModelSpec {
    let d = builtin(name).expect("known dataset");
    let response = d.default_response.clone().expect("default response");
    d.model_spec(&response, &FeatureSelection::AllOthers, true)
        .expect("valid model")
}

/// Seeded `n`-row design with an intercept and `k - 1` correlated features.
pub fn random_spec(seed: u64, n: usize, k: usize) -> ModelSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k - 1);
    for _ in 1..k {
        let col: Vec<f64> = (0..n)
            .map(|i| {
                let shared = cols.last().map_or(0.0, |prev: &Vec<f64>| 0.9 * prev[i]);
                shared + rng.gen_range(-10.0..10.0)
            })
            .collect();
        cols.push(col);
    }
    let y = (0..n)
        .map(|i| 1.0 + cols.iter().map(|c| 0.5 * c[i]).sum::<f64>() + rng.gen_range(-1.0..1.0))
        .collect();
    let names = (1..k).map(|j| format!("x{j}")).collect();
    ModelSpec::with_intercept(&Matrix::from_columns(&cols).expect("rectangular"), y, names)
        .expect("valid model")
}
