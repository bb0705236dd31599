//! Monte Carlo estimation of `d_K` at sizes beyond enumeration and rate
//! regression.
//!
//! Samples are produced in fixed-size shards, each from its own ChaCha
//! stream (see [`rng`]), and concatenated in shard order, so a batch depends
//! only on `(model, samples, seed)`.

pub mod io;
pub mod rate;
pub mod rng;
pub mod sampling;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::ModelInstance;
use crate::normal::normal_cdf;

pub use io::{read_batch, write_batch};
pub use rate::{rate_fit, sweep, Family, PLaw, RateFit, RatePoint};
pub use rng::{derive_seed, shard_rng, splitmix64, SHARD_SIZE};

/// Standardized samples of a model statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub model: ModelInstance,
    pub seed: u64,
    pub count: usize,
}

/// Draws `samples` independent copies of the model statistic and
/// standardizes them with the closed-form mean and variance.
pub fn sample_statistic(model: &ModelInstance, samples: usize, seed: u64) -> Result<SampleBatch> {
    if samples == 0 {
        return Err(Error::EmptyBatch);
    }
    let (mean, var) = model.moments()?;
    if !(var > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let sd = var.sqrt();
    let shards = samples.div_ceil(SHARD_SIZE);
    let parts: Vec<Vec<f64>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let len = SHARD_SIZE.min(samples - s * SHARD_SIZE);
            let mut rng = shard_rng(seed, s as u64);
            let mut sim = sampling::Simulator::new(model);
            (0..len).map(|_| (sim.draw(&mut rng) - mean) / sd).collect()
        })
        .collect();
    Ok(SampleBatch {
        values: parts.concat(),
        model: model.clone(),
        seed,
        count: samples,
    })
}

/// One-sample Kolmogorov-Smirnov statistic of a batch against `N(0, 1)`.
pub fn empirical_kolmogorov(batch: &SampleBatch) -> Result<f64> {
    ks_statistic(&batch.values)
}

/// `max_i max(i/N - Phi(x_(i)), Phi(x_(i)) - (i-1)/N)` over the sorted sample.
pub fn ks_statistic(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut x = values.to_vec();
    x.sort_unstable_by(f64::total_cmp);
    let n = x.len() as f64;
    let mut best: f64 = 0.0;
    let mut i = 0;
    while i < x.len() {
        // evaluate Phi once per run of ties; the extremes of the run decide
        let mut j = i;
        while j + 1 < x.len() && x[j + 1] == x[i] {
            j += 1;
        }
        let phi = normal_cdf(x[i]);
        best = best.max((j + 1) as f64 / n - phi).max(phi - i as f64 / n);
        i = j + 1;
    }
    Ok(best)
}

/// KS noise proxy `0.8269 / sqrt(N)`.
pub fn mc_sd(samples: usize) -> f64 {
    0.8269 / (samples as f64).sqrt()
}
