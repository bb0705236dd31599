//! Number `V_d` of degree-`d` vertices in hypercube percolation `H(n, p)`.

use crate::error::{Error, Result};
use crate::functional::Functional;

use super::{binom, check_probability, exact_space, standardize_with};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypercubeConfig {
    pub n: usize,
    pub p: f64,
    pub d: usize,
}

impl HypercubeConfig {
    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.n < 1 || self.d > self.n || self.n > 30 {
            return Err(Error::InvalidModel(format!(
                "hypercube needs 1 <= n <= 30 and d <= n, got n={} d={}",
                self.n, self.d
            )));
        }
        Ok(())
    }
}

/// `n 2^(n-1)`.
pub fn hypercube_edge_count(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        n << (n - 1)
    }
}

/// Endpoints of edge `k = i 2^(n-1) + r`: the lower endpoint inserts a zero
/// bit at position `i` into `r`, the upper one flips that bit on.
pub fn hypercube_edge(n: usize, k: usize) -> (usize, usize) {
    let half = 1usize << (n - 1);
    let (i, r) = (k / half, k % half);
    let low = ((r >> i) << (i + 1)) | (r & ((1 << i) - 1));
    (low, low | 1 << i)
}

/// Closed-form mean and variance; `d = n` is evaluated as `d = 0` under
/// `p -> 1 - p`.
///
/// With `mu = C(n, d) p^d q^(n-d)`, `Var V_d = 2^n mu (1 - mu)
/// + n 2^n (E[I_i I_j] - mu^2)` where for neighbours `i ~ j`
/// `E[I_i I_j] = C(n-1, d-1)^2 p^(2d-1) q^(2(n-d)) + C(n-1, d)^2 p^(2d) q^(2(n-d)-1)`.
pub fn hypercube_moments(cfg: &HypercubeConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    if cfg.d == cfg.n {
        return hypercube_moments(&HypercubeConfig { n: cfg.n, p: 1.0 - cfg.p, d: 0 });
    }
    let (n, d, p) = (cfg.n as i64, cfg.d as i64, cfg.p);
    let q = 1.0 - p;
    let vertices = (n as f64).exp2();
    let mu = binom(n, d) * p.powi(d as i32) * q.powi((n - d) as i32);
    let joint = if d == 0 {
        q.powi((2 * n - 1) as i32)
    } else {
        binom(n - 1, d - 1).powi(2) * p.powi((2 * d - 1) as i32) * q.powi((2 * (n - d)) as i32)
            + binom(n - 1, d).powi(2) * p.powi((2 * d) as i32) * q.powi((2 * (n - d) - 1) as i32)
    };
    let mean = vertices * mu;
    let var = vertices * mu * (1.0 - mu) + n as f64 * vertices * (joint - mu * mu);
    Ok((mean, var))
}

pub fn hypercube_raw(cfg: &HypercubeConfig) -> Result<Functional> {
    cfg.validate()?;
    let m = hypercube_edge_count(cfg.n);
    let max_n = |cap: usize| (1..=cfg.n).take_while(|&k| hypercube_edge_count(k) <= cap).last().unwrap_or(0);
    let space = exact_space(m, cfg.p, max_n, "n")?;
    let ends: Vec<(usize, usize)> = (0..m).map(|k| hypercube_edge(cfg.n, k)).collect();
    let (nv, d) = (1usize << cfg.n, cfg.d as u32);
    Ok(Functional::from_fn(space, move |s| {
        let mut deg = vec![0u32; nv];
        let mut bits = s.0;
        while bits != 0 {
            let (a, b) = ends[bits.trailing_zeros() as usize];
            deg[a] += 1;
            deg[b] += 1;
            bits &= bits - 1;
        }
        deg.iter().filter(|&&x| x == d).count() as f64
    }))
}

pub fn hypercube_functional(cfg: &HypercubeConfig) -> Result<Functional> {
    let (mean, var) = hypercube_moments(cfg)?;
    standardize_with(hypercube_raw(cfg)?, mean, var)
}

/// `(2 - eps)^(-n/2)`.
pub fn hypercube_rate_prediction(cfg: &HypercubeConfig, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::BadEpsilon(eps));
    }
    Ok((2.0 - eps).powf(-(cfg.n as f64) / 2.0))
}
