//! Isolated `(kappa-1)`-faces of the random `kappa`-complex `Y_kappa(n, p)`:
//! the full `(kappa-1)`-skeleton on `n` vertices plus each `kappa`-face
//! independently with probability `p`.

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::kernel::for_each_subset;

use super::degree::{degree_count_moments, DegreeCountConfig};
use super::{binom, check_probability, exact_space, standardize_with};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexConfig {
    pub n: usize,
    pub kappa: usize,
    pub p: f64,
}

impl ComplexConfig {
    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.kappa < 1 || self.kappa + 1 > self.n {
            return Err(Error::InvalidModel(format!(
                "complex needs 1 <= kappa and kappa + 1 <= n, got n={} kappa={}",
                self.n, self.kappa
            )));
        }
        Ok(())
    }
}

/// `E I = C(n, kappa) q^(n-kappa)` and
/// `Var I = C(n, kappa) q^(n-kappa) (1 - q^(n-kappa))
///        + 2 C(n, kappa-1) C(n-kappa+1, 2) p q^(2(n-kappa)-1)`.
///
/// The factor 2 counts ordered pairs of distinct faces sharing a
/// `(kappa-2)`-face; for `kappa = 1` the formula reduces to the isolated
/// vertex count of `G(n, p)`.
pub fn complex_moments(cfg: &ComplexConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    if cfg.kappa == 1 {
        return degree_count_moments(&DegreeCountConfig { n: cfg.n, p: cfg.p, d: 0 });
    }
    let (n, k) = (cfg.n as i64, cfg.kappa as i64);
    let q = 1.0 - cfg.p;
    let qn = q.powi((n - k) as i32);
    let mean = binom(n, k) * qn;
    let pairs = 2.0 * binom(n, k - 1) * binom(n - k + 1, 2);
    let var = mean * (1.0 - qn) + pairs * cfg.p * q.powi((2 * (n - k) - 1) as i32);
    Ok((mean, var))
}

/// Incidence structure: for each `(kappa-1)`-face, the mask of the
/// `kappa`-faces (coordinates) containing it.
#[derive(Debug, Clone)]
pub struct ComplexFaces {
    /// Vertex masks of the `kappa`-faces, in coordinate order.
    pub top: Vec<u32>,
    /// Vertex masks of the `(kappa-1)`-faces.
    pub low: Vec<u32>,
    /// For each low face, indices of the top faces containing it.
    pub cofaces: Vec<Vec<usize>>,
}

impl ComplexFaces {
    pub fn new(n: usize, kappa: usize) -> Self {
        let mut top = Vec::new();
        for_each_subset(n, kappa + 1, &mut |m| top.push(m));
        let mut low = Vec::new();
        for_each_subset(n, kappa, &mut |m| low.push(m));
        let cofaces = low
            .iter()
            .map(|&f| (0..top.len()).filter(|&t| top[t] & f == f).collect())
            .collect();
        Self { top, low, cofaces }
    }
}

pub fn complex_raw(cfg: &ComplexConfig) -> Result<Functional> {
    cfg.validate()?;
    let kappa = cfg.kappa;
    let m = binom(cfg.n as i64, kappa as i64 + 1) as usize;
    let space = exact_space(m, cfg.p, |cap| max_n(cap, kappa), "n")?;
    let faces = ComplexFaces::new(cfg.n, kappa);
    let masks: Vec<u32> = faces
        .cofaces
        .iter()
        .map(|c| c.iter().fold(0u32, |acc, &t| acc | 1 << t))
        .collect();
    Ok(Functional::from_fn(space, move |s| {
        masks.iter().filter(|&&m| s.0 & m == 0).count() as f64
    }))
}

fn max_n(cap: usize, kappa: usize) -> usize {
    let mut n = kappa + 1;
    while binom(n as i64 + 1, kappa as i64 + 1) <= cap as f64 {
        n += 1;
    }
    n
}

pub fn complex_functional(cfg: &ComplexConfig) -> Result<Functional> {
    let (mean, var) = complex_moments(cfg)?;
    standardize_with(complex_raw(cfg)?, mean, var)
}

/// `n^(-(kappa+1)/2) p^(-1/2)`.
pub fn complex_rate_prediction(cfg: &ComplexConfig) -> f64 {
    (cfg.n as f64).powf(-(cfg.kappa as f64 + 1.0) / 2.0) / cfg.p.sqrt()
}
