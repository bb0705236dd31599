//! Number `V_d` of vertices of degree `d` in `G(n, p)`.

use crate::error::{Error, Result};
use crate::functional::Functional;

use super::graph::{edge_count, edge_pairs, max_vertices};
use super::{binom, check_probability, exact_space, standardize_with};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeCountConfig {
    pub n: usize,
    pub p: f64,
    pub d: usize,
}

impl DegreeCountConfig {
    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.n < 2 || self.d >= self.n {
            return Err(Error::InvalidModel(format!(
                "degree count needs n >= 2 and d < n, got n={} d={}",
                self.n, self.d
            )));
        }
        Ok(())
    }
}

/// Asymptotic regime selecting the rate for `d >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `liminf n p > 0`.
    Dense,
    /// `n p -> 0`.
    Sparse,
}

/// `E V_d = n C(n-1, d) p^d q^(n-1-d)` and
/// `Var V_d = n/(n-1) C(n-1, d)^2 ((n-1)p - d)^2 p^(2d-1) q^(2n-2d-3) + E V_d - (E V_d)^2 / n`.
pub fn degree_count_moments(cfg: &DegreeCountConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    let (n, d, p) = (cfg.n as i64, cfg.d as i64, cfg.p);
    let q = 1.0 - p;
    let c = binom(n - 1, d);
    let mean = n as f64 * c * p.powi(d as i32) * q.powi((n - 1 - d) as i32);
    let nf = n as f64;
    let cross = nf / (nf - 1.0)
        * c
        * c
        * ((nf - 1.0) * p - d as f64).powi(2)
        * p.powi(2 * d as i32 - 1)
        * q.powi((2 * n - 2 * d - 3) as i32);
    let var = cross + mean - mean * mean / nf;
    Ok((mean, var.max(0.0)))
}

/// `V_d` as a functional of the `C(n, 2)` edge indicators.
pub fn degree_count_raw(cfg: &DegreeCountConfig) -> Result<Functional> {
    cfg.validate()?;
    let space = exact_space(edge_count(cfg.n), cfg.p, max_vertices, "n")?;
    let pairs = edge_pairs(cfg.n);
    let n = cfg.n;
    let d = cfg.d as u32;
    Ok(Functional::from_fn(space, move |s| {
        let mut deg = [0u32; 32];
        let mut bits = s.0;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            let (i, j) = pairs[k];
            deg[i] += 1;
            deg[j] += 1;
            bits &= bits - 1;
        }
        deg[..n].iter().filter(|&&x| x == d).count() as f64
    }))
}

/// Standardized `F_d = (V_d - E V_d) / sqrt(Var V_d)`.
pub fn degree_count_functional(cfg: &DegreeCountConfig) -> Result<Functional> {
    let (mean, var) = degree_count_moments(cfg)?;
    standardize_with(degree_count_raw(cfg)?, mean, var)
}

/// Predicted order of `d_K(F_d, N)`: `n^-1 p^-1/2` for `d = 0`; for
/// `d >= 1`, `n^-1/2` in the dense regime and `(np)^-d p^1/2` in the sparse
/// one.
pub fn degree_rate_prediction(cfg: &DegreeCountConfig, regime: Option<Regime>) -> Result<f64> {
    let (n, p) = (cfg.n as f64, cfg.p);
    if cfg.d == 0 {
        return Ok(1.0 / (n * p.sqrt()));
    }
    match regime {
        None => Err(Error::RegimeUnspecified { d: cfg.d }),
        Some(Regime::Dense) => Ok(n.powf(-0.5)),
        Some(Regime::Sparse) => Ok((n * p).powi(-(cfg.d as i32)) * p.sqrt()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::atoms;

    #[test]
    fn small_moments() {
        let (m, v) = degree_count_moments(&DegreeCountConfig { n: 3, p: 0.5, d: 0 }).unwrap();
        assert!((m - 0.75).abs() < 1e-15 && (v - 0.9375).abs() < 1e-15);
        let (m, _) = degree_count_moments(&DegreeCountConfig { n: 4, p: 0.5, d: 3 }).unwrap();
        assert!((m - 0.5).abs() < 1e-15);
        let (m, _) = degree_count_moments(&DegreeCountConfig { n: 6, p: 1e-9, d: 0 }).unwrap();
        assert!((m - 6.0).abs() < 1e-6);
    }

    #[test]
    fn raw_atoms_on_triangle() {
        let raw = degree_count_raw(&DegreeCountConfig { n: 3, p: 0.5, d: 0 }).unwrap();
        let values: Vec<f64> = atoms(&raw).iter().map(|a| a.0).collect();
        assert_eq!(values, vec![0.0, 1.0, 3.0]);
    }

    #[test]
    fn predictions() {
        let c = DegreeCountConfig { n: 100, p: 0.01, d: 0 };
        assert!((degree_rate_prediction(&c, None).unwrap() - 0.1).abs() < 1e-15);
        let c = DegreeCountConfig { n: 100, p: 0.01, d: 1 };
        assert_eq!(degree_rate_prediction(&c, None), Err(Error::RegimeUnspecified { d: 1 }));
        assert!((degree_rate_prediction(&c, Some(Regime::Dense)).unwrap() - 0.1).abs() < 1e-15);
        let c = DegreeCountConfig { n: 100, p: 1e-3, d: 2 };
        let want = 0.1f64.powi(-2) * 1e-3f64.sqrt();
        assert!((degree_rate_prediction(&c, Some(Regime::Sparse)).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid() {
        assert!(degree_count_moments(&DegreeCountConfig { n: 3, p: 0.5, d: 3 }).is_err());
        assert!(degree_count_moments(&DegreeCountConfig { n: 3, p: 1.0, d: 0 }).is_err());
        match degree_count_functional(&DegreeCountConfig { n: 50, p: 0.5, d: 0 }) {
            Err(Error::CapExceeded { hint: Some(h), .. }) => assert_eq!(h, "max n=7 for exact mode"),
            other => panic!("{other:?}"),
        }
    }
}
