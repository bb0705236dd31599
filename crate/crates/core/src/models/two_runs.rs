//! Weighted 2-runs `G = sum_i alpha_i xi_i xi_(i+1)` over a finite window of
//! symmetric Bernoulli variables `xi_i = (X_i + 1) / 2`.
//!
//! The window carries exactly the given weights on coordinates
//! `0..=alpha.len()`; terms outside it are dropped.

use crate::chaos::multiple_integral;
use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::kernel::{contract11, Kernel};
use crate::space::{coordinate_cap, BiasedSpace};

#[derive(Debug, Clone, PartialEq)]
pub struct TwoRunsConfig {
    pub alpha: Vec<f64>,
}

impl TwoRunsConfig {
    pub fn new(alpha: Vec<f64>) -> Self {
        Self { alpha }
    }

    /// All-ones window of length `n`.
    pub fn ones(n: usize) -> Self {
        Self { alpha: vec![1.0; n] }
    }

    fn space(&self) -> Result<std::sync::Arc<BiasedSpace>> {
        if self.alpha.is_empty() {
            return Err(Error::ZeroVariance);
        }
        let m = self.alpha.len() + 1;
        let cap = coordinate_cap();
        if m > cap {
            return Err(Error::CapExceeded {
                requested: m,
                cap,
                hint: Some(format!("max window length {} for exact mode", cap - 1)),
            });
        }
        BiasedSpace::uniform(m, 0.5)
    }
}

pub fn two_runs_mean(cfg: &TwoRunsConfig) -> f64 {
    cfg.alpha.iter().sum::<f64>() / 4.0
}

/// `Var G = 3/16 sum alpha_i^2 + 1/8 sum alpha_i alpha_(i+1)`.
pub fn two_runs_variance(cfg: &TwoRunsConfig) -> f64 {
    let a = &cfg.alpha;
    let sq: f64 = a.iter().map(|x| x * x).sum();
    let adj: f64 = a.windows(2).map(|w| w[0] * w[1]).sum();
    3.0 / 16.0 * sq + adj / 8.0
}

pub fn two_runs_raw(cfg: &TwoRunsConfig) -> Result<Functional> {
    let space = cfg.space()?;
    let alpha = cfg.alpha.clone();
    Ok(Functional::from_fn(space, move |s| {
        alpha
            .iter()
            .enumerate()
            .filter(|&(i, _)| s.is_up(i) && s.is_up(i + 1))
            .map(|(_, a)| a)
            .sum()
    }))
}

/// Kernels of the standardized statistic `F = J_1(f) + J_2(g)`:
/// `f(a) = (alpha_(a-1) + alpha_a) / (4 sigma)` and
/// `g(a, a+1) = g(a+1, a) = alpha_a / (8 sigma)`.
pub fn two_runs_kernels(cfg: &TwoRunsConfig) -> Result<(Kernel, Kernel)> {
    let var = two_runs_variance(cfg);
    if !(var > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let sigma = var.sqrt();
    let m = cfg.alpha.len() + 1;
    let mut f = vec![0.0; m];
    let mut g = Kernel::zeros(m, 2);
    for (i, &a) in cfg.alpha.iter().enumerate() {
        f[i] += a / (4.0 * sigma);
        f[i + 1] += a / (4.0 * sigma);
        g.set(&[i, i + 1], a / (8.0 * sigma));
        g.set(&[i + 1, i], a / (8.0 * sigma));
    }
    Ok((Kernel::vector(&f), g))
}

/// The standardized statistic assembled as `J_1(f) + J_2(g)`.
pub fn two_runs_functional(cfg: &TwoRunsConfig) -> Result<Functional> {
    let space = cfg.space()?;
    let (f, g) = two_runs_kernels(cfg)?;
    let j1 = multiple_integral(space.clone(), 1, &f)?;
    let j2 = multiple_integral(space, 2, &g)?;
    j1.add(&j2)
}

/// `||alpha||_4^2 / Var G`, without the implicit constant.
pub fn two_runs_rate_bound(cfg: &TwoRunsConfig) -> Result<f64> {
    let var = two_runs_variance(cfg);
    if !(var > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let l4: f64 = cfg.alpha.iter().map(|a| a.powi(4)).sum::<f64>().sqrt();
    Ok(l4 / var)
}

/// `C [ ||(g * g) 1_Delta|| + ||f * g||^2 + (sum f^4)^1/2 + (sum g^4)^1/2 +
/// (sum_k (1 + f(k)^2) (sum_l g(l, k)^2)^2)^1/2 ]` for
/// `F = J_1(f) + J_2(g)` with `||f||^2 + 2 ||g||^2 = 1`. `g` is symmetrized
/// and cleared on the diagonal first.
pub fn j1j2_bound(f: &Kernel, g: &Kernel, constant: f64) -> Result<f64> {
    if f.order() != 1 || g.order() != 2 || f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "expected kernels of orders 1 and 2 on the same indices, got orders {}, {} on {}, {}",
            f.order(),
            g.order(),
            f.dim(),
            g.dim()
        )));
    }
    let g = g.canonical();
    let variance = f.norm_sq() + 2.0 * g.norm_sq();
    if (variance - 1.0).abs() > 1e-8 {
        return Err(Error::NotStandardized { mean: 0.0, variance });
    }
    let n = f.dim();
    let mut gg = contract11(&g, &g)?;
    for i in 0..n {
        gg.set(&[i, i], 0.0);
    }
    let fg = contract11(f, &g)?;
    let tail: f64 = (0..n)
        .map(|k| {
            let col: f64 = (0..n).map(|l| g.get(&[l, k]).powi(2)).sum();
            (1.0 + f.data()[k].powi(2)) * col * col
        })
        .sum();
    let s = gg.norm() + fg.norm_sq() + f.sum_fourth().sqrt() + g.sum_fourth().sqrt() + tail.sqrt();
    Ok(constant * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::atoms;

    #[test]
    fn variance_examples() {
        assert_eq!(two_runs_variance(&TwoRunsConfig::new(vec![2.0])), 0.75);
        assert_eq!(two_runs_variance(&TwoRunsConfig::ones(3)), 13.0 / 16.0);
        assert_eq!(two_runs_variance(&TwoRunsConfig::new(vec![0.0, 0.0])), 0.0);
        let raw = two_runs_raw(&TwoRunsConfig::ones(3)).unwrap();
        assert!((raw.variance() - 13.0 / 16.0).abs() < 1e-15);
        let single = two_runs_raw(&TwoRunsConfig::new(vec![1.0])).unwrap();
        let vals: Vec<f64> = atoms(&single).iter().map(|a| a.0).collect();
        assert_eq!(vals, vec![0.0, 1.0]);
    }

    #[test]
    fn kernels_reproduce_statistic() {
        let cfg = TwoRunsConfig::new(vec![0.5, -1.0, 2.0, 0.25, 1.5]);
        let f = two_runs_functional(&cfg).unwrap();
        let raw = two_runs_raw(&cfg).unwrap();
        let (m, v) = (two_runs_mean(&cfg), two_runs_variance(&cfg));
        let direct = raw.map(|x| (x - m) / v.sqrt());
        assert!(f.max_abs_diff(&direct) < 1e-13);
    }

    #[test]
    fn zero_weights() {
        let cfg = TwoRunsConfig::new(vec![0.0; 3]);
        assert_eq!(two_runs_functional(&cfg).unwrap_err(), Error::ZeroVariance);
        assert_eq!(two_runs_rate_bound(&cfg).unwrap_err(), Error::ZeroVariance);
    }

    #[test]
    fn rate_bound_examples() {
        let r = two_runs_rate_bound(&TwoRunsConfig::new(vec![1.0])).unwrap();
        assert!((r - 16.0 / 3.0).abs() < 1e-14);
        let n = 4.0f64;
        let r = two_runs_rate_bound(&TwoRunsConfig::ones(4)).unwrap();
        assert!((r - n.sqrt() / ((3.0 * n + 2.0 * (n - 1.0)) / 16.0)).abs() < 1e-14);
        let a = TwoRunsConfig::new(vec![0.3, 1.2, -0.7]);
        let b = TwoRunsConfig::new(a.alpha.iter().map(|x| 5.0 * x).collect());
        assert!((two_runs_rate_bound(&a).unwrap() - two_runs_rate_bound(&b).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn j1j2_examples() {
        let f = Kernel::vector(&[0.6, 0.8, 0.0]);
        let g = Kernel::zeros(3, 2);
        let want = 2.0 * (0.6f64.powi(4) + 0.8f64.powi(4)).sqrt();
        assert!((j1j2_bound(&f, &g, 2.0).unwrap() - want).abs() < 1e-14);

        let (f, g) = two_runs_kernels(&TwoRunsConfig::ones(3)).unwrap();
        let v = j1j2_bound(&f, &g, 1.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
        assert!((j1j2_bound(&f, &g.scale(-1.0), 1.0).unwrap() - v).abs() < 1e-14);
        assert!(matches!(j1j2_bound(&f.scale(2.0), &g, 1.0), Err(Error::NotStandardized { .. })));
    }
}
