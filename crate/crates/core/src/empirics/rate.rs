//! Rate sweeps over a model family and log-log regression of `d_K` on `n`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::models::{
    complex_rate_prediction, degree_rate_prediction, hypercube_rate_prediction, subgraph_rate_prediction,
    two_runs_rate_bound, ComplexConfig, DegreeCountConfig, HypercubeConfig, ModelInstance, Regime,
    SubgraphPattern, TwoRunsConfig,
};

use super::{derive_seed, empirical_kolmogorov, mc_sd, sample_statistic};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub n: usize,
    pub dk: f64,
    pub mc_sd: f64,
    pub prediction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `log dk` on `log n`.
pub fn rate_fit(points: &[RatePoint]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    if let Some(bad) = points.iter().find(|p| !(p.dk > 0.0)) {
        return Err(Error::NonpositiveDk { n: bad.n as f64, dk: bad.dk });
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.dk.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidModel("rate fit needs at least two distinct n".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Edge probability as a function of size, `p(n) = coef * n^exponent`.
///
/// Textual forms: `0.3`, `c/n`, `n^e`, `c*n^e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PLaw {
    pub coef: f64,
    pub exponent: f64,
}

impl PLaw {
    pub fn constant(p: f64) -> Self {
        Self { coef: p, exponent: 0.0 }
    }

    pub fn at(&self, n: usize) -> f64 {
        self.coef * (n as f64).powf(self.exponent)
    }
}

impl FromStr for PLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidModel(format!("malformed p-law {s:?}"));
        let num = |t: &str| t.trim().parse::<f64>().ok().filter(|v| v.is_finite());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(head) = t.strip_suffix("/n") {
            return Ok(Self {
                coef: num(head).ok_or_else(bad)?,
                exponent: -1.0,
            });
        }
        let Some(i) = t.find('n') else {
            return num(&t).map(Self::constant).ok_or_else(bad);
        };
        let coef = if i == 0 {
            1.0
        } else {
            t[..i].strip_suffix('*').and_then(num).ok_or_else(bad)?
        };
        let rest = &t[i..];
        let exponent = if rest == "n" {
            1.0
        } else {
            let e = rest.strip_prefix("n^").ok_or_else(bad)?;
            let e = e.strip_prefix('(').and_then(|e| e.strip_suffix(')')).unwrap_or(e);
            num(e).ok_or_else(bad)?
        };
        Ok(Self { coef, exponent })
    }
}

impl fmt::Display for PLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0.0 {
            write!(f, "{}", self.coef)
        } else if self.exponent == -1.0 {
            write!(f, "{}/n", self.coef)
        } else {
            write!(f, "{}*n^{}", self.coef, self.exponent)
        }
    }
}

/// A model indexed by size `n`.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Degree { d: usize, p: PLaw, regime: Option<Regime> },
    Subgraph { pattern: SubgraphPattern, p: PLaw },
    Complex { kappa: usize, p: PLaw },
    Hypercube { d: usize, p: PLaw, eps: f64 },
    /// 2-runs with an all-ones window of length `n`.
    TwoRunsOnes,
    /// The same model at every `n`.
    Fixed { model: ModelInstance, regime: Option<Regime>, eps: f64 },
}

impl Family {
    pub fn instance(&self, n: usize) -> Result<ModelInstance> {
        let m = match self {
            Self::Degree { d, p, .. } => ModelInstance::Degree(DegreeCountConfig { n, p: p.at(n), d: *d }),
            Self::Subgraph { pattern, p } => ModelInstance::Subgraph {
                n,
                p: p.at(n),
                pattern: pattern.clone(),
            },
            Self::Complex { kappa, p } => ModelInstance::Complex(ComplexConfig {
                n,
                kappa: *kappa,
                p: p.at(n),
            }),
            Self::Hypercube { d, p, .. } => ModelInstance::Hypercube(HypercubeConfig { n, p: p.at(n), d: *d }),
            Self::TwoRunsOnes => ModelInstance::TwoRuns(TwoRunsConfig::ones(n)),
            Self::Fixed { model, .. } => model.clone(),
        };
        m.moments()?;
        Ok(m)
    }

    /// Predicted rate at size `n`, up to the unspecified constant.
    pub fn prediction(&self, n: usize) -> Result<f64> {
        let m = self.instance(n)?;
        match self {
            Self::Degree { regime, .. } => model_rate_prediction(&m, *regime, 0.5),
            Self::Hypercube { eps, .. } => model_rate_prediction(&m, None, *eps),
            Self::Fixed { regime, eps, .. } => model_rate_prediction(&m, *regime, *eps),
            _ => model_rate_prediction(&m, None, 0.5),
        }
    }

    /// Asymptotic exponent `a` of the prediction `~ n^a`, when it is a power
    /// of `n`.
    pub fn predicted_exponent(&self) -> Option<f64> {
        match self {
            Self::Degree { d: 0, p, .. } => Some(-1.0 - p.exponent / 2.0),
            Self::Degree { d, p, regime } => match (*regime)? {
                Regime::Dense => Some(-0.5),
                Regime::Sparse => Some(-(*d as f64) * (1.0 + p.exponent) + p.exponent / 2.0),
            },
            Self::Subgraph { pattern, p } => {
                let edges = pattern.edges();
                let min = (1u64..1 << edges.len())
                    .map(|h| {
                        let mut touched = 0u32;
                        for (k, &(a, b)) in edges.iter().enumerate() {
                            if h >> k & 1 == 1 {
                                touched |= 1 << a | 1 << b;
                            }
                        }
                        touched.count_ones() as f64 + p.exponent * h.count_ones() as f64
                    })
                    .fold(f64::INFINITY, f64::min);
                Some(-min / 2.0)
            }
            Self::Complex { kappa, p } => Some(-(*kappa as f64 + 1.0) / 2.0 - p.exponent / 2.0),
            Self::Hypercube { .. } => None,
            Self::TwoRunsOnes => Some(-0.5),
            Self::Fixed { .. } => Some(0.0),
        }
    }
}

/// Rate prediction of a single model instance. `regime` selects the degree
/// count branch for `d >= 1`; `eps` is the hypercube exponent slack.
pub fn model_rate_prediction(model: &ModelInstance, regime: Option<Regime>, eps: f64) -> Result<f64> {
    match model {
        ModelInstance::Degree(c) => degree_rate_prediction(c, regime),
        ModelInstance::Subgraph { n, p, pattern } => Ok(subgraph_rate_prediction(*n, *p, pattern)),
        ModelInstance::Complex(c) => Ok(complex_rate_prediction(c)),
        ModelInstance::Hypercube(c) => hypercube_rate_prediction(c, eps),
        ModelInstance::TwoRuns(c) => two_runs_rate_bound(c),
    }
}

/// One [`RatePoint`] per `n`, each batch seeded with `derive_seed(seed, n)`.
pub fn sweep(family: &Family, n_grid: &[usize], samples: usize, seed: u64) -> Result<Vec<RatePoint>> {
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidModel("n grid must be strictly increasing".into()));
    }
    n_grid
        .iter()
        .map(|&n| {
            let model = family.instance(n)?;
            let prediction = family.prediction(n)?;
            let batch = sample_statistic(&model, samples, derive_seed(seed, n as u64))?;
            Ok(RatePoint {
                n,
                dk: empirical_kolmogorov(&batch)?,
                mc_sd: mc_sd(samples),
                prediction,
            })
        })
        .collect()
}
