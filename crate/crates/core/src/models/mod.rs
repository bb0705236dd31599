//! The application statistics: weighted 2-runs, subgraph counts and
//! fixed-degree vertex counts in `G(n, p)`, isolated faces of the random
//! `kappa`-complex, and fixed-degree vertex counts in hypercube percolation.

mod complex;
mod degree;
mod graph;
mod hypercube;
mod subgraph;
mod two_runs;

use std::sync::Arc;

pub use complex::{complex_functional, complex_moments, complex_rate_prediction, complex_raw, ComplexConfig, ComplexFaces};
pub use degree::{
    degree_count_functional, degree_count_moments, degree_count_raw, degree_rate_prediction, DegreeCountConfig,
    Regime,
};
pub use graph::{edge_count, edge_index, edge_pairs};
pub use hypercube::{
    hypercube_edge, hypercube_edge_count, hypercube_functional, hypercube_moments, hypercube_rate_prediction,
    hypercube_raw, HypercubeConfig,
};
pub use subgraph::{
    psi, subgraph_functional, subgraph_moments, subgraph_rate_prediction, subgraph_raw, sigma_sq_order,
    SubgraphPattern,
};
pub use two_runs::{
    j1j2_bound, two_runs_functional, two_runs_kernels, two_runs_mean, two_runs_rate_bound, two_runs_raw,
    two_runs_variance, TwoRunsConfig,
};

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::space::{coordinate_cap, BiasedSpace};

/// `C(n, k)` as a float, zero outside `0 <= k <= n`.
pub fn binom(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `(n)_k = n (n-1) ... (n-k+1)`.
pub fn falling(n: i64, k: i64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64)
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::BadProbability { index: 0, value: p })
    }
}

/// Rejects `m` coordinates beyond the cap with a hint naming the largest
/// feasible size parameter.
pub(crate) fn exact_space(m: usize, p: f64, max_size: impl Fn(usize) -> usize, size_name: &str) -> Result<Arc<BiasedSpace>> {
    let cap = coordinate_cap();
    if m > cap {
        return Err(Error::CapExceeded {
            requested: m,
            cap,
            hint: Some(format!("max {size_name}={} for exact mode", max_size(cap))),
        });
    }
    BiasedSpace::uniform(m, p)
}

/// Standardizes a raw table against the given closed-form moments.
pub(crate) fn standardize_with(raw: Functional, mean: f64, var: f64) -> Result<Functional> {
    if !(var > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let sd = var.sqrt();
    Ok(raw.map(|v| (v - mean) / sd))
}

/// A configured application model.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelInstance {
    Degree(DegreeCountConfig),
    Subgraph { n: usize, p: f64, pattern: SubgraphPattern },
    Complex(ComplexConfig),
    Hypercube(HypercubeConfig),
    TwoRuns(TwoRunsConfig),
}

impl ModelInstance {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Degree(_) => "degree",
            Self::Subgraph { .. } => "subgraph",
            Self::Complex(_) => "complex",
            Self::Hypercube(_) => "hypercube",
            Self::TwoRuns(_) => "two-runs",
        }
    }

    /// Number of Rademacher coordinates the statistic depends on.
    pub fn coordinate_count(&self) -> usize {
        match self {
            Self::Degree(c) => edge_count(c.n),
            Self::Subgraph { n, .. } => edge_count(*n),
            Self::Complex(c) => binom(c.n as i64, c.kappa as i64 + 1) as usize,
            Self::Hypercube(c) => hypercube_edge_count(c.n),
            Self::TwoRuns(c) => c.alpha.len() + 1,
        }
    }

    pub fn p(&self) -> f64 {
        match self {
            Self::Degree(c) => c.p,
            Self::Subgraph { p, .. } => *p,
            Self::Complex(c) => c.p,
            Self::Hypercube(c) => c.p,
            Self::TwoRuns(_) => 0.5,
        }
    }

    /// Closed-form mean and variance of the raw statistic.
    pub fn moments(&self) -> Result<(f64, f64)> {
        match self {
            Self::Degree(c) => degree_count_moments(c),
            Self::Subgraph { n, p, pattern } => subgraph_moments(*n, *p, pattern),
            Self::Complex(c) => complex_moments(c),
            Self::Hypercube(c) => hypercube_moments(c),
            Self::TwoRuns(c) => Ok((two_runs_mean(c), two_runs_variance(c))),
        }
    }

    /// The raw (unstandardized) statistic as a dense functional.
    pub fn raw_functional(&self) -> Result<Functional> {
        match self {
            Self::Degree(c) => degree_count_raw(c),
            Self::Subgraph { n, p, pattern } => subgraph_raw(*n, *p, pattern),
            Self::Complex(c) => complex_raw(c),
            Self::Hypercube(c) => hypercube_raw(c),
            Self::TwoRuns(c) => two_runs_raw(c),
        }
    }

    /// The standardized statistic as a dense functional.
    pub fn functional(&self) -> Result<Functional> {
        match self {
            Self::Degree(c) => degree_count_functional(c),
            Self::Subgraph { n, p, pattern } => subgraph_functional(*n, *p, pattern),
            Self::Complex(c) => complex_functional(c),
            Self::Hypercube(c) => hypercube_functional(c),
            Self::TwoRuns(c) => two_runs_functional(c),
        }
    }
}

/// Small instances of every model, all within 16 coordinates, used by the
/// exhaustive validity checks.
pub fn desk_corpus() -> Vec<ModelInstance> {
    let mut out = Vec::new();
    for &p in &[0.3, 0.5] {
        for d in 0..3 {
            out.push(ModelInstance::Degree(DegreeCountConfig { n: 3, p, d }));
        }
    }
    for d in 0..4 {
        out.push(ModelInstance::Degree(DegreeCountConfig { n: 4, p: 0.2, d }));
    }
    for d in [0, 2] {
        out.push(ModelInstance::Degree(DegreeCountConfig { n: 5, p: 0.3, d }));
    }
    for (n, pattern) in [
        (3, SubgraphPattern::edge()),
        (4, SubgraphPattern::edge()),
        (4, SubgraphPattern::path(2)),
        (5, SubgraphPattern::path(2)),
        (4, SubgraphPattern::triangle()),
        (5, SubgraphPattern::triangle()),
        (4, SubgraphPattern::star(3)),
    ] {
        for &p in &[0.3, 0.6] {
            out.push(ModelInstance::Subgraph { n, p, pattern: pattern.clone() });
        }
    }
    for (n, kappa, p) in [(4, 2, 0.5), (4, 2, 0.25), (5, 2, 0.4), (5, 3, 0.5), (4, 1, 0.3), (5, 1, 0.5)] {
        out.push(ModelInstance::Complex(ComplexConfig { n, kappa, p }));
    }
    for d in 0..=2 {
        out.push(ModelInstance::Hypercube(HypercubeConfig { n: 2, p: 0.5, d }));
    }
    for d in 0..=3 {
        out.push(ModelInstance::Hypercube(HypercubeConfig { n: 3, p: 0.4, d }));
    }
    for alpha in [
        vec![1.0],
        vec![1.0, 1.0, 1.0],
        vec![1.0; 6],
        vec![2.0, -1.0, 0.5, 3.0],
        vec![1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0],
    ] {
        out.push(ModelInstance::TwoRuns(TwoRunsConfig::new(alpha)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10.0);
        assert_eq!(binom(5, -1), 0.0);
        assert_eq!(binom(5, 6), 0.0);
        assert_eq!(binom(0, 0), 1.0);
        assert_eq!(falling(7, 3), 210.0);
        assert_eq!(falling(3, 0), 1.0);
        assert_eq!(falling(2, 3), 0.0);
    }

    #[test]
    fn corpus_is_small_and_standardized() {
        let corpus = desk_corpus();
        assert!(corpus.len() >= 40);
        for model in &corpus {
            assert!(model.coordinate_count() <= 16, "{model:?}");
            let f = model.functional().unwrap();
            assert_eq!(f.m(), model.coordinate_count());
            f.check_standardized(1e-10).unwrap();
        }
    }
}
