//! Exact discrete Malliavin-Stein calculus on finite Rademacher spaces,
//! normal-approximation bounds, random-graph models and Monte Carlo rate
//! experiments.
//!
//! Functionals of `m <= 26` coordinates are dense tables over the `2^m`
//! states. Indices are 0-based throughout the API.

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chaos;
pub mod distance;
pub mod empirics;
pub mod error;
pub mod functional;
pub mod kernel;
pub mod models;
pub mod normal;
pub mod operators;
pub mod space;
pub mod stein;

pub use chaos::{apply_l, apply_l_inv, apply_semigroup, from_chaos, multiple_integral, to_chaos, ChaosExpansion};
pub use distance::{atoms, kolmogorov_exact, wasserstein_exact};
pub use error::{Error, Result};
pub use functional::Functional;
pub use kernel::{contract11, maximal_influence, Kernel};
pub use normal::{normal_cdf, normal_pdf, normal_quantile};
pub use operators::{divergence, gamma0, gradient_vector, malliavin_inner};
pub use space::{coordinate_cap, BiasedSpace, StateMask, MAX_COORDINATES};
