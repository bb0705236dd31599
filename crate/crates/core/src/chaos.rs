//! Chaos (biased Walsh) expansion `F = sum_A c_A Y_A` and the operators that
//! act diagonally on it.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::kernel::Kernel;
use crate::space::BiasedSpace;

/// Coefficients `c_A` indexed by subset mask `A`.
#[derive(Debug, Clone)]
pub struct ChaosExpansion {
    space: Arc<BiasedSpace>,
    coeffs: Vec<f64>,
}

impl ChaosExpansion {
    pub fn new(space: Arc<BiasedSpace>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.num_states() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} subsets",
                coeffs.len(),
                space.num_states()
            )));
        }
        Ok(Self { space, coeffs })
    }

    /// Builds an expansion from sparse `(subset, coefficient)` pairs; repeated
    /// subsets accumulate.
    pub fn from_pairs(space: Arc<BiasedSpace>, pairs: &[(u32, f64)]) -> Result<Self> {
        let mut coeffs = vec![0.0; space.num_states()];
        for &(a, c) in pairs {
            let slot = coeffs.get_mut(a as usize).ok_or_else(|| {
                Error::DimensionMismatch(format!("subset mask {a:#b} outside the space"))
            })?;
            *slot += c;
        }
        Ok(Self { space, coeffs })
    }

    pub fn space(&self) -> &Arc<BiasedSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coefficient(&self, subset: u32) -> f64 {
        self.coeffs[subset as usize]
    }

    /// `sum_{|A| = order} c_A^2`.
    pub fn level_mass(&self, order: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(a, _)| a.count_ones() as usize == order)
            .map(|(_, c)| c * c)
            .sum()
    }

    /// `Var F = sum_{A nonempty} c_A^2`.
    pub fn variance(&self) -> f64 {
        self.coeffs.iter().skip(1).map(|c| c * c).sum()
    }

    /// Highest level carrying a coefficient above `tol` in absolute value.
    pub fn degree(&self, tol: f64) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > tol)
            .map(|(a, _)| a.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Multiplies each `c_A` by `w(|A|)`.
    pub fn scale_levels(&self, w: impl Fn(usize) -> f64) -> Self {
        let m = self.space.m();
        let table: Vec<f64> = (0..=m).map(&w).collect();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(a, c)| c * table[a.count_ones() as usize])
            .collect();
        Self {
            space: self.space.clone(),
            coeffs,
        }
    }

    /// Symmetric kernel of level `order`: `c_A / order!` on sorted distinct
    /// indices, zero on diagonals.
    pub fn kernel(&self, order: usize) -> Result<Kernel> {
        let m = self.space.m();
        if order > m {
            return Err(Error::OrderExceedsDimension { order, m });
        }
        let fact: f64 = (1..=order).map(|i| i as f64).product();
        let mut k = Kernel::zeros(m, order);
        for (a, &c) in self.coeffs.iter().enumerate() {
            if a.count_ones() as usize != order || c == 0.0 {
                continue;
            }
            k.fill_symmetric(a as u32, c / fact);
        }
        Ok(k)
    }
}

/// `c_A = E[F Y_A]`, computed with one in-place butterfly per coordinate.
pub fn to_chaos(f: &Functional) -> ChaosExpansion {
    let space = f.space().clone();
    let mut t = f.values().to_vec();
    for k in 0..space.m() {
        let (p, q) = (space.p(k), space.q(k));
        let s = (p * q).sqrt();
        butterfly(&mut t, k, |lo, hi| (q * lo + p * hi, s * (hi - lo)));
    }
    ChaosExpansion { space, coeffs: t }
}

/// Synthesis `F(x) = sum_A c_A prod_{k in A} y_k(x)`.
pub fn from_chaos(c: &ChaosExpansion) -> Functional {
    let space = c.space.clone();
    let mut t = c.coeffs.clone();
    for k in 0..space.m() {
        let (up, down) = (space.y_up(k), space.y_down(k));
        butterfly(&mut t, k, |c0, c1| (c0 + c1 * down, c0 + c1 * up));
    }
    Functional::from_raw(space, t)
}

fn butterfly(t: &mut [f64], k: usize, op: impl Fn(f64, f64) -> (f64, f64)) {
    let h = 1usize << k;
    for block in t.chunks_mut(2 * h) {
        let (lo, hi) = block.split_at_mut(h);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = op(*a, *b);
            *a = x;
            *b = y;
        }
    }
}

/// `J_p(f)`: the kernel is symmetrized and restricted off the diagonals
/// first, so `c_A = sum over orderings of A of f`.
pub fn multiple_integral(space: Arc<BiasedSpace>, order: usize, kernel: &Kernel) -> Result<Functional> {
    let m = space.m();
    if order > m {
        return Err(Error::OrderExceedsDimension { order, m });
    }
    if kernel.order() != order || kernel.dim() != m {
        return Err(Error::DimensionMismatch(format!(
            "kernel of order {} on {} indices for J_{order} on {m} coordinates",
            kernel.order(),
            kernel.dim()
        )));
    }
    let mut coeffs = vec![0.0; space.num_states()];
    for (a, slot) in coeffs.iter_mut().enumerate() {
        if a.count_ones() as usize == order {
            *slot = kernel.ordered_sum(a as u32);
        }
    }
    Ok(from_chaos(&ChaosExpansion { space, coeffs }))
}

/// `L F`: level `n` scaled by `-n`.
pub fn apply_l(f: &Functional) -> Functional {
    from_chaos(&to_chaos(f).scale_levels(|n| -(n as f64)))
}

/// Pseudo-inverse `L^{-1}`: level `n >= 1` scaled by `-1/n`, constants sent
/// to zero.
pub fn apply_l_inv(f: &Functional) -> Functional {
    from_chaos(&to_chaos(f).scale_levels(|n| if n == 0 { 0.0 } else { -1.0 / n as f64 }))
}

/// Ornstein-Uhlenbeck semigroup `P_t`: level `n` scaled by `exp(-n t)`.
pub fn apply_semigroup(f: &Functional, t: f64) -> Result<Functional> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    Ok(from_chaos(&to_chaos(f).scale_levels(|n| (-(n as f64) * t).exp())))
}
