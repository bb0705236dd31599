//! Product measures on `{-1, +1}^m` and their state enumeration.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Hard upper bound on the number of coordinates of a dense functional.
pub const MAX_COORDINATES: usize = 26;

/// Effective coordinate cap: [`MAX_COORDINATES`], lowered by the `RSL_CAP`
/// environment variable when it holds a smaller positive integer.
pub fn coordinate_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("RSL_CAP")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&c| c >= 1)
            .map_or(MAX_COORDINATES, |c| c.min(MAX_COORDINATES))
    })
}

/// A state of the `m` coordinates: bit `k` set means `X_k = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateMask(pub u32);

impl StateMask {
    #[inline]
    pub fn is_up(self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }

    /// The realized Rademacher value `X_k`.
    #[inline]
    pub fn sign(self, k: usize) -> f64 {
        if self.is_up(k) {
            1.0
        } else {
            -1.0
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn count_up(self) -> u32 {
        self.0.count_ones()
    }
}

/// Independent Rademacher coordinates with `P(X_k = +1) = p_k`.
#[derive(Debug)]
pub struct BiasedSpace {
    probs: Vec<f64>,
    weights: OnceLock<Vec<f64>>,
}

impl BiasedSpace {
    /// Builds a space, rejecting empty, oversized or degenerate inputs.
    pub fn new(probs: Vec<f64>) -> Result<Arc<Self>> {
        Self::with_cap(probs, coordinate_cap())
    }

    pub fn with_cap(probs: Vec<f64>, cap: usize) -> Result<Arc<Self>> {
        let cap = cap.min(MAX_COORDINATES);
        if probs.is_empty() {
            return Err(Error::DimensionMismatch("a space needs at least one coordinate".into()));
        }
        if probs.len() > cap {
            return Err(Error::CapExceeded {
                requested: probs.len(),
                cap,
                hint: None,
            });
        }
        for (index, &value) in probs.iter().enumerate() {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::BadProbability { index, value });
            }
        }
        Ok(Arc::new(Self {
            probs,
            weights: OnceLock::new(),
        }))
    }

    /// `m` coordinates sharing the same success probability.
    pub fn uniform(m: usize, p: f64) -> Result<Arc<Self>> {
        Self::new(vec![p; m])
    }

    pub fn m(&self) -> usize {
        self.probs.len()
    }

    pub fn num_states(&self) -> usize {
        1 << self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn p(&self, k: usize) -> f64 {
        self.probs[k]
    }

    #[inline]
    pub fn q(&self, k: usize) -> f64 {
        1.0 - self.probs[k]
    }

    #[inline]
    pub fn pq(&self, k: usize) -> f64 {
        self.p(k) * self.q(k)
    }

    /// `Y_k` on the state `X_k = +1`, i.e. `sqrt(q/p)`.
    #[inline]
    pub fn y_up(&self, k: usize) -> f64 {
        (self.q(k) / self.p(k)).sqrt()
    }

    /// `Y_k` on the state `X_k = -1`, i.e. `-sqrt(p/q)`.
    #[inline]
    pub fn y_down(&self, k: usize) -> f64 {
        -(self.p(k) / self.q(k)).sqrt()
    }

    /// Realized normalized coordinate `Y_k = (X_k - p_k + q_k) / (2 sqrt(p_k q_k))`.
    #[inline]
    pub fn y(&self, state: StateMask, k: usize) -> f64 {
        if state.is_up(k) {
            self.y_up(k)
        } else {
            self.y_down(k)
        }
    }

    /// `kappa = sum_k p_k q_k`.
    pub fn kappa(&self) -> f64 {
        (0..self.m()).map(|k| self.pq(k)).sum()
    }

    /// Probability of every state, indexed by mask.
    pub fn weights(&self) -> &[f64] {
        self.weights.get_or_init(|| {
            let mut w = vec![1.0];
            for k in 0..self.m() {
                let (p, q) = (self.p(k), self.q(k));
                let mut next = Vec::with_capacity(w.len() * 2);
                next.extend(w.iter().map(|x| x * q));
                next.extend(w.iter().map(|x| x * p));
                w = next;
            }
            w
        })
    }

    pub fn weight(&self, state: StateMask) -> f64 {
        (0..self.m())
            .map(|k| if state.is_up(k) { self.p(k) } else { self.q(k) })
            .product()
    }

    pub fn states(&self) -> impl Iterator<Item = StateMask> {
        (0..self.num_states() as u32).map(StateMask)
    }

    /// Expectation of a table under the product measure, computed by folding
    /// one coordinate at a time (a fixed pairwise reduction order).
    pub fn mean_of(&self, table: &[f64]) -> f64 {
        debug_assert_eq!(table.len(), self.num_states());
        let mut buf: Vec<f64> = table.to_vec();
        let mut len = buf.len();
        for k in (0..self.m()).rev() {
            let half = len / 2;
            let (p, q) = (self.p(k), self.q(k));
            for i in 0..half {
                buf[i] = q * buf[i] + p * buf[i + half];
            }
            len = half;
        }
        buf[0]
    }

    pub fn same_as(&self, other: &BiasedSpace) -> bool {
        std::ptr::eq(self, other) || self.probs == other.probs
    }
}

impl PartialEq for BiasedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}
