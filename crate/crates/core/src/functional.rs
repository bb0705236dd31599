//! Real functionals of finitely many Rademacher coordinates, stored as dense
//! truth tables over all `2^m` states.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::{BiasedSpace, StateMask};

#[derive(Debug, Clone)]
pub struct Functional {
    space: Arc<BiasedSpace>,
    values: Vec<f64>,
}

impl Functional {
    pub fn new(space: Arc<BiasedSpace>, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.num_states() {
            return Err(Error::DimensionMismatch(format!(
                "table of length {} for {} states",
                values.len(),
                space.num_states()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidModel(format!("non-finite entry at state {i}")));
        }
        Ok(Self { space, values })
    }

    pub(crate) fn from_raw(space: Arc<BiasedSpace>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), space.num_states());
        Self { space, values }
    }

    pub fn from_fn(space: Arc<BiasedSpace>, f: impl Fn(StateMask) -> f64) -> Self {
        let values = space.states().map(f).collect();
        Self { space, values }
    }

    pub fn constant(space: Arc<BiasedSpace>, c: f64) -> Self {
        let values = vec![c; space.num_states()];
        Self { space, values }
    }

    pub fn zero(space: Arc<BiasedSpace>) -> Self {
        Self::constant(space, 0.0)
    }

    /// The Rademacher coordinate `X_k`.
    pub fn x_coordinate(space: Arc<BiasedSpace>, k: usize) -> Result<Self> {
        check_index(&space, k)?;
        Ok(Self::from_fn(space, |s| s.sign(k)))
    }

    /// The normalized coordinate `Y_k`.
    pub fn y_coordinate(space: Arc<BiasedSpace>, k: usize) -> Result<Self> {
        check_index(&space, k)?;
        let sp = space.clone();
        Ok(Self::from_fn(space, move |s| sp.y(s, k)))
    }

    /// `Y_A = prod_{k in A} Y_k` for a subset mask `A`.
    pub fn y_monomial(space: Arc<BiasedSpace>, subset: u32) -> Result<Self> {
        if subset as usize >= space.num_states() {
            return Err(Error::IndexOutOfRange {
                index: 32 - subset.leading_zeros() as usize - 1,
                m: space.m(),
            });
        }
        let sp = space.clone();
        Ok(Self::from_fn(space, move |s| {
            let mut v = 1.0;
            let mut a = subset;
            while a != 0 {
                let k = a.trailing_zeros() as usize;
                v *= sp.y(s, k);
                a &= a - 1;
            }
            v
        }))
    }

    pub fn space(&self) -> &Arc<BiasedSpace> {
        &self.space
    }

    pub fn m(&self) -> usize {
        self.space.m()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, state: StateMask) -> f64 {
        self.values[state.index()]
    }

    pub fn mean(&self) -> f64 {
        self.space.mean_of(&self.values)
    }

    /// `E[F^r]` under the product measure.
    pub fn expectation(&self, r: u32) -> f64 {
        match r {
            0 => 1.0,
            1 => self.mean(),
            _ => {
                let powed: Vec<f64> = self.values.iter().map(|v| v.powi(r as i32)).collect();
                self.space.mean_of(&powed)
            }
        }
    }

    /// `E|F|^r` for real `r > 0`.
    pub fn abs_moment(&self, r: f64) -> f64 {
        let powed: Vec<f64> = self.values.iter().map(|v| v.abs().powf(r)).collect();
        self.space.mean_of(&powed)
    }

    /// `E[F^2] - E[F]^2`, clamped at zero when rounding drives it slightly
    /// negative.
    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        let centered: Vec<f64> = self.values.iter().map(|v| (v - mu) * (v - mu)).collect();
        self.space.mean_of(&centered).max(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// `||F||_{L^q}` for finite `q >= 1`.
    pub fn lq_norm(&self, q: f64) -> f64 {
        self.abs_moment(q).powf(1.0 / q)
    }

    /// Discrete gradient `D_k F = sqrt(p_k q_k) (F_k^+ - F_k^-)`.
    pub fn gradient(&self, k: usize) -> Result<Self> {
        check_index(&self.space, k)?;
        Ok(self.gradient_unchecked(k))
    }

    pub(crate) fn gradient_unchecked(&self, k: usize) -> Self {
        let mut out = vec![0.0; self.values.len()];
        gradient_into(&self.space, &self.values, k, &mut out);
        Self::from_raw(self.space.clone(), out)
    }

    /// `D_l D_k F`; identically zero when `k == l`.
    pub fn iterated_gradient(&self, k: usize, l: usize) -> Result<Self> {
        check_index(&self.space, k)?;
        check_index(&self.space, l)?;
        if k == l {
            return Ok(Self::zero(self.space.clone()));
        }
        Ok(self.gradient_unchecked(k).gradient_unchecked(l))
    }

    /// `F` with coordinate `k` forced to `+1` (`up = true`) or `-1`.
    pub fn forced(&self, k: usize, up: bool) -> Result<Self> {
        check_index(&self.space, k)?;
        let bit = 1usize << k;
        let values = (0..self.values.len())
            .map(|i| self.values[if up { i | bit } else { i & !bit }])
            .collect();
        Ok(Self::from_raw(self.space.clone(), values))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.space.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Functional, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_space(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self::from_raw(self.space.clone(), values))
    }

    pub fn add(&self, other: &Functional) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Functional) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Functional) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn shift(&self, c: f64) -> Self {
        self.map(|v| v + c)
    }

    /// `(F - E F) / sqrt(Var F)`.
    pub fn standardize(&self) -> Result<Self> {
        let var = self.variance();
        if !(var > 0.0) {
            return Err(Error::ZeroVariance);
        }
        let (mu, sd) = (self.mean(), var.sqrt());
        Ok(self.map(|v| (v - mu) / sd))
    }

    /// Errors unless `|E F| <= tol` and `|Var F - 1| <= tol`.
    pub fn check_standardized(&self, tol: f64) -> Result<()> {
        let mean = self.mean();
        let variance = self.variance();
        if mean.abs() > tol || (variance - 1.0).abs() > tol {
            return Err(Error::NotStandardized { mean, variance });
        }
        Ok(())
    }

    pub fn check_space(&self, other: &Functional) -> Result<()> {
        if self.space.same_as(&other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Largest entrywise difference, used by identity checks.
    pub fn max_abs_diff(&self, other: &Functional) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |a, (x, y)| a.max((x - y).abs()))
    }
}

pub(crate) fn check_index(space: &BiasedSpace, k: usize) -> Result<()> {
    if k >= space.m() {
        Err(Error::IndexOutOfRange { index: k, m: space.m() })
    } else {
        Ok(())
    }
}

/// Writes `D_k` of `table` into `out` (same length).
pub(crate) fn gradient_into(space: &BiasedSpace, table: &[f64], k: usize, out: &mut [f64]) {
    let bit = 1usize << k;
    let s = space.pq(k).sqrt();
    for i in 0..table.len() {
        if i & bit == 0 {
            let d = s * (table[i | bit] - table[i]);
            out[i] = d;
            out[i | bit] = d;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(p: &[f64]) -> Arc<BiasedSpace> {
        BiasedSpace::new(p.to_vec()).unwrap()
    }

    #[test]
    fn basis_moments() {
        let s = space(&[0.5]);
        let y = Functional::y_coordinate(s, 0).unwrap();
        assert_eq!(y.expectation(1), 0.0);
        assert_eq!(y.expectation(2), 1.0);

        let s = space(&[0.3]);
        let y = Functional::y_coordinate(s, 0).unwrap();
        // direct two-state sum
        let (p, q) = (0.3f64, 0.7f64);
        let up = (q / p).sqrt();
        let down = -(p / q).sqrt();
        let oracle = p * up.powi(3) + q * down.powi(3);
        assert!((y.expectation(3) - oracle).abs() < 1e-14);
        assert!((y.expectation(3) - 0.4 / 0.21f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn variance_examples() {
        let s = space(&[0.5, 0.5]);
        assert_eq!(Functional::constant(s.clone(), 3.0).variance(), 0.0);
        let f = Functional::y_monomial(s, 0b11).unwrap();
        assert!((f.variance() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gradient_of_basis_is_indicator() {
        let s = space(&[0.2, 0.45, 0.8]);
        for j in 0..3 {
            let y = Functional::y_coordinate(s.clone(), j).unwrap();
            for k in 0..3 {
                let d = y.gradient(k).unwrap();
                let expect = if k == j { 1.0 } else { 0.0 };
                assert!(d.values().iter().all(|v| (v - expect).abs() < 1e-14));
            }
        }
    }

    #[test]
    fn gradient_of_product_flips() {
        let s = space(&[0.5, 0.5]);
        let f = Functional::from_fn(s.clone(), |st| st.sign(0) * st.sign(1));
        let d1 = f.gradient(0).unwrap();
        let x2 = Functional::x_coordinate(s, 1).unwrap();
        assert_eq!(d1.values(), x2.values());
    }

    #[test]
    fn gradient_errors_and_constants() {
        let s = space(&[0.5, 0.5]);
        let c = Functional::constant(s, 2.5);
        assert!(c.gradient(0).unwrap().values().iter().all(|&v| v == 0.0));
        assert!(matches!(c.gradient(2), Err(Error::IndexOutOfRange { index: 2, m: 2 })));
        assert!(c.iterated_gradient(0, 5).is_err());
    }

    #[test]
    fn iterated_gradient_examples() {
        let s = space(&[0.5, 0.5, 0.5]);
        let f = Functional::y_monomial(s.clone(), 0b111).unwrap();
        let d = f.iterated_gradient(0, 1).unwrap();
        let y3 = Functional::y_coordinate(s.clone(), 2).unwrap();
        assert!(d.max_abs_diff(&y3) < 1e-15);
        let same = f.iterated_gradient(1, 1).unwrap();
        assert!(same.values().iter().all(|&v| v == 0.0));
        let y1 = Functional::y_coordinate(s, 0).unwrap();
        for k in 0..3 {
            for l in 0..3 {
                assert!(y1.iterated_gradient(k, l).unwrap().max_abs() == 0.0);
            }
        }
    }

    #[test]
    fn gradient_is_constant_in_its_coordinate() {
        let s = space(&[0.15, 0.6, 0.33, 0.9]);
        let f = Functional::from_fn(s, |st| (st.0 as f64 * 1.7).sin() + st.0 as f64);
        for k in 0..4 {
            let d = f.gradient(k).unwrap();
            for i in 0..16usize {
                assert_eq!(d.values()[i], d.values()[i ^ (1 << k)]);
            }
        }
    }

    #[test]
    fn rejects_bad_tables() {
        let s = space(&[0.5]);
        assert!(Functional::new(s.clone(), vec![1.0]).is_err());
        assert!(Functional::new(s.clone(), vec![1.0, f64::NAN]).is_err());
        assert!(Functional::new(s, vec![1.0, 2.0]).is_ok());
    }

    #[test]
    fn standardize_rejects_constants() {
        let s = space(&[0.5]);
        assert_eq!(
            Functional::constant(s, 1.0).standardize().unwrap_err(),
            Error::ZeroVariance
        );
    }
}
