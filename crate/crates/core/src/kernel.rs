//! Dense kernels `f: {0..dim}^order -> R` as used by discrete multiple
//! integrals.

use crate::error::{Error, Result};

/// Row-major table of `dim^order` entries; the first index varies slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    dim: usize,
    order: usize,
    data: Vec<f64>,
}

impl Kernel {
    pub fn zeros(dim: usize, order: usize) -> Self {
        Self {
            dim,
            order,
            data: vec![0.0; dim.pow(order as u32)],
        }
    }

    pub fn from_data(dim: usize, order: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim.pow(order as u32) {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a kernel of order {order} on {dim} indices",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::DimensionMismatch("kernel entries must be finite".into()));
        }
        Ok(Self { dim, order, data })
    }

    /// Order-1 kernel from a vector.
    pub fn vector(v: &[f64]) -> Self {
        Self {
            dim: v.len(),
            order: 1,
            data: v.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.order, "index arity");
        idx.iter().fold(0, |acc, &i| {
            assert!(i < self.dim, "kernel index {i} out of range");
            acc * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    /// Value of an order-0 kernel, e.g. the full contraction of two vectors.
    pub fn scalar(&self) -> Option<f64> {
        (self.order == 0).then(|| self.data[0])
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn sum_fourth(&self) -> f64 {
        self.data.iter().map(|v| v.powi(4)).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            order: self.order,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    /// Sum of `f` over every ordering of the indices in `subset`.
    pub(crate) fn ordered_sum(&self, subset: u32) -> f64 {
        let mut idx = bits(subset);
        let mut total = 0.0;
        for_each_permutation(&mut idx, &mut |perm| total += self.get(perm));
        total
    }

    /// Writes `v` at every ordering of the indices in `subset`.
    pub(crate) fn fill_symmetric(&mut self, subset: u32, v: f64) {
        let mut idx = bits(subset);
        let mut offsets = Vec::new();
        for_each_permutation(&mut idx, &mut |perm| offsets.push(self.offset(perm)));
        for o in offsets {
            self.data[o] = v;
        }
    }

    /// Symmetrization restricted off the diagonals.
    pub fn canonical(&self) -> Self {
        let mut out = Self::zeros(self.dim, self.order);
        if self.order > self.dim || self.dim > 32 {
            return out;
        }
        let fact: f64 = (1..=self.order).map(|i| i as f64).product();
        for_each_subset(self.dim, self.order, &mut |mask| {
            let v = self.ordered_sum(mask) / fact;
            if v != 0.0 {
                out.fill_symmetric(mask, v);
            }
        });
        out
    }
}

fn bits(mut mask: u32) -> Vec<usize> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        v.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    v
}

/// Heap's algorithm.
fn for_each_permutation(a: &mut [usize], f: &mut impl FnMut(&[usize])) {
    let n = a.len();
    let mut c = vec![0usize; n];
    f(a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Visits every `k`-subset of `0..n` as a bit mask, in increasing order.
pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(u32)) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let mut mask: u64 = (1 << k) - 1;
    let limit: u64 = 1 << n;
    while mask < limit {
        f(mask as u32);
        // Gosper's hack
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

/// One-index contraction `(a *_1^1 b)(s, t) = sum_i a(i, s) b(i, t)`.
pub fn contract11(a: &Kernel, b: &Kernel) -> Result<Kernel> {
    if a.order == 0 || b.order == 0 {
        return Err(Error::DimensionMismatch("contraction needs orders >= 1".into()));
    }
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(format!(
            "contracting kernels on {} and {} indices",
            a.dim, b.dim
        )));
    }
    let n = a.dim;
    let ra = a.data.len() / n;
    let rb = b.data.len() / n;
    let mut out = Kernel::zeros(n, a.order + b.order - 2);
    for i in 0..n {
        let arow = &a.data[i * ra..(i + 1) * ra];
        let brow = &b.data[i * rb..(i + 1) * rb];
        for (s, &x) in arow.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            let dst = &mut out.data[s * rb..(s + 1) * rb];
            for (d, &y) in dst.iter_mut().zip(brow) {
                *d += x * y;
            }
        }
    }
    Ok(out)
}

/// `M(f) = max_k sum_{i_2 < ... < i_m} f(k, i_2, ..., i_m)^2` for the
/// canonical form of `f`.
pub fn maximal_influence(kernel: &Kernel) -> f64 {
    if kernel.order == 0 || kernel.dim == 0 {
        return 0.0;
    }
    let f = kernel.canonical();
    let n = f.dim;
    let row = f.data.len() / n;
    let tail_fact: f64 = (1..kernel.order).map(|i| i as f64).product();
    (0..n)
        .map(|k| f.data[k * row..(k + 1) * row].iter().map(|v| v * v).sum::<f64>() / tail_fact)
        .fold(0.0, f64::max)
}
