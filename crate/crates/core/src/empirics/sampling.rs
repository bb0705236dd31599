//! Direct simulation of the model statistics at sizes beyond enumeration.

use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;

use crate::models::{hypercube_edge, ModelInstance, SubgraphPattern};

/// Calls `emit(k)` for every success of `total` independent Bernoulli(`p`)
/// trials, in increasing `k`. Successes are reached by geometric skips, so
/// the cost is proportional to the number of successes; for `p > 1/2` the
/// failures are skipped over instead and the gaps emitted.
pub fn for_each_success(total: u64, p: f64, rng: &mut ChaCha8Rng, mut emit: impl FnMut(u64)) {
    if p > 0.5 {
        let mut next = 0u64;
        skip_sample(total, 1.0 - p, rng, |miss| {
            for k in next..miss {
                emit(k);
            }
            next = miss + 1;
        });
        for k in next..total {
            emit(k);
        }
    } else {
        skip_sample(total, p, rng, emit);
    }
}

fn skip_sample(total: u64, p: f64, rng: &mut ChaCha8Rng, mut emit: impl FnMut(u64)) {
    if p <= 0.0 {
        return;
    }
    let log_q = (-p).ln_1p();
    let mut k: u64 = 0;
    loop {
        // U in (0, 1]
        let u = 1.0 - rng.random::<f64>();
        let gap = (u.ln() / log_q).floor();
        if gap >= (total - k) as f64 {
            return;
        }
        k += gap as u64;
        emit(k);
        k += 1;
        if k >= total {
            return;
        }
    }
}

/// Walks the successes of a `G(n, p)` edge sample in lexicographic edge
/// order, decoding each index into its endpoints.
fn for_each_edge(n: usize, p: f64, rng: &mut ChaCha8Rng, mut emit: impl FnMut(usize, usize)) {
    let total = (n * (n - 1) / 2) as u64;
    let mut row = 0usize;
    let mut row_start = 0u64;
    for_each_success(total, p, rng, |k| {
        while k >= row_start + (n - 1 - row) as u64 {
            row_start += (n - 1 - row) as u64;
            row += 1;
        }
        emit(row, row + 1 + (k - row_start) as usize);
    });
}

/// Per-shard simulation state for one model.
pub(crate) enum Simulator {
    Degree { n: usize, p: f64, d: u32, deg: Vec<u32> },
    Subgraph { n: usize, p: f64, counter: PatternCounter, adj: Vec<u64>, words: usize },
    Complex { n: usize, kappa: usize, p: f64, binom: Vec<Vec<u64>>, covered: Vec<u64>, low: u64 },
    Hypercube { n: usize, p: f64, d: u8, deg: Vec<u8> },
    TwoRuns { alpha: Vec<f64>, ones: bool, bits: Vec<u64> },
}

impl Simulator {
    pub(crate) fn new(model: &ModelInstance) -> Self {
        match model {
            ModelInstance::Degree(c) => Self::Degree {
                n: c.n,
                p: c.p,
                d: c.d as u32,
                deg: vec![0; c.n],
            },
            ModelInstance::Subgraph { n, p, pattern } => {
                let words = n.div_ceil(64);
                Self::Subgraph {
                    n: *n,
                    p: *p,
                    counter: PatternCounter::new(pattern),
                    adj: vec![0; n * words],
                    words,
                }
            }
            ModelInstance::Complex(c) => {
                let binom = binomial_table(c.n, c.kappa + 1);
                let low = binom[c.n][c.kappa];
                Self::Complex {
                    n: c.n,
                    kappa: c.kappa,
                    p: c.p,
                    binom,
                    covered: vec![0; (low as usize).div_ceil(64)],
                    low,
                }
            }
            ModelInstance::Hypercube(c) => Self::Hypercube {
                n: c.n,
                p: c.p,
                d: c.d as u8,
                deg: vec![0; 1 << c.n],
            },
            ModelInstance::TwoRuns(c) => Self::TwoRuns {
                ones: c.alpha.iter().all(|&a| a == 1.0),
                bits: vec![0; (c.alpha.len() + 1).div_ceil(64)],
                alpha: c.alpha.clone(),
            },
        }
    }

    /// One draw of the raw statistic.
    pub(crate) fn draw(&mut self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Self::Degree { n, p, d, deg } => {
                deg.fill(0);
                for_each_edge(*n, *p, rng, |i, j| {
                    deg[i] += 1;
                    deg[j] += 1;
                });
                deg.iter().filter(|&&x| x == *d).count() as f64
            }
            Self::Subgraph { n, p, counter, adj, words } => {
                adj.fill(0);
                let w = *words;
                for_each_edge(*n, *p, rng, |i, j| {
                    adj[i * w + j / 64] |= 1 << (j % 64);
                    adj[j * w + i / 64] |= 1 << (i % 64);
                });
                counter.count(adj, *n, w) as f64
            }
            Self::Complex { n, kappa, p, binom, covered, low } => {
                covered.fill(0);
                let total = binom[*n][*kappa + 1];
                let k = *kappa;
                let mut verts = vec![0usize; k + 1];
                for_each_success(total, *p, rng, |r| {
                    unrank_colex(r, k + 1, binom, &mut verts);
                    for skip in 0..=k {
                        let mut rank = 0u64;
                        let mut t = 0;
                        for (idx, &v) in verts.iter().enumerate() {
                            if idx != skip {
                                t += 1;
                                rank += binom[v][t];
                            }
                        }
                        covered[(rank / 64) as usize] |= 1 << (rank % 64);
                    }
                });
                let hit: u64 = covered.iter().map(|w| w.count_ones() as u64).sum();
                (*low - hit) as f64
            }
            Self::Hypercube { n, p, d, deg } => {
                deg.fill(0);
                let nn = *n;
                let total = (nn as u64) << (nn - 1);
                for_each_success(total, *p, rng, |k| {
                    let (a, b) = hypercube_edge(nn, k as usize);
                    deg[a] += 1;
                    deg[b] += 1;
                });
                deg.iter().filter(|&&x| x == *d).count() as f64
            }
            Self::TwoRuns { alpha, ones, bits } => {
                let len = alpha.len() + 1;
                for w in bits.iter_mut() {
                    *w = rng.next_u64();
                }
                if len % 64 != 0 {
                    let last = bits.len() - 1;
                    bits[last] &= (1u64 << (len % 64)) - 1;
                }
                if *ones {
                    let mut count = 0u32;
                    for i in 0..bits.len() {
                        let next = bits.get(i + 1).copied().unwrap_or(0);
                        let shifted = (bits[i] >> 1) | (next << 63);
                        count += (bits[i] & shifted).count_ones();
                    }
                    count as f64
                } else {
                    let bit = |i: usize| bits[i / 64] >> (i % 64) & 1 == 1;
                    alpha
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| bit(i) && bit(i + 1))
                        .map(|(_, a)| a)
                        .sum()
                }
            }
        }
    }
}

/// `C(a, b)` for `a <= n`, `b <= k`.
fn binomial_table(n: usize, k: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; k + 1]; n + 1];
    for a in 0..=n {
        t[a][0] = 1;
        for b in 1..=k.min(a) {
            t[a][b] = t[a - 1][b - 1] + if b < a { t[a - 1][b] } else { 0 };
        }
    }
    t
}

/// Colex unranking of a `k`-subset; `out` receives the elements increasing.
fn unrank_colex(mut r: u64, k: usize, binom: &[Vec<u64>], out: &mut [usize]) {
    let mut hi = binom.len() - 1;
    for t in (1..=k).rev() {
        let mut c = hi;
        while binom[c][t] > r {
            c -= 1;
        }
        out[t - 1] = c;
        r -= binom[c][t];
        hi = c;
    }
}

/// Counts copies of a pattern in a bitset graph by backtracking over
/// injective homomorphisms and dividing by the automorphism count.
pub(crate) struct PatternCounter {
    /// Pattern vertices in a connected-first order.
    order: Vec<usize>,
    /// For each position, earlier positions adjacent to it.
    back: Vec<Vec<usize>>,
    aut: u64,
}

impl PatternCounter {
    pub(crate) fn new(pattern: &SubgraphPattern) -> Self {
        let adj = pattern.adjacency();
        let v = pattern.vertex_count();
        let mut order = Vec::with_capacity(v);
        let mut placed = 0u32;
        while order.len() < v {
            // prefer the vertex with most placed neighbours, then highest degree
            let next = (0..v)
                .filter(|&a| placed >> a & 1 == 0)
                .max_by_key(|&a| ((adj[a] & placed).count_ones(), adj[a].count_ones(), std::cmp::Reverse(a)))
                .unwrap();
            order.push(next);
            placed |= 1 << next;
        }
        let back = (0..v)
            .map(|i| (0..i).filter(|&j| adj[order[i]] >> order[j] & 1 == 1).collect())
            .collect();
        Self {
            order,
            back,
            aut: pattern.automorphisms() as u64,
        }
    }

    pub(crate) fn count(&self, adj: &[u64], n: usize, words: usize) -> u64 {
        let mut image = vec![0usize; self.order.len()];
        self.extend(0, adj, n, words, &mut image) / self.aut
    }

    fn extend(&self, pos: usize, adj: &[u64], n: usize, words: usize, image: &mut [usize]) -> u64 {
        let back = &self.back[pos];
        // candidate set: common neighbours of already mapped neighbours
        let mut local = vec![0u64; words];
        if back.is_empty() {
            for (w, slot) in local.iter_mut().enumerate() {
                let lo = w * 64;
                let bits = (n - lo).min(64);
                *slot = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
            }
        } else {
            let first = image[back[0]];
            local.copy_from_slice(&adj[first * words..(first + 1) * words]);
            for &b in &back[1..] {
                let row = &adj[image[b] * words..(image[b] + 1) * words];
                for (l, r) in local.iter_mut().zip(row) {
                    *l &= r;
                }
            }
        }
        for &u in &image[..pos] {
            local[u / 64] &= !(1u64 << (u % 64));
        }
        if pos + 1 == self.order.len() {
            return local.iter().map(|w| w.count_ones() as u64).sum();
        }
        let mut total = 0;
        for (w, &word) in local.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let t = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                image[pos] = t;
                total += self.extend(pos + 1, adj, n, words, image);
            }
        }
        total
    }
}
