//! Number `S` of copies of a fixed graph `Gamma` in `G(n, p)`.
//!
//! A copy is a set of edges of `K_n` whose induced graph is isomorphic to
//! `Gamma`; after isolated vertices are dropped, copies correspond to
//! injective vertex maps modulo automorphisms.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::functional::Functional;

use super::graph::{edge_count, edge_index, max_vertices};
use super::{check_probability, exact_space, falling, standardize_with};

/// A pattern graph without isolated vertices, labels `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphPattern {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl SubgraphPattern {
    /// Builds a pattern from 0-based edges. Isolated vertices are removed
    /// and the remaining vertices relabeled in increasing order.
    pub fn new(edges: &[(usize, usize)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidPattern("a pattern needs at least one edge".into()));
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidPattern(format!("loop at vertex {}", a + 1)));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidPattern(format!("repeated edge {} {}", a + 1, b + 1)));
            }
        }
        let used: BTreeSet<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        if used.len() > 16 {
            return Err(Error::InvalidPattern("patterns are limited to 16 vertices".into()));
        }
        let relabel = |v: usize| used.iter().position(|&u| u == v).unwrap();
        let mut e: Vec<(usize, usize)> = seen.iter().map(|&(a, b)| (relabel(a), relabel(b))).collect();
        e.sort_unstable();
        Ok(Self {
            vertex_count: used.len(),
            edges: e,
        })
    }

    /// Parses an edge list with one `u v` pair of 1-based labels per line;
    /// blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| -> Result<usize> {
                match s.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(Error::InvalidPattern(format!("line {}: bad vertex label {s:?}", ln + 1))),
                }
            };
            if parts.len() != 2 {
                return Err(Error::InvalidPattern(format!("line {}: expected `u v`", ln + 1)));
            }
            edges.push((parse(parts[0])?, parse(parts[1])?));
        }
        Self::new(&edges)
    }

    /// 1-based edge-list text accepted by [`SubgraphPattern::parse`].
    pub fn to_edge_list(&self) -> String {
        self.edges.iter().map(|(a, b)| format!("{} {}\n", a + 1, b + 1)).collect()
    }

    pub fn edge() -> Self {
        Self::new(&[(0, 1)]).unwrap()
    }

    /// Path with `k >= 1` edges.
    pub fn path(k: usize) -> Self {
        let e: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
        Self::new(&e).expect("k >= 1")
    }

    /// Cycle on `k >= 3` vertices.
    pub fn cycle(k: usize) -> Self {
        let e: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::new(&e).expect("k >= 3")
    }

    pub fn triangle() -> Self {
        Self::cycle(3)
    }

    /// Star with `k >= 1` leaves.
    pub fn star(k: usize) -> Self {
        let e: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        Self::new(&e).expect("k >= 1")
    }

    pub fn complete(k: usize) -> Self {
        let mut e = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                e.push((i, j));
            }
        }
        Self::new(&e).expect("k >= 2")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Adjacency bit masks.
    pub fn adjacency(&self) -> Vec<u32> {
        let mut adj = vec![0u32; self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    /// `|Aut(Gamma)|` by exhaustive search over vertex permutations.
    pub fn automorphisms(&self) -> usize {
        let adj = self.adjacency();
        let v = self.vertex_count;
        let mut image = vec![usize::MAX; v];
        let mut count = 0;
        fn go(a: usize, used: u32, image: &mut [usize], adj: &[u32], count: &mut usize) {
            let v = image.len();
            if a == v {
                *count += 1;
                return;
            }
            for t in 0..v {
                if used >> t & 1 == 1 || adj[a].count_ones() != adj[t].count_ones() {
                    continue;
                }
                let ok = (0..a).all(|b| (adj[a] >> b & 1) == (adj[t] >> image[b] & 1));
                if ok {
                    image[a] = t;
                    go(a + 1, used | 1 << t, image, adj, count);
                }
            }
        }
        go(0, 0, &mut image, &adj, &mut count);
        count
    }

    /// Number of copies `|M| = (n)_v / |Aut|` in `K_n`.
    pub fn copies_in_complete(&self, n: usize) -> f64 {
        falling(n as i64, self.vertex_count as i64) / self.automorphisms() as f64
    }

    /// All copies in `K_n` as edge masks over the lexicographic edge order.
    pub fn copy_masks(&self, n: usize) -> Vec<u32> {
        assert!(edge_count(n) <= 32, "edge masks need C(n, 2) <= 32");
        let v = self.vertex_count;
        let mut out = BTreeSet::new();
        let mut map = vec![0usize; v];
        fn go(a: usize, used: u64, n: usize, map: &mut [usize], pat: &SubgraphPattern, out: &mut BTreeSet<u32>) {
            if a == map.len() {
                let mask = pat
                    .edges
                    .iter()
                    .fold(0u32, |acc, &(x, y)| acc | 1 << edge_index(n, map[x], map[y]));
                out.insert(mask);
                return;
            }
            for t in 0..n {
                if used >> t & 1 == 0 {
                    map[a] = t;
                    go(a + 1, used | 1 << t, n, map, pat, out);
                }
            }
        }
        go(0, 0, n, &mut map, self, &mut out);
        out.into_iter().collect()
    }
}

/// `E S = |M| p^e` and the exact variance
/// `Var S = |M| / |Aut| * sum_pi (n - v)_(v - |pi|) (p^(2e - ov(pi)) - p^(2e))`,
/// summing over partial injections `pi` of `V(Gamma)` into a fixed copy with
/// at least one shared edge `ov(pi)`.
pub fn subgraph_moments(n: usize, p: f64, pat: &SubgraphPattern) -> Result<(f64, f64)> {
    check_probability(p)?;
    let v = pat.vertex_count;
    if n < v {
        return Err(Error::InvalidModel(format!("n = {n} is smaller than the pattern's {v} vertices")));
    }
    let e = pat.edge_count() as i32;
    let copies = pat.copies_in_complete(n);
    let mean = copies * p.powi(e);

    let adj = pat.adjacency();
    let mut image = vec![usize::MAX; v];
    let mut total = 0.0;
    #[allow(clippy::too_many_arguments)]
    fn go(a: usize, used: u32, assigned: usize, image: &mut [usize], pat: &SubgraphPattern, adj: &[u32], n: usize, p: f64, total: &mut f64) {
        let v = image.len();
        if a == v {
            let ov = pat
                .edges
                .iter()
                .filter(|&&(x, y)| image[x] != usize::MAX && image[y] != usize::MAX && adj[image[x]] >> image[y] & 1 == 1)
                .count() as i32;
            if ov > 0 {
                let e = pat.edge_count() as i32;
                let ways = falling((n - v) as i64, (v - assigned) as i64);
                *total += ways * (p.powi(2 * e - ov) - p.powi(2 * e));
            }
            return;
        }
        image[a] = usize::MAX;
        go(a + 1, used, assigned, image, pat, adj, n, p, total);
        for t in 0..v {
            if used >> t & 1 == 0 {
                image[a] = t;
                go(a + 1, used | 1 << t, assigned + 1, image, pat, adj, n, p, total);
            }
        }
        image[a] = usize::MAX;
    }
    go(0, 0, 0, &mut image, pat, &adj, n, p, &mut total);
    let var = copies / pat.automorphisms() as f64 * total;
    Ok((mean, var))
}

pub fn subgraph_raw(n: usize, p: f64, pat: &SubgraphPattern) -> Result<Functional> {
    check_probability(p)?;
    if n < pat.vertex_count {
        return Err(Error::InvalidModel(format!(
            "n = {n} is smaller than the pattern's {} vertices",
            pat.vertex_count
        )));
    }
    let space = exact_space(edge_count(n), p, max_vertices, "n")?;
    let masks = pat.copy_masks(n);
    Ok(Functional::from_fn(space, move |s| masks.iter().filter(|&&m| s.0 & m == m).count() as f64))
}

/// Standardized `W = (S - E S) / sigma`.
pub fn subgraph_functional(n: usize, p: f64, pat: &SubgraphPattern) -> Result<Functional> {
    let (mean, var) = subgraph_moments(n, p, pat)?;
    standardize_with(subgraph_raw(n, p, pat)?, mean, var)
}

/// `psi = min_H n^(v_H) p^(e_H)` over nonempty edge subsets `H`, with
/// `v_H` the number of vertices touched by `H`.
pub fn psi(n: usize, p: f64, pat: &SubgraphPattern) -> f64 {
    let e = pat.edge_count();
    let nf = n as f64;
    (1u64..1 << e)
        .map(|h| {
            let mut touched = 0u32;
            for (k, &(a, b)) in pat.edges.iter().enumerate() {
                if h >> k & 1 == 1 {
                    touched |= 1 << a | 1 << b;
                }
            }
            nf.powi(touched.count_ones() as i32) * p.powi(h.count_ones() as i32)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Order of `Var S`: `q n^(2v) p^(2e) / psi`.
pub fn sigma_sq_order(n: usize, p: f64, pat: &SubgraphPattern) -> f64 {
    let nf = n as f64;
    (1.0 - p) * nf.powi(2 * pat.vertex_count as i32) * p.powi(2 * pat.edge_count() as i32) / psi(n, p, pat)
}

/// `((1 - p) psi)^(-1/2)`.
pub fn subgraph_rate_prediction(n: usize, p: f64, pat: &SubgraphPattern) -> f64 {
    ((1.0 - p) * psi(n, p, pat)).powf(-0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing_and_relabeling() {
        let t = SubgraphPattern::parse("# triangle\n1 2\n2 3\n\n3 1\n").unwrap();
        assert_eq!(t, SubgraphPattern::triangle());
        let shifted = SubgraphPattern::parse("5 9\n9 7\n7 5").unwrap();
        assert_eq!(shifted, t);
        assert_eq!(SubgraphPattern::parse(&t.to_edge_list()).unwrap(), t);
        assert!(SubgraphPattern::parse("1 1").is_err());
        assert!(SubgraphPattern::parse("1 2\n2 1").is_err());
        assert!(SubgraphPattern::parse("1").is_err());
        assert!(SubgraphPattern::parse("0 1").is_err());
        assert!(SubgraphPattern::parse("").is_err());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(SubgraphPattern::edge().automorphisms(), 2);
        assert_eq!(SubgraphPattern::triangle().automorphisms(), 6);
        assert_eq!(SubgraphPattern::path(2).automorphisms(), 2);
        assert_eq!(SubgraphPattern::path(3).automorphisms(), 2);
        assert_eq!(SubgraphPattern::cycle(4).automorphisms(), 8);
        assert_eq!(SubgraphPattern::star(3).automorphisms(), 6);
        assert_eq!(SubgraphPattern::complete(4).automorphisms(), 24);
    }

    #[test]
    fn copy_counts() {
        let t = SubgraphPattern::triangle();
        assert_eq!(t.copy_masks(4).len(), 4);
        assert_eq!(t.copies_in_complete(4), 4.0);
        assert_eq!(SubgraphPattern::path(2).copy_masks(5).len(), 30);
        assert_eq!(SubgraphPattern::cycle(4).copy_masks(5).len(), 15);
    }

    #[test]
    fn triangle_mean_n4() {
        let raw = subgraph_raw(4, 0.5, &SubgraphPattern::triangle()).unwrap();
        assert!((raw.mean() - 0.5).abs() < 1e-15);
        let (m, v) = subgraph_moments(4, 0.5, &SubgraphPattern::triangle()).unwrap();
        assert!((m - 0.5).abs() < 1e-15);
        assert!((v - raw.variance()).abs() < 1e-14);
    }

    #[test]
    fn psi_examples() {
        let e = SubgraphPattern::edge();
        assert!((psi(10, 0.3, &e) - 30.0).abs() < 1e-12);
        let t = SubgraphPattern::triangle();
        assert!((psi(10, 0.1, &t) - 1.0).abs() < 1e-12);
        assert!((psi(10, 1.0, &t) - 100.0).abs() < 1e-12);
        let pred = subgraph_rate_prediction(10, 0.1, &t);
        assert!((pred - 0.9f64.powf(-0.5)).abs() < 1e-12);
        assert!((pred - 1.054).abs() < 1e-3);
        let pe = subgraph_rate_prediction(10, 0.3, &e);
        assert!((pe - (0.7 * 30.0f64).powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn relabeling_gives_identical_functional() {
        let a = subgraph_functional(5, 0.4, &SubgraphPattern::path(2)).unwrap();
        let b = subgraph_functional(5, 0.4, &SubgraphPattern::parse("3 1\n1 2").unwrap()).unwrap();
        assert_eq!(a.values(), b.values());
    }
}
