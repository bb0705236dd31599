//! Edge indexing of the complete graph `K_n`.

/// `C(n, 2)`.
pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic index of the edge `{i, j}`, `i != j`.
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < n && i != j);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All edges `(i, j)`, `i < j`, in lexicographic order.
pub fn edge_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(edge_count(n));
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

/// Largest `n` with `C(n, 2) <= cap`.
pub(crate) fn max_vertices(cap: usize) -> usize {
    let mut n = 1;
    while edge_count(n + 1) <= cap {
        n += 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_follow_lexicographic_order() {
        for n in 2..9 {
            for (k, &(i, j)) in edge_pairs(n).iter().enumerate() {
                assert_eq!(edge_index(n, i, j), k);
                assert_eq!(edge_index(n, j, i), k);
            }
        }
        assert_eq!(max_vertices(26), 7);
        assert_eq!(max_vertices(21), 7);
        assert_eq!(max_vertices(20), 6);
    }
}
