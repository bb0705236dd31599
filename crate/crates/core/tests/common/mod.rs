#![allow(dead_code)]

use proptest::prelude::*;
use rsl_core::{BiasedSpace, Functional};

/// Random functional on `1..=max_m` coordinates with `p_k` in `[0.05, 0.95]`.
pub fn functional(max_m: usize) -> impl Strategy<Value = Functional> {
    (1..=max_m)
        .prop_flat_map(|m| {
            (
                prop::collection::vec(0.05..0.95f64, m),
                prop::collection::vec(-3.0..3.0f64, 1 << m),
            )
        })
        .prop_map(|(probs, values)| Functional::new(BiasedSpace::new(probs).unwrap(), values).unwrap())
}

/// Two random functionals on a shared space.
pub fn functional_pair(max_m: usize) -> impl Strategy<Value = (Functional, Functional)> {
    (1..=max_m)
        .prop_flat_map(|m| {
            (
                prop::collection::vec(0.05..0.95f64, m),
                prop::collection::vec(-3.0..3.0f64, 1 << m),
                prop::collection::vec(-3.0..3.0f64, 1 << m),
            )
        })
        .prop_map(|(probs, a, b)| {
            let s = BiasedSpace::new(probs).unwrap();
            (Functional::new(s.clone(), a).unwrap(), Functional::new(s, b).unwrap())
        })
}

/// A random functional together with a random vector field on its space.
pub fn functional_and_field(max_m: usize) -> impl Strategy<Value = (Functional, Vec<Functional>)> {
    (1..=max_m)
        .prop_flat_map(|m| {
            (
                prop::collection::vec(0.05..0.95f64, m),
                prop::collection::vec(-3.0..3.0f64, 1 << m),
                prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 1 << m), m),
            )
        })
        .prop_map(|(probs, a, u)| {
            let s = BiasedSpace::new(probs).unwrap();
            let u = u.into_iter().map(|v| Functional::new(s.clone(), v).unwrap()).collect();
            (Functional::new(s, a).unwrap(), u)
        })
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

/// Brute-force `E[F]` by summing over states with independently built
/// product weights.
pub fn brute_mean(f: &Functional) -> f64 {
    let s = f.space();
    f.values()
        .iter()
        .enumerate()
        .map(|(x, v)| {
            let w: f64 = (0..s.m()).map(|k| if x >> k & 1 == 1 { s.p(k) } else { s.q(k) }).product();
            w * v
        })
        .sum()
}
