mod common;

use common::{brute_mean, close, functional, functional_and_field, functional_pair};
use proptest::prelude::*;
use rsl_core::chaos::{apply_l, apply_l_inv, apply_semigroup, multiple_integral, to_chaos};
use rsl_core::operators::field_inner;
use rsl_core::{divergence, gamma0, gradient_vector, malliavin_inner, BiasedSpace, Functional, Kernel};

const TOL: f64 = 1e-10;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn duality((f, u) in functional_and_field(10)) {
        let lhs = brute_mean(&field_inner(&gradient_vector(&f), &u).unwrap());
        let rhs = brute_mean(&f.mul(&divergence(&u).unwrap()).unwrap());
        let scale = f.max_abs() * u.iter().map(|v| v.max_abs()).sum::<f64>();
        prop_assert!((lhs - rhs).abs() <= TOL * scale.max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn product_rule((f, g) in functional_pair(10), k_seed in 0usize..10) {
        let k = k_seed % f.m();
        let s = f.space().clone();
        let df = f.gradient(k).unwrap();
        let dg = g.gradient(k).unwrap();
        let lhs = f.mul(&g).unwrap().gradient(k).unwrap();
        let c = 1.0 / s.pq(k).sqrt();
        let x = Functional::x_coordinate(s, k).unwrap();
        let rhs = g.mul(&df).unwrap()
            .add(&f.mul(&dg).unwrap()).unwrap()
            .sub(&x.mul(&df).unwrap().mul(&dg).unwrap().scale(c)).unwrap();
        let scale = 1f64.max(f.max_abs() * g.max_abs() * 4.0);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale);
    }

    #[test]
    fn l_inverse_centers(f in functional(10)) {
        let centered = f.shift(-f.mean());
        let back = apply_l(&apply_l_inv(&f));
        prop_assert!(back.max_abs_diff(&centered) <= TOL * f.max_abs().max(1.0));
    }

    #[test]
    fn gradient_of_l_inverse_contracts(f in functional(10)) {
        let l = apply_l_inv(&f);
        for k in 0..f.m() {
            let a = l.gradient(k).unwrap();
            let b = f.gradient(k).unwrap();
            for q in [2.0, 4.0] {
                let (lhs, rhs) = (a.lq_norm(q), b.lq_norm(q));
                prop_assert!(lhs <= rhs + TOL * rhs.max(1.0), "k={k} q={q}: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn gradient_sup_norm(f in functional(10)) {
        for k in 0..f.m() {
            prop_assert!(f.gradient(k).unwrap().max_abs() <= f.max_abs() * (1.0 + 1e-15));
        }
    }

    #[test]
    fn poincare(f in functional(10), truncate in any::<bool>()) {
        // optionally project onto chaos levels <= 1 to hit the equality case
        let f = if truncate {
            let c = to_chaos(&f);
            rsl_core::from_chaos(&c.scale_levels(|n| if n <= 1 { 1.0 } else { 0.0 }))
        } else {
            f
        };
        let energy: f64 = gradient_vector(&f).iter().map(|d| d.expectation(2)).sum();
        let var = f.variance();
        prop_assert!(var <= energy + TOL * energy.max(1.0));
        let high = (2..=f.m()).map(|n| to_chaos(&f).level_mass(n)).sum::<f64>();
        let equal = close(var, energy, TOL);
        if truncate {
            prop_assert!(equal);
        } else {
            // equality forces an empty chaos above level 1
            prop_assert_eq!(equal, high <= 1e-10 * var.max(1.0));
        }
    }

    #[test]
    fn inner_and_gamma_have_mean_variance(f in functional(10)) {
        let var = f.variance();
        prop_assert!(close(brute_mean(&malliavin_inner(&f)), var, TOL));
        let g = gamma0(&f, &apply_l_inv(&f).scale(-1.0)).unwrap();
        prop_assert!(close(brute_mean(&g), var, TOL));
    }

    #[test]
    fn gradient_ignores_own_coordinate(f in functional(10)) {
        for k in 0..f.m() {
            let d = f.gradient(k).unwrap();
            let bit = 1usize << k;
            for i in 0..d.values().len() {
                prop_assert_eq!(d.values()[i], d.values()[i ^ bit]);
            }
            prop_assert!(f.iterated_gradient(k, k).unwrap().values().iter().all(|&v| v == 0.0));
        }
    }
}

fn random_kernel(dim: usize, order: usize, seed: &[f64]) -> Kernel {
    let n = dim.pow(order as u32);
    let data: Vec<f64> = (0..n).map(|i| seed[i % seed.len()] * ((i * 7 + 3) % 11) as f64 / 11.0).collect();
    Kernel::from_data(dim, order, data).unwrap().canonical()
}

fn dot(a: &Kernel, b: &Kernel) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| x * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn isometry(
        probs in prop::collection::vec(0.05..0.95f64, 2..=7),
        p in 1usize..=3,
        q in 1usize..=3,
        sa in prop::collection::vec(-2.0..2.0f64, 1..20),
        sb in prop::collection::vec(-2.0..2.0f64, 1..20),
    ) {
        let m = probs.len();
        prop_assume!(p <= m && q <= m);
        let space = BiasedSpace::new(probs).unwrap();
        let f = random_kernel(m, p, &sa);
        let g = random_kernel(m, q, &sb);
        let jf = multiple_integral(space.clone(), p, &f).unwrap();
        let jg = multiple_integral(space, q, &g).unwrap();
        let lhs = brute_mean(&jf.mul(&jg).unwrap());
        let fact: f64 = (1..=p).map(|i| i as f64).product();
        let rhs = if p == q { fact * dot(&f, &g) } else { 0.0 };
        prop_assert!(close(lhs, rhs, TOL), "{lhs} vs {rhs}");
    }
}

/// Adaptive Simpson on `[a, b]` for a vector-valued integrand.
fn simpson(f: &dyn Fn(f64) -> Vec<f64>, a: f64, b: f64, tol: f64) -> Vec<f64> {
    fn rule(fa: &[f64], fm: &[f64], fb: &[f64], h: f64) -> Vec<f64> {
        fa.iter().zip(fm).zip(fb).map(|((x, y), z)| h / 6.0 * (x + 4.0 * y + z)).collect()
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        f: &dyn Fn(f64) -> Vec<f64>,
        a: f64,
        b: f64,
        fa: Vec<f64>,
        fm: Vec<f64>,
        fb: Vec<f64>,
        whole: Vec<f64>,
        tol: f64,
        depth: u32,
    ) -> Vec<f64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = rule(&fa, &flm, &fm, m - a);
        let right = rule(&fm, &frm, &fb, b - m);
        let err = left.iter().zip(&right).zip(&whole).map(|((l, r), w)| (l + r - w).abs()).fold(0.0, f64::max);
        if depth == 0 || err <= 15.0 * tol {
            return left.iter().zip(&right).zip(&whole).map(|((l, r), w)| l + r + (l + r - w) / 15.0).collect();
        }
        let l = go(f, a, m, fa, flm, fm.clone(), left, tol / 2.0, depth - 1);
        let r = go(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
        l.iter().zip(&r).map(|(x, y)| x + y).collect()
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = rule(&fa, &fm, &fb, b - a);
    go(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[test]
fn semigroup_integral_gives_minus_gradient_of_l_inverse() {
    let space = BiasedSpace::new(vec![0.2, 0.5, 0.8, 0.35, 0.6]).unwrap();
    let f = Functional::from_fn(space, |s| (s.0 as f64 * 0.37).sin() + s.count_up() as f64);
    let l_inv = apply_l_inv(&f);
    for k in 0..f.m() {
        let dk = f.gradient(k).unwrap();
        // t = -ln u maps [0, inf) onto (0, 1]; e^{-t} dt = du
        let integrand = |u: f64| {
            if u <= 0.0 {
                return vec![0.0; dk.values().len()];
            }
            apply_semigroup(&dk, -u.ln()).unwrap().into_values()
        };
        let got = simpson(&integrand, 0.0, 1.0, 1e-12);
        let want = l_inv.gradient(k).unwrap().scale(-1.0);
        let err = got.iter().zip(want.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-8, "k = {k}: {err}");
    }
}

#[test]
fn semigroup_rejects_negative_time() {
    let f = Functional::zero(BiasedSpace::new(vec![0.5]).unwrap());
    assert!(apply_semigroup(&f, -1.0).is_err());
}
