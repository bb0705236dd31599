//! `selftest`: a sub-second subset of the identity checks plus the pinned
//! normal CDF value.

use rsl_core::chaos::multiple_integral;
use rsl_core::operators::field_inner;
use rsl_core::{divergence, gradient_vector, normal_cdf, BiasedSpace, Functional, Kernel};

/// `Phi(1.959964)`, from a high-precision evaluation.
pub const PHI_PIN: (f64, f64) = (1.959964, 0.975_000_000_903_557_6);

/// Returns one `(name, passed)` pair per check.
pub fn run() -> Vec<(&'static str, bool)> {
    let space = BiasedSpace::new(vec![0.2, 0.5, 0.7, 0.35]).unwrap();
    let f = Functional::from_fn(space.clone(), |s| (s.0 as f64 * 1.3).cos() + s.count_up() as f64);
    let g = Functional::from_fn(space.clone(), |s| (s.0 as f64 * 0.7).sin());
    let u: Vec<Functional> = (0..4)
        .map(|k| Functional::from_fn(space.clone(), move |s| ((s.0 + k) as f64).sqrt()))
        .collect();

    let lhs = field_inner(&gradient_vector(&f), &u).unwrap().mean();
    let rhs = f.mul(&divergence(&u).unwrap()).unwrap().mean();
    let duality = (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0);

    let mut k = Kernel::zeros(4, 2);
    k.set(&[0, 1], 0.5);
    k.set(&[1, 0], 0.5);
    k.set(&[2, 3], -1.0);
    let k = k.canonical();
    let j = multiple_integral(space.clone(), 2, &k).unwrap();
    let isometry = (j.expectation(2) - 2.0 * k.norm_sq()).abs() <= 1e-12;

    let mut product = true;
    for k in 0..4 {
        let (df, dg) = (f.gradient(k).unwrap(), g.gradient(k).unwrap());
        let x = Functional::x_coordinate(space.clone(), k).unwrap();
        let want = g
            .mul(&df)
            .unwrap()
            .add(&f.mul(&dg).unwrap())
            .unwrap()
            .sub(&x.mul(&df).unwrap().mul(&dg).unwrap().scale(1.0 / space.pq(k).sqrt()))
            .unwrap();
        product &= f.mul(&g).unwrap().gradient(k).unwrap().max_abs_diff(&want) <= 1e-12;
    }

    let phi = (normal_cdf(PHI_PIN.0) - PHI_PIN.1).abs() <= 1e-12 && (normal_cdf(PHI_PIN.0) - 0.975).abs() <= 1e-6;
    vec![
        ("duality", duality),
        ("isometry", isometry),
        ("product formula", product),
        ("normal cdf pin", phi),
    ]
}
