//! Exact distances between the discrete law of a functional and `N(0, 1)`.

use crate::functional::Functional;
use crate::normal::{normal_cdf, normal_cdf_integral, normal_quantile, normal_sf_integral};

/// Distinct values of `F` in increasing order with their probabilities.
pub fn atoms(f: &Functional) -> Vec<(f64, f64)> {
    let w = f.space().weights();
    let mut pairs: Vec<(f64, f64)> = f.values().iter().copied().zip(w.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (v, p) in pairs {
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 += p,
            _ => out.push((v, p)),
        }
    }
    out
}

/// Kolmogorov distance of a finite discrete law given as sorted atoms.
pub fn kolmogorov_atoms(atoms: &[(f64, f64)]) -> f64 {
    let mut below = 0.0;
    let mut best: f64 = 0.0;
    for &(a, mass) in atoms {
        let phi = normal_cdf(a);
        let upto = below + mass;
        best = best.max((below - phi).abs()).max((upto - phi).abs());
        below = upto;
    }
    best
}

/// `sup_z |P(F <= z) - Phi(z)|`, evaluated at each atom from both sides.
pub fn kolmogorov_exact(f: &Functional) -> f64 {
    kolmogorov_atoms(&atoms(f))
}

/// `W_1` distance `int |P(F <= z) - Phi(z)| dz` of a discrete law given as
/// sorted atoms. On each gap the CDF is a constant `c`, so the integrand is
/// split where `Phi` crosses `c` and integrated with `int Phi = z Phi + phi`.
pub fn wasserstein_atoms(atoms: &[(f64, f64)]) -> f64 {
    let Some(&(first, _)) = atoms.first() else {
        return 0.0;
    };
    let last = atoms[atoms.len() - 1].0;
    let mut total = normal_cdf_integral(first) + normal_sf_integral(last);
    let mut c = 0.0;
    for w in atoms.windows(2) {
        c += w[0].1;
        total += gap_integral(c.min(1.0), w[0].0, w[1].0);
    }
    total
}

/// `int_a^b |c - Phi(z)| dz` for `a < b`.
fn gap_integral(c: f64, a: f64, b: f64) -> f64 {
    // int_a^b (c - Phi)
    let signed = |lo: f64, hi: f64| c * (hi - lo) - (normal_cdf_integral(hi) - normal_cdf_integral(lo));
    let cross = if c <= 0.0 {
        f64::NEG_INFINITY
    } else if c >= 1.0 {
        f64::INFINITY
    } else {
        normal_quantile(c)
    };
    if cross <= a {
        -signed(a, b)
    } else if cross >= b {
        signed(a, b)
    } else {
        signed(a, cross) - signed(cross, b)
    }
}

pub fn wasserstein_exact(f: &Functional) -> f64 {
    wasserstein_atoms(&atoms(f))
}
