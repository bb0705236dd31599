//! Divergence, carré-du-champ and the Malliavin inner product.

use crate::chaos::{apply_l_inv, to_chaos, ChaosExpansion};
use crate::error::{Error, Result};
use crate::functional::{gradient_into, Functional};

/// `(D_0 F, ..., D_{m-1} F)`.
pub fn gradient_vector(f: &Functional) -> Vec<Functional> {
    (0..f.m()).map(|k| f.gradient_unchecked(k)).collect()
}

/// Skorohod divergence `delta(u)`, the adjoint of `D`:
/// `E[sum_k D_k F u_k] = E[F delta(u)]`.
pub fn divergence(u: &[Functional]) -> Result<Functional> {
    let first = u
        .first()
        .ok_or_else(|| Error::DimensionMismatch("divergence of an empty field".into()))?;
    let space = first.space().clone();
    if u.len() != space.m() {
        return Err(Error::DimensionMismatch(format!(
            "{} components for {} coordinates",
            u.len(),
            space.m()
        )));
    }
    let mut out = vec![0.0; space.num_states()];
    for (k, uk) in u.iter().enumerate() {
        first.check_space(uk)?;
        let c = to_chaos(uk);
        let bit = 1usize << k;
        for (a, &v) in c.coeffs().iter().enumerate() {
            if a & bit == 0 {
                out[a | bit] += v;
            }
        }
    }
    Ok(crate::chaos::from_chaos(&ChaosExpansion::new(space, out)?))
}

/// `Gamma_0(F, G) = 1/2 sum_k D_k F D_k G (1 + Y_k^2)`.
pub fn gamma0(f: &Functional, g: &Functional) -> Result<Functional> {
    f.check_space(g)?;
    let space = f.space().clone();
    let n = space.num_states();
    let mut out = vec![0.0; n];
    let mut df = vec![0.0; n];
    let mut dg = vec![0.0; n];
    for k in 0..space.m() {
        gradient_into(&space, f.values(), k, &mut df);
        gradient_into(&space, g.values(), k, &mut dg);
        let (up2, down2) = (space.y_up(k).powi(2), space.y_down(k).powi(2));
        let bit = 1usize << k;
        for i in 0..n {
            let y2 = if i & bit != 0 { up2 } else { down2 };
            out[i] += 0.5 * df[i] * dg[i] * (1.0 + y2);
        }
    }
    Ok(Functional::from_raw(space, out))
}

/// `<DF, -D L^{-1} F> = sum_k D_k F (-D_k L^{-1} F)`.
pub fn malliavin_inner(f: &Functional) -> Functional {
    let space = f.space().clone();
    let neg_l_inv = apply_l_inv(f).scale(-1.0);
    let n = space.num_states();
    let mut out = vec![0.0; n];
    let mut df = vec![0.0; n];
    let mut dl = vec![0.0; n];
    for k in 0..space.m() {
        gradient_into(&space, f.values(), k, &mut df);
        gradient_into(&space, neg_l_inv.values(), k, &mut dl);
        for i in 0..n {
            out[i] += df[i] * dl[i];
        }
    }
    Functional::from_raw(space, out)
}

/// Pointwise `<u, v> = sum_k u_k v_k`.
pub fn field_inner(u: &[Functional], v: &[Functional]) -> Result<Functional> {
    if u.len() != v.len() || u.is_empty() {
        return Err(Error::DimensionMismatch("fields of different length".into()));
    }
    let mut acc = u[0].mul(&v[0])?;
    for (a, b) in u.iter().zip(v).skip(1) {
        acc = acc.add(&a.mul(b)?)?;
    }
    Ok(acc)
}
