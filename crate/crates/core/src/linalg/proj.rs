//! Euclidean projection kernels used by the certifier.

use super::{hermitian_eig, HermitianMatrix};
use crate::error::Result;

/// Project `v` onto the scaled simplex { x >= 0, sum x = radius }.
///
/// Sort-and-threshold algorithm; sorting ties are broken by index so the
/// output is deterministic.
pub fn project_simplex(v: &[f64], radius: f64) -> Vec<f64> {
    assert!(radius > 0.0, "simplex radius must be positive");
    let n = v.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| v[j].total_cmp(&v[i]).then(i.cmp(&j)));

    let mut cumulative = 0.0;
    let mut tau = 0.0;
    let mut support = 0usize;
    for (rank, &idx) in order.iter().enumerate() {
        cumulative += v[idx];
        let candidate = (cumulative - radius) / (rank + 1) as f64;
        if v[idx] - candidate > 0.0 {
            tau = candidate;
            support = rank + 1;
        }
    }
    debug_assert!(support > 0);
    v.iter().map(|&x| (x - tau).max(0.0)).collect()
}

/// Project `v` onto the l1 ball { x : sum |x_i| <= radius }.
pub fn project_l1_ball(v: &[f64], radius: f64) -> Vec<f64> {
    assert!(radius >= 0.0, "l1 radius must be nonnegative");
    if radius == 0.0 {
        return vec![0.0; v.len()];
    }
    let l1: f64 = v.iter().map(|x| x.abs()).sum();
    if l1 <= radius {
        return v.to_vec();
    }
    let abs: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    let shrunk = project_simplex(&abs, radius);
    v.iter()
        .zip(&shrunk)
        .map(|(&x, &m)| if x >= 0.0 { m } else { -m })
        .collect()
}

/// Nearest (Frobenius) unit-trace positive semidefinite matrix: diagonalize
/// and project the eigenvalues onto the probability simplex.
///
/// The output is Hermitian with the projected spectrum by construction; the
/// caller decides whether to wrap it in a validated density type.
pub fn project_density(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let spectrum = hermitian_eig(a)?;
    let vals = project_simplex(&spectrum.eigenvalues, 1.0);
    Ok(spectrum.reconstruct_with(&vals))
}
