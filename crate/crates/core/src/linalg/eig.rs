//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation factors the 2x2 pivot block through a diagonal phase,
//! reducing it to the real symmetric case, then applies the textbook Jacobi
//! rotation. Dimensions here stay small, so the O(d^3)-per-sweep cost is
//! irrelevant next to having a dependency-free, deterministic solver.

use super::{ComplexMatrix, HermitianMatrix, Spectrum, ZERO};
use crate::error::{Error, Result};
use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;
const OFF_DIAG_RTOL: f64 = 1e-12;

/// Full eigendecomposition; eigenvalues ascending, ties kept in index order.
pub fn hermitian_eig(a: &HermitianMatrix) -> Result<Spectrum> {
    let (mut vals, vecs) = jacobi(a, true)?;
    let d = a.dim();
    let vecs = vecs.expect("vectors requested");

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]).then(i.cmp(&j)));

    let mut sorted_vecs = ComplexMatrix::zeros(d, d);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..d {
            sorted_vecs.set(r, new_col, vecs.get(r, old_col));
        }
    }
    let mut sorted_vals = vec![0.0; d];
    for (new_col, &old_col) in order.iter().enumerate() {
        sorted_vals[new_col] = vals[old_col];
    }
    vals = sorted_vals;

    Ok(Spectrum {
        eigenvalues: vals,
        eigenvectors: sorted_vecs,
    })
}

/// Eigenvalues only (ascending); skips eigenvector accumulation.
pub(crate) fn hermitian_eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    let (mut vals, _) = jacobi(a, false)?;
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

fn off_diag_norm(b: &ComplexMatrix) -> f64 {
    let d = b.rows();
    let mut acc = 0.0;
    for p in 0..d {
        for q in (p + 1)..d {
            acc += 2.0 * b.get(p, q).norm_sqr();
        }
    }
    acc.sqrt()
}

fn jacobi(a: &HermitianMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let d = a.dim();
    let mut b = a.matrix().clone();
    // start from the exactly-Hermitian average so rounding in the input
    // cannot leak into the iteration
    b = b.add(&b.dagger()).scale_real(0.5);
    let mut v = if want_vectors {
        Some(ComplexMatrix::identity(d))
    } else {
        None
    };

    if d <= 1 {
        let vals = (0..d).map(|i| b.get(i, i).re).collect();
        return Ok((vals, v));
    }

    let norm = a.frobenius_norm();
    if norm == 0.0 {
        return Ok((vec![0.0; d], v));
    }
    let tol = OFF_DIAG_RTOL * norm;
    // rotations on entries far below the target tolerance only churn rounding
    let skip = tol / (d * d) as f64;

    for _sweep in 0..MAX_SWEEPS {
        if off_diag_norm(&b) <= tol {
            let vals = (0..d).map(|i| b.get(i, i).re).collect();
            return Ok((vals, v));
        }
        for p in 0..(d - 1) {
            for q in (p + 1)..d {
                let bpq = b.get(p, q);
                let abs_pq = bpq.norm();
                if abs_pq <= skip {
                    continue;
                }
                // phase rotation making the pivot entry real positive
                let phase = bpq.conj() / abs_pq;
                let app = b.get(p, p).re;
                let aqq = b.get(q, q).re;
                let theta = (aqq - app) / (2.0 * abs_pq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let cs = Complex64::new(c, 0.0);
                let sp = phase * s; // J[q][p] = -sp, J[q][q] = phase * c
                let cp = phase * c;

                // right multiply by J: columns p and q
                for r in 0..d {
                    let brp = b.get(r, p);
                    let brq = b.get(r, q);
                    b.set(r, p, cs * brp - sp * brq);
                    b.set(r, q, s * brp + cp * brq);
                }
                // left multiply by J^dagger: rows p and q
                for r in 0..d {
                    let bpr = b.get(p, r);
                    let bqr = b.get(q, r);
                    b.set(p, r, cs * bpr - sp.conj() * bqr);
                    b.set(q, r, s * bpr + cp.conj() * bqr);
                }
                // pivot entries are exactly known after the rotation
                b.set(p, q, ZERO);
                b.set(q, p, ZERO);
                b.set(p, p, Complex64::new(app - t * abs_pq, 0.0));
                b.set(q, q, Complex64::new(aqq + t * abs_pq, 0.0));

                if let Some(v) = v.as_mut() {
                    for r in 0..d {
                        let vrp = v.get(r, p);
                        let vrq = v.get(r, q);
                        v.set(r, p, cs * vrp - sp * vrq);
                        v.set(r, q, s * vrp + cp * vrq);
                    }
                }
            }
        }
    }

    if off_diag_norm(&b) <= tol {
        let vals = (0..d).map(|i| b.get(i, i).re).collect();
        return Ok((vals, v));
    }
    Err(Error::EigNoConvergence { sweeps: MAX_SWEEPS })
}
