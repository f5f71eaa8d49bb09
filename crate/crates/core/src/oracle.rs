//! Brute-force reference solvers for small instances.
//!
//! These exist so the production code paths (the Gray-coded power-set walk,
//! the splitting solver, the dual certificate) can be cross-checked against
//! slow but transparent computations: direct enumeration over every outcome
//! subset, and dense grids over the qubit Bloch ball. Nothing here is used
//! by the solvers themselves.

use crate::error::Result;
use crate::linalg::{spectral_norm, ComplexMatrix, HermitianMatrix};
use crate::quantum::{pauli_x, pauli_y, pauli_z, Povm};
use rand::Rng;

/// Random `m`-outcome POVM in dimension `d`: normalize random positive
/// matrices G_k by the inverse square root of their sum.
pub fn random_povm<R: Rng + ?Sized>(m: usize, d: usize, rng: &mut R) -> Povm {
    use num_complex::Complex64;
    loop {
        let parts: Vec<HermitianMatrix> = (0..m)
            .map(|_| {
                let data: Vec<Complex64> = (0..d * d)
                    .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                    .collect();
                let b = ComplexMatrix::from_entries(d, d, data).unwrap();
                HermitianMatrix::symmetrized(b.dagger().matmul(&b)).unwrap()
            })
            .collect();
        let mut sum = HermitianMatrix::zeros(d);
        for g in &parts {
            sum = sum.add(g);
        }
        let spectrum = match crate::linalg::hermitian_eig(&sum) {
            Ok(s) => s,
            Err(_) => continue,
        };
        if spectrum.min() < 1e-6 {
            continue; // ill-conditioned draw, try again
        }
        let inv_root: Vec<f64> = spectrum
            .eigenvalues
            .iter()
            .map(|l| 1.0 / l.sqrt())
            .collect();
        let s_inv_root = spectrum.reconstruct_with(&inv_root);
        let effects: Vec<HermitianMatrix> = parts
            .iter()
            .map(|g| {
                let t = s_inv_root
                    .matrix()
                    .matmul(g.matrix())
                    .matmul(s_inv_root.matrix());
                HermitianMatrix::symmetrized(t).unwrap()
            })
            .collect();
        if let Ok(povm) = Povm::new(effects) {
            return povm;
        }
    }
}

/// Independent pair of random qubit POVMs with the same outcome count.
pub fn random_qubit_povm_pair<R: Rng + ?Sized>(m: usize, rng: &mut R) -> (Povm, Povm) {
    (random_povm(m, 2, rng), random_povm(m, 2, rng))
}

/// Operational distance by direct enumeration over all 2^m subsets, summing
/// effect differences from scratch for every subset.
pub fn d_op_full_enumeration(e: &Povm, f: &Povm) -> Result<f64> {
    let m = e.len();
    assert!(m <= 16, "full enumeration oracle is for small m");
    let diffs: Vec<HermitianMatrix> = e
        .effects()
        .iter()
        .zip(f.effects())
        .map(|(a, b)| a.sub(b))
        .collect();
    let mut best = 0.0f64;
    for mask in 1u32..(1 << m) {
        let mut sum = HermitianMatrix::zeros(e.dim());
        for (k, diff) in diffs.iter().enumerate() {
            if mask & (1 << k) != 0 {
                sum = sum.add(diff);
            }
        }
        best = best.max(spectral_norm(&sum)?);
    }
    Ok(best)
}

/// Linear functionals of the Bloch vector: tr(A rho(x, y, z)) for a qubit
/// Hermitian A is const + x cx + y cy + z cz.
#[derive(Debug, Clone, Copy)]
struct BlochForm {
    constant: f64,
    coeffs: [f64; 3],
}

impl BlochForm {
    fn of(a: &HermitianMatrix) -> Self {
        Self {
            constant: 0.5 * a.trace(),
            coeffs: [
                0.5 * a.inner(&pauli_x()),
                0.5 * a.inner(&pauli_y()),
                0.5 * a.inner(&pauli_z()),
            ],
        }
    }

    #[inline]
    fn eval(&self, p: [f64; 3]) -> f64 {
        self.constant + self.coeffs[0] * p[0] + self.coeffs[1] * p[1] + self.coeffs[2] * p[2]
    }
}

/// Result of a Bloch-ball grid search.
#[derive(Debug, Clone, Copy)]
pub struct BlochSearch {
    /// Best objective among feasible grid points, if any were feasible.
    pub minimum: Option<f64>,
    /// Smallest constraint mismatch seen anywhere in the ball.
    pub min_mismatch: f64,
}

/// Minimize tr(C rho) over qubit states with
/// sum_k |tr(E_k rho) - freqs_k| <= epsilon, by dense grid search over the
/// Bloch ball with three refinement passes. Also reports the smallest
/// constraint mismatch, which doubles as a feasibility oracle.
pub fn bloch_min_trace(
    objective: &HermitianMatrix,
    povm: &Povm,
    freqs: &[f64],
    epsilon: f64,
) -> BlochSearch {
    assert_eq!(objective.dim(), 2);
    assert_eq!(povm.dim(), 2);
    let c = BlochForm::of(objective);
    let forms: Vec<BlochForm> = povm.effects().iter().map(BlochForm::of).collect();

    let mut state = GridState {
        objective: c,
        forms,
        freqs: freqs.to_vec(),
        epsilon,
        best_value: f64::INFINITY,
        best_point: [0.0; 3],
        found: false,
        min_mismatch: f64::INFINITY,
        min_mismatch_point: [0.0; 3],
    };

    // dense pass over the whole ball so thin feasible slivers cannot hide
    // between refinement windows, then two local polish passes
    state.scan([0.0; 3], 1.0, 0.005);
    for &(half, step) in &[(0.0075, 0.0005), (0.00075, 0.00005)] {
        let center = if state.found {
            state.best_point
        } else {
            state.min_mismatch_point
        };
        state.scan(center, half, step);
    }

    BlochSearch {
        minimum: state.found.then_some(state.best_value),
        min_mismatch: state.min_mismatch,
    }
}

struct GridState {
    objective: BlochForm,
    forms: Vec<BlochForm>,
    freqs: Vec<f64>,
    epsilon: f64,
    best_value: f64,
    best_point: [f64; 3],
    found: bool,
    min_mismatch: f64,
    min_mismatch_point: [f64; 3],
}

impl GridState {
    fn mismatch(&self, p: [f64; 3]) -> f64 {
        self.forms
            .iter()
            .zip(&self.freqs)
            .map(|(form, &f)| (form.eval(p) - f).abs())
            .sum()
    }

    fn consider(&mut self, p: [f64; 3]) {
        let gap = self.mismatch(p);
        if gap < self.min_mismatch {
            self.min_mismatch = gap;
            self.min_mismatch_point = p;
        }
        if gap <= self.epsilon {
            let value = self.objective.eval(p);
            if value < self.best_value {
                self.best_value = value;
                self.best_point = p;
                self.found = true;
            }
        }
    }

    fn scan(&mut self, center: [f64; 3], half_width: f64, step: f64) {
        let steps = (2.0 * half_width / step).round() as i64;
        for ix in 0..=steps {
            let x = center[0] - half_width + ix as f64 * step;
            for iy in 0..=steps {
                let y = center[1] - half_width + iy as f64 * step;
                let remaining = 1.0 - x * x - y * y;
                if remaining < 0.0 {
                    continue;
                }
                for iz in 0..=steps {
                    let z = center[2] - half_width + iz as f64 * step;
                    if x * x + y * y + z * z > 1.0 {
                        continue;
                    }
                    self.consider([x, y, z]);
                }
                // linear objectives minimize on extreme points, i.e. the
                // pure-state sphere; a cube grid under-reaches it by O(step),
                // so sample the exact boundary of each column as well
                let boundary = remaining.sqrt();
                for z in [boundary, -boundary] {
                    if (z - center[2]).abs() <= half_width {
                        self.consider([x, y, z]);
                    }
                }
            }
        }
    }
}

/// Smallest achievable l1 mismatch between the POVM statistics of any qubit
/// state and the given frequencies.
pub fn bloch_min_mismatch(povm: &Povm, freqs: &[f64]) -> f64 {
    bloch_min_trace(&HermitianMatrix::zeros(2), povm, freqs, -1.0).min_mismatch
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{computational_povm, stream_rng};

    #[test]
    fn random_povm_is_valid() {
        let mut rng = stream_rng(41, 0);
        for m in 2..=4 {
            let p = random_povm(m, 2, &mut rng);
            assert_eq!(p.len(), m);
            assert!(p.completeness_defect() < 1e-9);
        }
        let p = random_povm(3, 4, &mut rng);
        assert_eq!(p.dim(), 4);
        assert!(p.completeness_defect() < 1e-9);
    }

    #[test]
    fn bloch_oracle_z_basis_example() {
        // forcing tr(E_0 rho) >= 0.9 pins <sigma_z> >= 0.8
        let z = computational_povm(1);
        let result = bloch_min_trace(&pauli_z(), &z, &[1.0, 0.0], 0.2);
        let min = result.minimum.expect("feasible");
        assert!((min - 0.8).abs() < 1e-3, "oracle min {min}");
    }

    #[test]
    fn bloch_oracle_detects_infeasible() {
        // both effects are I/2: every state has mismatch exactly 1
        let half = HermitianMatrix::identity(2).scale(0.5);
        let trivial = Povm::new(vec![half.clone(), half]).unwrap();
        let search = bloch_min_trace(&pauli_z(), &trivial, &[1.0, 0.0], 0.5);
        assert!(search.minimum.is_none());
        assert!((search.min_mismatch - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bloch_oracle_vacuous_constraint() {
        // epsilon = 2 admits every state: the minimum is the bottom eigenvalue
        let z = computational_povm(1);
        let search = bloch_min_trace(&pauli_z(), &z, &[0.5, 0.5], 2.0);
        assert!((search.minimum.unwrap() + 1.0).abs() < 1e-3);
    }
}
