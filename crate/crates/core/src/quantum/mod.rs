//! States, observables, POVMs and noise channels.

mod channel;
mod povm;
mod random;

pub use channel::{
    apply_channel_heisenberg, apply_channel_schrodinger, noise_channel, noisy_povm,
    EffectConvention, KrausChannel, NoiseModel,
};
pub use povm::{computational_povm, imperfect_witness_povm, sic_povm_qubit, tensor_povm, Povm};
pub use random::{haar_random_pure_state, stream_rng};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, HermitianMatrix};
use num_complex::Complex64;

const STATE_NORM_TOL: f64 = 1e-12;
const DENSITY_TRACE_TOL: f64 = 1e-10;
const DENSITY_EIG_TOL: f64 = 1e-10;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Validate that the vector has unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = Self::norm_of(&amplitudes);
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescale an arbitrary nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = Self::norm_of(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    fn norm_of(v: &[Complex64]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Computational basis state |index> in the given dimension.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    /// Real two-component qubit state (cos t, sin t).
    pub fn qubit_real(cos_component: f64, sin_component: f64) -> Result<Self> {
        Self::new(vec![
            Complex64::new(cos_component, 0.0),
            Complex64::new(sin_component, 0.0),
        ])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self { amplitudes }
    }

    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Density matrix |psi><psi|.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            mat: HermitianMatrix::outer(&self.amplitudes, 1.0),
        }
    }
}

/// Unit-trace positive semidefinite Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: HermitianMatrix,
}

impl DensityMatrix {
    /// Validate trace and positivity.
    pub fn new(mat: HermitianMatrix) -> Result<Self> {
        let trace = mat.trace();
        let spectrum = linalg::hermitian_eig(&mat)?;
        let min_eigenvalue = spectrum.min();
        if (trace - 1.0).abs() > DENSITY_TRACE_TOL || min_eigenvalue < -DENSITY_EIG_TOL {
            return Err(Error::NotDensity {
                trace,
                min_eigenvalue,
            });
        }
        Ok(Self { mat })
    }

    /// Project an arbitrary Hermitian matrix onto the density set.
    pub fn project(mat: &HermitianMatrix) -> Result<Self> {
        Ok(Self {
            mat: linalg::project_density(mat)?,
        })
    }

    /// Wrap a matrix already known to satisfy the invariants (e.g. the
    /// output of the density projection). Debug builds re-validate.
    pub(crate) fn from_projection(mat: HermitianMatrix) -> Self {
        debug_assert!((mat.trace() - 1.0).abs() <= 1e-9);
        Self { mat }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: HermitianMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.mat
    }

    /// tr(A rho).
    pub fn expectation(&self, observable: &HermitianMatrix) -> f64 {
        self.mat.inner(observable)
    }
}

/// Hermitian observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    mat: HermitianMatrix,
}

impl Observable {
    pub fn new(mat: HermitianMatrix) -> Self {
        Self { mat }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }
}

pub fn pauli_x() -> HermitianMatrix {
    HermitianMatrix::new(ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()).unwrap()
}

pub fn pauli_y() -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 1, Complex64::new(0.0, -1.0));
    m.set(1, 0, Complex64::new(0.0, 1.0));
    HermitianMatrix::new(m).unwrap()
}

pub fn pauli_z() -> HermitianMatrix {
    HermitianMatrix::from_diagonal(&[1.0, -1.0])
}

/// Two-qubit entanglement witness X(x)X + Z(x)Z. Expectation above 1 is
/// impossible for separable states.
pub fn witness_operator() -> Observable {
    let xx = pauli_x().kron(&pauli_x());
    let zz = pauli_z().kron(&pauli_z());
    Observable::new(xx.add(&zz))
}

/// Average single-site z magnetization of `n` qubits: diagonal with entry
/// (n - 2 popcount(z)) / n at basis state z.
pub fn magnetization_operator(n: usize) -> Observable {
    assert!(n >= 1);
    let dim = 1usize << n;
    let diag: Vec<f64> = (0..dim)
        .map(|z| (n as f64 - 2.0 * (z as u32).count_ones() as f64) / n as f64)
        .collect();
    Observable::new(HermitianMatrix::from_diagonal(&diag))
}

/// Bell state (|00> + |11>)/sqrt(2).
pub fn bell_phi_plus() -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(vec![
        Complex64::new(s, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(s, 0.0),
    ])
    .unwrap()
}
