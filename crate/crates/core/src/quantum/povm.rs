//! POVM type and the measurement constructions used by the experiments.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, HermitianMatrix};
use crate::quantum::{pauli_x, pauli_y, pauli_z, PureState};

const EFFECT_PSD_TOL: f64 = 1e-10;
const COMPLETENESS_TOL: f64 = 1e-9;

/// Ordered list of positive effects. A complete POVM sums to the identity;
/// `new_unnormalized` admits effect lists that do not (used to represent the
/// literal Schrodinger-picture transform of a POVM under a non-unital
/// channel), in which case sampling renormalizes the outcome distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<HermitianMatrix>,
    id: String,
}

impl Povm {
    /// Validate positivity of every effect and completeness of the sum.
    pub fn new(effects: Vec<HermitianMatrix>) -> Result<Self> {
        let povm = Self::new_unnormalized(effects)?;
        let defect = povm.completeness_defect();
        if defect > COMPLETENESS_TOL {
            return Err(Error::PovmIncomplete { defect });
        }
        Ok(povm)
    }

    /// Validate positivity only.
    pub fn new_unnormalized(effects: Vec<HermitianMatrix>) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::EmptyPovm);
        }
        let dim = effects[0].dim();
        for (index, effect) in effects.iter().enumerate() {
            if effect.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: effect.dim(),
                    context: "POVM effect dimension",
                });
            }
            let min_eigenvalue = hermitian_eig(effect)?.min();
            if min_eigenvalue < -EFFECT_PSD_TOL {
                return Err(Error::EffectNotPsd {
                    index,
                    min_eigenvalue,
                });
            }
        }
        let id = format!("povm-{}x{}", effects.len(), dim);
        Ok(Self { effects, id })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn effects(&self) -> &[HermitianMatrix] {
        &self.effects
    }

    pub fn effect(&self, k: usize) -> &HermitianMatrix {
        &self.effects[k]
    }

    /// Largest entrywise deviation of the effect sum from the identity.
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = HermitianMatrix::zeros(self.dim());
        for e in &self.effects {
            sum = sum.add(e);
        }
        let diff = sum.sub(&HermitianMatrix::identity(self.dim()));
        diff.matrix().max_abs()
    }

    pub fn is_complete(&self) -> bool {
        self.completeness_defect() <= COMPLETENESS_TOL
    }
}

/// Symmetric informationally complete qubit POVM: four effects
/// (1/4)(I + n_k . sigma) with n_k the vertices of a regular tetrahedron.
/// Orientation fixed at {(1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1)}/sqrt(3)
/// for reproducibility.
pub fn sic_povm_qubit() -> Povm {
    let s = 1.0 / 3.0f64.sqrt();
    let axes = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
    let effects = axes
        .iter()
        .map(|n| bloch_effect(n, 0.25))
        .collect::<Vec<_>>();
    Povm::new(effects)
        .expect("SIC construction is complete")
        .with_id("sic-qubit")
}

fn bloch_effect(n: &[f64; 3], weight: f64) -> HermitianMatrix {
    let mut m = HermitianMatrix::identity(2);
    m = m.add(&pauli_x().scale(n[0]));
    m = m.add(&pauli_y().scale(n[1]));
    m = m.add(&pauli_z().scale(n[2]));
    m.scale(weight)
}

/// Projective measurement in the n-qubit computational basis, outcomes
/// ordered by binary index (leftmost qubit most significant).
pub fn computational_povm(n_qubits: usize) -> Povm {
    assert!(n_qubits >= 1);
    let dim = 1usize << n_qubits;
    let effects = (0..dim)
        .map(|z| {
            let mut diag = vec![0.0; dim];
            diag[z] = 1.0;
            HermitianMatrix::from_diagonal(&diag)
        })
        .collect();
    Povm::new(effects)
        .expect("projector construction is complete")
        .with_id(format!("computational-{n_qubits}q"))
}

/// Product POVM of the given local POVMs. The outcome index runs in
/// mixed-radix order with the leftmost factor slowest, matching the
/// Kronecker convention used everywhere else.
pub fn tensor_povm(locals: &[Povm]) -> Result<Povm> {
    if locals.is_empty() {
        return Err(Error::EmptyPovm);
    }
    if locals.len() == 1 {
        return Ok(locals[0].clone());
    }
    let mut effects: Vec<HermitianMatrix> = locals[0].effects().to_vec();
    for factor in &locals[1..] {
        let mut next = Vec::with_capacity(effects.len() * factor.len());
        for left in &effects {
            for right in factor.effects() {
                next.push(left.kron(right));
            }
        }
        effects = next;
    }
    let complete = locals.iter().all(Povm::is_complete);
    let povm = if complete {
        Povm::new(effects)?
    } else {
        Povm::new_unnormalized(effects)?
    };
    Ok(povm.with_id(format!(
        "tensor({})",
        locals.iter().map(Povm::id).collect::<Vec<_>>().join(",")
    )))
}

/// Eight-outcome two-qubit POVM made of the product eigenstates of
/// X' (x) X' and Z' (x) Z', where X' = cos(tx) X + sin(tx) Z and
/// Z' = cos(tz) X + sin(tz) Z. Each projector is weighted 1/2 so the two
/// four-outcome settings form one complete POVM. Outcome order: the X'
/// setting first, then the Z' setting, each in (+,+), (+,-), (-,+), (-,-)
/// sign order. `imperfect_witness_povm(0, pi/2)` is the ideal witness
/// measurement.
pub fn imperfect_witness_povm(theta_x: f64, theta_z: f64) -> Povm {
    let mut effects = Vec::with_capacity(8);
    for theta in [theta_x, theta_z] {
        let (plus, minus) = rotated_xz_eigenstates(theta);
        for first in [&plus, &minus] {
            for second in [&plus, &minus] {
                let pair = first.tensor(second);
                effects.push(HermitianMatrix::outer(pair.amplitudes(), 0.5));
            }
        }
    }
    Povm::new(effects)
        .expect("witness construction is complete")
        .with_id(format!("witness({theta_x},{theta_z})"))
}

/// Eigenstates of cos(t) X + sin(t) Z, i.e. the Bloch axis in the x-z
/// plane at polar angle pi/2 - t from z. Closed form keeps the outcome
/// pairing deterministic.
fn rotated_xz_eigenstates(theta: f64) -> (PureState, PureState) {
    let polar = std::f64::consts::FRAC_PI_2 - theta;
    let plus = PureState::qubit_real((polar / 2.0).cos(), (polar / 2.0).sin()).unwrap();
    let minus = PureState::qubit_real(-(polar / 2.0).sin(), (polar / 2.0).cos()).unwrap();
    (plus, minus)
}
