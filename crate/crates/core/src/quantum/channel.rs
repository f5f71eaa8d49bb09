//! Kraus channels for the four single-qubit noise models, and the two
//! conventions for pushing them onto POVM effects.
//!
//! A trace-preserving channel maps states as rho -> sum_i K_i rho K_i^dag.
//! Acting on effects there are two choices:
//!
//! * Heisenberg adjoint, E -> sum_i K_i^dag E K_i. Always maps a complete
//!   POVM to a complete POVM, so sampling stays a plain multinomial. This is
//!   the default.
//! * Schrodinger picture, E -> sum_i K_i E K_i^dag, i.e. the channel applied
//!   to the effect as if it were a state. Preserves effect traces but for a
//!   non-unital channel (amplitude damping) the transformed effects no longer
//!   sum to the identity; outcome distributions are then renormalized before
//!   sampling and the renormalization is logged in the measurement record.
//!
//! The two conventions coincide for depolarizing and phase damping (the maps
//! are self-adjoint) and differ only by rotation direction for the unitary
//! y-rotation model.

use super::povm::{tensor_povm, Povm};
use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, HermitianMatrix};
use std::fmt;
use std::str::FromStr;

const TRACE_PRESERVATION_TOL: f64 = 1e-9;

/// The four supported single-qubit noise models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseModel {
    /// Unitary rotation about the y axis; the Kraus operator is the real
    /// rotation matrix with entries cos(gamma/2), sin(gamma/2).
    RotationY,
    AmplitudeDamping,
    PhaseDamping,
    Depolarizing,
}

impl NoiseModel {
    pub fn label(&self) -> &'static str {
        match self {
            NoiseModel::RotationY => "rotation",
            NoiseModel::AmplitudeDamping => "amplitude-damping",
            NoiseModel::PhaseDamping => "phase-damping",
            NoiseModel::Depolarizing => "depolarizing",
        }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rotation" | "rotation-y" => Ok(NoiseModel::RotationY),
            "amplitude-damping" | "amplitude_damping" => Ok(NoiseModel::AmplitudeDamping),
            "phase-damping" | "phase_damping" => Ok(NoiseModel::PhaseDamping),
            "depolarizing" => Ok(NoiseModel::Depolarizing),
            other => Err(Error::UnknownNoiseModel(other.to_string())),
        }
    }
}

/// Which side of the channel acts on effects; see the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EffectConvention {
    #[default]
    Heisenberg,
    Schrodinger,
}

impl FromStr for EffectConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heisenberg" => Ok(EffectConvention::Heisenberg),
            "schrodinger" => Ok(EffectConvention::Schrodinger),
            other => Err(Error::UnknownConvention(other.to_string())),
        }
    }
}

/// Completely positive trace-preserving map given by its Kraus operators.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus_ops: Vec<ComplexMatrix>,
    label: NoiseModel,
    gamma: f64,
}

impl KrausChannel {
    /// Validate trace preservation: sum_i K_i^dag K_i = I.
    pub fn new(kraus_ops: Vec<ComplexMatrix>, label: NoiseModel, gamma: f64) -> Result<Self> {
        assert!(!kraus_ops.is_empty());
        let dim = kraus_ops[0].rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in &kraus_ops {
            sum = sum.add(&k.dagger().matmul(k));
        }
        let defect = frobenius_norm(&sum.sub(&ComplexMatrix::identity(dim)));
        if defect > TRACE_PRESERVATION_TOL {
            return Err(Error::NotTracePreserving { defect });
        }
        Ok(Self {
            kraus_ops,
            label,
            gamma,
        })
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn label(&self) -> NoiseModel {
        self.label
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dim(&self) -> usize {
        self.kraus_ops[0].rows()
    }

    /// Identity channel (single identity Kraus operator, gamma = 0).
    pub fn identity(dim: usize, label: NoiseModel) -> Self {
        Self {
            kraus_ops: vec![ComplexMatrix::identity(dim)],
            label,
            gamma: 0.0,
        }
    }
}

/// Build the Kraus list of a single-qubit noise model at intensity `gamma`.
/// The damping and depolarizing models require gamma in [0, 1]; the rotation
/// accepts any real angle. Kraus operators that vanish at the boundary of
/// the parameter range (e.g. depolarizing at gamma = 0) are dropped.
pub fn noise_channel(label: NoiseModel, gamma: f64) -> Result<KrausChannel> {
    let in_unit = (0.0..=1.0).contains(&gamma);
    let ops = match label {
        NoiseModel::RotationY => {
            let (s, c) = (gamma / 2.0).sin_cos();
            vec![ComplexMatrix::from_real(2, 2, &[c, -s, s, c])?]
        }
        NoiseModel::AmplitudeDamping => {
            if !in_unit {
                return Err(Error::InvalidParameter {
                    name: "gamma",
                    value: gamma,
                    constraint: "0 <= gamma <= 1 for amplitude damping",
                });
            }
            vec![
                ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, (1.0 - gamma).sqrt()])?,
                ComplexMatrix::from_real(2, 2, &[0.0, gamma.sqrt(), 0.0, 0.0])?,
            ]
        }
        NoiseModel::PhaseDamping => {
            if !in_unit {
                return Err(Error::InvalidParameter {
                    name: "gamma",
                    value: gamma,
                    constraint: "0 <= gamma <= 1 for phase damping",
                });
            }
            let root = (1.0 - gamma).sqrt();
            vec![
                ComplexMatrix::from_real(2, 2, &[root, 0.0, 0.0, root])?,
                ComplexMatrix::from_real(2, 2, &[gamma.sqrt(), 0.0, 0.0, 0.0])?,
                ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, gamma.sqrt()])?,
            ]
        }
        NoiseModel::Depolarizing => {
            if !in_unit {
                return Err(Error::InvalidParameter {
                    name: "gamma",
                    value: gamma,
                    constraint: "0 <= gamma <= 1 for depolarizing",
                });
            }
            let w = (gamma / 3.0).sqrt();
            vec![
                ComplexMatrix::identity(2).scale_real((1.0 - gamma).sqrt()),
                super::pauli_x().matrix().scale_real(w),
                super::pauli_y().matrix().scale_real(w),
                super::pauli_z().matrix().scale_real(w),
            ]
        }
    };
    let ops: Vec<ComplexMatrix> = ops
        .into_iter()
        .filter(|k| frobenius_norm(k) > 0.0)
        .collect();
    KrausChannel::new(ops, label, gamma)
}

/// Heisenberg adjoint on an effect: sum_i K_i^dag E K_i.
pub fn apply_channel_heisenberg(
    channel: &KrausChannel,
    effect: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    apply_kraus(channel, effect, true)
}

/// Schrodinger picture on an effect: sum_i K_i E K_i^dag.
pub fn apply_channel_schrodinger(
    channel: &KrausChannel,
    effect: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    apply_kraus(channel, effect, false)
}

fn apply_kraus(
    channel: &KrausChannel,
    effect: &HermitianMatrix,
    adjoint: bool,
) -> Result<HermitianMatrix> {
    if channel.dim() != effect.dim() {
        return Err(Error::DimensionMismatch {
            expected: channel.dim(),
            got: effect.dim(),
            context: "channel applied to effect",
        });
    }
    let mut acc = ComplexMatrix::zeros(effect.dim(), effect.dim());
    for k in &channel.kraus_ops {
        let term = if adjoint {
            k.dagger().matmul(effect.matrix()).matmul(k)
        } else {
            k.matmul(effect.matrix()).matmul(&k.dagger())
        };
        acc = acc.add(&term);
    }
    HermitianMatrix::symmetrized(acc)
}

/// Transform each local POVM by the matching channel, then tensor the
/// results. Under the Heisenberg convention the output is a valid POVM; the
/// Schrodinger convention may produce an incomplete effect list, which is
/// returned unnormalized.
pub fn noisy_povm(
    channels: &[KrausChannel],
    targets: &[Povm],
    convention: EffectConvention,
) -> Result<Povm> {
    if channels.len() != targets.len() {
        return Err(Error::OutcomeMismatch {
            left: channels.len(),
            right: targets.len(),
        });
    }
    let mut transformed = Vec::with_capacity(targets.len());
    for (channel, target) in channels.iter().zip(targets) {
        let effects = target
            .effects()
            .iter()
            .map(|e| match convention {
                EffectConvention::Heisenberg => apply_channel_heisenberg(channel, e),
                EffectConvention::Schrodinger => apply_channel_schrodinger(channel, e),
            })
            .collect::<Result<Vec<_>>>()?;
        let local = match convention {
            EffectConvention::Heisenberg => Povm::new(effects)?,
            EffectConvention::Schrodinger => Povm::new_unnormalized(effects)?,
        };
        transformed.push(local.with_id(format!(
            "{}[{}@{}]",
            target.id(),
            channel.label(),
            channel.gamma()
        )));
    }
    tensor_povm(&transformed)
}
