use thiserror::Error;

/// Errors produced by the qcert library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    EigNoConvergence { sweeps: usize },

    #[error("invalid parameter {name}: {value} (must satisfy {constraint})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("state vector norm {norm} is not 1 within tolerance")]
    NotNormalized { norm: f64 },

    #[error("density matrix invalid: trace {trace}, smallest eigenvalue {min_eigenvalue}")]
    NotDensity { trace: f64, min_eigenvalue: f64 },

    #[error(
        "effect {index} is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})"
    )]
    EffectNotPsd { index: usize, min_eigenvalue: f64 },

    #[error("POVM effects do not sum to identity (largest entry deviation {defect:.3e})")]
    PovmIncomplete { defect: f64 },

    #[error("POVM is empty")]
    EmptyPovm,

    #[error("Kraus operators are not trace preserving (deviation {defect:.3e})")]
    NotTracePreserving { defect: f64 },

    #[error("unknown noise model `{0}`")]
    UnknownNoiseModel(String),

    #[error("unknown effect convention `{0}` (expected heisenberg or schrodinger)")]
    UnknownConvention(String),

    #[error("outcome counts differ: {left} vs {right}")]
    OutcomeMismatch { left: usize, right: usize },

    #[error(
        "{m} outcomes exceed the exact power-set cutoff of {max}; use one of the bounds instead"
    )]
    TooManyOutcomes { m: usize, max: usize },

    #[error("effect {index} is not rank one (second eigenvalue ratio {ratio:.3e})")]
    NotRankOne { index: usize, ratio: f64 },

    #[error("effect {index} trace mismatch: expected {expected}, got {got}")]
    TraceMismatch {
        index: usize,
        expected: f64,
        got: f64,
    },

    #[error("state set is not a projective 2-design (frame defect {defect:.3e})")]
    NotTwoDesign { defect: f64 },

    #[error("negative probability {value:.3e} at outcome {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum:.3e}; cannot sample")]
    DegenerateDistribution { sum: f64 },

    #[error("multiplier vector length {got} does not match outcome count {expected}")]
    MultiplierLength { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
