//! Operational distance between POVMs: the exact power-set form plus the
//! cheaper upper bounds, and the 2-design estimator that connects the
//! Frobenius bound to measurable quantities.

use crate::error::{Error, Result};
use crate::linalg::{
    frobenius_norm, hermitian_eig, kron, spectral_norm, ComplexMatrix, HermitianMatrix,
};
use crate::quantum::{Povm, PureState};
use crate::stats::simulate_measurement;
use rand::Rng;

/// Outcome-count ceiling for the exact power-set maximization.
pub const EXACT_OUTCOME_CUTOFF: usize = 20;

const RANK_ONE_RTOL: f64 = 1e-8;
const TRACE_MATCH_ATOL: f64 = 1e-6;
const DESIGN_FRAME_TOL: f64 = 1e-9;

/// Which distance quantity a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceKind {
    Exact,
    LocalBound,
    NormBound,
    FrobeniusBound,
    FidelityBound,
    TwoDesignEstimate,
}

impl DistanceKind {
    pub fn label(&self) -> &'static str {
        match self {
            DistanceKind::Exact => "exact",
            DistanceKind::LocalBound => "local-bound",
            DistanceKind::NormBound => "norm-bound",
            DistanceKind::FrobeniusBound => "frobenius-bound",
            DistanceKind::FidelityBound => "fidelity-bound",
            DistanceKind::TwoDesignEstimate => "two-design-estimate",
        }
    }
}

/// Distance value with per-outcome diagnostics.
///
/// For the bound kinds `detail` holds the per-outcome (or per-factor) terms
/// that sum to `value`; for the exact kind it holds the per-outcome spectral
/// norms of E_k - F_k. Sampled 2-design estimates also carry a jackknife
/// standard error.
#[derive(Debug, Clone)]
pub struct DistanceReport {
    pub value: f64,
    pub kind: DistanceKind,
    pub detail: Vec<f64>,
    pub std_error: Option<f64>,
}

fn check_same_shape(e: &Povm, f: &Povm) -> Result<()> {
    if e.len() != f.len() {
        return Err(Error::OutcomeMismatch {
            left: e.len(),
            right: f.len(),
        });
    }
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            got: f.dim(),
            context: "POVM pair dimension",
        });
    }
    Ok(())
}

fn deltas(e: &Povm, f: &Povm) -> Vec<HermitianMatrix> {
    e.effects()
        .iter()
        .zip(f.effects())
        .map(|(a, b)| a.sub(b))
        .collect()
}

/// Exact operational distance: the maximum over outcome subsets x of the
/// spectral norm of sum_{k in x} (E_k - F_k).
///
/// When both POVMs are complete the full effect-difference sum vanishes, so
/// subsets and their complements give equal norms and only subsets
/// containing outcome 0 are enumerated. The walk visits subsets in Gray-code
/// order, updating a running sum one term at a time. Refuses POVMs with more
/// than [`EXACT_OUTCOME_CUTOFF`] outcomes; use one of the bounds there.
pub fn d_op_exact(e: &Povm, f: &Povm) -> Result<DistanceReport> {
    check_same_shape(e, f)?;
    let m = e.len();
    if m > EXACT_OUTCOME_CUTOFF {
        return Err(Error::TooManyOutcomes {
            m,
            max: EXACT_OUTCOME_CUTOFF,
        });
    }
    let diffs = deltas(e, f);
    let detail = diffs
        .iter()
        .map(spectral_norm)
        .collect::<Result<Vec<f64>>>()?;

    let mut total = HermitianMatrix::zeros(e.dim());
    for d in &diffs {
        total = total.add(d);
    }
    let complete = frobenius_norm(total.matrix()) <= 1e-8;

    let value = if complete {
        // subsets containing outcome 0: gray walk over the other m-1 bits
        let mut best = 0.0f64;
        let mut running = diffs[0].clone();
        best = best.max(spectral_norm(&running)?);
        let steps: u64 = 1u64 << (m - 1);
        for i in 1..steps {
            let bit = i.trailing_zeros() as usize;
            let gray = i ^ (i >> 1);
            if gray & (1 << bit) != 0 {
                running = running.add(&diffs[bit + 1]);
            } else {
                running = running.sub(&diffs[bit + 1]);
            }
            best = best.max(spectral_norm(&running)?);
        }
        best
    } else {
        // no complement symmetry: walk every nonempty subset
        let mut best = 0.0f64;
        let mut running = HermitianMatrix::zeros(e.dim());
        let steps: u64 = 1u64 << m;
        for i in 1..steps {
            let bit = i.trailing_zeros() as usize;
            let gray = i ^ (i >> 1);
            if gray & (1 << bit) != 0 {
                running = running.add(&diffs[bit]);
            } else {
                running = running.sub(&diffs[bit]);
            }
            best = best.max(spectral_norm(&running)?);
        }
        best
    };

    Ok(DistanceReport {
        value,
        kind: DistanceKind::Exact,
        detail,
        std_error: None,
    })
}

/// Sum of exact local operational distances; an upper bound on the distance
/// between the corresponding product POVMs.
pub fn d_op_local_bound(pairs: &[(&Povm, &Povm)]) -> Result<DistanceReport> {
    let mut detail = Vec::with_capacity(pairs.len());
    for (e, f) in pairs {
        detail.push(d_op_exact(e, f)?.value);
    }
    Ok(DistanceReport {
        value: detail.iter().sum(),
        kind: DistanceKind::LocalBound,
        detail,
        std_error: None,
    })
}

/// Half the sum of per-outcome spectral norms of E_k - F_k.
pub fn d_op_norm_bound(e: &Povm, f: &Povm) -> Result<DistanceReport> {
    check_same_shape(e, f)?;
    let detail = deltas(e, f)
        .iter()
        .map(|d| spectral_norm(d).map(|v| 0.5 * v))
        .collect::<Result<Vec<f64>>>()?;
    Ok(DistanceReport {
        value: detail.iter().sum(),
        kind: DistanceKind::NormBound,
        detail,
        std_error: None,
    })
}

/// Half the sum of sqrt(||E_k - F_k||_F^2 + tr(E_k - F_k)^2); dominates the
/// spectral-norm bound and equals the exact 2-design average.
pub fn d_op_frobenius_bound(e: &Povm, f: &Povm) -> Result<DistanceReport> {
    check_same_shape(e, f)?;
    let detail: Vec<f64> = deltas(e, f)
        .iter()
        .map(|d| {
            let fro = d.frobenius_norm();
            let tr = d.trace();
            0.5 * (fro * fro + tr * tr).sqrt()
        })
        .collect();
    Ok(DistanceReport {
        value: detail.iter().sum(),
        kind: DistanceKind::FrobeniusBound,
        detail,
        std_error: None,
    })
}

/// Rank-one fidelity bound: with E_k = a_k |alpha_k><alpha_k| and
/// tr(F_k) = a_k, the distance is at most
/// (1/2) sum_k sqrt(a_k^2 - a_k <alpha_k|F_k|alpha_k>).
///
/// Both hypotheses are machine-checked: the second eigenvalue of each E_k
/// must be at most 1e-8 a_k and |tr F_k - a_k| at most 1e-6, and violations
/// name the offending outcome.
pub fn d_op_fidelity_bound(e: &Povm, f: &Povm) -> Result<DistanceReport> {
    check_same_shape(e, f)?;
    let mut detail = Vec::with_capacity(e.len());
    for (index, (ek, fk)) in e.effects().iter().zip(f.effects()).enumerate() {
        let weight = ek.trace();
        if weight.abs() <= 1e-14 {
            // zero effect pairs with zero effect
            let ftrace = fk.trace();
            if ftrace.abs() > TRACE_MATCH_ATOL {
                return Err(Error::TraceMismatch {
                    index,
                    expected: 0.0,
                    got: ftrace,
                });
            }
            detail.push(0.0);
            continue;
        }
        let spectrum = hermitian_eig(ek)?;
        let d = ek.dim();
        let second = if d >= 2 {
            spectrum.eigenvalues[d - 2].abs()
        } else {
            0.0
        };
        if second > RANK_ONE_RTOL * weight {
            return Err(Error::NotRankOne {
                index,
                ratio: second / weight,
            });
        }
        let ftrace = fk.trace();
        if (ftrace - weight).abs() > TRACE_MATCH_ATOL {
            return Err(Error::TraceMismatch {
                index,
                expected: weight,
                got: ftrace,
            });
        }
        let alpha = spectrum.eigenvector(d - 1);
        let fidelity = fk.expectation(&alpha);
        let radicand = (weight * weight - weight * fidelity).max(0.0);
        detail.push(0.5 * radicand.sqrt());
    }
    Ok(DistanceReport {
        value: detail.iter().sum(),
        kind: DistanceKind::FidelityBound,
        detail,
        std_error: None,
    })
}

/// Validated projective 2-design: a set of pure states whose second-moment
/// frame operator is proportional to the projector onto the symmetric
/// subspace.
#[derive(Debug, Clone)]
pub struct TwoDesign {
    states: Vec<PureState>,
    dim: usize,
}

impl TwoDesign {
    /// Validate the frame condition
    /// (1/n) sum |psi><psi| (x) |psi><psi| = 2 Pi_sym / (d (d+1)).
    pub fn new(states: Vec<PureState>) -> Result<Self> {
        assert!(!states.is_empty());
        let dim = states[0].dim();
        for s in &states {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: s.dim(),
                    context: "2-design state dimension",
                });
            }
        }
        let d2 = dim * dim;
        let mut frame = ComplexMatrix::zeros(d2, d2);
        for s in &states {
            let proj = HermitianMatrix::outer(s.amplitudes(), 1.0);
            frame = frame.add(&kron(proj.matrix(), proj.matrix()));
        }
        frame = frame.scale_real(1.0 / states.len() as f64);

        // Pi_sym = (I + SWAP) / 2 on the doubled space
        let mut target = ComplexMatrix::zeros(d2, d2);
        for i in 0..dim {
            for j in 0..dim {
                let row = i * dim + j;
                let swapped = j * dim + i;
                let half = num_complex::Complex64::new(0.5, 0.0);
                target.set(row, row, target.get(row, row) + half);
                target.set(row, swapped, target.get(row, swapped) + half);
            }
        }
        target = target.scale_real(2.0 / (dim * (dim + 1)) as f64);

        let defect = frame.sub(&target).max_abs();
        if defect > DESIGN_FRAME_TOL {
            return Err(Error::NotTwoDesign { defect });
        }
        Ok(Self { states, dim })
    }

    /// The six single-qubit Pauli eigenstates.
    pub fn qubit_pauli() -> Self {
        use num_complex::Complex64;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let states = vec![
            PureState::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap(),
            PureState::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap(),
            PureState::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap(),
            PureState::new(vec![c(s, 0.0), c(-s, 0.0)]).unwrap(),
            PureState::new(vec![c(s, 0.0), c(0.0, s)]).unwrap(),
            PureState::new(vec![c(s, 0.0), c(0.0, -s)]).unwrap(),
        ];
        Self::new(states).expect("Pauli eigenstates form a 2-design")
    }

    /// The 60 two-qubit stabilizer states, generated as the closure of |00>
    /// under Hadamard, phase and CNOT. The Clifford orbit of any pure state
    /// is a projective 2-design; the frame condition is re-validated rather
    /// than trusted.
    pub fn dim4_stabilizer() -> Self {
        let states = stabilizer_orbit_dim4();
        Self::new(states).expect("stabilizer orbit forms a 2-design")
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

fn stabilizer_orbit_dim4() -> Vec<PureState> {
    use num_complex::Complex64;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = ComplexMatrix::from_real(2, 2, &[s, s, s, -s]).unwrap();
    let mut phase = ComplexMatrix::zeros(2, 2);
    phase.set(0, 0, Complex64::new(1.0, 0.0));
    phase.set(1, 1, Complex64::new(0.0, 1.0));
    let i2 = ComplexMatrix::identity(2);
    let mut cnot = ComplexMatrix::zeros(4, 4);
    for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        cnot.set(r, c, Complex64::new(1.0, 0.0));
    }
    let gates = [
        kron(&h, &i2),
        kron(&i2, &h),
        kron(&phase, &i2),
        kron(&i2, &phase),
        cnot,
    ];

    // canonical form: strip the global phase so duplicates collide
    let canonical = |v: &[Complex64]| -> Vec<Complex64> {
        let lead = v.iter().find(|z| z.norm() > 1e-8).expect("nonzero state");
        let fix = lead.conj() / lead.norm();
        v.iter().map(|z| z * fix).collect()
    };
    let close =
        |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-8);

    let mut found: Vec<Vec<Complex64>> = vec![canonical(PureState::basis(4, 0).amplitudes())];
    let mut frontier = found.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for state in &frontier {
            for gate in &gates {
                let image = canonical(&gate.apply(state));
                if !found.iter().any(|known| close(known, &image)) {
                    found.push(image.clone());
                    next.push(image);
                }
            }
        }
        frontier = next;
    }
    found
        .into_iter()
        .map(|v| PureState::normalized(v).expect("unitary orbit stays normalized"))
        .collect()
}

/// Exact 2-design average: sqrt(d(d+1))/2 sum_k sqrt(mean_psi <psi|E_k - F_k|psi>^2).
/// Equals the Frobenius bound when the design is exact.
pub fn d_op_two_design_exact(e: &Povm, f: &Povm, design: &TwoDesign) -> Result<DistanceReport> {
    check_same_shape(e, f)?;
    if design.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            got: design.dim(),
            context: "2-design dimension",
        });
    }
    let diffs = deltas(e, f);
    let d = e.dim() as f64;
    let scale = (d * (d + 1.0)).sqrt() / 2.0;
    let detail: Vec<f64> = diffs
        .iter()
        .map(|delta| {
            let mean = design
                .states()
                .iter()
                .map(|psi| {
                    let v = delta.expectation(psi.amplitudes());
                    v * v
                })
                .sum::<f64>()
                / design.len() as f64;
            scale * mean.sqrt()
        })
        .collect();
    Ok(DistanceReport {
        value: detail.iter().sum(),
        kind: DistanceKind::TwoDesignEstimate,
        detail,
        std_error: None,
    })
}

/// Sampled 2-design estimate: each design state is measured with `f` for
/// `shots` shots and the empirical frequencies replace <psi|F_k|psi>, while
/// <psi|E_k|psi> is computed numerically. Reports a jackknife standard error
/// over design states.
#[allow(clippy::needless_range_loop)]
pub fn d_op_two_design_sampled<R: Rng + ?Sized>(
    e: &Povm,
    f: &Povm,
    design: &TwoDesign,
    shots: u64,
    rng: &mut R,
) -> Result<DistanceReport> {
    check_same_shape(e, f)?;
    if design.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            got: design.dim(),
            context: "2-design dimension",
        });
    }
    if shots == 0 {
        return Err(Error::InvalidParameter {
            name: "shots",
            value: 0.0,
            constraint: "shots >= 1",
        });
    }
    let n = design.len();
    let m = e.len();
    let d = e.dim() as f64;
    let scale = (d * (d + 1.0)).sqrt() / 2.0;

    // squared difference samples, one row per design state
    let mut sq = vec![vec![0.0f64; m]; n];
    for (i, psi) in design.states().iter().enumerate() {
        let rho = psi.density();
        let record = simulate_measurement(f, &rho, shots, rng)?;
        let freqs = record.frequencies();
        for k in 0..m {
            let ideal = e.effect(k).expectation(psi.amplitudes());
            let diff = ideal - freqs.values()[k];
            sq[i][k] = diff * diff;
        }
    }

    let column_sums: Vec<f64> = (0..m).map(|k| (0..n).map(|i| sq[i][k]).sum()).collect();
    let estimate = |excluded: Option<usize>| -> f64 {
        let count = if excluded.is_some() { n - 1 } else { n } as f64;
        (0..m)
            .map(|k| {
                let sum = match excluded {
                    Some(i) => column_sums[k] - sq[i][k],
                    None => column_sums[k],
                };
                scale * (sum / count).sqrt()
            })
            .sum()
    };

    let value = estimate(None);
    let leave_one_out: Vec<f64> = (0..n).map(|i| estimate(Some(i))).collect();
    let mean = leave_one_out.iter().sum::<f64>() / n as f64;
    let var = leave_one_out
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        * (n as f64 - 1.0)
        / n as f64;

    let detail: Vec<f64> = (0..m)
        .map(|k| scale * (column_sums[k] / n as f64).sqrt())
        .collect();
    Ok(DistanceReport {
        value,
        kind: DistanceKind::TwoDesignEstimate,
        detail,
        std_error: Some(var.sqrt()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{
        computational_povm, noise_channel, noisy_povm, sic_povm_qubit, stream_rng,
        EffectConvention, NoiseModel,
    };

    /// Z basis conjugated by exp(-i sigma_y gamma): build through the
    /// rotation channel at parameter 2 gamma.
    fn rotated_z_basis(gamma: f64) -> Povm {
        let ch = noise_channel(NoiseModel::RotationY, 2.0 * gamma).unwrap();
        noisy_povm(
            &[ch],
            &[computational_povm(1)],
            EffectConvention::Heisenberg,
        )
        .unwrap()
    }

    #[test]
    fn exact_identical_povms() {
        let sic = sic_povm_qubit();
        let report = d_op_exact(&sic, &sic).unwrap();
        assert_eq!(report.value, 0.0);
        assert_eq!(report.kind, DistanceKind::Exact);
    }

    #[test]
    fn exact_rotated_basis_closed_form() {
        // for rank-one projectors ||P - Q|| = sqrt(1 - |<a|b>|^2); with
        // |<0|U|0>|^2 = cos^2 gamma the distance is |sin gamma|
        let gamma = std::f64::consts::PI / 6.0;
        let e = computational_povm(1);
        let f = rotated_z_basis(gamma);
        let report = d_op_exact(&e, &f).unwrap();
        assert!((report.value - 0.5).abs() < 1e-12, "got {}", report.value);
    }

    #[test]
    fn exact_outcome_cutoff() {
        let z = computational_povm(1);
        let many = tensor_povm_of_n(&z, 5); // 32 outcomes
        assert!(matches!(
            d_op_exact(&many, &many),
            Err(Error::TooManyOutcomes { .. })
        ));
    }

    fn tensor_povm_of_n(p: &Povm, n: usize) -> Povm {
        let locals: Vec<Povm> = (0..n).map(|_| p.clone()).collect();
        crate::quantum::tensor_povm(&locals).unwrap()
    }

    #[test]
    fn local_bound_single_pair_equals_exact() {
        let e = computational_povm(1);
        let f = rotated_z_basis(0.3);
        let exact = d_op_exact(&e, &f).unwrap().value;
        let local = d_op_local_bound(&[(&e, &f)]).unwrap();
        assert!((local.value - exact).abs() < 1e-14);
        let zero = d_op_local_bound(&[(&e, &e), (&f, &f)]).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn frobenius_bound_cases() {
        let sic = sic_povm_qubit();
        assert_eq!(d_op_frobenius_bound(&sic, &sic).unwrap().value, 0.0);
        // dominates the exact distance on the rotated basis
        let gamma = std::f64::consts::PI / 6.0;
        let e = computational_povm(1);
        let f = rotated_z_basis(gamma);
        let value = d_op_frobenius_bound(&e, &f).unwrap().value;
        assert!(value >= 0.5 - 1e-12, "frobenius bound {value}");
    }

    #[test]
    fn fidelity_bound_identical_projective() {
        let z = computational_povm(1);
        assert_eq!(d_op_fidelity_bound(&z, &z).unwrap().value, 0.0);
    }

    #[test]
    fn tilted_witness_basis_has_positive_distance() {
        let ideal = crate::quantum::imperfect_witness_povm(0.0, std::f64::consts::FRAC_PI_2);
        let tilted =
            crate::quantum::imperfect_witness_povm(0.01, std::f64::consts::FRAC_PI_2 - 0.01);
        assert!(d_op_exact(&ideal, &tilted).unwrap().value > 1e-4);
        assert!(d_op_fidelity_bound(&ideal, &tilted).unwrap().value > 1e-4);
    }

    #[test]
    fn norm_bound_rotated_basis() {
        let gamma = 0.4;
        let e = computational_povm(1);
        let f = rotated_z_basis(gamma);
        let report = d_op_norm_bound(&e, &f).unwrap();
        assert!((report.value - gamma.sin().abs()).abs() < 1e-12);
    }

    #[test]
    fn fidelity_bound_rotated_basis_matches_exact() {
        for i in 1..=20 {
            let gamma = i as f64 * std::f64::consts::FRAC_PI_2 / 20.0;
            let e = computational_povm(1);
            let f = rotated_z_basis(gamma);
            let exact = d_op_exact(&e, &f).unwrap().value;
            let norm = d_op_norm_bound(&e, &f).unwrap().value;
            let fid = d_op_fidelity_bound(&e, &f).unwrap().value;
            let expect = gamma.sin().abs();
            assert!((exact - expect).abs() < 1e-9);
            assert!((norm - expect).abs() < 1e-9);
            assert!((fid - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn fidelity_bound_rejects_non_rank_one() {
        let mixed = Povm::new(vec![
            HermitianMatrix::from_diagonal(&[0.5, 0.5]),
            HermitianMatrix::from_diagonal(&[0.5, 0.5]),
        ])
        .unwrap();
        let err = d_op_fidelity_bound(&mixed, &mixed).unwrap_err();
        assert!(matches!(err, Error::NotRankOne { index: 0, .. }));
    }

    #[test]
    fn fidelity_bound_rejects_trace_mismatch() {
        let e = computational_povm(1);
        // amplitude damping in the Heisenberg picture moves effect traces
        let ch = noise_channel(NoiseModel::AmplitudeDamping, 0.4).unwrap();
        let f = noisy_povm(
            &[ch],
            std::slice::from_ref(&e),
            EffectConvention::Heisenberg,
        )
        .unwrap();
        let err = d_op_fidelity_bound(&e, &f).unwrap_err();
        assert!(matches!(err, Error::TraceMismatch { .. }));
    }

    #[test]
    fn qubit_design_validates() {
        let design = TwoDesign::qubit_pauli();
        assert_eq!(design.len(), 6);
        assert_eq!(design.dim(), 2);
    }

    #[test]
    fn dim4_design_is_stabilizer_orbit() {
        let design = TwoDesign::dim4_stabilizer();
        assert_eq!(design.len(), 60);
        assert_eq!(design.dim(), 4);
    }

    #[test]
    fn product_states_are_not_a_design() {
        // tensor products of the qubit design states fail the frame test
        let qubit = TwoDesign::qubit_pauli();
        let mut products = Vec::new();
        for a in qubit.states() {
            for b in qubit.states() {
                products.push(a.tensor(b));
            }
        }
        assert!(matches!(
            TwoDesign::new(products),
            Err(Error::NotTwoDesign { .. })
        ));
    }

    #[test]
    fn two_design_exact_zero_for_equal_povms() {
        let sic = sic_povm_qubit();
        let design = TwoDesign::qubit_pauli();
        let report = d_op_two_design_exact(&sic, &sic, &design).unwrap();
        assert_eq!(report.value, 0.0);
    }

    #[test]
    fn two_design_exact_equals_frobenius_bound() {
        let design = TwoDesign::qubit_pauli();
        let mut rng = stream_rng(31, 0);
        for _ in 0..20 {
            let (e, f) = crate::oracle::random_qubit_povm_pair(4, &mut rng);
            let avg = d_op_two_design_exact(&e, &f, &design).unwrap().value;
            let fro = d_op_frobenius_bound(&e, &f).unwrap().value;
            assert!((avg - fro).abs() < 1e-9, "avg {avg} vs frobenius {fro}");
        }
    }

    #[test]
    fn two_design_sampled_converges() {
        let e = computational_povm(1);
        let f = rotated_z_basis(0.25);
        let design = TwoDesign::qubit_pauli();
        let exact = d_op_two_design_exact(&e, &f, &design).unwrap().value;
        let sampled =
            d_op_two_design_sampled(&e, &f, &design, 1_000_000, &mut stream_rng(32, 0)).unwrap();
        let se = sampled.std_error.unwrap();
        assert!(
            (sampled.value - exact).abs() <= 3.0 * se.max(1e-4),
            "sampled {} vs exact {exact}, se {se}",
            sampled.value
        );
        assert!(d_op_two_design_sampled(&e, &f, &design, 0, &mut stream_rng(32, 1)).is_err());
    }

    #[test]
    fn ordering_chain_and_symmetry() {
        let mut rng = stream_rng(33, 0);
        for trial in 0..60 {
            let m = 2 + (trial % 3);
            let (e, f) = crate::oracle::random_qubit_povm_pair(m, &mut rng);
            let exact = d_op_exact(&e, &f).unwrap().value;
            let norm = d_op_norm_bound(&e, &f).unwrap().value;
            let fro = d_op_frobenius_bound(&e, &f).unwrap().value;
            assert!(exact <= norm + 1e-9);
            assert!(norm <= fro + 1e-9);
            assert!(exact <= 1.0 + 1e-9);
            // symmetry in the POVM pair
            assert!((d_op_exact(&f, &e).unwrap().value - exact).abs() < 1e-10);
            assert!((d_op_norm_bound(&f, &e).unwrap().value - norm).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_inequality_on_random_triples() {
        let mut rng = stream_rng(34, 0);
        for _ in 0..30 {
            let (e, f) = crate::oracle::random_qubit_povm_pair(3, &mut rng);
            let (g, _) = crate::oracle::random_qubit_povm_pair(3, &mut rng);
            let ef = d_op_exact(&e, &f).unwrap().value;
            let fg = d_op_exact(&f, &g).unwrap().value;
            let eg = d_op_exact(&e, &g).unwrap().value;
            assert!(eg <= ef + fg + 1e-9);
        }
    }

    #[test]
    fn half_enumeration_matches_full_power_set() {
        let mut rng = stream_rng(35, 0);
        for trial in 0..24 {
            let m = [3, 4, 6, 8][trial % 4];
            let (e, f) = crate::oracle::random_qubit_povm_pair(m, &mut rng);
            let fast = d_op_exact(&e, &f).unwrap().value;
            let brute = crate::oracle::d_op_full_enumeration(&e, &f).unwrap();
            assert!((fast - brute).abs() < 1e-10, "fast {fast} brute {brute}");
        }
    }

    #[test]
    fn product_exact_below_local_bound() {
        let gamma = 0.35;
        let e_local = computational_povm(1);
        let f_local = rotated_z_basis(gamma);
        let e = crate::quantum::tensor_povm(&[e_local.clone(), e_local.clone()]).unwrap();
        let f = crate::quantum::tensor_povm(&[f_local.clone(), f_local.clone()]).unwrap();
        let exact = d_op_exact(&e, &f).unwrap().value;
        let local = d_op_local_bound(&[(&e_local, &f_local), (&e_local, &f_local)]).unwrap();
        assert!((local.value - 2.0 * gamma.sin().abs()).abs() < 1e-10);
        assert!(exact <= local.value + 1e-9);
    }
}
