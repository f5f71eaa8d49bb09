//! Confidence-region optimizer.
//!
//! The region is the convex set of density matrices whose ideal-POVM
//! statistics sit within an l1 ball of radius eps1 + eps2 around the
//! measured frequencies. Minimizing or maximizing tr(C rho) over it is
//! solved with a first-order primal-dual splitting whose only nontrivial
//! steps are the two projection kernels: onto the density set and onto the
//! l1 ball.
//!
//! Soundness policy: the headline number is never the primal objective of
//! an approximately feasible iterate. Every reported bound comes from the
//! dual certificate, which is valid for *any* multiplier vector, so solver
//! quality affects tightness but never correctness.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, project_density, project_l1_ball, HermitianMatrix};
use crate::quantum::{DensityMatrix, Observable, Povm};
use crate::stats::{bhc_epsilon, MeasurementRecord};
use std::fmt;

/// Convex feasible set of the certification program.
#[derive(Debug, Clone)]
pub struct ConfidenceRegion {
    pub target_povm: Povm,
    pub frequencies: Vec<f64>,
    pub eps1: f64,
    pub eps2: f64,
    pub delta: f64,
}

impl ConfidenceRegion {
    pub fn new(
        target_povm: Povm,
        frequencies: Vec<f64>,
        eps1: f64,
        eps2: f64,
        delta: f64,
    ) -> Result<Self> {
        if frequencies.len() != target_povm.len() {
            return Err(Error::OutcomeMismatch {
                left: target_povm.len(),
                right: frequencies.len(),
            });
        }
        if eps1 < 0.0 || eps2 < 0.0 {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: eps1.min(eps2),
                constraint: "eps1, eps2 >= 0",
            });
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                constraint: "0 < delta <= 1",
            });
        }
        Ok(Self {
            target_povm,
            frequencies,
            eps1,
            eps2,
            delta,
        })
    }

    /// Total l1 radius eps1 + eps2.
    pub fn epsilon(&self) -> f64 {
        self.eps1 + self.eps2
    }

    pub fn dim(&self) -> usize {
        self.target_povm.dim()
    }

    pub fn outcomes(&self) -> usize {
        self.target_povm.len()
    }

    /// l1 mismatch of a state against the recorded frequencies.
    pub fn mismatch(&self, rho: &HermitianMatrix) -> f64 {
        self.target_povm
            .effects()
            .iter()
            .zip(&self.frequencies)
            .map(|(e, &f)| (e.inner(rho) - f).abs())
            .sum()
    }

    /// Structured-text block: POVM id, confidence, radii, frequencies.
    pub fn to_block(&self) -> String {
        let freqs = self
            .frequencies
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "povm_id = {}\ndelta = {}\neps1 = {}\neps2 = {}\nf = {}\n",
            self.target_povm.id(),
            self.delta,
            self.eps1,
            self.eps2,
            freqs
        )
    }
}

/// Build the region from a measurement record: eps1 is the BHC radius for
/// the record's shot count, eps2 is the caller's operational-distance term.
pub fn build_region(
    target: &Povm,
    record: &MeasurementRecord,
    eps2: f64,
    delta: f64,
) -> Result<ConfidenceRegion> {
    if record.outcomes() != target.len() {
        return Err(Error::OutcomeMismatch {
            left: target.len(),
            right: record.outcomes(),
        });
    }
    let eps1 = bhc_epsilon(record.shots, target.len(), delta)?;
    let frequencies = record.frequencies().values().to_vec();
    ConfidenceRegion::new(target.clone(), frequencies, eps1, eps2, delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Min => "min",
            Direction::Max => "max",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    Infeasible,
    IterationLimit,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Converged => "converged",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::IterationLimit => "iteration-limit",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverSettings {
    /// Primal-residual and objective-stability tolerance.
    pub tol: f64,
    /// Gap above which a stalled splitting run is declared infeasible.
    pub feas_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            feas_tol: 1e-6,
            max_iter: 50_000,
        }
    }
}

/// One-sided certified bound together with solver diagnostics.
///
/// For `Direction::Min` the rigorous lower bound is `dual_bound`;
/// `primal_value` is the objective at the reported iterate and upper-bounds
/// the true minimum whenever `primal_residual` is zero. Roles flip for
/// `Direction::Max`, where `dual_bound` is a rigorous upper bound.
#[derive(Debug, Clone)]
pub struct CertifiedBound {
    pub direction: Direction,
    pub primal_value: f64,
    pub dual_bound: f64,
    pub iterate: DensityMatrix,
    pub primal_residual: f64,
    pub constraint_slack: f64,
    pub iterations: usize,
    pub status: SolveStatus,
}

impl CertifiedBound {
    pub fn is_infeasible(&self) -> bool {
        self.status == SolveStatus::Infeasible
    }

    /// CSV row: direction, dual_bound, primal_value, residual, status, iterations.
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.direction,
            self.dual_bound,
            self.primal_value,
            self.primal_residual,
            self.status,
            self.iterations
        )
    }
}

fn certificate_value(
    objective: &HermitianMatrix,
    effects: &[HermitianMatrix],
    freqs: &[f64],
    epsilon: f64,
    multipliers: &[f64],
) -> Result<f64> {
    let mut shifted = objective.clone();
    for (y, effect) in multipliers.iter().zip(effects) {
        if *y != 0.0 {
            shifted = shifted.sub(&effect.scale(*y));
        }
    }
    let lambda_min = hermitian_eig(&shifted)?.min();
    let linear: f64 = multipliers.iter().zip(freqs).map(|(y, f)| y * f).sum();
    let max_abs = multipliers.iter().fold(0.0f64, |acc, y| acc.max(y.abs()));
    Ok(lambda_min + linear - epsilon * max_abs)
}

/// Rigorous lower bound on min tr(C rho) over the region, valid for any
/// multiplier vector y:
///
/// lambda_min(C - sum_k y_k E_k) + sum_k y_k f_k - eps max_k |y_k|
///
/// (Holder: |sum_k y_k (tr(E_k rho) - f_k)| <= max|y| * eps on the region.)
pub fn dual_certificate(
    region: &ConfidenceRegion,
    objective: &Observable,
    multipliers: &[f64],
) -> Result<f64> {
    if multipliers.len() != region.outcomes() {
        return Err(Error::MultiplierLength {
            expected: region.outcomes(),
            got: multipliers.len(),
        });
    }
    certificate_value(
        objective.matrix(),
        region.target_povm.effects(),
        &region.frequencies,
        region.epsilon(),
        multipliers,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Feasibility {
    Feasible,
    Infeasible { gap: f64 },
}

/// Alternating projections between the affine coupling set
/// {(rho, t) : t_k = tr(E_k rho) - f_k} and the product of the density set
/// with the l1 ball. The iteration converges to the minimal-distance pair of
/// points, so a gap that stalls above `feas_tol` witnesses an empty region.
pub fn feasibility_check(
    region: &ConfidenceRegion,
    settings: &SolverSettings,
) -> Result<Feasibility> {
    let geometry = Geometry::new(region)?;
    let d = region.dim();
    let mut rho = DensityMatrix::maximally_mixed(d).matrix().clone();
    let mut t = vec![0.0; region.outcomes()];

    let mut previous_gap = f64::INFINITY;
    let max_iter = settings.max_iter.max(20_000);
    for iter in 0..max_iter {
        let (rho_a, t_a) = geometry.project_affine(&rho, &t);
        let rho_b = project_density(&rho_a)?;
        let t_b = project_l1_ball(&t_a, region.epsilon());

        let gap = (frob_dist_sq(&rho_a, &rho_b) + l2_dist_sq(&t_a, &t_b)).sqrt();
        if gap <= 0.5 * settings.feas_tol {
            return Ok(Feasibility::Feasible);
        }
        if iter % 500 == 499 {
            let relative_drop = (previous_gap - gap) / gap.max(1e-300);
            if relative_drop < 1e-9 && gap > settings.feas_tol {
                return Ok(Feasibility::Infeasible { gap });
            }
            previous_gap = gap;
        }
        rho = rho_b;
        t = t_b;
    }
    let (rho_a, t_a) = geometry.project_affine(&rho, &t);
    let rho_b = project_density(&rho_a)?;
    let t_b = project_l1_ball(&t_a, region.epsilon());
    let gap = (frob_dist_sq(&rho_a, &rho_b) + l2_dist_sq(&t_a, &t_b)).sqrt();
    if gap > settings.feas_tol {
        Ok(Feasibility::Infeasible { gap })
    } else {
        Ok(Feasibility::Feasible)
    }
}

fn frob_dist_sq(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    let d = a.sub(b);
    let n = d.frobenius_norm();
    n * n
}

fn l2_dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Precomputed linear-map data shared by the solver and the feasibility
/// check: the statistics map A(rho)_k = tr(E_k rho), its operator norm, and
/// a Cholesky factor of I + A A^T for affine projections.
struct Geometry {
    effects: Vec<HermitianMatrix>,
    freqs: Vec<f64>,
    op_norm: f64,
    cholesky: Vec<Vec<f64>>,
}

impl Geometry {
    #[allow(clippy::needless_range_loop)]
    fn new(region: &ConfidenceRegion) -> Result<Self> {
        let effects: Vec<HermitianMatrix> = region.target_povm.effects().to_vec();
        let m = effects.len();
        let mut gram = vec![vec![0.0; m]; m];
        for k in 0..m {
            for l in k..m {
                let v = effects[k].inner(&effects[l]);
                gram[k][l] = v;
                gram[l][k] = v;
            }
        }
        let flat: Vec<f64> = gram.iter().flatten().copied().collect();
        let gram_h = HermitianMatrix::new(crate::linalg::ComplexMatrix::from_real(m, m, &flat)?)?;
        let op_norm = hermitian_eig(&gram_h)?.max().max(0.0).sqrt();

        // Cholesky of I + G, symmetric positive definite by construction
        let mut chol = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..=i {
                let mut sum = gram[i][j] + if i == j { 1.0 } else { 0.0 };
                for k in 0..j {
                    sum -= chol[i][k] * chol[j][k];
                }
                if i == j {
                    chol[i][j] = sum.sqrt();
                } else {
                    chol[i][j] = sum / chol[j][j];
                }
            }
        }

        Ok(Self {
            effects,
            freqs: region.frequencies.clone(),
            op_norm,
            cholesky: chol,
        })
    }

    fn apply(&self, rho: &HermitianMatrix) -> Vec<f64> {
        self.effects.iter().map(|e| e.inner(rho)).collect()
    }

    fn apply_adjoint(&self, y: &[f64], dim: usize) -> HermitianMatrix {
        let mut acc = HermitianMatrix::zeros(dim);
        for (coef, effect) in y.iter().zip(&self.effects) {
            if *coef != 0.0 {
                acc = acc.add(&effect.scale(*coef));
            }
        }
        acc
    }

    #[allow(clippy::needless_range_loop)]
    fn solve_normal(&self, rhs: &[f64]) -> Vec<f64> {
        let m = rhs.len();
        let mut y = vec![0.0; m];
        for i in 0..m {
            let mut sum = rhs[i];
            for k in 0..i {
                sum -= self.cholesky[i][k] * y[k];
            }
            y[i] = sum / self.cholesky[i][i];
        }
        let mut x = vec![0.0; m];
        for i in (0..m).rev() {
            let mut sum = y[i];
            for k in (i + 1)..m {
                sum -= self.cholesky[k][i] * x[k];
            }
            x[i] = sum / self.cholesky[i][i];
        }
        x
    }

    /// Euclidean projection onto {(rho, t) : A(rho) - t = f}.
    fn project_affine(&self, rho: &HermitianMatrix, t: &[f64]) -> (HermitianMatrix, Vec<f64>) {
        let mut rhs = self.apply(rho);
        for (r, (tv, fv)) in rhs.iter_mut().zip(t.iter().zip(&self.freqs)) {
            *r -= tv + fv;
        }
        let lambda = self.solve_normal(&rhs);
        let correction = self.apply_adjoint(&lambda, rho.dim());
        let rho_out = rho.sub(&correction);
        let t_out = t.iter().zip(&lambda).map(|(tv, l)| tv + l).collect();
        (rho_out, t_out)
    }
}

/// Certify a one-sided bound on tr(C rho) over the region.
///
/// A max-direction solve runs the min path on -C and negates both values,
/// so `certify(Max, C)` equals `-certify(Min, -C)` exactly.
pub fn certify(
    region: &ConfidenceRegion,
    objective: &Observable,
    direction: Direction,
    settings: &SolverSettings,
) -> Result<CertifiedBound> {
    if objective.dim() != region.dim() {
        return Err(Error::DimensionMismatch {
            expected: region.dim(),
            got: objective.dim(),
            context: "objective dimension",
        });
    }
    match direction {
        Direction::Min => solve_min(region, objective.matrix(), settings, Direction::Min),
        Direction::Max => {
            let negated = objective.matrix().scale(-1.0);
            let mut bound = solve_min(region, &negated, settings, Direction::Max)?;
            bound.primal_value = -bound.primal_value;
            bound.dual_bound = -bound.dual_bound;
            Ok(bound)
        }
    }
}

fn solve_min(
    region: &ConfidenceRegion,
    objective: &HermitianMatrix,
    settings: &SolverSettings,
    direction: Direction,
) -> Result<CertifiedBound> {
    let geometry = Geometry::new(region)?;
    let d = region.dim();
    let m = region.outcomes();
    let epsilon = region.epsilon();
    let freqs = &region.frequencies;

    // step sizes: tau * sigma * ||A||^2 <= 0.95
    let norm = geometry.op_norm.max(1e-12);
    let mut tau = 0.95f64.sqrt() / norm;
    let mut sigma = 0.95f64.sqrt() / norm;

    let mut rho = DensityMatrix::maximally_mixed(d).matrix().clone();
    let mut rho_bar = rho.clone();
    let mut dual = vec![0.0f64; m];

    let mut best_cert = f64::NEG_INFINITY;
    let mut best_anchor: Option<(HermitianMatrix, f64)> = None;
    let mut window_value = f64::INFINITY;
    let mut converged = false;
    let mut residual;
    let mut final_residual = f64::INFINITY;
    let mut stall_min = f64::INFINITY;
    let mut prev_stall_min = f64::INFINITY;
    let mut feasibility_confirmed = false;
    let mut iterations = 0;
    // the reported bound is the certificate, so convergence also demands a
    // small primal-dual gap, not just a settled primal
    let gap_tol = 1e-4 * (1.0 + objective.frobenius_norm());

    // the solver's running dual enters the certificate with flipped sign
    let cert_of = |y: &[f64]| -> Result<f64> {
        let flipped: Vec<f64> = y.iter().map(|v| -v).collect();
        certificate_value(objective, &geometry.effects, freqs, epsilon, &flipped)
    };

    for iter in 0..settings.max_iter {
        iterations = iter + 1;

        // dual ascent on the coupling, then the l1-ball prox via Moreau
        let image = geometry.apply(&rho_bar);
        let mut w: Vec<f64> = dual
            .iter()
            .zip(&image)
            .map(|(y, a)| y + sigma * a)
            .collect();
        let centered: Vec<f64> = w.iter().zip(freqs).map(|(wi, f)| wi / sigma - f).collect();
        let projected = project_l1_ball(&centered, epsilon);
        for ((wi, f), p) in w.iter_mut().zip(freqs).zip(&projected) {
            *wi -= sigma * (f + p);
        }
        let dual_next = w;

        // primal descent on the linear objective plus the coupling
        let gradient = geometry.apply_adjoint(&dual_next, d).add(objective);
        let candidate = rho.sub(&gradient.scale(tau));
        let rho_next = project_density(&candidate)?;

        rho_bar = rho_next.add(&rho_next.sub(&rho));
        rho = rho_next;
        dual = dual_next;

        let mismatch = region.mismatch(&rho);
        residual = (mismatch - epsilon).max(0.0);
        final_residual = residual;
        let slack = epsilon - mismatch;
        if best_anchor.as_ref().is_none_or(|(_, s)| slack > *s) {
            best_anchor = Some((rho.clone(), slack));
        }

        if iter % 25 == 0 {
            let cert = cert_of(&dual)?;
            if cert.is_finite() && cert > best_cert {
                best_cert = cert;
            }
        }

        // residual balancing: a persistently violated constraint means the
        // dual is growing too slowly, so shift step weight onto it
        if iter % 100 == 99 && residual > (100.0 * settings.tol).max(1e-5) && sigma < 1e3 / norm {
            sigma *= 1.2;
            tau /= 1.2;
        }

        // convergence: feasible iterate, stable objective over a window,
        // and a certificate close enough to it
        if iter % 50 == 49 {
            let value = objective.inner(&rho);
            let drift = (value - window_value).abs();
            window_value = value;
            if residual <= settings.tol && drift <= settings.tol * (1.0 + value.abs()) {
                let cert = cert_of(&dual)?;
                if cert.is_finite() && cert > best_cert {
                    best_cert = cert;
                }
                if value - best_cert <= gap_tol {
                    converged = true;
                    break;
                }
            }
        }

        // infeasibility heuristic: the best residual across consecutive
        // 500-iteration windows stops improving while staying large
        stall_min = stall_min.min(residual);
        if iter % 500 == 499 {
            if !feasibility_confirmed
                && iter > 1000
                && stall_min > 10.0 * settings.feas_tol
                && stall_min > prev_stall_min - 1e-9 * stall_min.max(1.0)
            {
                match feasibility_check(region, settings)? {
                    Feasibility::Infeasible { .. } => {
                        return Ok(finish_infeasible(direction, region, rho, iterations));
                    }
                    Feasibility::Feasible => feasibility_confirmed = true,
                }
            }
            prev_stall_min = stall_min;
            stall_min = f64::INFINITY;
        }
    }

    let cert = cert_of(&dual)?;
    if cert.is_finite() && cert > best_cert {
        best_cert = cert;
    }

    let status = if converged {
        SolveStatus::Converged
    } else {
        if final_residual > settings.feas_tol && !feasibility_confirmed {
            if let Feasibility::Infeasible { .. } = feasibility_check(region, settings)? {
                return Ok(finish_infeasible(direction, region, rho, iterations));
            }
        }
        SolveStatus::IterationLimit
    };

    // primal repair: if the final iterate is slightly infeasible, mix toward
    // the most-slack iterate seen; the mixture is feasible by convexity, so
    // the reported primal value genuinely upper-bounds the minimum
    let mut final_rho = rho;
    let mut final_mismatch = region.mismatch(&final_rho);
    if final_mismatch > epsilon {
        if let Some((anchor, slack)) = &best_anchor {
            if *slack >= 0.0 {
                let excess = final_mismatch - epsilon;
                let theta = (excess / (excess + slack)).clamp(0.0, 1.0);
                let mixed = final_rho.scale(1.0 - theta).add(&anchor.scale(theta));
                let mixed_mismatch = region.mismatch(&mixed);
                if mixed_mismatch < final_mismatch {
                    final_rho = mixed;
                    final_mismatch = mixed_mismatch;
                }
            }
        }
    }
    let constraint_slack = epsilon - final_mismatch;
    let primal_residual = (-constraint_slack).max(0.0);
    let primal_value = objective.inner(&final_rho);
    // an iterate that is still (marginally) infeasible can undercut the true
    // minimum; shrinking the certificate to it keeps the reported pair
    // consistent and remains a valid lower bound
    let dual_bound = if primal_residual > 0.0 {
        best_cert.min(primal_value)
    } else {
        best_cert
    };

    Ok(CertifiedBound {
        direction,
        primal_value,
        dual_bound,
        iterate: DensityMatrix::from_projection(final_rho),
        primal_residual,
        constraint_slack,
        iterations,
        status,
    })
}

fn finish_infeasible(
    direction: Direction,
    region: &ConfidenceRegion,
    rho: HermitianMatrix,
    iterations: usize,
) -> CertifiedBound {
    let mismatch = region.mismatch(&rho);
    CertifiedBound {
        direction,
        primal_value: f64::NAN,
        dual_bound: f64::NAN,
        iterate: DensityMatrix::from_projection(rho),
        primal_residual: (mismatch - region.epsilon()).max(0.0),
        constraint_slack: region.epsilon() - mismatch,
        iterations,
        status: SolveStatus::Infeasible,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{computational_povm, pauli_z, stream_rng, Observable, Povm};

    fn z_region(freqs: [f64; 2], eps1: f64) -> ConfidenceRegion {
        ConfidenceRegion::new(computational_povm(1), freqs.to_vec(), eps1, 0.0, 0.003).unwrap()
    }

    #[test]
    fn build_region_radius() {
        let z = computational_povm(1);
        let record = crate::stats::MeasurementRecord {
            counts: vec![900, 100],
            shots: 1000,
            povm_id: z.id().to_string(),
            renormalization: None,
        };
        let region = build_region(&z, &record, 0.05, 0.003).unwrap();
        let expect = crate::stats::bhc_epsilon(1000, 2, 0.003).unwrap();
        assert!((region.eps1 - expect).abs() < 1e-15);
        assert!((region.epsilon() - (expect + 0.05)).abs() < 1e-15);
        assert_eq!(region.frequencies, vec![0.9, 0.1]);
        // eps2 = 0 leaves the radius at the BHC value alone
        let bare = build_region(&z, &record, 0.0, 0.003).unwrap();
        assert!((bare.epsilon() - expect).abs() < 1e-15);
    }

    #[test]
    fn region_block_round_numbers() {
        let region = z_region([1.0, 0.0], 0.2);
        let block = region.to_block();
        assert!(block.contains("eps1 = 0.2"));
        assert!(block.contains("f = 1,0"));
    }

    #[test]
    fn dual_certificate_trivial_multipliers() {
        let region = z_region([0.5, 0.5], 0.1);
        let objective = Observable::new(pauli_z());
        let value = dual_certificate(&region, &objective, &[0.0, 0.0]).unwrap();
        assert!((value + 1.0).abs() < 1e-12);
        assert!(dual_certificate(&region, &objective, &[0.0]).is_err());
    }

    #[test]
    fn dual_certificate_weak_duality_random_feasible_points() {
        let mut rng = stream_rng(51, 0);
        use rand::Rng;
        for _ in 0..30 {
            let povm = crate::oracle::random_povm(3, 2, &mut rng);
            // feasible by construction: frequencies from an actual state
            let psi = crate::quantum::haar_random_pure_state(2, &mut rng);
            let rho = psi.density();
            let freqs = crate::stats::born_probabilities(&povm, &rho).unwrap();
            let region =
                ConfidenceRegion::new(povm, freqs, rng.gen::<f64>() * 0.4, 0.0, 0.01).unwrap();
            let objective = Observable::new(pauli_z());
            let y: Vec<f64> = (0..3).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
            let cert = dual_certificate(&region, &objective, &y).unwrap();
            let feasible_value = rho.expectation(objective.matrix());
            assert!(
                cert <= feasible_value + 1e-9,
                "certificate {cert} exceeds feasible value {feasible_value}"
            );
        }
    }

    #[test]
    fn qubit_example_min_is_point_eight() {
        // forcing tr(E_0 rho) >= 0.9 pins <sigma_z> at 0.8
        let region = z_region([1.0, 0.0], 0.2);
        let objective = Observable::new(pauli_z());
        let bound = certify(&region, &objective, Direction::Min, &Default::default()).unwrap();
        assert_eq!(bound.status, SolveStatus::Converged);
        assert!(
            (bound.dual_bound - 0.8).abs() < 1e-4,
            "dual {}",
            bound.dual_bound
        );
        assert!((bound.primal_value - 0.8).abs() < 1e-4);
        assert!(bound.dual_bound <= bound.primal_value + 1e-9);
        // scalar multiplier grid search reaches the same value
        let mut best = f64::NEG_INFINITY;
        for i in -80..=80 {
            let y0 = i as f64 * 0.05;
            for j in -80..=80 {
                let y1 = j as f64 * 0.05;
                let c = dual_certificate(&region, &objective, &[y0, y1]).unwrap();
                best = best.max(c);
            }
        }
        assert!(best >= 0.8 - 1e-4, "grid best {best}");
    }

    #[test]
    fn vacuous_epsilon_returns_bottom_eigenvalue() {
        let region = z_region([1.0, 0.0], 2.0);
        let objective = Observable::new(pauli_z());
        let bound = certify(&region, &objective, Direction::Min, &Default::default()).unwrap();
        assert!((bound.dual_bound + 1.0).abs() < 1e-6);
        assert!((bound.primal_value + 1.0).abs() < 1e-6);
    }

    #[test]
    fn degenerate_objective_constant() {
        // C proportional to the identity: every feasible state gives the
        // same value; no special-casing required
        let region = z_region([0.7, 0.3], 0.1);
        let objective = Observable::new(HermitianMatrix::identity(2).scale(0.4));
        let bound = certify(&region, &objective, Direction::Min, &Default::default()).unwrap();
        assert!((bound.primal_value - 0.4).abs() < 1e-9);
        assert!((bound.dual_bound - 0.4).abs() < 1e-6);
    }

    #[test]
    fn max_is_negated_min() {
        let region = z_region([0.8, 0.2], 0.15);
        let objective = Observable::new(pauli_z());
        let max = certify(&region, &objective, Direction::Max, &Default::default()).unwrap();
        let neg = Observable::new(pauli_z().scale(-1.0));
        let min = certify(&region, &neg, Direction::Min, &Default::default()).unwrap();
        assert_eq!(max.dual_bound, -min.dual_bound);
        assert_eq!(max.primal_value, -min.primal_value);
        assert_eq!(max.iterations, min.iterations);
    }

    #[test]
    fn truth_state_between_min_and_max() {
        let mut rng = stream_rng(52, 0);
        for _ in 0..5 {
            let povm = crate::oracle::random_povm(4, 2, &mut rng);
            let psi = crate::quantum::haar_random_pure_state(2, &mut rng);
            let rho = psi.density();
            let freqs = crate::stats::born_probabilities(&povm, &rho).unwrap();
            let region = ConfidenceRegion::new(povm, freqs, 0.05, 0.0, 0.01).unwrap();
            let objective = Observable::new(pauli_z());
            let truth = rho.expectation(objective.matrix());
            let lo = certify(&region, &objective, Direction::Min, &Default::default()).unwrap();
            let hi = certify(&region, &objective, Direction::Max, &Default::default()).unwrap();
            assert!(lo.dual_bound <= truth + 1e-6, "{} > {truth}", lo.dual_bound);
            assert!(hi.dual_bound >= truth - 1e-6, "{} < {truth}", hi.dual_bound);
        }
    }

    #[test]
    fn monotone_in_epsilon() {
        let objective = Observable::new(pauli_z());
        let mut last_min = f64::NEG_INFINITY;
        let mut last_max = f64::INFINITY;
        for i in 0..6 {
            let eps = 0.05 + 0.15 * i as f64;
            let region = z_region([0.9, 0.1], eps);
            let lo = certify(&region, &objective, Direction::Min, &Default::default()).unwrap();
            let hi = certify(&region, &objective, Direction::Max, &Default::default()).unwrap();
            if i > 0 {
                assert!(lo.primal_value <= last_min + 1e-6);
                assert!(hi.primal_value >= last_max - 1e-6);
            }
            last_min = lo.primal_value;
            last_max = hi.primal_value;
        }
    }

    #[test]
    fn feasibility_examples() {
        // vacuous radius is always feasible
        let region = z_region([1.0, 0.0], 2.0);
        assert_eq!(
            feasibility_check(&region, &Default::default()).unwrap(),
            Feasibility::Feasible
        );
        // exact Born frequencies of a state are feasible at radius zero
        let region = z_region([0.5, 0.5], 0.0);
        assert_eq!(
            feasibility_check(&region, &Default::default()).unwrap(),
            Feasibility::Feasible
        );
        // both effects I/2: the mismatch is exactly 1 for every state
        let half = HermitianMatrix::identity(2).scale(0.5);
        let trivial = Povm::new(vec![half.clone(), half]).unwrap();
        let region = ConfidenceRegion::new(trivial, vec![1.0, 0.0], 0.5, 0.0, 0.003).unwrap();
        match feasibility_check(&region, &Default::default()).unwrap() {
            Feasibility::Infeasible { gap } => assert!(gap > 1e-3),
            Feasibility::Feasible => panic!("should be infeasible"),
        }
    }

    #[test]
    fn infeasible_solve_reports_status() {
        let half = HermitianMatrix::identity(2).scale(0.5);
        let trivial = Povm::new(vec![half.clone(), half]).unwrap();
        let region = ConfidenceRegion::new(trivial, vec![1.0, 0.0], 0.5, 0.0, 0.003).unwrap();
        let objective = Observable::new(pauli_z());
        let bound = certify(&region, &objective, Direction::Min, &Default::default()).unwrap();
        assert_eq!(bound.status, SolveStatus::Infeasible);
        assert!(bound.dual_bound.is_nan());
    }

    #[test]
    fn solver_matches_bloch_oracle() {
        let mut rng = stream_rng(53, 0);
        use rand::Rng;
        for trial in 0..10 {
            let m = 2 + trial % 3;
            let povm = crate::oracle::random_povm(m, 2, &mut rng);
            let psi = crate::quantum::haar_random_pure_state(2, &mut rng);
            let mut freqs = crate::stats::born_probabilities(&povm, &psi.density()).unwrap();
            // jitter inside the ball so the frequencies are not exactly Born
            let eps = 0.1 + rng.gen::<f64>() * 0.3;
            let jitter = 0.25 * eps / m as f64;
            for f in freqs.iter_mut() {
                *f = (*f + jitter * (rng.gen::<f64>() - 0.5)).clamp(0.0, 1.0);
            }
            let norm: f64 = freqs.iter().sum();
            for f in freqs.iter_mut() {
                *f /= norm;
            }
            let herm = crate::oracle::random_povm(2, 2, &mut rng)
                .effect(0)
                .scale(2.0);
            let objective = Observable::new(herm);
            let region =
                ConfidenceRegion::new(povm.clone(), freqs.clone(), eps, 0.0, 0.01).unwrap();
            let bound = certify(&region, &objective, Direction::Min, &Default::default()).unwrap();
            let oracle = crate::oracle::bloch_min_trace(objective.matrix(), &povm, &freqs, eps);
            let oracle_min = oracle.minimum.expect("feasible instance");
            let scale = 1.0 + objective.matrix().frobenius_norm();
            assert!(
                (bound.dual_bound - oracle_min).abs() <= 1e-3 * scale,
                "dual {} vs oracle {oracle_min}",
                bound.dual_bound
            );
            assert!(bound.dual_bound <= oracle_min + 1e-9);
        }
    }
}
