//! Shot-noise radius and finite-shot measurement simulation.

use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, Povm};
use rand::Rng;

/// Outcome counts of a finite-shot measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub counts: Vec<u64>,
    pub shots: u64,
    pub povm_id: String,
    /// Sum of the raw outcome weights when it was not 1 and the distribution
    /// had to be renormalized before sampling (unnormalized effect lists).
    pub renormalization: Option<f64>,
}

impl MeasurementRecord {
    pub fn outcomes(&self) -> usize {
        self.counts.len()
    }

    /// Empirical frequencies counts / N.
    pub fn frequencies(&self) -> FrequencyVector {
        FrequencyVector {
            frequencies: self
                .counts
                .iter()
                .map(|&c| c as f64 / self.shots as f64)
                .collect(),
        }
    }

    /// CSV row: povm_id, N, then one count column per outcome.
    pub fn to_csv_row(&self) -> String {
        let mut row = format!("{},{}", self.povm_id, self.shots);
        for c in &self.counts {
            row.push(',');
            row.push_str(&c.to_string());
        }
        row
    }
}

/// Empirical outcome frequencies, each in [0, 1] and summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector {
    frequencies: Vec<f64>,
}

impl FrequencyVector {
    pub fn new(frequencies: Vec<f64>) -> Result<Self> {
        for (index, &f) in frequencies.iter().enumerate() {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::NegativeProbability { index, value: f });
            }
        }
        let sum: f64 = frequencies.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::DegenerateDistribution { sum });
        }
        Ok(Self { frequencies })
    }

    pub fn values(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }
}

/// Bretagnolle-Huber-Carol radius: with probability 1 - delta the l1
/// distance between a multinomial's empirical frequencies and its parameter
/// vector is at most sqrt((2/N) ln(2^m / delta)).
///
/// Evaluated as sqrt((2/N)(m ln 2 - ln delta)) so large m cannot overflow.
pub fn bhc_epsilon(n_shots: u64, m_outcomes: usize, delta: f64) -> Result<f64> {
    if n_shots == 0 {
        return Err(Error::InvalidParameter {
            name: "n_shots",
            value: 0.0,
            constraint: "N >= 1",
        });
    }
    if m_outcomes == 0 {
        return Err(Error::InvalidParameter {
            name: "m_outcomes",
            value: 0.0,
            constraint: "m >= 1",
        });
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            constraint: "0 < delta <= 1",
        });
    }
    let log_term = m_outcomes as f64 * std::f64::consts::LN_2 - delta.ln();
    Ok((2.0 / n_shots as f64 * log_term).sqrt())
}

/// Born-rule outcome weights tr(E_k rho), clipped to [0, 1] at 1e-12.
/// Negative values beyond the clip tolerance signal invalid inputs. The
/// weights sum to 1 exactly when the POVM is complete.
pub fn born_probabilities(povm: &Povm, state: &DensityMatrix) -> Result<Vec<f64>> {
    if povm.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            got: state.dim(),
            context: "Born rule",
        });
    }
    povm.effects()
        .iter()
        .enumerate()
        .map(|(index, effect)| {
            let p = state.expectation(effect);
            if p < -1e-12 {
                return Err(Error::NegativeProbability { index, value: p });
            }
            Ok(p.clamp(0.0, 1.0))
        })
        .collect()
}

/// Draw counts from a multinomial distribution by inverse-CDF sampling of
/// `n` independent categorical draws. Deterministic given the generator.
pub fn sample_multinomial<R: Rng + ?Sized>(probs: &[f64], n: u64, rng: &mut R) -> Vec<u64> {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let total = acc;
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..n {
        let u: f64 = rng.gen::<f64>() * total;
        // first index with cdf >= u
        let k = cdf.partition_point(|&c| c < u).min(probs.len() - 1);
        counts[k] += 1;
    }
    counts
}

/// Measure `n_shots` copies of `state` with `povm`. If the outcome weights
/// do not sum to 1 (unnormalized effect list), they are renormalized before
/// sampling and the raw sum is logged in the record.
pub fn simulate_measurement<R: Rng + ?Sized>(
    povm: &Povm,
    state: &DensityMatrix,
    n_shots: u64,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    if n_shots == 0 {
        return Err(Error::InvalidParameter {
            name: "n_shots",
            value: 0.0,
            constraint: "N >= 1",
        });
    }
    let probs = born_probabilities(povm, state)?;
    let sum: f64 = probs.iter().sum();
    if sum <= 0.0 {
        return Err(Error::DegenerateDistribution { sum });
    }
    let renormalization = if (sum - 1.0).abs() > 1e-9 {
        Some(sum)
    } else {
        None
    };
    let counts = sample_multinomial(&probs, n_shots, rng);
    Ok(MeasurementRecord {
        counts,
        shots: n_shots,
        povm_id: povm.id().to_string(),
        renormalization,
    })
}

/// Fraction of `n_trials` multinomial draws whose empirical frequencies land
/// farther than the BHC radius from the true parameter vector, in l1.
pub fn bhc_coverage_trial<R: Rng + ?Sized>(
    probs: &[f64],
    n_shots: u64,
    delta: f64,
    n_trials: usize,
    rng: &mut R,
) -> Result<f64> {
    let epsilon = bhc_epsilon(n_shots, probs.len(), delta)?;
    let mut violations = 0usize;
    for _ in 0..n_trials {
        let counts = sample_multinomial(probs, n_shots, rng);
        let l1: f64 = counts
            .iter()
            .zip(probs)
            .map(|(&c, &p)| (c as f64 / n_shots as f64 - p).abs())
            .sum();
        if l1 > epsilon {
            violations += 1;
        }
    }
    Ok(violations as f64 / n_trials as f64)
}
