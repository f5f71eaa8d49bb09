//! Seeded, splittable randomness.
//!
//! All stochastic code takes an explicit generator. Experiments derive one
//! independent ChaCha stream per (purpose, trial) pair from a root seed, so
//! trial results do not depend on execution order.

use super::PureState;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Deterministic generator for stream `stream` of root seed `seed`.
/// Distinct streams are statistically independent.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard normal via Box-Muller on the half-open unit interval.
fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // in (0, 1], log is finite
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let phi = 2.0 * std::f64::consts::PI * u2;
    (r * phi.cos(), r * phi.sin())
}

/// Haar-random pure state: a complex Gaussian vector, normalized. Unitary
/// invariance of the Gaussian makes the distribution Haar.
pub fn haar_random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    assert!(dim >= 1);
    loop {
        let amplitudes: Vec<Complex64> = (0..dim)
            .map(|_| {
                let (re, im) = standard_normal(rng);
                Complex64::new(re, im)
            })
            .collect();
        if let Ok(state) = PureState::normalized(amplitudes) {
            return state;
        }
    }
}
