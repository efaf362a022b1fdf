//! Shot sampling of ±1 ancilla outcomes.
//!
//! Randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! the caller's 64-bit seed. Independent measurement runs of one call use
//! separate ChaCha streams of the same seed (see the `*_STREAM` constants),
//! so results are reproducible across platforms and independent of how
//! many draws another run consumed.

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// Stream for z-basis readouts (and the hermitian program of an expectation).
pub const Z_STREAM: u64 = 0;
/// Stream for y-basis readouts (and the anti-hermitian program).
pub const Y_STREAM: u64 = 1;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub shots: u64,
    pub plus_count: u64,
}

/// Binomial standard error of the mean of `shots` ±1 outcomes.
pub fn standard_error(mean: f64, shots: u64) -> f64 {
    ((1.0 - mean * mean).max(0.0) / shots as f64).sqrt()
}

/// Draws `shots` outcomes of an observable with eigenvalues ±1 and exact
/// expectation `expectation`, i.e. `P(+1) = (1 + expectation)/2`.
pub fn sample_polarization(expectation: f64, shots: u64, rng: &mut ChaCha20Rng) -> ShotEstimate {
    assert!(shots > 0, "at least one shot is required");
    let p_plus = ((1.0 + expectation) / 2.0).clamp(0.0, 1.0);
    let coin = Bernoulli::new(p_plus).expect("probability clamped to [0, 1]");
    let plus_count = (0..shots).filter(|_| coin.sample(rng)).count() as u64;
    let mean = (2.0 * plus_count as f64 - shots as f64) / shots as f64;
    ShotEstimate {
        mean,
        stderr: standard_error(mean, shots),
        shots,
        plus_count,
    }
}
