//! Threshold decisions on domain sums from a fixed number of array shots.
//!
//! The statistic is `S·σ_z = 2N·Σ sign·W` with `S = |D|`. Each shot is a
//! `±1` outcome, so by Hoeffding `n ≥ S²·ln(2/δ)/(2ε²)` shots put the
//! estimate within `ε` of its mean except with probability `δ`. Nothing in
//! the count depends on `N`.

use serde::{Deserialize, Serialize};

use crate::array::run_program;
use crate::domain::{domain_program, PhaseDomain};
use crate::error::{Error, Result};
use crate::sampling::{rng_for, sample_polarization, Z_STREAM};
use crate::state::QuditState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Above,
    Below,
    Abstain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionParams {
    pub threshold: f64,
    pub epsilon: f64,
    pub delta: f64,
}

impl DecisionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon {} must be positive",
                self.epsilon
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "delta {} must lie in (0, 1)",
                self.delta
            )));
        }
        if !self.threshold.is_finite() {
            return Err(Error::InvalidArgument("threshold must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    /// Sampled `S·σ_z`.
    pub estimate: f64,
    /// `estimate ± ε`
    pub interval: (f64, f64),
    pub shots: u64,
    pub scale: f64,
    pub stderr: f64,
}

/// `⌈S²·ln(2/δ)/(2ε²)⌉`
pub fn required_shots(scale: f64, epsilon: f64, delta: f64) -> u64 {
    (scale * scale * (2.0 / delta).ln() / (2.0 * epsilon * epsilon)).ceil() as u64
}

pub fn decide_threshold(
    rho: &QuditState,
    domain: &PhaseDomain,
    params: &DecisionParams,
    seed: u64,
) -> Result<Decision> {
    params.validate()?;
    let ps = domain_program(domain)?;
    let scale = ps.scale();
    let shots = required_shots(scale, params.epsilon, params.delta);
    let exact = run_program(rho, &ps)?;
    let sample = sample_polarization(exact.sigma_z, shots, &mut rng_for(seed, Z_STREAM));
    let estimate = scale * sample.mean;
    let verdict = if estimate >= params.threshold + params.epsilon {
        Verdict::Above
    } else if estimate <= params.threshold - params.epsilon {
        Verdict::Below
    } else {
        Verdict::Abstain
    };
    Ok(Decision {
        verdict,
        estimate,
        interval: (estimate - params.epsilon, estimate + params.epsilon),
        shots,
        scale,
        stderr: scale * sample.stderr,
    })
}
