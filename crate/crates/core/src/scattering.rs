//! The scattering circuit: Hadamard on an ancilla, ancilla-controlled `A`
//! on the system, then a final basis change on the ancilla. Its
//! polarizations are `⟨σ_z⟩ = Re Tr(Aρ)` and `⟨σ_y⟩ = Im Tr(Aρ)`.
//!
//! The y readout rotates the ancilla with `H·S†` in place of the final
//! Hadamard; reading σ_y after the Hadamard itself would flip the sign of
//! the imaginary part.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::circuit::{hadamard, polarizations, JointState, SystemAction};
use crate::error::{Error, Result};
use crate::linalg::{trace_product, ComplexMatrix, C64, ONE};
use crate::sampling::{rng_for, sample_polarization, Y_STREAM, Z_STREAM};
use crate::state::QuditState;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitResult {
    pub sigma_z: f64,
    pub sigma_y: f64,
    pub mode: Mode,
    /// Shots per measurement basis; 0 in exact mode.
    pub shots: u64,
    pub seed: Option<u64>,
    pub stderr_z: f64,
    pub stderr_y: f64,
}

impl CircuitResult {
    pub fn exact(sigma_z: f64, sigma_y: f64) -> Self {
        CircuitResult {
            sigma_z,
            sigma_y,
            mode: Mode::Exact,
            shots: 0,
            seed: None,
            stderr_z: 0.0,
            stderr_y: 0.0,
        }
    }

    /// Replaces the exact polarizations with `shots` sampled outcomes per
    /// basis, z on [`Z_STREAM`] and y on [`Y_STREAM`] of `seed`.
    pub fn sampled_from(exact: &CircuitResult, shots: u64, seed: u64) -> Self {
        let z = sample_polarization(exact.sigma_z, shots, &mut rng_for(seed, Z_STREAM));
        let y = sample_polarization(exact.sigma_y, shots, &mut rng_for(seed, Y_STREAM));
        CircuitResult {
            sigma_z: z.mean,
            sigma_y: y.mean,
            mode: Mode::Sampled,
            shots,
            seed: Some(seed),
            stderr_z: z.stderr,
            stderr_y: y.stderr,
        }
    }

    pub fn as_complex(&self) -> C64 {
        C64::new(self.sigma_z, self.sigma_y)
    }
}

fn check_inputs(rho: &QuditState, a: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    if !a.is_square() || a.rows() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: a.rows(),
        });
    }
    let deviation = a.unitarity_deviation();
    if deviation > tol.circuit {
        return Err(Error::NotUnitary {
            deviation,
            tolerance: tol.circuit,
        });
    }
    Ok(())
}

/// Joint state right before the ancilla readout.
fn pre_measurement(rho: &QuditState, a: &ComplexMatrix) -> JointState {
    let mut state = JointState::new(&[], &[(0, ONE)], &rho.density_matrix());
    state.apply_ancilla_gate(&hadamard());
    let a = Arc::new(a.clone());
    state.apply_controlled(|anc, _| {
        if anc == 1 {
            SystemAction::Dense(Arc::clone(&a))
        } else {
            SystemAction::Identity
        }
    });
    state
}

pub fn scatter_exact(rho: &QuditState, a: &ComplexMatrix, tol: &Tolerances) -> Result<CircuitResult> {
    check_inputs(rho, a, tol)?;
    let (z, y) = polarizations(&pre_measurement(rho, a));
    Ok(CircuitResult::exact(z, y))
}

pub fn scatter_sampled(
    rho: &QuditState,
    a: &ComplexMatrix,
    shots: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<CircuitResult> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let exact = scatter_exact(rho, a, tol)?;
    Ok(CircuitResult::sampled_from(&exact, shots, seed))
}

/// `Tr(a·ρ)` evaluated directly; the independent check on the circuit.
pub fn trace_oracle(rho: &QuditState, a: &ComplexMatrix) -> Result<C64> {
    trace_product(a, &rho.density_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::{phase_point_op, PhasePointIndex};
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: Tolerances = Tolerances::DEFAULT;

    #[test]
    fn identity_on_ground_state() {
        let rho = QuditState::basis(3, 0);
        let r = scatter_exact(&rho, &ComplexMatrix::identity(3), &TOL).unwrap();
        assert!((r.sigma_z - 1.0).abs() < 1e-12);
        assert!(r.sigma_y.abs() < 1e-12);
    }

    #[test]
    fn reflection_fixes_ground_state() {
        let rho = QuditState::basis(3, 0);
        let a = phase_point_op(PhasePointIndex::new(3, 0, 0));
        let r = scatter_exact(&rho, &a, &TOL).unwrap();
        assert!((r.sigma_z - 1.0).abs() < 1e-12);
        assert!(r.sigma_y.abs() < 1e-12);
    }

    #[test]
    fn matches_trace_oracle_for_phase_point_ops() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rho = random::mixed_state(4, &mut rng);
        let a = phase_point_op(PhasePointIndex::new(4, 1, 2));
        let r = scatter_exact(&rho, &a, &TOL).unwrap();
        let t = trace_oracle(&rho, &a).unwrap();
        assert!((r.sigma_z - t.re).abs() < 1e-10);
        assert!((r.sigma_y - t.im).abs() < 1e-10);
        // hermitian operator: no imaginary part
        assert!(r.sigma_y.abs() < 1e-10);
    }

    #[test]
    fn imaginary_part_has_the_right_sign() {
        // A = diag(1, i) on |1⟩ gives Tr(Aρ) = i
        let a = ComplexMatrix::from_diagonal(&[ONE, C64::new(0.0, 1.0)]);
        let r = scatter_exact(&QuditState::basis(2, 1), &a, &TOL).unwrap();
        assert!((r.sigma_y - 1.0).abs() < 1e-12, "{r:?}");
        assert!(r.sigma_z.abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_operators() {
        let rho = QuditState::basis(2, 0);
        let not_unitary = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            scatter_exact(&rho, &not_unitary, &TOL),
            Err(Error::NotUnitary { .. })
        ));
        assert!(matches!(
            scatter_exact(&rho, &ComplexMatrix::identity(3), &TOL),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(scatter_sampled(&rho, &ComplexMatrix::identity(2), 0, 1, &TOL).is_err());
    }

    #[test]
    fn sampled_is_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random::mixed_state(3, &mut rng);
        let a = random::unitary(3, &mut rng);
        let r1 = scatter_sampled(&rho, &a, 2000, 17, &TOL).unwrap();
        let r2 = scatter_sampled(&rho, &a, 2000, 17, &TOL).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.seed, Some(17));
        let certain = scatter_sampled(&QuditState::basis(3, 0), &ComplexMatrix::identity(3), 321, 5, &TOL).unwrap();
        assert_eq!(certain.sigma_z, 1.0);
    }
}
