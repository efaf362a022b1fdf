//! Programmable gate arrays.
//!
//! Registers, in order: ancilla, `q` register, `p` register, optional sign
//! qubit, system. With the ancilla in `|1⟩` and the program in
//! `|q⟩|p⟩|φ⟩`, the network applies `(−1)^φ·A(q,p)` to the system as the
//! gate sequence
//!
//! 1. `V^{−p}` controlled by the `p` register,
//! 2. `R`,
//! 3. `U^q` controlled by the `q` register,
//! 4. the phase `exp(iπ·pq/N)` on `|q⟩|p⟩`,
//! 5. `σ_z` on the sign qubit,
//!
//! each conditioned on the ancilla. With the ancilla in `|0⟩` nothing
//! happens. Registers have dimension `N` or `2N`; a register of dimension
//! `R` applies powers `0..R`.

use serde::{Deserialize, Serialize};

use crate::circuit::{hadamard, polarizations, JointState, SystemAction};
use crate::error::{Error, Result};
use crate::linalg::{unit_phase, C64, ONE};
use crate::phase_space::{clock_power, reflection, shift_power};
use crate::program::{compile_program, hermitian_split, OperatorSpec, ProgramState};
use crate::sampling::{rng_for, sample_polarization, Y_STREAM, Z_STREAM};
use crate::scattering::{CircuitResult, Mode};
use crate::state::QuditState;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayConfig {
    pub dim: usize,
    pub register_dim: usize,
    pub include_sign_register: bool,
}

impl ArrayConfig {
    /// Point array: `q`, `p` registers over the full `2N` grid, no sign qubit.
    pub fn point(dim: usize) -> Self {
        ArrayConfig {
            dim,
            register_dim: 2 * dim,
            include_sign_register: false,
        }
    }

    pub fn signed(dim: usize, register_dim: usize) -> Self {
        ArrayConfig {
            dim,
            register_dim,
            include_sign_register: true,
        }
    }

    pub fn program_dims(&self) -> Vec<usize> {
        let r = self.register_dim;
        if self.include_sign_register {
            vec![r, r, 2]
        } else {
            vec![r, r]
        }
    }
}

/// Runs the array on `|0⟩_anc ⊗ program ⊗ ρ` up to (not including) the
/// final ancilla rotation.
fn run_network(rho: &QuditState, config: &ArrayConfig, program: &[(usize, C64)]) -> JointState {
    let n = config.dim;
    let mut state = JointState::new(&config.program_dims(), program, &rho.density_matrix());
    state.apply_ancilla_gate(&hadamard());

    let r = reflection(n);
    state.apply_controlled(|anc, d| match anc {
        1 => SystemAction::Monomial(clock_power(n, -(d[1] as i64))),
        _ => SystemAction::Identity,
    });
    state.apply_controlled(|anc, _| match anc {
        1 => SystemAction::Monomial(r.clone()),
        _ => SystemAction::Identity,
    });
    state.apply_controlled(|anc, d| match anc {
        1 => SystemAction::Monomial(shift_power(n, d[0] as i64)),
        _ => SystemAction::Identity,
    });
    state.apply_controlled(|anc, d| match anc {
        1 => SystemAction::Phase(unit_phase((d[0] * d[1]) as i64, n)),
        _ => SystemAction::Identity,
    });
    if config.include_sign_register {
        state.apply_controlled(|anc, d| match (anc, d[2]) {
            (1, 1) => SystemAction::Phase(-ONE),
            _ => SystemAction::Identity,
        });
    }
    state
}

fn check_dims(rho: &QuditState, n: usize) -> Result<()> {
    if rho.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Program `|q⟩|p⟩` on `2N`-dimensional registers; `⟨σ_z⟩ = Re Tr(ρ·A(q,p))`.
pub fn run_point_program(rho: &QuditState, q: usize, p: usize) -> Result<CircuitResult> {
    let config = ArrayConfig::point(rho.dim());
    let side = config.register_dim;
    if q >= side || p >= side {
        return Err(Error::IndexOutOfRange { q, p, side });
    }
    let pre = run_network(rho, &config, &[(q * side + p, ONE)]);
    let (z, y) = polarizations(&pre);
    Ok(CircuitResult::exact(z, y))
}

/// Signed array on `|Ψ⟩_P = program_vector(ps)`;
/// `⟨σ_z⟩ = Tr(ρ·Σ c²·(−1)^φ·A(q,p))`.
pub fn run_program(rho: &QuditState, ps: &ProgramState) -> Result<CircuitResult> {
    check_dims(rho, ps.dim())?;
    let config = ArrayConfig::signed(ps.dim(), ps.register_dim());
    let program: Vec<(usize, C64)> = ps
        .program_vector()
        .into_iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .collect();
    let pre = run_network(rho, &config, &program);
    let (z, y) = polarizations(&pre);
    Ok(CircuitResult::exact(z, y))
}

pub fn run_program_sampled(rho: &QuditState, ps: &ProgramState, shots: u64, seed: u64) -> Result<CircuitResult> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let exact = run_program(rho, ps)?;
    Ok(CircuitResult::sampled_from(&exact, shots, seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Estimation {
    Exact,
    Sampled { shots: u64, seed: u64 },
}

/// One half (hermitian or anti-hermitian) of an expectation evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartResult {
    pub scale: f64,
    pub sigma_z: f64,
    pub stderr: f64,
    pub terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub re: f64,
    pub im: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub mode: Mode,
    pub shots: u64,
    pub seed: Option<u64>,
    pub hermitian: Option<PartResult>,
    pub anti_hermitian: Option<PartResult>,
    /// Set when the operator expands to all-zero coefficients; the value is
    /// then exactly 0.
    pub degenerate: bool,
}

impl Expectation {
    pub fn value(&self) -> C64 {
        C64::new(self.re, self.im)
    }

    pub fn scale_h(&self) -> f64 {
        self.hermitian.as_ref().map_or(0.0, |p| p.scale)
    }

    pub fn scale_k(&self) -> f64 {
        self.anti_hermitian.as_ref().map_or(0.0, |p| p.scale)
    }
}

fn evaluate_part(rho: &QuditState, ps: &ProgramState, estimation: Estimation, stream: u64) -> Result<PartResult> {
    let exact = run_program(rho, ps)?;
    let (sigma_z, stderr) = match estimation {
        Estimation::Exact => (exact.sigma_z, 0.0),
        Estimation::Sampled { shots, seed } => {
            let est = sample_polarization(exact.sigma_z, shots, &mut rng_for(seed, stream));
            (est.mean, est.stderr)
        }
    };
    Ok(PartResult {
        scale: ps.scale(),
        sigma_z,
        stderr,
        terms: ps.terms().len(),
    })
}

/// `Tr(ρO)` through the array: expand, split into hermitian parts, compile
/// one program per nonzero part, run, and recombine as
/// `S_h·⟨σ_z⟩_h + i·S_k·⟨σ_z⟩_k`.
///
/// In sampled mode the hermitian program draws from [`Z_STREAM`] and the
/// anti-hermitian one from [`Y_STREAM`] of the seed.
pub fn expectation(
    rho: &QuditState,
    o: &OperatorSpec,
    estimation: Estimation,
    tol: &Tolerances,
) -> Result<Expectation> {
    check_dims(rho, o.dim())?;
    if let Estimation::Sampled { shots: 0, .. } = estimation {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let (h, k) = hermitian_split(o)?;
    let mut parts = [None, None];
    for (slot, (coeffs, stream)) in parts.iter_mut().zip([(&h, Z_STREAM), (&k, Y_STREAM)]) {
        match compile_program(coeffs, tol) {
            Ok(ps) => *slot = Some(evaluate_part(rho, &ps, estimation, stream)?),
            Err(Error::DegenerateProgram) => {}
            Err(e) => return Err(e),
        }
    }
    let [hermitian, anti_hermitian] = parts;
    let restore = |part: &Option<PartResult>| {
        part.as_ref()
            .map_or((0.0, 0.0), |p| (p.scale * p.sigma_z, p.scale * p.stderr))
    };
    let (re, stderr_re) = restore(&hermitian);
    let (im, stderr_im) = restore(&anti_hermitian);
    let (mode, shots, seed) = match estimation {
        Estimation::Exact => (Mode::Exact, 0, None),
        Estimation::Sampled { shots, seed } => (Mode::Sampled, shots, Some(seed)),
    };
    Ok(Expectation {
        re,
        im,
        stderr_re,
        stderr_im,
        mode,
        shots,
        seed,
        degenerate: hermitian.is_none() && anti_hermitian.is_none(),
        hermitian,
        anti_hermitian,
    })
}
