//! Numerical tolerances shared across the crate.
//!
//! Every check takes its tolerance from a [`Tolerances`] value; nothing
//! compares floats against a literal.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Construction-level checks: state normalization, hermiticity of inputs,
    /// program normalization.
    pub construction: f64,
    /// Circuit-level checks: unitarity of controlled gates, agreement between
    /// simulated polarizations and trace oracles.
    pub circuit: f64,
    /// Lowest eigenvalue accepted for a density matrix.
    pub eigenvalue_floor: f64,
    /// Matching eigenvalues of translation operators to `exp(iπc/N)`.
    pub eigenphase: f64,
    /// Expansion coefficients below this magnitude are dropped from programs.
    pub coefficient_cutoff: f64,
    /// Largest residual for which a cat map counts as exactly covariant.
    pub covariance: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        construction: 1e-12,
        circuit: 1e-10,
        eigenvalue_floor: 1e-10,
        eigenphase: 1e-8,
        coefficient_cutoff: 1e-14,
        covariance: 1e-8,
    };

    /// Loosens (or tightens) the construction and circuit checks to `tol`,
    /// which is what the CLI `--tol` flag controls.
    pub fn with_override(tol: f64) -> Self {
        Tolerances {
            construction: tol,
            circuit: tol,
            eigenvalue_floor: tol.max(Self::DEFAULT.eigenvalue_floor),
            ..Self::DEFAULT
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
