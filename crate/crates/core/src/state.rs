use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ONE, ZERO};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub enum StateKind {
    Pure(Vec<C64>),
    Mixed(ComplexMatrix),
}

/// A validated state of an `N`-level system, either a unit vector or a
/// density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState {
    dim: usize,
    kind: StateKind,
}

impl QuditState {
    pub fn pure(amplitudes: Vec<C64>, tol: &Tolerances) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol.construction {
            return Err(Error::InvalidState(format!("pure state has norm {norm}, expected 1")));
        }
        Ok(QuditState {
            dim: amplitudes.len(),
            kind: StateKind::Pure(amplitudes),
        })
    }

    pub fn mixed(rho: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::InvalidState(format!(
                "density matrix is {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        let herm = rho.hermiticity_deviation();
        if herm > tol.construction {
            return Err(Error::InvalidState(format!(
                "density matrix is not hermitian (deviation {herm:e})"
            )));
        }
        let trace = rho.trace();
        if (trace - ONE).norm() > tol.construction {
            return Err(Error::InvalidState(format!(
                "density matrix has trace {trace}, expected 1"
            )));
        }
        let min_eigenvalue = SymmetricEigen::new(rho.to_nalgebra())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -tol.eigenvalue_floor {
            return Err(Error::InvalidState(format!(
                "density matrix has negative eigenvalue {min_eigenvalue:e}"
            )));
        }
        Ok(QuditState {
            dim: rho.rows(),
            kind: StateKind::Mixed(rho),
        })
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut amps = vec![ZERO; dim];
        amps[k] = ONE;
        QuditState {
            dim,
            kind: StateKind::Pure(amps),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        assert!(dim >= 1);
        QuditState {
            dim,
            kind: StateKind::Mixed(ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &StateKind {
        &self.kind
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.kind, StateKind::Pure(_))
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        match &self.kind {
            StateKind::Pure(v) => ComplexMatrix::outer(v),
            StateKind::Mixed(m) => m.clone(),
        }
    }
}
