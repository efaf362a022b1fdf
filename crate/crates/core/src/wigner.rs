//! Discrete Wigner function `W(q,p) = Tr(A(q,p)·ρ)/2N` on the `2N × 2N`
//! grid, sums along phase-space lines, and the translation-operator
//! probabilities those sums reproduce.
//!
//! The line `a·p − b·q ≡ c (mod 2N)` sums to the probability of finding
//! `T(b,a)` with eigenvalue `exp(−iπc/N)`; see [`line_class`].

use nalgebra::SymmetricEigen;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array::run_point_program;
use crate::error::{Error, Result};
use crate::linalg::{trace_product, unit_phase, ComplexMatrix, C64};
use crate::phase_space::{grid_points, phase_point_op, translation_op, TranslationIndex};
use crate::state::QuditState;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    n: usize,
    /// `2N × 2N`, row-major in `q`.
    values: Vec<f64>,
    /// Largest `|Im Tr(Aρ)|/2N` discarded while building the grid.
    max_imaginary: f64,
}

impl WignerGrid {
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        let side = 2 * n;
        if values.len() != side * side {
            return Err(Error::DimensionMismatch {
                expected: side * side,
                found: values.len(),
            });
        }
        Ok(WignerGrid {
            n,
            values,
            max_imaginary: 0.0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> usize {
        2 * self.n
    }

    /// Coordinates are taken mod `2N`.
    pub fn get(&self, q: i64, p: i64) -> f64 {
        let side = self.side() as i64;
        let (q, p) = (q.rem_euclid(side) as usize, p.rem_euclid(side) as usize);
        self.values[q * self.side() + p]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_imaginary(&self) -> f64 {
        self.max_imaginary
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &WignerGrid) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Direct evaluation from the trace formula.
pub fn wigner(rho: &QuditState) -> WignerGrid {
    let n = rho.dim();
    let density = rho.density_matrix();
    let points: Vec<_> = grid_points(n).collect();
    let traces: Vec<_> = points
        .par_iter()
        .map(|idx| trace_product(&phase_point_op(*idx), &density).expect("square operators of equal size"))
        .collect();
    let norm = 1.0 / (2 * n) as f64;
    WignerGrid {
        n,
        values: traces.iter().map(|t| t.re * norm).collect(),
        max_imaginary: traces.iter().map(|t| t.im.abs() * norm).fold(0.0, f64::max),
    }
}

/// Evaluation through the point-program array: `W = ⟨σ_z⟩/2N` per point.
pub fn wigner_circuit(rho: &QuditState) -> Result<WignerGrid> {
    let n = rho.dim();
    let points: Vec<_> = grid_points(n).collect();
    let results = points
        .par_iter()
        .map(|idx| run_point_program(rho, idx.q(), idx.p()))
        .collect::<Result<Vec<_>>>()?;
    let norm = 1.0 / (2 * n) as f64;
    Ok(WignerGrid {
        n,
        values: results.iter().map(|r| r.sigma_z * norm).collect(),
        max_imaginary: results.iter().map(|r| r.sigma_y.abs() * norm).fold(0.0, f64::max),
    })
}

/// Sum of `W` over the line `a·p − b·q ≡ c (mod 2N)`.
pub fn general_line_sum(w: &WignerGrid, a: i64, b: i64, c: i64) -> f64 {
    let side = w.side() as i64;
    let target = c.rem_euclid(side);
    let mut acc = 0.0;
    for q in 0..side {
        for p in 0..side {
            if (a * p - b * q).rem_euclid(side) == target {
                acc += w.get(q, p);
            }
        }
    }
    acc
}

/// Sum over the line `p − b·q ≡ c (mod 2N)`; `b = 0` is the horizontal line
/// `p = c`.
pub fn line_sum(w: &WignerGrid, b: i64, c: i64) -> f64 {
    let side = w.side() as i64;
    (0..side).map(|q| w.get(q, c + b * q)).sum()
}

/// Sum over the vertical line `q = q0`.
pub fn vline_sum(w: &WignerGrid, q0: i64) -> f64 {
    let side = w.side() as i64;
    (0..side).map(|p| w.get(q0, p)).sum()
}

/// Sums of every line of the family `a·p − b·q ≡ c`, indexed by `c`.
pub fn line_family(w: &WignerGrid, a: i64, b: i64) -> Vec<f64> {
    let side = w.side() as i64;
    let mut out = vec![0.0; w.side()];
    for q in 0..side {
        for p in 0..side {
            out[(a * p - b * q).rem_euclid(side) as usize] += w.get(q, p);
        }
    }
    out
}

/// Eigenphase class (index `k` of eigenvalue `exp(iπk/N)`) whose probability
/// the line with offset `c` carries: `k = −c mod 2N`. Fixed by brute force
/// over `N = 2..5` and every family `(a, b) ∈ [0, 2N)²` that is not a
/// multiple of the identity.
pub fn line_class(n: usize, c: i64) -> usize {
    (-c).rem_euclid(2 * n as i64) as usize
}

/// Probabilities of the eigenvalues `exp(iπk/N)`, `k ∈ [0, 2N)`, of `T(b,a)`
/// in the state `ρ`, from an explicit eigen-decomposition.
///
/// `T` is unitary, so it is diagonalized through the hermitian
/// `M = e^{−iα}T + e^{iα}T†` with `α = π/4N`: `M` has eigenvalue
/// `2cos(θ − α)` on the `e^{iθ}` eigenspace of `T`, and that offset keeps
/// distinct classes `θ = πk/N` apart. Each eigenvector is then checked
/// against `T` itself before its weight is assigned to a class.
pub fn translation_probabilities(rho: &QuditState, b: i64, a: i64, tol: &Tolerances) -> Result<Vec<f64>> {
    let n = rho.dim();
    let idx = TranslationIndex::new(n, b, a);
    if idx.a().is_multiple_of(n) && idx.b().is_multiple_of(n) {
        return Err(Error::InvalidArgument(format!(
            "T({b},{a}) is proportional to the identity for N={n}"
        )));
    }
    let t = translation_op(idx);
    let tilt = C64::from_polar(1.0, -std::f64::consts::PI / (4 * n) as f64);
    let m = &t.scale(tilt) + &t.dagger().scale(tilt.conj());
    let vectors = ComplexMatrix::from_nalgebra(&SymmetricEigen::new(m.to_nalgebra()).eigenvectors);
    let density = rho.density_matrix();
    let side = 2 * n;

    let mut probabilities = vec![0.0; side];
    for col in 0..n {
        let v: Vec<C64> = (0..n).map(|i| vectors[(i, col)]).collect();
        let tv = t.apply(&v)?;
        let value: C64 = v.iter().zip(&tv).map(|(x, y)| x.conj() * y).sum();
        let residual = tv
            .iter()
            .zip(&v)
            .map(|(y, x)| (y - value * x).norm())
            .fold(0.0, f64::max);
        let k = (value.arg() * n as f64 / std::f64::consts::PI).round() as i64;
        let class = k.rem_euclid(side as i64) as usize;
        let distance = (value - unit_phase(class as i64, n)).norm().max(residual);
        if distance > tol.eigenphase {
            return Err(Error::EigenphaseAmbiguity {
                b: idx.b(),
                a: idx.a(),
                value,
                distance,
            });
        }
        let rho_v = density.apply(&v)?;
        let weight: f64 = v.iter().zip(&rho_v).map(|(x, y)| (x.conj() * y).re).sum();
        probabilities[class] += weight;
    }
    Ok(probabilities)
}
