//! Operator expansion in the phase-point basis and program-state compilation.
//!
//! An operator `O` is written as `O = Σ o(q,p)·A(q,p)` with
//! `o(q,p) = Tr(O·A(q,p))/N` over the fundamental cell. Real and imaginary
//! parts of `o` expand the hermitian pieces `H` and `K` of `O = H + iK`.
//! A real expansion is turned into a program
//! `|Ψ⟩ = Σ c(q,p)|q⟩|p⟩|φ(q,p)⟩` with `coeff = S·c²·(−1)^φ`; the scale
//! `S = Σ|coeff|` stays on the classical side and multiplies the measured
//! polarization back.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{trace_product, ComplexMatrix, C64, ZERO};
use crate::phase_space::{fundamental_cell, phase_point_op, PhasePointIndex};
use crate::tolerance::Tolerances;

/// Complex coefficients `o(q,p)` over the fundamental cell, `q` major.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    n: usize,
    values: Vec<C64>,
}

impl Coefficients {
    pub fn zeros(n: usize) -> Self {
        Coefficients {
            n,
            values: vec![ZERO; n * n],
        }
    }

    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = ((usize, usize), C64)>) -> Result<Self> {
        let mut out = Self::zeros(n);
        for ((q, p), v) in entries {
            if q >= n || p >= n {
                return Err(Error::IndexOutOfRange { q, p, side: n });
            }
            out.values[q * n + p] += v;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, q: usize, p: usize) -> C64 {
        self.values[q * self.n + p]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), C64)> + '_ {
        let n = self.n;
        self.values.iter().enumerate().map(move |(i, v)| ((i / n, i % n), *v))
    }

    /// `Σ o(q,p)·A(q,p)`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n, n);
        for ((q, p), v) in self.iter() {
            if v == ZERO {
                continue;
            }
            let a = phase_point_op(PhasePointIndex::new(n, q as i64, p as i64));
            out = &out + &a.scale(v);
        }
        out
    }
}

/// Real coefficients over the fundamental cell, `q` major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealCoefficients {
    n: usize,
    values: Vec<f64>,
}

impl RealCoefficients {
    pub fn zeros(n: usize) -> Self {
        RealCoefficients {
            n,
            values: vec![0.0; n * n],
        }
    }

    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = ((usize, usize), f64)>) -> Result<Self> {
        let mut out = Self::zeros(n);
        for ((q, p), v) in entries {
            if q >= n || p >= n {
                return Err(Error::IndexOutOfRange { q, p, side: n });
            }
            out.values[q * n + p] += v;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, q: usize, p: usize) -> f64 {
        self.values[q * self.n + p]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        let n = self.n;
        self.values.iter().enumerate().map(move |(i, v)| ((i / n, i % n), *v))
    }

    pub fn is_zero(&self, cutoff: f64) -> bool {
        self.values.iter().all(|v| v.abs() < cutoff)
    }

    pub fn to_complex(&self) -> Coefficients {
        Coefficients {
            n: self.n,
            values: self.values.iter().map(|&v| C64::new(v, 0.0)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorForm {
    Matrix(ComplexMatrix),
    Coefficients(Coefficients),
}

/// An operator on an `N`-level system, as a matrix or as its expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    dim: usize,
    form: OperatorForm,
}

impl OperatorSpec {
    pub fn matrix(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                found: m.cols(),
            });
        }
        Ok(OperatorSpec {
            dim: m.rows(),
            form: OperatorForm::Matrix(m),
        })
    }

    pub fn coefficients(c: Coefficients) -> Self {
        OperatorSpec {
            dim: c.dim(),
            form: OperatorForm::Coefficients(c),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &OperatorForm {
        &self.form
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        match &self.form {
            OperatorForm::Matrix(m) => m.clone(),
            OperatorForm::Coefficients(c) => c.reconstruct(),
        }
    }
}

/// `o(q,p) = Tr(O·A(q,p))/N` for every `(q,p)` in the fundamental cell.
pub fn expand(o: &OperatorSpec) -> Result<Coefficients> {
    match &o.form {
        OperatorForm::Coefficients(c) => Ok(c.clone()),
        OperatorForm::Matrix(m) => {
            let n = o.dim;
            let mut values = Vec::with_capacity(n * n);
            for idx in fundamental_cell(n) {
                let a = phase_point_op(idx);
                values.push(trace_product(m, &a)? / n as f64);
            }
            Ok(Coefficients { n, values })
        }
    }
}

/// Real and imaginary parts of the expansion: `O = Σh·A + i·Σk·A` with both
/// sums hermitian.
pub fn hermitian_split(o: &OperatorSpec) -> Result<(RealCoefficients, RealCoefficients)> {
    let c = expand(o)?;
    let h = RealCoefficients {
        n: c.n,
        values: c.values.iter().map(|v| v.re).collect(),
    };
    let k = RealCoefficients {
        n: c.n,
        values: c.values.iter().map(|v| v.im).collect(),
    };
    Ok((h, k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProgramTerm {
    pub q: usize,
    pub p: usize,
    /// `c(q,p) ≥ 0`
    pub amplitude: f64,
    /// `φ(q,p)`: `true` stores a negative coefficient.
    pub sign_bit: bool,
}

/// Program register contents for the signed array: amplitudes and sign bits
/// over points of the phase-space grid, plus the classical scale `S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgramState {
    n: usize,
    register_dim: usize,
    terms: Vec<ProgramTerm>,
    scale: f64,
}

impl ProgramState {
    /// Validates and builds a program. `register_dim` must be `N` (fundamental
    /// cell addressing) or `2N` (full grid addressing).
    pub fn new(
        n: usize,
        register_dim: usize,
        mut terms: Vec<ProgramTerm>,
        scale: f64,
        tol: &Tolerances,
    ) -> Result<Self> {
        if register_dim != n && register_dim != 2 * n {
            return Err(Error::InvalidArgument(format!(
                "register dimension {register_dim} must be N={n} or 2N={}",
                2 * n
            )));
        }
        if terms.is_empty() {
            return Err(Error::DegenerateProgram);
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidArgument(format!("scale {scale} must be positive")));
        }
        let mut seen = BTreeSet::new();
        for t in &terms {
            if t.q >= register_dim || t.p >= register_dim {
                return Err(Error::IndexOutOfRange {
                    q: t.q,
                    p: t.p,
                    side: register_dim,
                });
            }
            if !(t.amplitude.is_finite() && t.amplitude >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "amplitude {} at ({}, {}) must be nonnegative",
                    t.amplitude, t.q, t.p
                )));
            }
            if !seen.insert((t.q, t.p)) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate program point ({}, {})",
                    t.q, t.p
                )));
            }
        }
        let norm: f64 = terms.iter().map(|t| t.amplitude * t.amplitude).sum();
        if (norm - 1.0).abs() > tol.construction {
            return Err(Error::InvalidArgument(format!(
                "program amplitudes have Σc² = {norm}, expected 1"
            )));
        }
        terms.sort_by_key(|t| (t.q, t.p));
        Ok(ProgramState {
            n,
            register_dim,
            terms,
            scale,
        })
    }

    /// Normalizes arbitrary real weights on grid points into a program;
    /// weights below `cutoff` in magnitude are dropped.
    pub(crate) fn from_weights(
        n: usize,
        register_dim: usize,
        weights: impl IntoIterator<Item = ((usize, usize), f64)>,
        cutoff: f64,
    ) -> Result<Self> {
        let kept: Vec<((usize, usize), f64)> = weights.into_iter().filter(|(_, w)| w.abs() >= cutoff).collect();
        if kept.is_empty() {
            return Err(Error::DegenerateProgram);
        }
        let scale: f64 = kept.iter().map(|(_, w)| w.abs()).sum();
        let terms = kept
            .into_iter()
            .map(|((q, p), w)| ProgramTerm {
                q,
                p,
                amplitude: (w.abs() / scale).sqrt(),
                sign_bit: w < 0.0,
            })
            .collect();
        // Σc² = 1 up to rounding; validate with a loose bound
        let tol = Tolerances {
            construction: 1e-9,
            ..Tolerances::DEFAULT
        };
        ProgramState::new(n, register_dim, terms, scale, &tol)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn register_dim(&self) -> usize {
        self.register_dim
    }

    pub fn terms(&self) -> &[ProgramTerm] {
        &self.terms
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `S·c²·(−1)^φ` per program point.
    pub fn decompile(&self) -> Vec<((usize, usize), f64)> {
        self.terms
            .iter()
            .map(|t| {
                let sign = if t.sign_bit { -1.0 } else { 1.0 };
                ((t.q, t.p), self.scale * t.amplitude * t.amplitude * sign)
            })
            .collect()
    }

    /// Basis index of `|q⟩|p⟩|φ⟩` in the program register.
    pub fn register_index(&self, q: usize, p: usize, sign_bit: bool) -> usize {
        (q * self.register_dim + p) * 2 + usize::from(sign_bit)
    }

    /// `Σ c(q,p)|q⟩|p⟩|φ(q,p)⟩` over registers of dimensions `R, R, 2`.
    pub fn program_vector(&self) -> Vec<C64> {
        let r = self.register_dim;
        let mut v = vec![ZERO; r * r * 2];
        for t in &self.terms {
            v[self.register_index(t.q, t.p, t.sign_bit)] = C64::new(t.amplitude, 0.0);
        }
        v
    }

    /// The operator the program makes the array evaluate,
    /// `Σ c²·(−1)^φ·A(q,p)` (without the scale).
    pub fn encoded_operator(&self) -> ComplexMatrix {
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n, n);
        for t in &self.terms {
            let sign = if t.sign_bit { -1.0 } else { 1.0 };
            let a = phase_point_op(PhasePointIndex::new(n, t.q as i64, t.p as i64));
            out = &out + &a.scale(C64::new(sign * t.amplitude * t.amplitude, 0.0));
        }
        out
    }
}

/// Program for a real expansion over the fundamental cell, with
/// `S = Σ|coeff|`, `c = √(|coeff|/S)` and `φ = 1` for negative coefficients.
pub fn compile_program(coeffs: &RealCoefficients, tol: &Tolerances) -> Result<ProgramState> {
    ProgramState::from_weights(coeffs.n, coeffs.n, coeffs.iter(), tol.coefficient_cutoff)
}
