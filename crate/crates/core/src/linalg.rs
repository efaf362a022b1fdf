//! Dense complex matrices and the handful of kernels the simulator needs.
//!
//! Storage is row-major `Vec<Complex64>`. Dimensions here are tiny (a
//! qudit of at most a few dozen levels), so nothing is blocked or
//! vectorized by hand.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest row or column count a tensor product may produce.
pub const DEFAULT_MAX_DIM: usize = 1 << 14;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// `exp(iπ·k/n)` with `k` reduced mod `2n` first, so integer phases stay exact
/// at the quarter turns.
pub fn unit_phase(k: i64, n: usize) -> C64 {
    let period = 2 * n as i64;
    let k = k.rem_euclid(period);
    if 4 * k == period {
        return C64::new(0.0, 1.0);
    }
    if 2 * k == period {
        return C64::new(-1.0, 0.0);
    }
    if 4 * k == 3 * period {
        return C64::new(0.0, -1.0);
    }
    if k == 0 {
        return ONE;
    }
    C64::from_polar(1.0, std::f64::consts::PI * k as f64 / n as f64)
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != data.len() {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![ONE; n])
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    /// Builds a square matrix from real entries; handy for fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<C64> = rows.iter().flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0))).collect();
        Self::new(n, cols, data)
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn try_matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn pow(&self, k: usize) -> ComplexMatrix {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut out = ComplexMatrix::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Largest entrywise modulus of `self − other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `max |A·A† − I|`, infinite for non-square input.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let product = self * &self.dagger();
        product.max_abs_diff(&ComplexMatrix::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on incompatible shapes; use [`ComplexMatrix::try_matmul`] for
    /// data-driven products.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Generalized permutation matrix: column `j` holds `phases[j]` in row
/// `targets[j]`. Every gate the programmable array applies to the system
/// (shifts, reflection, clock powers, scalar phases) has this form.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    targets: Vec<usize>,
    phases: Vec<C64>,
}

impl Monomial {
    pub fn identity(n: usize) -> Self {
        Monomial {
            targets: (0..n).collect(),
            phases: vec![ONE; n],
        }
    }

    pub fn permutation(targets: Vec<usize>) -> Self {
        let n = targets.len();
        Self::new(targets, vec![ONE; n])
    }

    pub fn diagonal(phases: Vec<C64>) -> Self {
        Monomial {
            targets: (0..phases.len()).collect(),
            phases,
        }
    }

    pub fn new(targets: Vec<usize>, phases: Vec<C64>) -> Self {
        assert_eq!(targets.len(), phases.len());
        debug_assert!({
            let mut seen = vec![false; targets.len()];
            targets
                .iter()
                .all(|&t| t < seen.len() && !std::mem::replace(&mut seen[t], true))
        });
        Monomial { targets, phases }
    }

    pub fn dim(&self) -> usize {
        self.targets.len()
    }

    /// `self · other`
    pub fn compose(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.dim(), other.dim());
        let targets = other.targets.iter().map(|&t| self.targets[t]).collect();
        let phases = other
            .phases
            .iter()
            .zip(&other.targets)
            .map(|(ph, &t)| ph * self.phases[t])
            .collect();
        Monomial { targets, phases }
    }

    pub fn scaled(&self, s: C64) -> Monomial {
        Monomial {
            targets: self.targets.clone(),
            phases: self.phases.iter().map(|p| p * s).collect(),
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (j, (&t, &ph)) in self.targets.iter().zip(&self.phases).enumerate() {
            m[(t, j)] = ph;
        }
        m
    }

    /// `self · block · right†`
    pub fn sandwich(&self, block: &ComplexMatrix, right: &Monomial) -> ComplexMatrix {
        let n = self.dim();
        debug_assert_eq!((block.rows(), block.cols()), (n, n));
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(self.targets[i], right.targets[j])] = self.phases[i] * block[(i, j)] * right.phases[j].conj();
            }
        }
        out
    }
}

/// Discrete Fourier transform with entry `(j, k) = exp(2πi·jk/N)/√N`.
///
/// With this sign the clock operator satisfies `V = F·U·F†` and comes out
/// diagonal, `V|n⟩ = exp(2πi·n/N)|n⟩`. Panics if `n == 0`.
pub fn dft_matrix(n: usize) -> ComplexMatrix {
    assert!(n >= 1, "DFT of dimension zero");
    let norm = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |j, k| unit_phase(2 * ((j * k) % n) as i64, n) * norm)
}

pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    tensor_with_limit(a, b, DEFAULT_MAX_DIM)
}

/// Kronecker product, `(a⊗b)[i·rb + k, j·cb + l] = a[i,j]·b[k,l]`.
pub fn tensor_with_limit(a: &ComplexMatrix, b: &ComplexMatrix, max: usize) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    let (rows, cols) = match (rows, cols) {
        (Some(r), Some(c)) if r <= max && c <= max => (r, c),
        _ => {
            return Err(Error::SizeOverflow {
                rows: a.rows().saturating_mul(b.rows()),
                cols: a.cols().saturating_mul(b.cols()),
                max,
            })
        }
    };
    let (rb, cb) = (b.rows(), b.cols());
    Ok(ComplexMatrix::from_fn(rows, cols, |r, c| {
        a[(r / rb, c / cb)] * b[(r % rb, c % cb)]
    }))
}

/// `Tr(a·b)` as `Σ a[i,j]·b[j,i]`, without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.rows(),
        });
    }
    let n = a.rows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    Ok(acc)
}
