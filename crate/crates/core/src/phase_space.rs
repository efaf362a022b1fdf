//! Generalized Pauli operators on an `N`-level system and the phase-point
//! operator basis built from them.
//!
//! * `U|n⟩ = |n+1 mod N⟩` (shift),
//! * `V = F·U·F† = diag(exp(2πi·n/N))` (clock), with `F` from [`dft_matrix`],
//! * `R|n⟩ = |−n mod N⟩` (reflection),
//! * `A(q,p) = U^q·R·V^{−p}·exp(iπ·pq/N)`,
//! * `T(b,a) = U^a·V^b·exp(iπ·ab/N)`.
//!
//! Indices live on the `2N × 2N` grid; the `N × N` cell `q, p ∈ [0, N)` holds
//! an orthogonal basis with `Tr[A(q,p)·A(q',p')] = N·δ(q'−q)·δ(p'−p)`, and the
//! rest of the grid repeats it up to signs:
//! `A(q+N,p) = (−1)^p·A(q,p)`, `A(q,p+N) = (−1)^q·A(q,p)`.
//!
//! [`dft_matrix`]: crate::linalg::dft_matrix

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::linalg::{unit_phase, ComplexMatrix, Monomial};

/// A point of the `2N × 2N` phase-space grid. Coordinates are reduced mod `2N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhasePointIndex {
    n: usize,
    q: usize,
    p: usize,
}

impl PhasePointIndex {
    pub fn new(n: usize, q: i64, p: i64) -> Self {
        assert!(n >= 1, "dimension must be positive");
        let side = 2 * n as i64;
        PhasePointIndex {
            n,
            q: q.rem_euclid(side) as usize,
            p: p.rem_euclid(side) as usize,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn in_fundamental_cell(&self) -> bool {
        self.q < self.n && self.p < self.n
    }
}

/// Exponents `(b, a)` of `T(b,a) = U^a·V^b·exp(iπ·ab/N)`, reduced mod `2N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TranslationIndex {
    n: usize,
    b: usize,
    a: usize,
}

impl TranslationIndex {
    pub fn new(n: usize, b: i64, a: i64) -> Self {
        assert!(n >= 1, "dimension must be positive");
        let side = 2 * n as i64;
        TranslationIndex {
            n,
            b: b.rem_euclid(side) as usize,
            a: a.rem_euclid(side) as usize,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn a(&self) -> usize {
        self.a
    }
}

/// All `N²` points of the fundamental cell, `q` major.
pub fn fundamental_cell(n: usize) -> impl Iterator<Item = PhasePointIndex> {
    (0..n).flat_map(move |q| (0..n).map(move |p| PhasePointIndex::new(n, q as i64, p as i64)))
}

/// All `4N²` grid points, `q` major.
pub fn grid_points(n: usize) -> impl Iterator<Item = PhasePointIndex> {
    let side = 2 * n;
    (0..side).flat_map(move |q| (0..side).map(move |p| PhasePointIndex::new(n, q as i64, p as i64)))
}

/// `U^k` for any integer `k`.
pub fn shift_power(n: usize, k: i64) -> Monomial {
    let k = k.rem_euclid(n as i64) as usize;
    Monomial::permutation((0..n).map(|j| (j + k) % n).collect())
}

/// `V^k = diag(exp(2πi·k·j/N))` for any integer `k`.
pub fn clock_power(n: usize, k: i64) -> Monomial {
    let k = k.rem_euclid(n as i64);
    Monomial::diagonal((0..n as i64).map(|j| unit_phase(2 * ((k * j) % n as i64), n)).collect())
}

pub fn reflection(n: usize) -> Monomial {
    Monomial::permutation((0..n).map(|j| (n - j) % n).collect())
}

pub fn shift_u(n: usize) -> ComplexMatrix {
    shift_power(n, 1).to_dense()
}

pub fn shift_v(n: usize) -> ComplexMatrix {
    clock_power(n, 1).to_dense()
}

pub fn reflection_r(n: usize) -> ComplexMatrix {
    reflection(n).to_dense()
}

/// `A(q,p)` as a monomial matrix (no caching).
pub fn phase_point_monomial(idx: PhasePointIndex) -> Monomial {
    let (n, q, p) = (idx.n, idx.q as i64, idx.p as i64);
    shift_power(n, q)
        .compose(&reflection(n))
        .compose(&clock_power(n, -p))
        .scaled(unit_phase(p * q, n))
}

type Cache = RwLock<HashMap<PhasePointIndex, Arc<ComplexMatrix>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Dense `A(q,p)`, memoized per `(N, q, p)`.
pub fn phase_point_op(idx: PhasePointIndex) -> Arc<ComplexMatrix> {
    if let Some(m) = cache().read().expect("phase-point cache poisoned").get(&idx) {
        return Arc::clone(m);
    }
    let built = Arc::new(phase_point_monomial(idx).to_dense());
    let mut guard = cache().write().expect("phase-point cache poisoned");
    Arc::clone(guard.entry(idx).or_insert(built))
}

pub fn translation_monomial(idx: TranslationIndex) -> Monomial {
    let (n, b, a) = (idx.n, idx.b as i64, idx.a as i64);
    shift_power(n, a)
        .compose(&clock_power(n, b))
        .scaled(unit_phase(a * b, n))
}

pub fn translation_op(idx: TranslationIndex) -> ComplexMatrix {
    translation_monomial(idx).to_dense()
}
