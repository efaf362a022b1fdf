//! Random operators and states for property tests, benchmarks and the
//! acceptance suite. All draws come from the caller's RNG.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, C64};
use crate::state::QuditState;
use crate::tolerance::Tolerances;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Ginibre matrix: i.i.d. standard complex normal entries.
pub fn complex_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

pub fn hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = complex_matrix(n, rng);
    (&g + &g.dagger()).scale(C64::new(0.5, 0.0))
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix, with
/// the diagonal phases of R divided out.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let qr = complex_matrix(n, rng).to_nalgebra().qr();
    let (q, r) = (qr.q(), qr.r());
    let mut out = ComplexMatrix::from_nalgebra(&q);
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            out[(i, j)] *= phase;
        }
    }
    out
}

pub fn pure_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QuditState {
    let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    QuditState::pure(v, &Tolerances::default()).expect("normalized by construction")
}

/// Full-rank density matrix `G·G†/Tr(G·G†)`.
pub fn mixed_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QuditState {
    let g = complex_matrix(n, rng);
    let mut rho = &g * &g.dagger();
    let tr = rho.trace().re;
    rho = rho.scale(C64::new(1.0 / tr, 0.0));
    // symmetrize away the rounding so validation sees an exactly hermitian matrix
    let rho = (&rho + &rho.dagger()).scale(C64::new(0.5, 0.0));
    QuditState::mixed(rho, &Tolerances::default()).expect("positive by construction")
}
