#![allow(dead_code)]

use std::f64::consts::PI;

use qpga::{ComplexMatrix, QuditState, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Tr(a·b)` by explicit summation.
pub fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.rows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `Tr(A(q,p)·ρ)` from the matrix elements of `U^q R V^{−p} e^{iπpq/N}`:
/// the only nonzero entries sit at `(q − k, k)` with value
/// `exp(iπ(pq − 2pk)/N)`.
pub fn phase_point_trace(rho: &QuditState, q: i64, p: i64) -> C64 {
    let n = rho.dim() as i64;
    let m = rho.density_matrix();
    (0..n)
        .map(|k| {
            let j = (q - k).rem_euclid(n) as usize;
            let phase = C64::from_polar(1.0, PI * ((p * q - 2 * p * k) as f64) / n as f64);
            phase * m[(k as usize, j)]
        })
        .sum()
}

/// Wigner value `Tr(A(q,p)·ρ)/2N` from the closed form above.
pub fn wigner_value(rho: &QuditState, q: i64, p: i64) -> f64 {
    phase_point_trace(rho, q, p).re / (2 * rho.dim()) as f64
}
