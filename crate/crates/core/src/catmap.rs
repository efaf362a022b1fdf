//! Shear-plus-displacement cat maps.
//!
//! `C(b,c) = diag(exp(iπ(b·n² + c·n)/N))` is meant to move Wigner values
//! along `(q, p) ↦ (q, p + b·q + c)`, i.e. `C†·A(q, p + b·q + c)·C = A(q,p)`.
//! Whether that holds exactly depends on the parities of `N`, `b` and `c`;
//! [`cat_map_residuals`] measures it point by point instead of assuming.
//! The scan over `N ∈ {3,4,5,8}` finds exact covariance precisely when
//! `N` is even and `c` is even, or `N` is odd and `b ≡ c (mod 2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{unit_phase, ComplexMatrix, Monomial};
use crate::phase_space::{grid_points, phase_point_monomial, PhasePointIndex};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatMapSpec {
    pub n: usize,
    pub b: usize,
    pub c: usize,
}

impl CatMapSpec {
    /// Reduces `b` and `c` mod `2N`.
    pub fn new(n: usize, b: i64, c: i64) -> Self {
        assert!(n >= 1);
        let side = 2 * n as i64;
        CatMapSpec {
            n,
            b: b.rem_euclid(side) as usize,
            c: c.rem_euclid(side) as usize,
        }
    }

    /// Classical image of a grid point.
    pub fn map_point(&self, q: usize, p: usize) -> (usize, usize) {
        let side = 2 * self.n;
        (q % side, (p + self.b * q + self.c) % side)
    }
}

/// `max |C†·A(M(x))·C − A(x)|` for every grid point `x`, row-major in `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualMap {
    pub n: usize,
    pub values: Vec<f64>,
}

impl ResidualMap {
    pub fn get(&self, q: usize, p: usize) -> f64 {
        self.values[q * 2 * self.n + p]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_fundamental(&self) -> f64 {
        let n = self.n;
        (0..n)
            .flat_map(|q| (0..n).map(move |p| (q, p)))
            .map(|(q, p)| self.get(q, p))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct CatMap {
    pub spec: CatMapSpec,
    pub unitary: ComplexMatrix,
    pub residuals: ResidualMap,
}

fn quadratic_phase(spec: &CatMapSpec) -> Monomial {
    let (n, b, c) = (spec.n as i64, spec.b as i64, spec.c as i64);
    Monomial::diagonal((0..n).map(|j| unit_phase(b * j * j + c * j, spec.n)).collect())
}

pub fn cat_map_residuals(spec: &CatMapSpec) -> ResidualMap {
    let n = spec.n;
    let unitary = quadratic_phase(spec).to_dense();
    let dagger = unitary.dagger();
    let values = grid_points(n)
        .map(|idx| {
            let (q, p) = spec.map_point(idx.q(), idx.p());
            let image = phase_point_monomial(PhasePointIndex::new(n, q as i64, p as i64)).to_dense();
            let pulled_back = &(&dagger * &image) * &unitary;
            pulled_back.max_abs_diff(&phase_point_monomial(idx).to_dense())
        })
        .collect();
    ResidualMap { n, values }
}

/// The cat-map unitary, provided it is exactly covariant on the fundamental
/// cell (residual at most `tol.covariance`).
pub fn cat_map_unitary(spec: &CatMapSpec, tol: &Tolerances) -> Result<CatMap> {
    let residuals = cat_map_residuals(spec);
    let worst = residuals.max_fundamental();
    if worst > tol.covariance {
        return Err(Error::NotCovariant {
            n: spec.n,
            b: spec.b,
            c: spec.c,
            max_residual: worst,
            residuals: Box::new(residuals),
        });
    }
    Ok(CatMap {
        spec: *spec,
        unitary: quadratic_phase(spec).to_dense(),
        residuals,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    pub b: usize,
    pub c: usize,
    pub max_residual_fundamental: f64,
    pub max_residual_grid: f64,
    pub exact: bool,
}

/// Residuals for every `(b, c) ∈ [0, 2N)²` and each `N` in `dims`.
pub fn covariance_scan(dims: &[usize], tol: &Tolerances) -> Vec<ScanRow> {
    let mut rows = Vec::new();
    for &n in dims {
        for b in 0..2 * n {
            for c in 0..2 * n {
                let spec = CatMapSpec { n, b, c };
                let r = cat_map_residuals(&spec);
                let fundamental = r.max_fundamental();
                rows.push(ScanRow {
                    n,
                    b,
                    c,
                    max_residual_fundamental: fundamental,
                    max_residual_grid: r.max(),
                    exact: fundamental <= tol.covariance,
                });
            }
        }
    }
    rows
}
