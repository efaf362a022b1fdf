//! Density-matrix simulation of `ancilla ⊗ program registers ⊗ system`.
//!
//! The joint state is kept as a grid of `N × N` system blocks
//! `Σ_{x,y} |x⟩⟨y| ⊗ B[x,y]`, where `x, y` run over control basis states
//! `(ancilla, program index)`. Only program indices carrying amplitude in
//! the initial program vector are stored: every gate of the arrays is block
//! diagonal in the program basis and touches the ancilla only through
//! single-qubit gates, so all other blocks stay exactly zero. Within that
//! support the representation is the full joint density matrix.
//!
//! Register order is fixed project-wide: ancilla first (most significant),
//! then the program registers in the order given, then the system.

use std::sync::Arc;

use rayon::prelude::*;

use crate::linalg::{ComplexMatrix, Monomial, C64, ONE, ZERO};

/// 2×2 ancilla gate, row-major.
pub type QubitGate = [[C64; 2]; 2];

pub fn hadamard() -> QubitGate {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// `H·S†`: rotates the σ_y eigenbasis onto the computational basis, so a z
/// readout afterwards measures σ_y.
pub fn y_basis_rotation() -> QubitGate {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        [C64::new(h, 0.0), C64::new(0.0, -h)],
        [C64::new(h, 0.0), C64::new(0.0, h)],
    ]
}

/// What a controlled gate does to the system for one control basis state.
#[derive(Debug, Clone)]
pub enum SystemAction {
    Identity,
    Phase(C64),
    Monomial(Monomial),
    Dense(Arc<ComplexMatrix>),
}

impl SystemAction {
    fn is_identity(&self) -> bool {
        match self {
            SystemAction::Identity => true,
            SystemAction::Phase(z) => *z == ONE,
            _ => false,
        }
    }

    fn to_dense(&self, n: usize) -> ComplexMatrix {
        match self {
            SystemAction::Identity => ComplexMatrix::identity(n),
            SystemAction::Phase(z) => ComplexMatrix::identity(n).scale(*z),
            SystemAction::Monomial(m) => m.to_dense(),
            SystemAction::Dense(m) => (**m).clone(),
        }
    }

    fn as_monomial(&self, n: usize) -> Option<Monomial> {
        match self {
            SystemAction::Identity => Some(Monomial::identity(n)),
            SystemAction::Phase(z) => Some(Monomial::identity(n).scaled(*z)),
            SystemAction::Monomial(m) => Some(m.clone()),
            SystemAction::Dense(_) => None,
        }
    }

    fn scalar(&self) -> Option<C64> {
        match self {
            SystemAction::Identity => Some(ONE),
            SystemAction::Phase(z) => Some(*z),
            _ => None,
        }
    }

    /// `left · block · right†`
    fn sandwich(left: &SystemAction, block: &ComplexMatrix, right: &SystemAction) -> ComplexMatrix {
        let n = block.rows();
        if let (Some(a), Some(b)) = (left.scalar(), right.scalar()) {
            return block.scale(a * b.conj());
        }
        match (left.as_monomial(n), right.as_monomial(n)) {
            (Some(l), Some(r)) => l.sandwich(block, &r),
            _ => &(&left.to_dense(n) * block) * &right.to_dense(n).dagger(),
        }
    }
}

/// Digits of a program basis index, most significant register first.
fn decode(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
}

#[derive(Debug, Clone)]
pub struct JointState {
    system_dim: usize,
    program_dims: Vec<usize>,
    /// Program basis indices in the support, in increasing order.
    support: Vec<usize>,
    /// `(2M) × (2M)` blocks, row-major; control position of
    /// `(ancilla, support[i])` is `ancilla·M + i`.
    blocks: Vec<ComplexMatrix>,
}

impl JointState {
    /// `|0⟩⟨0|_anc ⊗ |χ⟩⟨χ|_program ⊗ ρ`, with `χ` given sparsely as
    /// `(program index, amplitude)` pairs.
    pub fn new(program_dims: &[usize], program: &[(usize, C64)], rho: &ComplexMatrix) -> Self {
        assert!(rho.is_square());
        let total: usize = program_dims.iter().product();
        let mut entries: Vec<(usize, C64)> = program.iter().copied().filter(|(_, a)| *a != ZERO).collect();
        entries.sort_by_key(|(i, _)| *i);
        entries.dedup_by_key(|(i, _)| *i);
        assert!(entries.iter().all(|(i, _)| *i < total), "program index out of range");
        assert!(!entries.is_empty(), "empty program vector");

        let n = rho.rows();
        let m = entries.len();
        let side = 2 * m;
        let mut blocks = vec![ComplexMatrix::zeros(n, n); side * side];
        for (i, (_, ai)) in entries.iter().enumerate() {
            for (j, (_, aj)) in entries.iter().enumerate() {
                blocks[i * side + j] = rho.scale(ai * aj.conj());
            }
        }
        JointState {
            system_dim: n,
            program_dims: program_dims.to_vec(),
            support: entries.into_iter().map(|(i, _)| i).collect(),
            blocks,
        }
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    fn side(&self) -> usize {
        2 * self.support.len()
    }

    /// `(ancilla bit, program digits)` for each control position.
    fn controls(&self) -> Vec<(usize, Vec<usize>)> {
        let m = self.support.len();
        (0..2 * m)
            .map(|pos| {
                let mut digits = vec![0; self.program_dims.len()];
                decode(self.support[pos % m], &self.program_dims, &mut digits);
                (pos / m, digits)
            })
            .collect()
    }

    pub fn apply_ancilla_gate(&mut self, g: &QubitGate) {
        let m = self.support.len();
        let side = self.side();
        let n = self.system_dim;
        let old = std::mem::take(&mut self.blocks);
        let mut blocks = vec![ComplexMatrix::zeros(n, n); side * side];
        blocks.par_iter_mut().enumerate().for_each(|(idx, out)| {
            let (x, y) = (idx / side, idx % side);
            let (a, i) = (x / m, x % m);
            let (b, j) = (y / m, y % m);
            let mut acc = ComplexMatrix::zeros(n, n);
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let coeff = g[a][a2] * g[b][b2].conj();
                    if coeff == ZERO {
                        continue;
                    }
                    let src = &old[(a2 * m + i) * side + b2 * m + j];
                    acc = &acc + &src.scale(coeff);
                }
            }
            *out = acc;
        });
        self.blocks = blocks;
    }

    /// Applies `Σ_x |x⟩⟨x| ⊗ G_x` where `G_x = action(ancilla, digits)`.
    pub fn apply_controlled<F>(&mut self, action: F)
    where
        F: Fn(usize, &[usize]) -> SystemAction,
    {
        let actions: Vec<SystemAction> = self
            .controls()
            .iter()
            .map(|(anc, digits)| action(*anc, digits))
            .collect();
        if actions.iter().all(SystemAction::is_identity) {
            return;
        }
        let side = self.side();
        self.blocks.par_iter_mut().enumerate().for_each(|(idx, block)| {
            let (x, y) = (idx / side, idx % side);
            let (l, r) = (&actions[x], &actions[y]);
            if l.is_identity() && r.is_identity() {
                return;
            }
            *block = SystemAction::sandwich(l, block, r);
        });
    }

    /// Reduced density matrix of the ancilla.
    pub fn ancilla_density(&self) -> [[C64; 2]; 2] {
        let m = self.support.len();
        let side = self.side();
        let mut out = [[ZERO; 2]; 2];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = (0..m)
                    .map(|i| self.blocks[(a * m + i) * side + b * m + i].trace())
                    .sum();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        let d = self.ancilla_density();
        d[0][0] + d[1][1]
    }

    /// `⟨σ_z⟩` of the ancilla after applying `rotation` to it (on a copy).
    pub fn z_after(&self, rotation: &QubitGate) -> f64 {
        let mut rotated = self.clone();
        rotated.apply_ancilla_gate(rotation);
        let d = rotated.ancilla_density();
        (d[0][0] - d[1][1]).re
    }

    /// The whole joint density matrix, zeros included. Only for small
    /// registers; used to cross-check against dense tensor-product algebra.
    pub fn to_dense(&self) -> ComplexMatrix {
        let n = self.system_dim;
        let program_total: usize = self.program_dims.iter().product();
        let dim = 2 * program_total * n;
        let m = self.support.len();
        let side = self.side();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for x in 0..side {
            for y in 0..side {
                let row0 = ((x / m) * program_total + self.support[x % m]) * n;
                let col0 = ((y / m) * program_total + self.support[y % m]) * n;
                let block = &self.blocks[x * side + y];
                for i in 0..n {
                    for j in 0..n {
                        out[(row0 + i, col0 + j)] = block[(i, j)];
                    }
                }
            }
        }
        out
    }
}

/// Exact ancilla readouts taken from one pre-measurement state: the z run
/// applies the final Hadamard, the y run the y-basis rotation.
pub fn polarizations(pre_measurement: &JointState) -> (f64, f64) {
    (
        pre_measurement.z_after(&hadamard()),
        pre_measurement.z_after(&y_basis_rotation()),
    )
}
