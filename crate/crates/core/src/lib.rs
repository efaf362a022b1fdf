//! Simulator for a programmable quantum gate array that evaluates
//! expectation values `Tr(ρO)` of arbitrary operators on an `N`-level
//! system from the polarization of a single ancilla qubit.
//!
//! The array is built on the scattering circuit (Hadamard test) and the
//! phase-point operator basis `A(q,p)`. The program register holds the
//! expansion of `O` in that basis. The same machinery evaluates discrete
//! Wigner functions, sums of them over phase-space domains, and threshold
//! decisions on such sums.
//!
//! Modules, bottom-up:
//!
//! * [`linalg`], [`state`]: dense complex matrices and validated states;
//! * [`phase_space`]: `U`, `V`, `R`, `A(q,p)`, `T(b,a)`;
//! * [`circuit`]: register-level density-matrix simulation;
//! * [`scattering`]: the one-operator scattering circuit;
//! * [`program`]: expansion, hermitian split, program compilation;
//! * [`array`]: point and signed programmable arrays, `Tr(ρO)` pipeline;
//! * [`wigner`], [`catmap`], [`domain`], [`decision`]: phase-space
//!   applications;
//! * [`io`], [`cli`]: file formats, run reports and the command line.

pub mod array;
pub mod catmap;
pub mod circuit;
pub mod cli;
pub mod decision;
pub mod domain;
pub mod error;
pub mod io;
pub mod linalg;
pub mod phase_space;
pub mod program;
pub mod random;
pub mod sampling;
pub mod scattering;
pub mod state;
pub mod tolerance;
pub mod wigner;

pub use array::{expectation, run_point_program, run_program, ArrayConfig, Estimation, Expectation};
pub use error::{Error, Result};
pub use linalg::{dft_matrix, tensor, trace_product, ComplexMatrix, C64};
pub use phase_space::{phase_point_op, translation_op, PhasePointIndex, TranslationIndex};
pub use program::{compile_program, expand, hermitian_split, OperatorSpec, ProgramState};
pub use scattering::{scatter_exact, scatter_sampled, CircuitResult, Mode};
pub use state::QuditState;
pub use tolerance::Tolerances;
