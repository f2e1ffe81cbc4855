//! Monitored quantum evolution of photons.
//!
//! Two models are covered: `N` photons hopping between two coupled cavities,
//! and a single cavity coupled to a qubit in the Jaynes-Cummings picture. Both
//! are evolved exactly through a cached eigendecomposition and can be
//! interrupted every `tau` by a projective measurement that removes a
//! reference state ([`monitor`]). Entanglement is quantified by N00N-state
//! fidelities ([`cavities`]) and by the Rényi-2 entropy of a reduced density
//! matrix.
//!
//! Units: `hbar = 1`; times are in `1/J` for the cavities and `1/w` for the
//! Jaynes-Cummings cavity.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod cavities;
pub mod entropy;
pub mod error;
pub mod hamiltonian;
pub mod jc;
pub mod monitor;
pub mod oracle;
pub mod state;

pub use basis::{Basis, BasisLabel, Qubit};
pub use error::{Error, Result};
pub use hamiltonian::{evolve, Hamiltonian};
pub use num_complex::Complex64;
pub use state::{inner, purity, DensityMatrix, StateVector};
