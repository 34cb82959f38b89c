//! Dense exact-diagonalization toolkit for transverse-field Ising chains and
//! their non-Hermitian deformations: spectra, evolution, operator
//! entanglement, out-of-time-order correlators and long-time averages.

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolution;
pub mod haar;
pub mod hamiltonians;
pub mod io;
pub mod lta;
pub mod opent;
pub mod operator;
pub mod quench;
pub mod scrambling;
pub mod spectral;

pub use error::{Error, Result};
pub use hamiltonians::{ChainBuilder, ModelFamily, Preset, SpinChainParams};
pub use operator::{c64, DenseOperator};
