//! Direction reversal of the non-Hermitian skin effect in two coherently
//! coupled non-reciprocal (Hatano–Nelson) chains.
//!
//! The crate covers two settings:
//!
//! * the static ladder: real-space and Bloch Hamiltonians ([`model`]), a
//!   certified dense eigensolver ([`eig`]), localization diagnostics,
//!   spectral winding and phase-diagram sweeps ([`analysis`]), and the
//!   first-order generalized-Brillouin-zone predictions ([`gbz`]);
//! * the dynamics: a two-chain non-unitary discrete-time quantum walk with
//!   quasi-energy winding and two-unit-cell boundary experiments
//!   ([`qwalk`]).
//!
//! [`cli`] wires everything into the `nhse` binary (config parsing, CSV and
//! manifest output).

pub mod analysis;
pub mod cli;
pub mod eig;
pub mod error;
pub mod gbz;
pub mod matrix;
pub mod model;
pub mod qwalk;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
