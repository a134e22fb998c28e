//! Isomorphisms between operators on Hilbert-Schmidt space and operators on
//! the tensor product space, at finite dimension.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices and the decompositions everything
//!   else relies on.
//! * [`vectorize`]: conjugations, the vectorization map `J` and its inverse,
//!   the basis-of-`H1` form `T`, and the partial slices `P_i`.
//! * [`superop`]: the `R`/`S` isomorphisms, Kraus channels, the Choi map and
//!   CP/TP checks.
//! * [`entangle`]: Schmidt decomposition and factorized-state utilities.
//! * [`bench`]: the two-strategy channel composition benchmark.
//! * [`selftest`]: executable property suites shared by the CLI.

pub mod bench;
pub mod entangle;
mod error;
pub mod linalg;
pub mod selftest;
pub mod superop;
pub mod vectorize;

pub use num_complex::Complex64;

pub use entangle::SchmidtResult;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Tolerance};
pub use superop::{KrausList, OpOnHs, SuperOp};
pub use vectorize::{Basis, BasisPair, BipartiteVector, HsOperator};
