//! Dense complex linear algebra: the matrix carrier, Kronecker products,
//! traces and inner products, Jacobi decompositions, and seeded random
//! instances.

mod decomp;
mod matrix;
mod ops;
pub mod random;
mod tolerance;

pub use decomp::{hermitian_eig, svd, HermitianEig, Svd};
pub use matrix::{ComplexMatrix, ONE, ZERO};
pub use ops::{
    adjoint, hermiticity_defect, hs_inner, is_hermitian, is_psd, kron, kron_with_limit,
    min_eigenvalue, operator_norm, trace, unitarity_defect, MAX_KRON_ENTRIES,
};
pub use random::random_unitary;
pub use tolerance::Tolerance;
