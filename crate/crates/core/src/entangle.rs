//! Schmidt decomposition of bipartite vectors and factorized-state helpers.
//!
//! Devectorizing `α` gives an operator `J*(α)`. Its singular value
//! decomposition `Σ λ_i |u_i⟩⟨v_i|` maps back to `α = Σ λ_i (K v_i) ⊗ u_i`,
//! which is a Schmidt decomposition.

use crate::error::Result;
use crate::linalg::{kron, svd, ComplexMatrix};
use crate::superop::{lower_s, OpOnHs};
use crate::vectorize::{
    check_unit, conjugate_in_basis, devec_jstar, BasisPair, BipartiteVector, HsOperator,
};

/// Inputs to the factorized-state helpers must have unit norm within this.
pub const UNIT_TOLERANCE: f64 = 1e-8;

/// Relative cutoff used by [`schmidt_rank`] when none is given.
pub const DEFAULT_RANK_CUTOFF: f64 = 1e-10;

/// `α = Σ_i lambdas[i] · left_i ⊗ right_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtResult {
    /// Nonnegative, descending.
    pub lambdas: Vec<f64>,
    /// `d1 x k`, columns `φ_i`.
    pub left: ComplexMatrix,
    /// `d2 x k`, columns `ψ_i`.
    pub right: ComplexMatrix,
}

impl SchmidtResult {
    /// Rebuilds `Σ λ_i φ_i ⊗ ψ_i`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (d1, d2) = (self.left.rows(), self.right.rows());
        let mut acc = ComplexMatrix::zeros(d1 * d2, 1);
        for (k, &l) in self.lambdas.iter().enumerate() {
            let term = kron(&self.left.col(k), &self.right.col(k))
                .expect("vector sizes are bounded by the input");
            acc += &(&term * l);
        }
        acc
    }
}

/// Schmidt decomposition via one SVD of `J*(α)`.
///
/// Each `ψ_i` has its first nonzero component real and nonnegative; the
/// matching `φ_i` absorbs the compensating phase.
pub fn schmidt(alpha: &BipartiteVector, bases: &BasisPair) -> Result<SchmidtResult> {
    let a = devec_jstar(alpha, bases)?;
    let dec = svd(a.matrix());
    let (mut u, mut v) = (dec.u, dec.v);
    let k = dec.s.len();
    for c in 0..k {
        let pivot = (0..u.rows()).map(|r| u[(r, c)]).find(|z| z.norm() > 1e-14);
        if let Some(z) = pivot {
            // multiply both u_c and v_c by the same phase: |u⟩⟨v| is unchanged
            let phase = z.conj() / z.norm();
            for r in 0..u.rows() {
                u[(r, c)] *= phase;
            }
            for r in 0..v.rows() {
                v[(r, c)] *= phase;
            }
        }
    }
    let mut left = ComplexMatrix::zeros(bases.d1(), k);
    for c in 0..k {
        left.set_col(c, &conjugate_in_basis(&bases.b1, &v.col(c))?);
    }
    Ok(SchmidtResult {
        lambdas: dec.s,
        left,
        right: u,
    })
}

/// Number of Schmidt coefficients above `cutoff`; the default cutoff is
/// `1e-10 · ‖α‖`. The zero vector has rank 0.
pub fn schmidt_rank(alpha: &BipartiteVector, cutoff: Option<f64>) -> usize {
    let bases = BasisPair::standard(alpha.d1(), alpha.d2());
    let s = schmidt(alpha, &bases)
        .expect("standard bases match the vector")
        .lambdas;
    rank_from_lambdas(&s, cutoff.unwrap_or(DEFAULT_RANK_CUTOFF * alpha.norm()))
}

/// Counts coefficients strictly above `cutoff`.
pub fn rank_from_lambdas(lambdas: &[f64], cutoff: f64) -> usize {
    lambdas.iter().filter(|&&l| l > cutoff && l > 0.0).count()
}

/// Entangled iff at least two Schmidt coefficients are positive.
pub fn is_entangled(alpha: &BipartiteVector, cutoff: Option<f64>) -> bool {
    schmidt_rank(alpha, cutoff) >= 2
}

/// `J*(φ ⊗ ψ) = |ψ⟩⟨K φ|` for unit `φ`, `ψ`.
pub fn product_state_devec(
    phi: &ComplexMatrix,
    psi: &ComplexMatrix,
    bases: &BasisPair,
) -> Result<HsOperator> {
    check_unit(phi, UNIT_TOLERANCE)?;
    check_unit(psi, UNIT_TOLERANCE)?;
    devec_jstar(&BipartiteVector::product(phi, psi)?, bases)
}

/// `S(P_φ ⊗ P_ψ)`, the HS projection onto `|ψ⟩⟨K φ|`.
pub fn pure_state_transport(
    phi: &ComplexMatrix,
    psi: &ComplexMatrix,
    bases: &BasisPair,
) -> Result<OpOnHs> {
    check_unit(phi, UNIT_TOLERANCE)?;
    check_unit(psi, UNIT_TOLERANCE)?;
    let p_phi = ComplexMatrix::outer(phi, phi);
    let p_psi = ComplexMatrix::outer(psi, psi);
    lower_s(&kron(&p_phi, &p_psi)?, bases)
}
