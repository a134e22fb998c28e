use rand::Rng;

use super::SuperOp;
use crate::error::{Error, Result};
use crate::linalg::random::random_unitary_with;
use crate::linalg::{kron, ComplexMatrix, Tolerance, ZERO};
use crate::vectorize::{vec_t, Basis, BasisPair, BipartiteVector, HsOperator};

/// Non-empty list of equally sized square Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausList {
    ops: Vec<ComplexMatrix>,
}

impl KrausList {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidArgument("Kraus list is empty".into()))?;
        let d = first.rows();
        for m in &ops {
            if m.shape() != (d, d) {
                return Err(Error::mismatch(
                    "KrausList::new",
                    format!("{d}x{d}"),
                    format!("{}x{}", m.rows(), m.cols()),
                ));
            }
        }
        Ok(Self { ops })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            ops: vec![ComplexMatrix::identity(d)],
        }
    }

    pub fn dim(&self) -> usize {
        self.ops[0].rows()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// Kraus list of the HS-adjoint map, `A ↦ Σ M_i A M_i*`.
    pub fn adjoint(&self) -> Self {
        Self {
            ops: self.ops.iter().map(ComplexMatrix::adjoint).collect(),
        }
    }

    /// Kraus list of `self ∘ first`: `Σ_{i,j} N_j* M_i* A M_i N_j` with
    /// `{M_i}` = `first`, `{N_j}` = `self`, i.e. operators `M_i N_j`.
    pub fn after(&self, first: &KrausList) -> Result<Self> {
        if self.dim() != first.dim() {
            return Err(Error::mismatch("KrausList::after", self.dim(), first.dim()));
        }
        let mut ops = Vec::with_capacity(self.len() * first.len());
        for m in &first.ops {
            for n in &self.ops {
                ops.push(m * n);
            }
        }
        Ok(Self { ops })
    }
}

fn expect_square_operator(list: &KrausList, a: &HsOperator) -> Result<()> {
    let d = list.dim();
    if a.d1() != d || a.d2() != d {
        return Err(Error::mismatch(
            "kraus_apply",
            format!("{d}x{d} operator"),
            format!("{}x{}", a.d2(), a.d1()),
        ));
    }
    Ok(())
}

/// `Σ_i M_i* A M_i`.
pub fn kraus_apply(list: &KrausList, a: &HsOperator) -> Result<HsOperator> {
    expect_square_operator(list, a)?;
    let d = list.dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for m in list.ops() {
        acc += &(&m.adjoint() * &(a.matrix() * m));
    }
    Ok(HsOperator::new(acc))
}

/// `M_α = Σ_{r,s} ⟨φ_r ⊗ φ_s, α⟩ Σ_i |M_i* φ_s⟩⟨M_i* φ_r|`.
pub fn m_alpha(list: &KrausList, alpha: &BipartiteVector, basis: &Basis) -> Result<ComplexMatrix> {
    let d = list.dim();
    if basis.dim() != d || alpha.d1() != d || alpha.d2() != d {
        return Err(Error::mismatch(
            "m_alpha",
            format!("dimension {d}"),
            format!(
                "basis {} and vector ({}, {})",
                basis.dim(),
                alpha.d1(),
                alpha.d2()
            ),
        ));
    }
    let u = basis.matrix();
    let x = alpha.vector();
    // ⟨φ_r ⊗ φ_s, α⟩ = Σ_{a,b} conj(u[a,r] u[b,s]) α[a*d + b]
    let coeff = &(&u.adjoint() * &crate::vectorize::unstack(x, d, d).transpose()) * &u.conj();
    // images[i][r] = M_i* φ_r
    let images: Vec<ComplexMatrix> = list.ops().iter().map(|m| &m.adjoint() * u).collect();
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for s in 0..d {
            let c = coeff[(r, s)];
            if c == ZERO {
                continue;
            }
            for img in &images {
                for p in 0..d {
                    let left = img[(p, s)] * c;
                    for q in 0..d {
                        out[(p, q)] += left * img[(q, r)].conj();
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `R(B) α = Σ_s φ_s ⊗ M_α φ_s`.
pub fn kraus_r_action(
    list: &KrausList,
    alpha: &BipartiteVector,
    basis: &Basis,
) -> Result<BipartiteVector> {
    let m = m_alpha(list, alpha, basis)?;
    vec_t(&HsOperator::new(m), basis)
}

/// R-matrix of a Kraus channel built column by column from
/// [`kraus_r_action`]. Requires `H1 = H2`; the vectorization uses the `H1`
/// basis for both factors, which gives the same R-matrix as any `H2` basis.
pub fn kraus_to_r(list: &KrausList, bases: &BasisPair) -> Result<SuperOp> {
    let d = list.dim();
    if bases.d1() != d || bases.d2() != d {
        return Err(Error::mismatch(
            "kraus_to_r",
            format!("bases of dimension {d}"),
            format!("({}, {})", bases.d1(), bases.d2()),
        ));
    }
    let n = d * d;
    let mut r = ComplexMatrix::zeros(n, n);
    for c in 0..n {
        let probe = BipartiteVector::new(d, d, ComplexMatrix::unit_vector(n, c))?;
        r.set_col(c, kraus_r_action(list, &probe, &bases.b1)?.vector());
    }
    SuperOp::from_r_matrix(r, bases.clone())
}

/// Kronecker closed form `Σ_i (U Uᵀ M_iᵀ Ū U*) ⊗ M_i*`, where `U` holds
/// the `H1` basis. With the standard basis this is `Σ_i M_iᵀ ⊗ M_i*`.
pub fn kraus_to_r_closed_form(list: &KrausList, basis: &Basis) -> Result<ComplexMatrix> {
    let d = list.dim();
    if basis.dim() != d {
        return Err(Error::mismatch("kraus_to_r_closed_form", d, basis.dim()));
    }
    let u = basis.matrix();
    let left = u * &u.transpose();
    let right = &u.conj() * &u.adjoint();
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for m in list.ops() {
        let first = &(&left * &m.transpose()) * &right;
        acc += &kron(&first, &m.adjoint())?;
    }
    Ok(acc)
}

/// `max |(Σ M_i M_i* - I)_{jk}|`.
pub fn tp_deviation(list: &KrausList) -> f64 {
    let d = list.dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for m in list.ops() {
        acc += &(m * &m.adjoint());
    }
    acc.max_abs_diff(&ComplexMatrix::identity(d))
}

/// Trace preservation under this crate's convention: `Σ M_i M_i* = I`.
pub fn check_tp(list: &KrausList, tol: Tolerance) -> bool {
    tp_deviation(list) <= tol.abs + tol.rel
}

/// Random trace-preserving channel with `rank` Kraus operators, cut from
/// the first `d` columns of a Haar unitary of size `rank*d`.
pub fn random_channel<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> KrausList {
    assert!(
        d >= 1 && rank >= 1,
        "channel dimension and rank must be positive"
    );
    let w = random_unitary_with(d * rank, rng);
    // blocks K_i of the isometry satisfy Σ K_i* K_i = I, so M_i = K_i*
    // satisfy Σ M_i M_i* = I
    let ops = (0..rank)
        .map(|i| ComplexMatrix::from_fn(d, d, |r, c| w[(c + i * d, r)].conj()))
        .collect();
    KrausList { ops }
}
