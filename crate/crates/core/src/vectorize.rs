//! Vectorization of Hilbert-Schmidt operators.
//!
//! An operator `A: H1 -> H2` is stored as a `d2 x d1` matrix in standard
//! coordinates. A vector of `H1 ⊗ H2` is stored with the first factor major:
//! the component of `φ ⊗ ψ` at flat index `j*d2 + i` is `φ[j] ψ[i]`. With
//! standard bases, [`vec_j`] is therefore plain column stacking.
//!
//! All inner products are conjugate-linear in the first slot.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::random::{orthonormalize_columns, random_unitary_with, rng_from_seed};
use crate::linalg::{kron, unitarity_defect, ComplexMatrix, ZERO};

/// Tolerance used when validating that a basis matrix is unitary.
pub const BASIS_TOLERANCE: f64 = 1e-10;

/// Orthonormal basis of `C^d`, stored as a unitary matrix whose columns are
/// the basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    u: ComplexMatrix,
}

impl Basis {
    pub fn new(u: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(u, BASIS_TOLERANCE)
    }

    /// Accepts `u` when `max |(u* u - I)_{ij}| <= tol`.
    pub fn with_tolerance(u: ComplexMatrix, tol: f64) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::mismatch(
                "Basis::new",
                "square matrix",
                format!("{}x{}", u.rows(), u.cols()),
            ));
        }
        let deviation = unitarity_defect(&u);
        if deviation > tol || !deviation.is_finite() {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { u })
    }

    pub fn standard(d: usize) -> Self {
        Self {
            u: ComplexMatrix::identity(d),
        }
    }

    /// Haar-random basis, deterministic in `seed`.
    pub fn random(d: usize, seed: u64) -> Self {
        Self::random_with(d, &mut rng_from_seed(seed))
    }

    pub fn random_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        Self {
            u: random_unitary_with(d, rng),
        }
    }

    /// Basis whose first vector is the unit vector `v`, completed by
    /// Gram-Schmidt against the standard basis.
    pub fn adapted(v: &ComplexMatrix) -> Result<Self> {
        if !v.is_vector() {
            return Err(Error::mismatch(
                "Basis::adapted",
                "column vector",
                format!("{:?}", v.shape()),
            ));
        }
        check_unit(v, 1e-8)?;
        let d = v.rows();
        // v first, then every standard vector except the one v overlaps most
        // with; that set is linearly independent.
        let pivot = (0..d)
            .max_by(|&a, &b| v[(a, 0)].norm().total_cmp(&v[(b, 0)].norm()))
            .expect("non-empty vector");
        let mut g = ComplexMatrix::zeros(d, d);
        g.set_col(0, v);
        for (col, k) in (0..d).filter(|&k| k != pivot).enumerate() {
            g.set_col(col + 1, &ComplexMatrix::unit_vector(d, k));
        }
        let mut u = orthonormalize_columns(&g);
        // keep the first column bit-identical to the input
        u.set_col(0, v);
        Self::with_tolerance(u, 1e-8)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u
    }

    /// The `i`-th basis vector.
    pub fn vector(&self, i: usize) -> ComplexMatrix {
        self.u.col(i)
    }
}

/// The pair of bases `{φ_i}` for `H1` and `{ψ_j}` for `H2` that fixes the
/// vectorization.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisPair {
    pub b1: Basis,
    pub b2: Basis,
}

impl BasisPair {
    pub fn new(b1: Basis, b2: Basis) -> Self {
        Self { b1, b2 }
    }

    pub fn standard(d1: usize, d2: usize) -> Self {
        Self::new(Basis::standard(d1), Basis::standard(d2))
    }

    pub fn d1(&self) -> usize {
        self.b1.dim()
    }

    pub fn d2(&self) -> usize {
        self.b2.dim()
    }
}

/// An operator `H1 -> H2` held as its `d2 x d1` standard-coordinate matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HsOperator {
    mat: ComplexMatrix,
}

impl HsOperator {
    pub fn new(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    /// `|ψ⟩⟨φ|`, mapping `H1 ∋ φ` to `H2 ∋ ψ`.
    pub fn rank_one(psi: &ComplexMatrix, phi: &ComplexMatrix) -> Self {
        Self::new(ComplexMatrix::outer(psi, phi))
    }

    pub fn d1(&self) -> usize {
        self.mat.cols()
    }

    pub fn d2(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

impl From<ComplexMatrix> for HsOperator {
    fn from(mat: ComplexMatrix) -> Self {
        Self::new(mat)
    }
}

/// A vector of `H1 ⊗ H2` in first-factor-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteVector {
    d1: usize,
    d2: usize,
    v: ComplexMatrix,
}

impl BipartiteVector {
    pub fn new(d1: usize, d2: usize, v: ComplexMatrix) -> Result<Self> {
        if !v.is_vector() || v.rows() != d1 * d2 {
            return Err(Error::mismatch(
                "BipartiteVector::new",
                format!("{}x1", d1 * d2),
                format!("{}x{}", v.rows(), v.cols()),
            ));
        }
        Ok(Self { d1, d2, v })
    }

    /// `φ ⊗ ψ`.
    pub fn product(phi: &ComplexMatrix, psi: &ComplexMatrix) -> Result<Self> {
        if !phi.is_vector() || !psi.is_vector() {
            return Err(Error::mismatch(
                "BipartiteVector::product",
                "column vectors",
                format!("{:?} and {:?}", phi.shape(), psi.shape()),
            ));
        }
        Self::new(phi.rows(), psi.rows(), kron(phi, psi)?)
    }

    pub fn zeros(d1: usize, d2: usize) -> Self {
        Self {
            d1,
            d2,
            v: ComplexMatrix::zeros(d1 * d2, 1),
        }
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn vector(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn into_vector(self) -> ComplexMatrix {
        self.v
    }

    pub fn norm(&self) -> f64 {
        self.v.frobenius_norm()
    }
}

pub(crate) fn check_unit(v: &ComplexMatrix, tol: f64) -> Result<()> {
    let norm = v.frobenius_norm();
    if (norm - 1.0).abs() > tol {
        return Err(Error::NotUnit { norm });
    }
    Ok(())
}

fn expect_dims(op: &'static str, a: &HsOperator, bases: &BasisPair) -> Result<()> {
    if a.d1() != bases.d1() || a.d2() != bases.d2() {
        return Err(Error::mismatch(
            op,
            format!("{}x{} operator", bases.d2(), bases.d1()),
            format!("{}x{}", a.d2(), a.d1()),
        ));
    }
    Ok(())
}

fn expect_vector_dims(op: &'static str, alpha: &BipartiteVector, bases: &BasisPair) -> Result<()> {
    if alpha.d1() != bases.d1() || alpha.d2() != bases.d2() {
        return Err(Error::mismatch(
            op,
            format!("({}, {}) factors", bases.d1(), bases.d2()),
            format!("({}, {})", alpha.d1(), alpha.d2()),
        ));
    }
    Ok(())
}

/// Column-stacks a `d2 x d1` matrix into a `d1*d2` vector (`m[(i, j)]` lands
/// at index `j*d2 + i`).
pub fn column_stack(m: &ComplexMatrix) -> ComplexMatrix {
    let (d2, d1) = m.shape();
    ComplexMatrix::from_fn(d1 * d2, 1, |k, _| m[(k % d2, k / d2)])
}

/// Inverse of [`column_stack`].
pub fn unstack(v: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    assert_eq!(v.rows(), d1 * d2, "unstack length mismatch");
    ComplexMatrix::from_fn(d2, d1, |i, j| v[(j * d2 + i, 0)])
}

/// The conjugation fixing the basis: `Kφ = Σ_i ⟨φ, φ_i⟩ φ_i`.
///
/// In the standard basis this is entrywise complex conjugation.
pub fn conjugate_in_basis(b: &Basis, phi: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !phi.is_vector() || phi.rows() != b.dim() {
        return Err(Error::mismatch(
            "conjugate_in_basis",
            format!("{}x1", b.dim()),
            format!("{}x{}", phi.rows(), phi.cols()),
        ));
    }
    let u = b.matrix();
    // ⟨φ, φ_i⟩ = conj(⟨φ_i, φ⟩) = conj((u* φ)_i)
    let coeffs = (&u.adjoint() * phi).conj();
    Ok(u * &coeffs)
}

/// Coefficients `⟨ψ_i, A φ_j⟩` as the matrix `V* A U`.
pub fn coefficients(a: &HsOperator, bases: &BasisPair) -> Result<ComplexMatrix> {
    expect_dims("coefficients", a, bases)?;
    Ok(&(&bases.b2.matrix().adjoint() * a.matrix()) * bases.b1.matrix())
}

/// `J(A) = Σ_{i,j} ⟨ψ_i, A φ_j⟩ φ_j ⊗ ψ_i`.
pub fn vec_j(a: &HsOperator, bases: &BasisPair) -> Result<BipartiteVector> {
    let c = coefficients(a, bases)?;
    // Σ c_ij φ_j ⊗ ψ_i has component (V c Uᵀ)[(b, a)] at flat index a*d2 + b
    let spread = &(bases.b2.matrix() * &c) * &bases.b1.matrix().transpose();
    BipartiteVector::new(bases.d1(), bases.d2(), column_stack(&spread))
}

/// `J*(α) = Σ_{i,j} ⟨φ_j ⊗ ψ_i, α⟩ |ψ_i⟩⟨φ_j|`, the inverse of [`vec_j`].
pub fn devec_jstar(alpha: &BipartiteVector, bases: &BasisPair) -> Result<HsOperator> {
    expect_vector_dims("devec_jstar", alpha, bases)?;
    let (u, v) = (bases.b1.matrix(), bases.b2.matrix());
    let n = unstack(alpha.vector(), bases.d1(), bases.d2());
    // ⟨φ_j ⊗ ψ_i, α⟩ = (V* N conj(U))[(i, j)]
    let c = &(&v.adjoint() * &n) * &u.conj();
    Ok(HsOperator::new(&(v * &c) * &u.adjoint()))
}

/// `T(A) = Σ_j φ_j ⊗ A φ_j`, which depends only on the `H1` basis.
pub fn vec_t(a: &HsOperator, b1: &Basis) -> Result<BipartiteVector> {
    if a.d1() != b1.dim() {
        return Err(Error::mismatch(
            "vec_t",
            format!("{} columns", b1.dim()),
            a.d1(),
        ));
    }
    let mut acc = ComplexMatrix::zeros(a.d1() * a.d2(), 1);
    for j in 0..b1.dim() {
        let phi = b1.vector(j);
        acc += &kron(&phi, &(a.matrix() * &phi))?;
    }
    BipartiteVector::new(a.d1(), a.d2(), acc)
}

/// `P_i(α) = Σ_j ⟨φ_i ⊗ ψ_j, α⟩ ψ_j`, the `H2` component of `α` along `φ_i`.
pub fn partial_slice(
    i: usize,
    alpha: &BipartiteVector,
    bases: &BasisPair,
) -> Result<ComplexMatrix> {
    expect_vector_dims("partial_slice", alpha, bases)?;
    let (d1, d2) = (bases.d1(), bases.d2());
    if i >= d1 {
        return Err(Error::IndexOutOfRange { index: i, dim: d1 });
    }
    let phi_i = bases.b1.vector(i);
    let psi = bases.b2.matrix();
    let x = alpha.vector();
    let mut out = ComplexMatrix::zeros(d2, 1);
    for j in 0..d2 {
        // ⟨φ_i ⊗ ψ_j, α⟩
        let mut coeff = ZERO;
        for a in 0..d1 {
            let pa = phi_i[(a, 0)].conj();
            if pa == ZERO {
                continue;
            }
            for b in 0..d2 {
                coeff += pa * psi[(b, j)].conj() * x[(a * d2 + b, 0)];
            }
        }
        for b in 0..d2 {
            out[(b, 0)] += coeff * psi[(b, j)];
        }
    }
    Ok(out)
}

/// `P_i*(β) = Σ_j ⟨ψ_j, β⟩ φ_i ⊗ ψ_j`.
pub fn partial_slice_adjoint(
    i: usize,
    beta: &ComplexMatrix,
    bases: &BasisPair,
) -> Result<BipartiteVector> {
    let (d1, d2) = (bases.d1(), bases.d2());
    if i >= d1 {
        return Err(Error::IndexOutOfRange { index: i, dim: d1 });
    }
    if !beta.is_vector() || beta.rows() != d2 {
        return Err(Error::mismatch(
            "partial_slice_adjoint",
            format!("{d2}x1"),
            format!("{}x{}", beta.rows(), beta.cols()),
        ));
    }
    let psi = bases.b2.matrix();
    let phi_i = bases.b1.vector(i);
    let mut acc = ComplexMatrix::zeros(d1 * d2, 1);
    for j in 0..d2 {
        let psi_j = psi.col(j);
        let c: Complex64 = (0..d2).map(|b| psi_j[(b, 0)].conj() * beta[(b, 0)]).sum();
        acc += &(&kron(&phi_i, &psi_j)? * c);
    }
    BipartiteVector::new(d1, d2, acc)
}

/// `T*(α) = Σ_j |P_j α⟩⟨φ_j|`, an independent construction of [`devec_jstar`].
pub fn devec_via_slices(alpha: &BipartiteVector, bases: &BasisPair) -> Result<HsOperator> {
    expect_vector_dims("devec_via_slices", alpha, bases)?;
    let mut acc = ComplexMatrix::zeros(bases.d2(), bases.d1());
    for j in 0..bases.d1() {
        let slice = partial_slice(j, alpha, bases)?;
        acc += &ComplexMatrix::outer(&slice, &bases.b1.vector(j));
    }
    Ok(HsOperator::new(acc))
}
