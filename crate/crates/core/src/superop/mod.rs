//! Superoperators: linear maps on `L_HS(H1, H2)`.
//!
//! The canonical representation is the R-matrix `R(B) = J B J*`, a dense
//! `(d1*d2) x (d1*d2)` matrix acting on vectorized operators in standard
//! flat coordinates. Under `R`, composing superoperators is a plain matrix
//! product. Kraus lists and Choi matrices convert into it.
//!
//! Kraus convention: a list `{M_i}` acts as `B(A) = Σ_i M_i* A M_i` and is
//! trace preserving when `Σ_i M_i M_i* = I`. This is the adjoint of the
//! more common `Σ_i M_i A M_i*` form.

mod choi;
mod kraus;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::random::random_matrix;
use crate::linalg::{min_eigenvalue, ComplexMatrix, Tolerance};
use crate::vectorize::{
    column_stack, devec_jstar, unstack, vec_j, BasisPair, BipartiteVector, HsOperator,
};

pub use choi::{check_cp, choi_map, choi_of_vector, choi_to_map, cp_min_eigenvalue, phi_plus};
pub use kraus::{
    check_tp, kraus_apply, kraus_r_action, kraus_to_r, kraus_to_r_closed_form, m_alpha,
    random_channel, tp_deviation, KrausList,
};

/// Anything that acts linearly on `d2 x d1` operators.
pub trait HsMap {
    /// `(d1, d2)` of the operators this map acts on.
    fn dims(&self) -> (usize, usize);

    fn apply(&self, a: &HsOperator) -> Result<HsOperator>;
}

/// A concrete operator on `L_HS(H1, H2)`.
#[derive(Debug, Clone, PartialEq)]
pub enum OpOnHs {
    /// `A ↦ Σ M_i* A M_i`.
    Kraus(KrausList),
    /// Matrix-unit representation: `column_stack(B(A)) = matrix · column_stack(A)`.
    Dense {
        d1: usize,
        d2: usize,
        matrix: ComplexMatrix,
    },
}

impl OpOnHs {
    pub fn dense(d1: usize, d2: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n = d1 * d2;
        if matrix.shape() != (n, n) {
            return Err(Error::mismatch(
                "OpOnHs::dense",
                format!("{n}x{n}"),
                format!("{:?}", matrix.shape()),
            ));
        }
        Ok(OpOnHs::Dense { d1, d2, matrix })
    }

    pub fn identity(d1: usize, d2: usize) -> Self {
        OpOnHs::Dense {
            d1,
            d2,
            matrix: ComplexMatrix::identity(d1 * d2),
        }
    }

    /// The transpose map `A ↦ Aᵀ` on `d x d` operators: positive but not
    /// completely positive.
    pub fn transpose_map(d: usize) -> Self {
        let n = d * d;
        // column_stack(Aᵀ)[j*d + i] = A[(j, i)] = column_stack(A)[i*d + j]
        let matrix = ComplexMatrix::from_fn(n, n, |r, c| {
            let (j, i) = (r / d, r % d);
            if c == i * d + j {
                crate::linalg::ONE
            } else {
                crate::linalg::ZERO
            }
        });
        OpOnHs::Dense {
            d1: d,
            d2: d,
            matrix,
        }
    }

    /// Dense map with i.i.d. complex Gaussian matrix-unit entries.
    pub fn random_dense<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> Self {
        OpOnHs::Dense {
            d1,
            d2,
            matrix: random_matrix(d1 * d2, d1 * d2, rng),
        }
    }

    /// Samples any map into its matrix-unit representation.
    pub fn from_map(map: &dyn HsMap) -> Result<Self> {
        let (d1, d2) = map.dims();
        Ok(OpOnHs::Dense {
            d1,
            d2,
            matrix: matrix_unit_matrix(map)?,
        })
    }

    /// Matrix of the map in the standard matrix-unit basis, columns ordered
    /// by flat index `j*d2 + i` of `|e_i⟩⟨e_j|`.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        match self {
            OpOnHs::Dense { matrix, .. } => Ok(matrix.clone()),
            OpOnHs::Kraus(_) => matrix_unit_matrix(self),
        }
    }

    /// Adjoint with respect to the HS inner product.
    pub fn adjoint(&self) -> Self {
        match self {
            OpOnHs::Kraus(list) => OpOnHs::Kraus(list.adjoint()),
            OpOnHs::Dense { d1, d2, matrix } => OpOnHs::Dense {
                d1: *d1,
                d2: *d2,
                matrix: matrix.adjoint(),
            },
        }
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &OpOnHs) -> Result<Self> {
        if self.dims() != inner.dims() {
            return Err(Error::mismatch(
                "OpOnHs::after",
                format!("{:?}", self.dims()),
                format!("{:?}", inner.dims()),
            ));
        }
        match (self, inner) {
            (OpOnHs::Kraus(outer), OpOnHs::Kraus(first)) => Ok(OpOnHs::Kraus(outer.after(first)?)),
            _ => {
                let (d1, d2) = self.dims();
                OpOnHs::dense(d1, d2, &self.to_matrix()? * &inner.to_matrix()?)
            }
        }
    }
}

impl HsMap for OpOnHs {
    fn dims(&self) -> (usize, usize) {
        match self {
            OpOnHs::Kraus(list) => (list.dim(), list.dim()),
            OpOnHs::Dense { d1, d2, .. } => (*d1, *d2),
        }
    }

    fn apply(&self, a: &HsOperator) -> Result<HsOperator> {
        let (d1, d2) = self.dims();
        if a.d1() != d1 || a.d2() != d2 {
            return Err(Error::mismatch(
                "OpOnHs::apply",
                format!("{d2}x{d1} operator"),
                format!("{}x{}", a.d2(), a.d1()),
            ));
        }
        match self {
            OpOnHs::Kraus(list) => kraus_apply(list, a),
            OpOnHs::Dense { matrix, .. } => {
                let v = matrix * &column_stack(a.matrix());
                Ok(HsOperator::new(unstack(&v, d1, d2)))
            }
        }
    }
}

/// Wraps a closure as an [`HsMap`].
pub struct FnMap<F> {
    d1: usize,
    d2: usize,
    f: F,
}

impl<F> FnMap<F>
where
    F: Fn(&ComplexMatrix) -> ComplexMatrix,
{
    pub fn new(d1: usize, d2: usize, f: F) -> Self {
        Self { d1, d2, f }
    }
}

impl<F> HsMap for FnMap<F>
where
    F: Fn(&ComplexMatrix) -> ComplexMatrix,
{
    fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    fn apply(&self, a: &HsOperator) -> Result<HsOperator> {
        let out = (self.f)(a.matrix());
        if out.shape() != (self.d2, self.d1) {
            return Err(Error::mismatch(
                "FnMap::apply",
                format!("{}x{}", self.d2, self.d1),
                format!("{:?}", out.shape()),
            ));
        }
        Ok(HsOperator::new(out))
    }
}

fn matrix_unit_matrix(map: &dyn HsMap) -> Result<ComplexMatrix> {
    let (d1, d2) = map.dims();
    let n = d1 * d2;
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let unit = HsOperator::new(ComplexMatrix::matrix_unit(d2, d1, k % d2, k / d2));
        out.set_col(k, &column_stack(map.apply(&unit)?.matrix()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Kraus(KrausList),
    /// `(d1*d2) x (d1*d2)`, acting on flat vectors in standard coordinates.
    RMatrix(ComplexMatrix),
    /// `Σ_{i,j} |φ_i⟩⟨φ_j| ⊗ B(|φ_i⟩⟨φ_j|)` in the `H1` basis, divided by
    /// `d` when `normalized`.
    Choi {
        matrix: ComplexMatrix,
        normalized: bool,
    },
}

/// A superoperator together with the bases that fix its vectorization.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOp {
    repr: Representation,
    bases: BasisPair,
}

impl SuperOp {
    pub fn from_kraus(list: KrausList, bases: BasisPair) -> Result<Self> {
        if bases.d1() != list.dim() || bases.d2() != list.dim() {
            return Err(Error::mismatch(
                "SuperOp::from_kraus",
                format!("bases of dimension {}", list.dim()),
                format!("({}, {})", bases.d1(), bases.d2()),
            ));
        }
        Ok(Self {
            repr: Representation::Kraus(list),
            bases,
        })
    }

    pub fn from_r_matrix(r: ComplexMatrix, bases: BasisPair) -> Result<Self> {
        let n = bases.d1() * bases.d2();
        if r.shape() != (n, n) {
            return Err(Error::mismatch(
                "SuperOp::from_r_matrix",
                format!("{n}x{n}"),
                format!("{:?}", r.shape()),
            ));
        }
        Ok(Self {
            repr: Representation::RMatrix(r),
            bases,
        })
    }

    pub fn from_choi(matrix: ComplexMatrix, normalized: bool, bases: BasisPair) -> Result<Self> {
        if bases.d1() != bases.d2() {
            return Err(Error::mismatch(
                "SuperOp::from_choi",
                "d1 == d2",
                format!("({}, {})", bases.d1(), bases.d2()),
            ));
        }
        let n = bases.d1() * bases.d2();
        if matrix.shape() != (n, n) {
            return Err(Error::mismatch(
                "SuperOp::from_choi",
                format!("{n}x{n}"),
                format!("{:?}", matrix.shape()),
            ));
        }
        Ok(Self {
            repr: Representation::Choi { matrix, normalized },
            bases,
        })
    }

    pub fn identity(bases: BasisPair) -> Self {
        let n = bases.d1() * bases.d2();
        Self {
            repr: Representation::RMatrix(ComplexMatrix::identity(n)),
            bases,
        }
    }

    pub fn d1(&self) -> usize {
        self.bases.d1()
    }

    pub fn d2(&self) -> usize {
        self.bases.d2()
    }

    pub fn bases(&self) -> &BasisPair {
        &self.bases
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    /// The R-matrix, converting when needed.
    pub fn r_matrix(&self) -> Result<ComplexMatrix> {
        match &self.repr {
            Representation::RMatrix(r) => Ok(r.clone()),
            Representation::Kraus(list) => Ok(kraus_to_r(list, &self.bases)?.into_r_matrix()),
            Representation::Choi { .. } => {
                Ok(lift_r(&self.action()?, &self.bases)?.into_r_matrix())
            }
        }
    }

    fn into_r_matrix(self) -> ComplexMatrix {
        match self.repr {
            Representation::RMatrix(r) => r,
            _ => unreachable!("into_r_matrix on a non-R representation"),
        }
    }

    /// Converts into the R-matrix representation.
    pub fn to_r(&self) -> Result<SuperOp> {
        SuperOp::from_r_matrix(self.r_matrix()?, self.bases.clone())
    }

    /// The map itself as an operator on `L_HS(H1, H2)`.
    pub fn action(&self) -> Result<OpOnHs> {
        match &self.repr {
            Representation::Kraus(list) => Ok(OpOnHs::Kraus(list.clone())),
            Representation::RMatrix(r) => lower_s(r, &self.bases),
            Representation::Choi { matrix, normalized } => {
                let scale = if *normalized { self.d1() as f64 } else { 1.0 };
                choi_to_map(&(matrix * scale), &self.bases.b1)
            }
        }
    }

    /// Applies the superoperator to an operator.
    pub fn apply(&self, a: &HsOperator) -> Result<HsOperator> {
        match &self.repr {
            Representation::Kraus(list) => kraus_apply(list, a),
            Representation::RMatrix(r) => {
                let alpha = vec_j(a, &self.bases)?;
                let out = BipartiteVector::new(self.d1(), self.d2(), r * alpha.vector())?;
                devec_jstar(&out, &self.bases)
            }
            Representation::Choi { .. } => self.action()?.apply(a),
        }
    }
}

/// `R(B) = J B J*`, assembled column by column: column `c` is
/// `J(B(J*(e_c)))`. In standard bases `J*(e_c)` are the matrix units.
pub fn lift_r(b: &dyn HsMap, bases: &BasisPair) -> Result<SuperOp> {
    let (d1, d2) = b.dims();
    if (d1, d2) != (bases.d1(), bases.d2()) {
        return Err(Error::mismatch(
            "lift_r",
            format!("({}, {})", bases.d1(), bases.d2()),
            format!("({d1}, {d2})"),
        ));
    }
    let n = d1 * d2;
    let mut r = ComplexMatrix::zeros(n, n);
    for c in 0..n {
        let probe = BipartiteVector::new(d1, d2, ComplexMatrix::unit_vector(n, c))?;
        let image = b.apply(&devec_jstar(&probe, bases)?)?;
        r.set_col(c, vec_j(&image, bases)?.vector());
    }
    SuperOp::from_r_matrix(r, bases.clone())
}

/// `S(C) = J* C J`, returned in matrix-unit form.
pub fn lower_s(c: &ComplexMatrix, bases: &BasisPair) -> Result<OpOnHs> {
    let (d1, d2) = (bases.d1(), bases.d2());
    let n = d1 * d2;
    if c.shape() != (n, n) {
        return Err(Error::mismatch(
            "lower_s",
            format!("{n}x{n}"),
            format!("{:?}", c.shape()),
        ));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let unit = HsOperator::new(ComplexMatrix::matrix_unit(d2, d1, k % d2, k / d2));
        let alpha = vec_j(&unit, bases)?;
        let moved = BipartiteVector::new(d1, d2, c * alpha.vector())?;
        out.set_col(k, &column_stack(devec_jstar(&moved, bases)?.matrix()));
    }
    OpOnHs::dense(d1, d2, out)
}

/// `R(B1 B2) = R(B1) R(B2)`: the result applies `inner` first, then `outer`.
pub fn compose(outer: &SuperOp, inner: &SuperOp) -> Result<SuperOp> {
    if outer.bases != inner.bases {
        return Err(Error::mismatch(
            "compose",
            format!("bases of ({}, {})", outer.d1(), outer.d2()),
            format!("different bases of ({}, {})", inner.d1(), inner.d2()),
        ));
    }
    SuperOp::from_r_matrix(&outer.r_matrix()? * &inner.r_matrix()?, outer.bases.clone())
}

/// Smallest eigenvalue and pass flag of the Choi positivity criterion, for
/// reporting.
pub fn cp_report(b: &SuperOp, tol: Tolerance) -> Result<(bool, f64)> {
    let m = b.choi_matrix()?;
    let (lo, _) = min_eigenvalue(&m)?;
    Ok((crate::linalg::is_psd(&m, tol), lo))
}
