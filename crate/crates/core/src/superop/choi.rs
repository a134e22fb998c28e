use super::{cp_report, HsMap, OpOnHs, Representation, SuperOp};
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, Tolerance};
use crate::vectorize::{column_stack, Basis, BasisPair, BipartiteVector, HsOperator};

/// The unnormalized maximally entangled vector `φ_+ = Σ_j φ_j ⊗ φ_j`.
pub fn phi_plus(basis: &Basis) -> BipartiteVector {
    let d = basis.dim();
    let mut acc = ComplexMatrix::zeros(d * d, 1);
    for j in 0..d {
        let phi = basis.vector(j);
        acc += &kron(&phi, &phi).expect("d^2 entries fit");
    }
    BipartiteVector::new(d, d, acc).expect("shape is d*d")
}

/// `(I ⊗ A) φ_+`.
pub fn choi_of_vector(a: &HsOperator, basis: &Basis) -> Result<BipartiteVector> {
    let d = basis.dim();
    if a.d1() != d || a.d2() != d {
        return Err(Error::mismatch(
            "choi_of_vector",
            format!("{d}x{d} operator"),
            format!("{}x{}", a.d2(), a.d1()),
        ));
    }
    let lifted = kron(&ComplexMatrix::identity(d), a.matrix())?;
    BipartiteVector::new(d, d, &lifted * phi_plus(basis).vector())
}

/// `C(B) = Σ_{i,j} |φ_i⟩⟨φ_j| ⊗ B(|φ_i⟩⟨φ_j|)`, which equals
/// `(I ⊗ B)|φ_+⟩⟨φ_+|`. With `normalize` the result is divided by `d`, as
/// if `φ_+` had unit norm.
pub fn choi_map(b: &dyn HsMap, basis: &Basis, normalize: bool) -> Result<SuperOp> {
    let d = basis.dim();
    let (d1, d2) = b.dims();
    if d1 != d2 {
        return Err(Error::mismatch(
            "choi_map",
            "map on L(H) with d1 == d2",
            format!("({d1}, {d2})"),
        ));
    }
    if d1 != d {
        return Err(Error::mismatch("choi_map", format!("dimension {d}"), d1));
    }
    let n = d * d;
    let mut acc = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        let phi_i = basis.vector(i);
        for j in 0..d {
            let unit = ComplexMatrix::outer(&phi_i, &basis.vector(j));
            let image = b.apply(&HsOperator::new(unit.clone()))?;
            acc += &kron(&unit, image.matrix())?;
        }
    }
    if normalize {
        acc = &acc * (1.0 / d as f64);
    }
    SuperOp::from_choi(acc, normalize, BasisPair::new(basis.clone(), basis.clone()))
}

/// Recovers the map from an unnormalized Choi matrix:
/// `B(|φ_i⟩⟨φ_j|) = (⟨φ_i| ⊗ I) C (|φ_j⟩ ⊗ I)`.
pub fn choi_to_map(choi: &ComplexMatrix, basis: &Basis) -> Result<OpOnHs> {
    let d = basis.dim();
    let n = d * d;
    if choi.shape() != (n, n) {
        return Err(Error::mismatch(
            "choi_to_map",
            format!("{n}x{n}"),
            format!("{:?}", choi.shape()),
        ));
    }
    let id = ComplexMatrix::identity(d);
    // blocks[i][j] = B(|φ_i⟩⟨φ_j|)
    let mut blocks = Vec::with_capacity(d);
    for i in 0..d {
        let bra = kron(&basis.vector(i).adjoint(), &id)?;
        let row: Result<Vec<ComplexMatrix>> = (0..d)
            .map(|j| Ok(&(&bra * choi) * &kron(&basis.vector(j), &id)?))
            .collect();
        blocks.push(row?);
    }
    let u = basis.matrix();
    let mut dense = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        // standard matrix unit |e_a⟩⟨e_b| with column-stack index k = b*d + a
        let (a, b) = (k % d, k / d);
        let mut image = ComplexMatrix::zeros(d, d);
        for (i, row) in blocks.iter().enumerate() {
            for (j, block) in row.iter().enumerate() {
                // ⟨φ_i, |e_a⟩⟨e_b| φ_j⟩
                let c = u[(a, i)].conj() * u[(b, j)];
                image += &(block * c);
            }
        }
        dense.set_col(k, &column_stack(&image));
    }
    OpOnHs::dense(d, d, dense)
}

/// Smallest eigenvalue of the Choi matrix.
pub fn cp_min_eigenvalue(b: &SuperOp) -> Result<f64> {
    Ok(cp_report(b, Tolerance::default())?.1)
}

/// Complete positivity via positivity of the Choi matrix.
pub fn check_cp(b: &SuperOp, tol: Tolerance) -> Result<bool> {
    if b.d1() != b.d2() {
        return Err(Error::mismatch(
            "check_cp",
            "d1 == d2",
            format!("({}, {})", b.d1(), b.d2()),
        ));
    }
    Ok(cp_report(b, tol)?.0)
}

impl SuperOp {
    /// The (unnormalized) Choi matrix in the `H1` basis.
    pub fn choi_matrix(&self) -> Result<ComplexMatrix> {
        match &self.repr {
            Representation::Choi { matrix, normalized } => Ok(if *normalized {
                matrix * (self.d1() as f64)
            } else {
                matrix.clone()
            }),
            _ => match choi_map(&self.action()?, &self.bases.b1, false)?.repr {
                Representation::Choi { matrix, .. } => Ok(matrix),
                _ => unreachable!("choi_map returns a Choi representation"),
            },
        }
    }
}
