use num_complex::Complex64;

use super::decomp::{hermitian_eig, svd};
use super::matrix::{ComplexMatrix, ZERO};
use super::tolerance::Tolerance;
use crate::error::{Error, Result};

/// Default cap on the number of entries a Kronecker product may produce.
pub const MAX_KRON_ENTRIES: usize = 1 << 20;

/// Kronecker product with the first factor index-major:
/// `out[(i1*b.rows + i2, j1*b.cols + j2)] = a[(i1, j1)] * b[(i2, j2)]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_limit(a, b, MAX_KRON_ENTRIES)
}

pub fn kron_with_limit(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    limit: usize,
) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    let entries = rows.zip(cols).and_then(|(r, c)| r.checked_mul(c));
    let (rows, cols) = match (rows, cols, entries) {
        (Some(r), Some(c), Some(n)) if n <= limit => (r, c),
        _ => {
            return Err(Error::DimensionOverflow {
                op: "kron",
                entries: entries.unwrap_or(usize::MAX),
                limit,
            })
        }
    };
    let (br, bc) = b.shape();
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i1 in 0..a.rows() {
        for j1 in 0..a.cols() {
            let x = a[(i1, j1)];
            if x == ZERO {
                continue;
            }
            for i2 in 0..br {
                for j2 in 0..bc {
                    out[(i1 * br + i2, j1 * bc + j2)] = x * b[(i2, j2)];
                }
            }
        }
    }
    Ok(out)
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

/// Hilbert-Schmidt inner product `tr(a* b)`, conjugate-linear in `a`.
///
/// For column vectors this is the usual inner product `⟨a, b⟩`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(Error::mismatch(
            "hs_inner",
            format!("{:?}", a.shape()),
            format!("{:?}", b.shape()),
        ));
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

pub fn trace(a: &ComplexMatrix) -> Result<Complex64> {
    a.trace()
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    svd(a).s[0]
}

/// Largest entrywise deviation of `h` from its adjoint.
pub fn hermiticity_defect(h: &ComplexMatrix) -> f64 {
    h.max_abs_diff(&h.adjoint())
}

pub fn is_hermitian(h: &ComplexMatrix, tol: Tolerance) -> bool {
    if !h.is_square() {
        return false;
    }
    let n = h.rows();
    (0..n).all(|i| (i..n).all(|j| tol.close_c(h[(i, j)], h[(j, i)].conj())))
}

/// Smallest eigenvalue of the Hermitian part of `h` together with `‖h‖`.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<(f64, f64)> {
    let herm = hermitian_part(h)?;
    let eig = hermitian_eig(&herm)?;
    let norm = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok((*eig.values.last().expect("non-empty spectrum"), norm))
}

/// `true` iff `h` is Hermitian within `tol` and its smallest eigenvalue is at
/// least `-tol.abs * (1 + ‖h‖)`.
pub fn is_psd(h: &ComplexMatrix, tol: Tolerance) -> bool {
    if !is_hermitian(h, tol) {
        return false;
    }
    match min_eigenvalue(h) {
        Ok((lo, norm)) => lo >= -tol.abs * (1.0 + norm),
        Err(_) => false,
    }
}

pub(crate) fn hermitian_part(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::mismatch(
            "hermitian_part",
            "square matrix",
            format!("{}x{}", h.rows(), h.cols()),
        ));
    }
    Ok(ComplexMatrix::from_fn(h.rows(), h.cols(), |i, j| {
        (h[(i, j)] + h[(j, i)].conj()) * 0.5
    }))
}

/// `max |(a* a - I)_{ij}|`, the distance of `a` from having orthonormal columns.
pub fn unitarity_defect(a: &ComplexMatrix) -> f64 {
    let gram = &a.adjoint() * a;
    gram.max_abs_diff(&ComplexMatrix::identity(a.cols()))
}
