//! Jacobi-based Hermitian eigendecomposition and singular value decomposition.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use super::ops::hermitian_part;
use super::tolerance::Tolerance;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct Svd {
    /// `m x k` with orthonormal columns, `k = min(m, n)`.
    pub u: ComplexMatrix,
    /// Singular values, nonnegative and descending.
    pub s: Vec<f64>,
    /// `n x k` with orthonormal columns.
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.s.len();
        let us = ComplexMatrix::from_fn(self.u.rows(), k, |i, j| self.u[(i, j)] * self.s[j]);
        &us * &self.v.adjoint()
    }
}

/// 2x2 unitary `W` with `W* G W` diagonal for the Hermitian block
/// `G = [[a, c], [conj(c), b]]`, returned as `[w_pp, w_pq, w_qp, w_qq]`.
fn jacobi_rotation(a: f64, b: f64, c: Complex64) -> [Complex64; 4] {
    let r = c.norm();
    let phase = c / r;
    let tau = (b - a) / (2.0 * r);
    let t = if tau.abs() > 1e150 {
        0.5 / tau
    } else {
        let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
        sign / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;
    let back = phase.conj();
    [
        Complex64::new(cs, 0.0),
        Complex64::new(sn, 0.0),
        back * -sn,
        back * cs,
    ]
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Stops once the off-diagonal Frobenius mass drops below
/// `1e-14 * ‖h‖_F`.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    if !h.is_square() {
        return Err(Error::mismatch(
            "hermitian_eig",
            "square matrix",
            format!("{}x{}", h.rows(), h.cols()),
        ));
    }
    let tol = Tolerance::default();
    let n = h.rows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            if !tol.close_c(h[(i, j)], h[(j, i)].conj()) {
                worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
            }
        }
    }
    if worst > 0.0 {
        return Err(Error::NotHermitian { deviation: worst });
    }

    let mut a = hermitian_part(h)?;
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = 1e-14 * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let c = a[(p, q)];
                if c.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let w = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, c);
                rotate_columns(&mut a, p, q, &w);
                rotate_rows_adjoint(&mut a, p, q, &w);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                rotate_columns(&mut v, p, q, &w);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEig { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, w: &[Complex64; 4]) {
    for k in 0..m.rows() {
        let xp = m[(k, p)];
        let xq = m[(k, q)];
        m[(k, p)] = xp * w[0] + xq * w[2];
        m[(k, q)] = xp * w[1] + xq * w[3];
    }
}

fn rotate_rows_adjoint(m: &mut ComplexMatrix, p: usize, q: usize, w: &[Complex64; 4]) {
    for k in 0..m.cols() {
        let xp = m[(p, k)];
        let xq = m[(q, k)];
        m[(p, k)] = w[0].conj() * xp + w[2].conj() * xq;
        m[(q, k)] = w[1].conj() * xp + w[3].conj() * xq;
    }
}

/// Thin SVD by one-sided (Hestenes) Jacobi on the complex matrix.
pub fn svd(a: &ComplexMatrix) -> Svd {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint());
        return Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        };
    }
    let (m, n) = a.shape();
    // column-major working copies
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..m).map(|i| a[(i, j)]).collect())
        .collect();
    let mut vcols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        ZERO
                    }
                })
                .collect()
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let g = gamma.norm();
                if g <= f64::MIN_POSITIVE || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let w = jacobi_rotation(alpha, beta, gamma);
                rotate_pair(&mut cols, p, q, &w);
                rotate_pair(&mut vcols, p, q, &w);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let s: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let s_max = s[0];
    let negligible = s_max * f64::EPSILON * n as f64;

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut pending = Vec::new();
    for (slot, &idx) in order.iter().enumerate() {
        if s[slot] > negligible && s[slot] > 0.0 {
            let inv = 1.0 / s[slot];
            u_cols.push(cols[idx].iter().map(|z| z * inv).collect());
        } else {
            u_cols.push(vec![ZERO; m]);
            pending.push(slot);
        }
    }
    complete_orthonormal(&mut u_cols, &pending, m);

    let u = ComplexMatrix::from_fn(m, n, |i, j| u_cols[j][i]);
    let v = ComplexMatrix::from_fn(n, n, |i, j| vcols[order[j]][i]);
    Svd { u, s, v }
}

fn rotate_pair(cols: &mut [Vec<Complex64>], p: usize, q: usize, w: &[Complex64; 4]) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (xp, xq) in cp.iter_mut().zip(cq.iter_mut()) {
        let a = *xp;
        let b = *xq;
        *xp = a * w[0] + b * w[2];
        *xq = a * w[1] + b * w[3];
    }
}

/// Fills the `pending` slots of `cols` with unit vectors orthogonal to every
/// other column, drawing candidates from the standard basis.
fn complete_orthonormal(cols: &mut [Vec<Complex64>], pending: &[usize], m: usize) {
    let mut candidate = 0usize;
    for &slot in pending {
        loop {
            assert!(candidate < m, "ran out of completion candidates");
            let mut v = vec![ZERO; m];
            v[candidate] = Complex64::new(1.0, 0.0);
            candidate += 1;
            // two Gram-Schmidt passes
            for _ in 0..2 {
                for (k, c) in cols.iter().enumerate() {
                    if k == slot {
                        continue;
                    }
                    let proj: Complex64 = c.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, ci) in v.iter_mut().zip(c) {
                        *vi -= proj * ci;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                cols[slot] = v.into_iter().map(|z| z / norm).collect();
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ops::unitarity_defect;
    use crate::linalg::random::{random_matrix, rng_from_seed};

    fn check_eig(h: &ComplexMatrix) -> HermitianEig {
        let e = hermitian_eig(h).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        let lhs = h * &e.vectors;
        let rhs = &e.vectors * &ComplexMatrix::diag_real(&e.values);
        assert!(lhs.max_abs_diff(&rhs) <= 1e-10 * scale);
        assert!(unitarity_defect(&e.vectors) <= 1e-10);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        e
    }

    #[test]
    fn eig_examples() {
        let e = check_eig(&ComplexMatrix::identity(4));
        assert!(e.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
        let e = check_eig(&ComplexMatrix::diag_real(&[1.0, 3.0]));
        assert_eq!(e.values, vec![3.0, 1.0]);
        let x = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = check_eig(&x);
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_random_hermitian() {
        let mut rng = rng_from_seed(21);
        for n in [1, 2, 3, 5, 8, 16] {
            let m = random_matrix(n, n, &mut rng);
            let h = &m + &m.adjoint();
            let e = check_eig(&h);
            let tr: f64 = e.values.iter().sum();
            assert!((tr - h.trace().unwrap().re).abs() < 1e-10);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        assert!(hermitian_eig(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    fn check_svd(a: &ComplexMatrix) -> Svd {
        let d = svd(a);
        let scale = a.frobenius_norm().max(1.0);
        assert!(d.reconstruct().max_abs_diff(a) <= 1e-10 * scale);
        assert!(unitarity_defect(&d.u) <= 1e-10);
        assert!(unitarity_defect(&d.v) <= 1e-10);
        assert!(d.s.iter().all(|&x| x >= 0.0));
        assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
        d
    }

    #[test]
    fn svd_examples() {
        let d = check_svd(&ComplexMatrix::identity(3));
        assert!(d.s.iter().all(|s| (s - 1.0).abs() < 1e-15));
        let d = check_svd(&ComplexMatrix::diag_real(&[2.0, 0.0]));
        assert_eq!(d.s, vec![2.0, 0.0]);
        let mut rng = rng_from_seed(1);
        let a = random_matrix(5, 3, &mut rng);
        check_svd(&a);
        check_svd(&a.adjoint());
    }

    #[test]
    fn svd_rank_deficient_and_zero() {
        let mut rng = rng_from_seed(2);
        let x = random_matrix(4, 1, &mut rng);
        let y = random_matrix(3, 1, &mut rng);
        let rank_one = ComplexMatrix::outer(&x, &y);
        let d = check_svd(&rank_one);
        assert!(d.s[1] < 1e-12);
        let d = check_svd(&ComplexMatrix::zeros(3, 3));
        assert!(d.s.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn svd_matches_eig_on_psd() {
        let mut rng = rng_from_seed(4);
        let m = random_matrix(6, 6, &mut rng);
        let h = &m.adjoint() * &m;
        let s = svd(&h).s;
        let e = hermitian_eig(&h).unwrap().values;
        for (a, b) in s.iter().zip(&e) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
