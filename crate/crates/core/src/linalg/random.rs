//! Seeded generation of random test instances. The RNG is always owned by
//! the caller; nothing here keeps global state.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;

pub type TestRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let v = random_matrix(d, 1, rng);
    let n = v.frobenius_norm();
    &v * (1.0 / n)
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the diagonal
/// of R made real positive.
pub fn random_unitary(d: usize, seed: u64) -> ComplexMatrix {
    random_unitary_with(d, &mut rng_from_seed(seed))
}

pub fn random_unitary_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    assert!(d >= 1, "dimension must be positive");
    let g = random_matrix(d, d, rng);
    orthonormalize_columns(&g)
}

/// Modified Gram-Schmidt; equals the Q factor of a QR decomposition whose
/// R has a positive real diagonal. Input must have full column rank.
pub(crate) fn orthonormalize_columns(g: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = g.shape();
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<Complex64> = (0..m).map(|i| g[(i, j)]).collect();
        for _ in 0..2 {
            for prev in &q {
                let proj: Complex64 = prev.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, p) in v.iter_mut().zip(prev) {
                    *x -= proj * p;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 0.0, "columns are linearly dependent");
        q.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(m, n, |i, j| q[j][i])
}

/// Random density matrix `G G* / tr(G G*)`.
pub fn random_density_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_matrix(d, d, rng);
    let rho = &g * &g.adjoint();
    let tr = rho.trace().map(|t| t.re).unwrap_or(1.0);
    let mut out = &rho * (1.0 / tr);
    // exact Hermitian symmetry
    for i in 0..d {
        out[(i, i)].im = 0.0;
        for j in (i + 1)..d {
            out[(j, i)] = out[(i, j)].conj();
        }
    }
    out
}
