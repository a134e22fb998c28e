use hsdual_core::entangle::schmidt;
use hsdual_core::linalg::random::{random_density_matrix, random_matrix, rng_from_seed};
use hsdual_core::linalg::{hermitian_eig, hs_inner, is_psd, kron, operator_norm, svd, trace};
use hsdual_core::superop::{kraus_apply, lift_r, lower_s, random_channel, HsMap, OpOnHs};
use hsdual_core::vectorize::{conjugate_in_basis, devec_jstar, vec_j};
use hsdual_core::{
    Basis, BasisPair, BipartiteVector, Complex64, ComplexMatrix, HsOperator, Tolerance,
};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0), rows * cols).prop_map(move |v| {
        ComplexMatrix::new(
            rows,
            cols,
            v.into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
        .unwrap()
    })
}

/// Gaussian-integer entries: every product is exact in floating point.
fn integer_matrix(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec((-8i32..=8, -8i32..=8), r * c).prop_map(move |v| {
            let data = v
                .into_iter()
                .map(|(re, im)| Complex64::new(re as f64, im as f64))
                .collect();
            ComplexMatrix::new(r, c, data).unwrap()
        })
    })
}

fn sized_matrix(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| matrix(r, c))
}

fn square(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max).prop_flat_map(|n| matrix(n, n))
}

fn scalar() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Largest singular value by power iteration on `a* a`.
fn power_norm(a: &ComplexMatrix) -> f64 {
    let g = &a.adjoint() * a;
    let mut v = ComplexMatrix::from_fn(g.rows(), 1, |i, _| {
        Complex64::new(1.0 + i as f64 * 0.37, 0.11 * i as f64)
    });
    let mut lambda = 0.0;
    for _ in 0..2000 {
        let w = &g * &v;
        let n = w.frobenius_norm();
        if n == 0.0 {
            return 0.0;
        }
        lambda = n;
        v = &w * (1.0 / n);
    }
    lambda.sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in integer_matrix(3), b in integer_matrix(3), c in integer_matrix(3)) {
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn kron_is_associative_up_to_rounding(a in sized_matrix(3), b in sized_matrix(3), c in sized_matrix(3)) {
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.shape(), right.shape());
        for (x, y) in left.as_slice().iter().zip(right.as_slice()) {
            prop_assert!((x - y).norm() <= 4.0 * f64::EPSILON * x.norm().max(y.norm()));
        }
    }

    #[test]
    fn kron_mixed_product(
        (a, c) in (1..=4usize, 1..=4usize, 1..=4usize).prop_flat_map(|(m, n, k)| (matrix(m, n), matrix(n, k))),
        (b, d) in (1..=4usize, 1..=4usize, 1..=4usize).prop_flat_map(|(m, n, k)| (matrix(m, n), matrix(n, k))),
    ) {
        let lhs = &kron(&a, &b).unwrap() * &kron(&c, &d).unwrap();
        let rhs = kron(&(&a * &c), &(&b * &d)).unwrap();
        let scale = 1.0 + rhs.max_abs();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale);
    }

    #[test]
    fn kron_acts_factorwise(a in matrix(3, 3), b in matrix(3, 3), phi in matrix(3, 1), psi in matrix(3, 1)) {
        let lhs = &kron(&a, &b).unwrap() * &kron(&phi, &psi).unwrap();
        let rhs = kron(&(&a * &phi), &(&b * &psi)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + rhs.max_abs()));
    }

    #[test]
    fn trace_is_cyclic((a, b) in (1..=8usize).prop_flat_map(|n| (matrix(n, n), matrix(n, n)))) {
        let ab = trace(&(&a * &b)).unwrap();
        let ba = trace(&(&b * &a)).unwrap();
        prop_assert!((ab - ba).norm() <= 1e-12 * (1.0 + ab.norm()));
    }

    #[test]
    fn hs_inner_is_positive_definite(a in sized_matrix(5)) {
        let n = hs_inner(&a, &a).unwrap();
        prop_assert!(n.im.abs() <= 1e-12 * (1.0 + n.re));
        prop_assert!(n.re >= 0.0);
        prop_assert_eq!(n.re == 0.0, a.max_abs() == 0.0);
    }

    #[test]
    fn hs_inner_is_conjugate_symmetric((a, b) in (1..=5usize, 1..=5usize).prop_flat_map(|(r, c)| (matrix(r, c), matrix(r, c)))) {
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-12 * (1.0 + ab.norm()));
    }

    #[test]
    fn adjoint_is_an_involution(a in sized_matrix(6)) {
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn adjoint_moves_across_inner_product(a in matrix(4, 4), phi in matrix(4, 1), psi in matrix(4, 1)) {
        let lhs = hs_inner(&(&a * &phi), &psi).unwrap();
        let rhs = hs_inner(&phi, &(&a.adjoint() * &psi)).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn svd_reconstructs(a in sized_matrix(6)) {
        let dec = svd(&a);
        let scale = 1.0 + a.frobenius_norm();
        prop_assert!(dec.reconstruct().max_abs_diff(&a) <= 1e-10 * scale);
        let k = dec.s.len();
        prop_assert!((&dec.u.adjoint() * &dec.u).max_abs_diff(&ComplexMatrix::identity(k)) <= 1e-10);
        prop_assert!((&dec.v.adjoint() * &dec.v).max_abs_diff(&ComplexMatrix::identity(k)) <= 1e-10);
        prop_assert!(dec.s.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(dec.s.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn operator_norm_matches_power_iteration(a in sized_matrix(4)) {
        let n = operator_norm(&a);
        prop_assert!((n - power_norm(&a)).abs() <= 1e-6 * (1.0 + n));
    }

    #[test]
    fn eig_diagonalizes_hermitian(g in square(6)) {
        let h = &g + &g.adjoint();
        let eig = hermitian_eig(&h).unwrap();
        let n = h.rows();
        let diag = ComplexMatrix::diag_real(&eig.values);
        let scale = 1.0 + h.frobenius_norm();
        prop_assert!((&h * &eig.vectors).max_abs_diff(&(&eig.vectors * &diag)) <= 1e-10 * scale);
        prop_assert!((&eig.vectors.adjoint() * &eig.vectors).max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn svd_and_eig_agree_on_psd(g in square(6)) {
        let h = &g.adjoint() * &g;
        prop_assert!(is_psd(&h, Tolerance::default()));
        let s = svd(&h).s;
        let e = hermitian_eig(&h).unwrap().values;
        let scale = 1.0 + s[0];
        for (x, y) in s.iter().zip(&e) {
            prop_assert!((x - y).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn vectorization_is_an_isometry(
        (a, b) in (1..=4usize, 1..=4usize).prop_flat_map(|(d1, d2)| (matrix(d2, d1), matrix(d2, d1))),
        seed in any::<u64>(),
    ) {
        let bases = BasisPair::new(Basis::random(a.cols(), seed), Basis::random(a.rows(), seed ^ 1));
        let (a, b) = (HsOperator::new(a), HsOperator::new(b));
        let ja = vec_j(&a, &bases).unwrap();
        let jb = vec_j(&b, &bases).unwrap();
        let lhs = hs_inner(ja.vector(), jb.vector()).unwrap();
        let rhs = hs_inner(a.matrix(), b.matrix()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
        prop_assert!(devec_jstar(&ja, &bases).unwrap().matrix().max_abs_diff(a.matrix()) <= 1e-12 * (1.0 + a.matrix().max_abs()));
    }

    #[test]
    fn conjugation_is_an_antiunitary_involution(phi in matrix(5, 1), psi in matrix(5, 1), c in scalar(), seed in any::<u64>()) {
        let b = Basis::random(5, seed);
        let k = |v: &ComplexMatrix| conjugate_in_basis(&b, v).unwrap();
        prop_assert!(k(&k(&phi)).max_abs_diff(&phi) <= 1e-12 * (1.0 + phi.max_abs()));
        let lhs = hs_inner(&k(&phi), &k(&psi)).unwrap();
        let rhs = hs_inner(&psi, &phi).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        let scaled = k(&(&phi * c));
        prop_assert!(scaled.max_abs_diff(&(&k(&phi) * c.conj())) <= 1e-12 * (1.0 + scaled.max_abs()));
    }

    #[test]
    fn dense_maps_are_linear(seed in any::<u64>(), x in scalar(), y in scalar(), d1 in 1..=3usize, d2 in 1..=3usize) {
        let mut rng = rng_from_seed(seed);
        let b = OpOnHs::random_dense(d1, d2, &mut rng);
        let p = HsOperator::new(random_matrix(d2, d1, &mut rng));
        let q = HsOperator::new(random_matrix(d2, d1, &mut rng));
        let combo = HsOperator::new(&(p.matrix() * x) + &(q.matrix() * y));
        let lhs = b.apply(&combo).unwrap();
        let rhs = &(b.apply(&p).unwrap().matrix() * x) + &(b.apply(&q).unwrap().matrix() * y);
        prop_assert!(lhs.matrix().max_abs_diff(&rhs) <= 1e-10 * (1.0 + rhs.max_abs()));
    }

    #[test]
    fn lift_and_lower_are_inverse(seed in any::<u64>(), d1 in 1..=3usize, d2 in 1..=3usize) {
        let mut rng = rng_from_seed(seed);
        let bases = BasisPair::new(Basis::random_with(d1, &mut rng), Basis::random_with(d2, &mut rng));
        let b = OpOnHs::random_dense(d1, d2, &mut rng);
        let r = lift_r(&b, &bases).unwrap().r_matrix().unwrap();
        let back = lower_s(&r, &bases).unwrap();
        prop_assert!(back.to_matrix().unwrap().max_abs_diff(&b.to_matrix().unwrap()) <= 1e-12 * (1.0 + r.max_abs()));
    }

    #[test]
    fn trace_preserving_channels_preserve_trace(seed in any::<u64>(), d in 1..=4usize, rank in 1..=4usize) {
        let mut rng = rng_from_seed(seed);
        let list = random_channel(d, rank, &mut rng);
        let a = HsOperator::new(random_matrix(d, d, &mut rng));
        let out = kraus_apply(&list, &a).unwrap();
        let (t_in, t_out) = (trace(a.matrix()).unwrap(), trace(out.matrix()).unwrap());
        prop_assert!((t_in - t_out).norm() <= 1e-10 * (1.0 + t_in.norm()));
        let rho = HsOperator::new(random_density_matrix(d, &mut rng));
        prop_assert!(is_psd(kraus_apply(&list, &rho).unwrap().matrix(), Tolerance::default()));
    }

    #[test]
    fn schmidt_reconstructs(v in (1..=5usize, 1..=5usize).prop_flat_map(|(d1, d2)| (Just(d1), Just(d2), matrix(d1 * d2, 1))), seed in any::<u64>()) {
        let (d1, d2, v) = v;
        let alpha = BipartiteVector::new(d1, d2, v).unwrap();
        let bases = BasisPair::new(Basis::random(d1, seed), Basis::random(d2, seed.wrapping_add(9)));
        let res = schmidt(&alpha, &bases).unwrap();
        let scale = 1.0 + alpha.norm();
        prop_assert!(res.reconstruct().max_abs_diff(alpha.vector()) <= 1e-10 * scale);
        let sq: f64 = res.lambdas.iter().map(|l| l * l).sum();
        prop_assert!((sq - alpha.norm().powi(2)).abs() <= 1e-10 * scale * scale);
    }
}

#[test]
fn dims_of_random_dense_maps() {
    let mut rng = rng_from_seed(0);
    assert_eq!(OpOnHs::random_dense(2, 3, &mut rng).dims(), (2, 3));
}
