//! Executable property suites.
//!
//! Every check draws its random instances from a seed, so a run is fully
//! determined by `(check, seed)`. A check reports whether it passed and the
//! largest deviation it observed against its bound.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::bench::{run_bench, BenchConfig};
use crate::entangle::{pure_state_transport, schmidt, schmidt_rank};
use crate::error::{Error, Result};
use crate::linalg::random::{
    random_matrix, random_unit_vector, random_unitary_with, rng_from_seed, TestRng,
};
use crate::linalg::{
    hermitian_eig, hs_inner, kron, min_eigenvalue, operator_norm, trace, ComplexMatrix, Tolerance,
};
use crate::superop::{
    check_cp, choi_map, choi_of_vector, choi_to_map, compose, kraus_apply, kraus_to_r,
    kraus_to_r_closed_form, lift_r, lower_s, random_channel, HsMap, OpOnHs, Representation,
    SuperOp,
};
use crate::vectorize::{
    coefficients, conjugate_in_basis, devec_jstar, devec_via_slices, partial_slice,
    partial_slice_adjoint, vec_j, vec_t, Basis, BasisPair, BipartiteVector, HsOperator,
};

/// Outcome of one property check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Largest deviation observed. For checks that demand a gap (rather than
    /// agreement) this is the smallest gap observed.
    pub max_deviation: f64,
    pub bound: f64,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (max deviation = {:e})",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.max_deviation
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Vectorize,
    Superop,
    Entangle,
    Choi,
    BenchSanity,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = [
        "all",
        "vectorize",
        "superop",
        "entangle",
        "choi",
        "bench-sanity",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Vectorize => "vectorize",
            Suite::Superop => "superop",
            Suite::Entangle => "entangle",
            Suite::Choi => "choi",
            Suite::BenchSanity => "bench-sanity",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "vectorize" => Suite::Vectorize,
            "superop" => Suite::Superop,
            "entangle" => Suite::Entangle,
            "choi" => Suite::Choi,
            "bench-sanity" => Suite::BenchSanity,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown suite '{other}' (expected one of {})",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

type CheckFn = fn(&mut Probe, &mut TestRng) -> Result<()>;

/// `(suite, name, check)` in report order.
const REGISTRY: &[(Suite, &str, f64, CheckFn)] = &[
    (Suite::Vectorize, "vectorize/isometry", 1e-10, j_isometry),
    (Suite::Vectorize, "vectorize/inverse_pair", 1e-12, j_inverse),
    (
        Suite::Vectorize,
        "vectorize/conjugation_laws",
        1e-12,
        conjugation_laws,
    ),
    (
        Suite::Vectorize,
        "vectorize/rank_one_rule",
        1e-12,
        rank_one_rule,
    ),
    (
        Suite::Vectorize,
        "vectorize/reconstruction",
        1e-12,
        reconstruction,
    ),
    (
        Suite::Vectorize,
        "vectorize/basis_change",
        1e-10,
        basis_change,
    ),
    (
        Suite::Vectorize,
        "vectorize/vec_t_equals_j",
        1e-12,
        vec_t_equals_j,
    ),
    (Suite::Vectorize, "vectorize/slices", 1e-12, slices),
    (
        Suite::Superop,
        "superop/r_multiplicative",
        1e-8,
        r_multiplicative,
    ),
    (Suite::Superop, "superop/r_adjoint", 1e-8, r_adjoint),
    (Suite::Superop, "superop/r_unit", 1e-8, r_unit),
    (Suite::Superop, "superop/r_norm", 1e-8, r_norm),
    (Suite::Superop, "superop/s_inverse", 1e-12, s_inverse),
    (
        Suite::Superop,
        "superop/hs_preservation",
        1e-10,
        hs_preservation,
    ),
    (
        Suite::Superop,
        "superop/complete_positivity",
        1e-10,
        complete_positivity,
    ),
    (
        Suite::Superop,
        "superop/kraus_dual_construction",
        1e-10,
        kraus_dual,
    ),
    (
        Suite::Superop,
        "superop/kraus_round_trip",
        1e-10,
        kraus_round_trip,
    ),
    (
        Suite::Superop,
        "superop/compose_two_channels",
        1e-10,
        compose_two_channels,
    ),
    (Suite::Superop, "superop/compose_chain", 1e-8, compose_chain),
    (Suite::Choi, "choi/identity_corner_ones", 0.0, choi_identity),
    (Suite::Choi, "choi/hs_isometry", 1e-10, choi_isometry),
    (
        Suite::Choi,
        "choi/not_multiplicative",
        0.1,
        choi_not_multiplicative,
    ),
    (
        Suite::Choi,
        "choi/transpose_min_eigenvalue",
        1e-10,
        choi_transpose,
    ),
    (
        Suite::Choi,
        "choi/kraus_positive",
        1e-10,
        choi_kraus_positive,
    ),
    (Suite::Choi, "choi/vector_form", 1e-12, choi_vector_form),
    (Suite::Choi, "choi/round_trip", 1e-10, choi_round_trip),
    (
        Suite::Entangle,
        "entangle/product_rank_one",
        1e-10,
        product_rank_one,
    ),
    (
        Suite::Entangle,
        "entangle/generic_full_rank",
        1e-10,
        generic_full_rank,
    ),
    (
        Suite::Entangle,
        "entangle/reconstruction",
        1e-10,
        schmidt_reconstruction,
    ),
    (Suite::Entangle, "entangle/norm", 1e-10, schmidt_norm),
    (
        Suite::Entangle,
        "entangle/bell_coefficients",
        1e-12,
        bell_coefficients,
    ),
    (
        Suite::Entangle,
        "entangle/local_unitary_invariance",
        1e-10,
        local_unitary_invariance,
    ),
    (
        Suite::Entangle,
        "entangle/factorized_action",
        1e-10,
        factorized_action,
    ),
    (
        Suite::Entangle,
        "entangle/pure_state_transport",
        1e-10,
        transport_projection,
    ),
    (
        Suite::BenchSanity,
        "bench-sanity/agreement",
        1e-8,
        bench_agreement,
    ),
    (
        Suite::BenchSanity,
        "bench-sanity/determinism",
        0.0,
        bench_determinism,
    ),
];

/// Names of every check in `suite`, in report order.
pub fn check_names(suite: Suite) -> Vec<&'static str> {
    REGISTRY
        .iter()
        .filter(|(s, ..)| suite == Suite::All || *s == suite)
        .map(|(_, name, ..)| *name)
        .collect()
}

/// Runs every check in `suite`.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<Check> {
    REGISTRY
        .iter()
        .enumerate()
        .filter(|(_, (s, ..))| suite == Suite::All || *s == suite)
        .map(|(idx, entry)| run_entry(idx, entry, seed))
        .collect()
}

/// Runs a single check by its full name, e.g. `"vectorize/isometry"`.
pub fn run_check(name: &str, seed: u64) -> Option<Check> {
    REGISTRY
        .iter()
        .enumerate()
        .find(|(_, (_, n, ..))| *n == name)
        .map(|(idx, entry)| run_entry(idx, entry, seed))
}

fn run_entry(idx: usize, entry: &(Suite, &'static str, f64, CheckFn), seed: u64) -> Check {
    let (_, name, bound, f) = *entry;
    // each check gets its own stream so that suites can be run in any subset
    let mut rng = rng_from_seed(
        seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(idx as u64),
    );
    let mut probe = Probe::new(bound);
    let outcome = f(&mut probe, &mut rng);
    let passed = outcome.is_ok() && probe.ok;
    let max_deviation = if outcome.is_ok() {
        probe.max
    } else {
        f64::INFINITY
    };
    Check {
        name,
        passed,
        max_deviation,
        bound,
    }
}

/// Accumulates deviations for one check.
pub struct Probe {
    bound: f64,
    max: f64,
    ok: bool,
    /// Set for checks that demand a minimum gap instead of agreement.
    gap_mode: bool,
}

impl Probe {
    fn new(bound: f64) -> Self {
        Self {
            bound,
            max: 0.0,
            ok: true,
            gap_mode: false,
        }
    }

    /// Records a deviation that must stay at or below the bound.
    fn dev(&mut self, d: f64) {
        self.max = self.max.max(d);
        if d.is_nan() || d > self.bound {
            self.ok = false;
        }
    }

    fn diff(&mut self, a: &ComplexMatrix, b: &ComplexMatrix) {
        self.dev(a.max_abs_diff(b));
    }

    /// Records a gap that must be at least the bound.
    fn gap(&mut self, g: f64) {
        if !self.gap_mode {
            self.gap_mode = true;
            self.max = f64::INFINITY;
        }
        self.max = self.max.min(g);
        if g.is_nan() || g < self.bound {
            self.ok = false;
        }
    }

    /// A qualitative condition.
    fn require(&mut self, cond: bool) {
        if !cond {
            self.ok = false;
        }
    }
}

fn random_pair<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> BasisPair {
    BasisPair::new(Basis::random_with(d1, rng), Basis::random_with(d2, rng))
}

fn random_op<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> HsOperator {
    HsOperator::new(random_matrix(d2, d1, rng))
}

fn random_bipartite<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> BipartiteVector {
    BipartiteVector::new(d1, d2, random_matrix(d1 * d2, 1, rng)).expect("length is d1*d2")
}

fn inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<num_complex::Complex64> {
    hs_inner(a, b)
}

fn rel(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

// ---------------------------------------------------------------- vectorize

const ISOMETRY_DIMS: [(usize, usize); 4] = [(2, 2), (3, 2), (4, 4), (8, 8)];
const ISOMETRY_PAIRS: usize = 200;

fn j_isometry(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for (d1, d2) in ISOMETRY_DIMS {
        for _ in 0..ISOMETRY_PAIRS {
            let bases = random_pair(d1, d2, rng);
            let (a, b) = (random_op(d1, d2, rng), random_op(d1, d2, rng));
            let lhs = inner(vec_j(&a, &bases)?.vector(), vec_j(&b, &bases)?.vector())?;
            let rhs = hs_inner(a.matrix(), b.matrix())?;
            p.dev(rel(lhs, rhs));
        }
    }
    Ok(())
}

fn j_inverse(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for (d1, d2) in ISOMETRY_DIMS {
        for _ in 0..ISOMETRY_PAIRS {
            let bases = random_pair(d1, d2, rng);
            let a = random_op(d1, d2, rng);
            let alpha = random_bipartite(d1, d2, rng);
            p.diff(
                devec_jstar(&vec_j(&a, &bases)?, &bases)?.matrix(),
                a.matrix(),
            );
            p.diff(
                vec_j(&devec_jstar(&alpha, &bases)?, &bases)?.vector(),
                alpha.vector(),
            );
        }
    }
    Ok(())
}

fn conjugation_laws(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for d in 1..=8 {
        for _ in 0..20 {
            let b = Basis::random_with(d, rng);
            let phi = random_matrix(d, 1, rng);
            let psi = random_matrix(d, 1, rng);
            let k = |v: &ComplexMatrix| conjugate_in_basis(&b, v);
            let (kphi, kpsi) = (k(&phi)?, k(&psi)?);
            // K² = I
            p.diff(&k(&kphi)?, &phi);
            // K* = K: ⟨φ, Kψ⟩ = ⟨ψ, Kφ⟩
            p.dev((inner(&phi, &kpsi)? - inner(&psi, &kphi)?).norm());
            // ⟨Kφ, Kψ⟩ = ⟨ψ, φ⟩
            p.dev((inner(&kphi, &kpsi)? - inner(&psi, &phi)?).norm());
            // antilinear
            let c =
                num_complex::Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            p.diff(&k(&(&phi * c))?, &(&kphi * c.conj()));
            // fixes the basis
            for i in 0..d {
                p.diff(&k(&b.vector(i))?, &b.vector(i));
            }
            // orthonormal families stay orthonormal
            let w = random_unitary_with(d, rng);
            let mut kw = ComplexMatrix::zeros(d, d);
            for j in 0..d {
                kw.set_col(j, &k(&w.col(j))?);
            }
            p.diff(&(&kw.adjoint() * &kw), &ComplexMatrix::identity(d));
        }
    }
    Ok(())
}

fn rank_one_rule(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for _ in 0..50 {
        let (d1, d2) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let bases = random_pair(d1, d2, rng);
        let phi = random_matrix(d1, 1, rng);
        let psi = random_matrix(d2, 1, rng);
        let kphi = conjugate_in_basis(&bases.b1, &phi)?;
        let j = vec_j(&HsOperator::rank_one(&psi, &phi), &bases)?;
        p.diff(j.vector(), BipartiteVector::product(&kphi, &psi)?.vector());
        let back = devec_jstar(&BipartiteVector::product(&phi, &psi)?, &bases)?;
        p.diff(back.matrix(), &ComplexMatrix::outer(&psi, &kphi));
        for i in 0..d2 {
            for jj in 0..d1 {
                let (ps, ph) = (bases.b2.vector(i), bases.b1.vector(jj));
                let unit = vec_j(&HsOperator::rank_one(&ps, &ph), &bases)?;
                p.diff(unit.vector(), BipartiteVector::product(&ph, &ps)?.vector());
            }
        }
    }
    Ok(())
}

fn reconstruction(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for _ in 0..50 {
        let (d1, d2) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let bases = random_pair(d1, d2, rng);
        let a = random_op(d1, d2, rng);
        let c = coefficients(&a, &bases)?;
        let mut acc = ComplexMatrix::zeros(d2, d1);
        for i in 0..d2 {
            for j in 0..d1 {
                acc +=
                    &(&ComplexMatrix::outer(&bases.b2.vector(i), &bases.b1.vector(j)) * c[(i, j)]);
            }
        }
        p.diff(&acc, a.matrix());
    }
    Ok(())
}

fn basis_change(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for _ in 0..50 {
        let (d1, d2) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let old = random_pair(d1, d2, rng);
        let new = random_pair(d1, d2, rng);
        let a = random_op(d1, d2, rng);
        let c = coefficients(&a, &old)?;
        let mut acc = ComplexMatrix::zeros(d1 * d2, 1);
        for i in 0..d2 {
            for j in 0..d1 {
                let kphi = conjugate_in_basis(&new.b1, &old.b1.vector(j))?;
                acc += &(&kron(&kphi, &old.b2.vector(i))? * c[(i, j)]);
            }
        }
        p.diff(vec_j(&a, &new)?.vector(), &acc);
    }
    Ok(())
}

fn vec_t_equals_j(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for _ in 0..100 {
        let (d1, d2) = (rng.random_range(1..=8), rng.random_range(1..=8));
        let b1 = Basis::random_with(d1, rng);
        let a = random_op(d1, d2, rng);
        let t = vec_t(&a, &b1)?;
        let std = BasisPair::new(b1.clone(), Basis::standard(d2));
        p.diff(t.vector(), vec_j(&a, &std)?.vector());
        let other = BasisPair::new(b1, Basis::random_with(d2, rng));
        p.diff(t.vector(), vec_j(&a, &other)?.vector());
    }
    Ok(())
}

fn slices(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for (d1, d2) in [(4, 3), (3, 2)] {
        for _ in 0..100 {
            let bases = random_pair(d1, d2, rng);
            let alpha = random_bipartite(d1, d2, rng);
            let beta = random_matrix(d2, 1, rng);
            let phi = random_matrix(d1, 1, rng);
            let psi = random_matrix(d2, 1, rng);
            let prod = BipartiteVector::product(&phi, &psi)?;
            let mut sum = ComplexMatrix::zeros(d1 * d2, 1);
            for i in 0..d1 {
                let phi_i = bases.b1.vector(i);
                // P_i(φ⊗ψ) = ⟨φ_i, φ⟩ ψ
                p.diff(
                    &partial_slice(i, &prod, &bases)?,
                    &(&psi * inner(&phi_i, &phi)?),
                );
                sum += &kron(&phi_i, &partial_slice(i, &alpha, &bases)?)?;
                // ⟨P_i α, β⟩ = ⟨α, P_i* β⟩
                let adj = partial_slice_adjoint(i, &beta, &bases)?;
                let lhs = inner(&partial_slice(i, &alpha, &bases)?, &beta)?;
                p.dev((lhs - inner(alpha.vector(), adj.vector())?).norm());
                p.diff(&partial_slice(i, &adj, &bases)?, &beta);
            }
            p.diff(&sum, alpha.vector());
            p.diff(
                devec_via_slices(&alpha, &bases)?.matrix(),
                devec_jstar(&alpha, &bases)?.matrix(),
            );
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- superop

fn dense_instances(rng: &mut TestRng, count: usize) -> Vec<(usize, BasisPair)> {
    (0..count)
        .map(|t| {
            let d = 2 + t % 2;
            (d, random_pair(d, d, rng))
        })
        .collect()
}

fn r_of(b: &OpOnHs, bases: &BasisPair) -> Result<ComplexMatrix> {
    lift_r(b, bases)?.r_matrix()
}

fn r_multiplicative(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for (d, bases) in dense_instances(rng, 50) {
        let b1 = OpOnHs::random_dense(d, d, rng);
        let b2 = OpOnHs::random_dense(d, d, rng);
        let lhs = r_of(&b1.after(&b2)?, &bases)?;
        p.diff(&lhs, &(&r_of(&b1, &bases)? * &r_of(&b2, &bases)?));
    }
    Ok(())
}

fn r_adjoint(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for (d, bases) in dense_instances(rng, 50) {
        let b = OpOnHs::random_dense(d, d, rng);
        p.diff(&r_of(&b.adjoint(), &bases)?, &r_of(&b, &bases)?.adjoint());
    }
    Ok(())
}

fn r_unit(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for (d, bases) in dense_instances(rng, 50) {
        p.diff(
            &r_of(&OpOnHs::identity(d, d), &bases)?,
            &ComplexMatrix::identity(d * d),
        );
    }
    Ok(())
}

fn r_norm(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for (d, bases) in dense_instances(rng, 50) {
        let b = OpOnHs::random_dense(d, d, rng);
        p.dev((operator_norm(&r_of(&b, &bases)?) - operator_norm(&b.to_matrix()?)).abs());
    }
    Ok(())
}

fn s_inverse(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for (d, bases) in dense_instances(rng, 50) {
        let b = OpOnHs::random_dense(d, d, rng);
        let back = lower_s(&r_of(&b, &bases)?, &bases)?;
        p.diff(&back.to_matrix()?, &b.to_matrix()?);
        let c = random_matrix(d * d, d * d, rng);
        p.diff(&r_of(&lower_s(&c, &bases)?, &bases)?, &c);
    }
    // rectangular spaces as well
    for _ in 0..10 {
        let bases = random_pair(3, 2, rng);
        let c = random_matrix(6, 6, rng);
        p.diff(&r_of(&lower_s(&c, &bases)?, &bases)?, &c);
    }
    Ok(())
}

fn hs_preservation(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for (d, bases) in dense_instances(rng, 50) {
        let b1 = OpOnHs::random_dense(d, d, rng);
        let b2 = OpOnHs::random_dense(d, d, rng);
        let (r1, r2) = (r_of(&b1, &bases)?, r_of(&b2, &bases)?);
        let (m1, m2) = (b1.to_matrix()?, b2.to_matrix()?);
        p.dev(rel(hs_inner(&r1, &r2)?, hs_inner(&m1, &m2)?));
        p.dev(rel(
            trace(&(&r1.adjoint() * &r1))?,
            trace(&(&m1.adjoint() * &m1))?,
        ));
    }
    Ok(())
}

/// For maps `A_i` and operators `B_i` on `H ⊗ H`, both the block matrix
/// `[R(A_i* A_j)]` and `Σ B_i* R(A_i* A_j) B_j` must be positive.
fn complete_positivity(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    let d = 2;
    for t in 0..25 {
        let k = 1 + t % 3;
        let bases = random_pair(d, d, rng);
        let maps: Vec<OpOnHs> = (0..k).map(|_| OpOnHs::random_dense(d, d, rng)).collect();
        let ops: Vec<ComplexMatrix> = (0..k).map(|_| random_matrix(d * d, d * d, rng)).collect();
        let n = d * d;
        let mut block = ComplexMatrix::zeros(k * n, k * n);
        let mut sum = ComplexMatrix::zeros(n, n);
        for i in 0..k {
            for j in 0..k {
                let r = r_of(&maps[i].adjoint().after(&maps[j])?, &bases)?;
                for a in 0..n {
                    for b in 0..n {
                        block[(i * n + a, j * n + b)] = r[(a, b)];
                    }
                }
                sum += &(&(&ops[i].adjoint() * &r) * &ops[j]);
            }
        }
        for m in [&block, &sum] {
            let (lo, norm) = min_eigenvalue(m)?;
            p.dev((-lo).max(0.0) / (1.0 + norm));
            p.dev(m.max_abs_diff(&m.adjoint()) / (1.0 + norm));
        }
    }
    Ok(())
}

fn kraus_dual(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for t in 0..50 {
        let d = 1 + t % 4;
        let rank = 1 + (t / 4) % 4;
        let list = random_channel(d, rank, rng);
        let b = Basis::random_with(d, rng);
        let bases = BasisPair::new(b.clone(), b.clone());
        let via_m = kraus_to_r(&list, &bases)?.r_matrix()?;
        let closed = kraus_to_r_closed_form(&list, &b)?;
        let probed = r_of(&OpOnHs::Kraus(list), &bases)?;
        p.diff(&via_m, &closed);
        p.diff(&via_m, &probed);
        p.diff(&closed, &probed);
    }
    Ok(())
}

fn kraus_round_trip(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for t in 0..30 {
        let d = 1 + t % 4;
        let list = random_channel(d, 1 + t % 3, rng);
        let bases = random_pair(d, d, rng);
        let action = SuperOp::from_kraus(list.clone(), bases.clone())?
            .to_r()?
            .action()?;
        let a = random_op(d, d, rng);
        p.diff(action.apply(&a)?.matrix(), kraus_apply(&list, &a)?.matrix());
    }
    Ok(())
}

fn compose_two_channels(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for t in 0..30 {
        let d = 2 + t % 3;
        let ms = random_channel(d, 1 + t % 3, rng);
        let ns = random_channel(d, 1 + (t / 3) % 3, rng);
        let bases = random_pair(d, d, rng);
        let b = SuperOp::from_kraus(ms.clone(), bases.clone())?;
        let c = SuperOp::from_kraus(ns.clone(), bases.clone())?;
        let cb = compose(&c, &b)?;
        let a = random_op(d, d, rng);
        let mut direct = ComplexMatrix::zeros(d, d);
        for m in ms.ops() {
            for n in ns.ops() {
                direct += &(&(&(&n.adjoint() * &m.adjoint()) * a.matrix()) * &(m * n));
            }
        }
        p.diff(cb.apply(&a)?.matrix(), &direct);
    }
    Ok(())
}

fn compose_chain(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    let d = 4;
    let bases = random_pair(d, d, rng);
    let chain: Vec<_> = (0..10)
        .map(|_| random_channel(d, rng.random_range(1..=4), rng))
        .collect();
    let mut total = SuperOp::identity(bases.clone());
    for list in &chain {
        let next = SuperOp::from_kraus(list.clone(), bases.clone())?;
        total = compose(&next, &total)?;
    }
    for _ in 0..10 {
        let rho = HsOperator::new(crate::linalg::random::random_density_matrix(d, rng));
        let mut nested = rho.clone();
        for list in &chain {
            nested = kraus_apply(list, &nested)?;
        }
        let out = total.apply(&rho)?;
        p.diff(out.matrix(), nested.matrix());
    }
    Ok(())
}

// ---------------------------------------------------------------- choi

fn choi_matrix_of(b: &dyn HsMap, basis: &Basis) -> Result<ComplexMatrix> {
    match choi_map(b, basis, false)?.representation() {
        Representation::Choi { matrix, .. } => Ok(matrix.clone()),
        _ => Err(Error::Numerical(
            "choi_map returned a non-Choi representation".into(),
        )),
    }
}

fn choi_identity(p: &mut Probe, _rng: &mut TestRng) -> Result<()> {
    let c = choi_matrix_of(&OpOnHs::identity(2, 2), &Basis::standard(2))?;
    let expected = ComplexMatrix::from_real(&[
        &[1.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
        &[1.0, 0.0, 0.0, 1.0],
    ])?;
    p.diff(&c, &expected);
    p.require(c == expected);
    Ok(())
}

fn choi_isometry(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for t in 0..50 {
        let d = 2 + t % 2;
        let basis = Basis::random_with(d, rng);
        let b1 = OpOnHs::random_dense(d, d, rng);
        let b2 = OpOnHs::random_dense(d, d, rng);
        let lhs = hs_inner(&choi_matrix_of(&b1, &basis)?, &choi_matrix_of(&b2, &basis)?)?;
        p.dev(rel(lhs, hs_inner(&b1.to_matrix()?, &b2.to_matrix()?)?));
    }
    Ok(())
}

fn choi_not_multiplicative(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for d in 2..=4 {
        let basis = Basis::random_with(d, rng);
        let id = OpOnHs::identity(d, d);
        let c = choi_matrix_of(&id, &basis)?;
        let c_prod = choi_matrix_of(&id.after(&id)?, &basis)?;
        p.gap((&c_prod - &(&c * &c)).frobenius_norm());
    }
    Ok(())
}

fn choi_transpose(p: &mut Probe, _rng: &mut TestRng) -> Result<()> {
    let c = choi_matrix_of(&OpOnHs::transpose_map(2), &Basis::standard(2))?;
    let eig = hermitian_eig(&c)?;
    p.dev((eig.values[eig.values.len() - 1] + 1.0).abs());
    let op = SuperOp::from_choi(c, false, BasisPair::standard(2, 2))?;
    p.require(!check_cp(&op, Tolerance::default())?);
    Ok(())
}

fn choi_kraus_positive(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for t in 0..50 {
        let d = 1 + t % 4;
        let list = random_channel(d, 1 + (t / 4) % 4, rng);
        let basis = Basis::random_with(d, rng);
        let c = choi_matrix_of(&OpOnHs::Kraus(list.clone()), &basis)?;
        let (lo, norm) = min_eigenvalue(&c)?;
        p.dev((-lo).max(0.0) / (1.0 + norm));
        let op = SuperOp::from_kraus(list, BasisPair::new(basis.clone(), basis))?;
        p.require(check_cp(&op, Tolerance::default())?);
    }
    Ok(())
}

fn choi_vector_form(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for _ in 0..100 {
        let d = rng.random_range(1..=8);
        let basis = Basis::random_with(d, rng);
        let a = random_op(d, d, rng);
        p.diff(
            choi_of_vector(&a, &basis)?.vector(),
            vec_t(&a, &basis)?.vector(),
        );
    }
    Ok(())
}

fn choi_round_trip(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for t in 0..30 {
        let d = 1 + t % 4;
        let basis = Basis::random_with(d, rng);
        let b = OpOnHs::random_dense(d, d, rng);
        let back = choi_to_map(&choi_matrix_of(&b, &basis)?, &basis)?;
        p.diff(&back.to_matrix()?, &b.to_matrix()?);
    }
    Ok(())
}

// ---------------------------------------------------------------- entangle

fn product_rank_one(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for _ in 0..50 {
        let (d1, d2) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let alpha =
            BipartiteVector::product(&random_unit_vector(d1, rng), &random_unit_vector(d2, rng))?;
        let res = schmidt(&alpha, &BasisPair::standard(d1, d2))?;
        p.dev(res.lambdas.get(1).copied().unwrap_or(0.0));
        p.require(schmidt_rank(&alpha, None) == 1);
    }
    Ok(())
}

fn generic_full_rank(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for _ in 0..50 {
        let alpha = random_bipartite(3, 3, rng);
        p.require(schmidt_rank(&alpha, None) == 3);
    }
    Ok(())
}

fn schmidt_reconstruction(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for _ in 0..100 {
        let (d1, d2) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let bases = random_pair(d1, d2, rng);
        let alpha = random_bipartite(d1, d2, rng);
        let res = schmidt(&alpha, &bases)?;
        p.diff(&res.reconstruct(), alpha.vector());
        let k = res.lambdas.len();
        p.diff(
            &(&res.left.adjoint() * &res.left),
            &ComplexMatrix::identity(k),
        );
        p.diff(
            &(&res.right.adjoint() * &res.right),
            &ComplexMatrix::identity(k),
        );
        p.require(
            res.lambdas.windows(2).all(|w| w[0] >= w[1]) && res.lambdas.iter().all(|&l| l >= 0.0),
        );
    }
    Ok(())
}

fn schmidt_norm(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for _ in 0..100 {
        let (d1, d2) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let bases = random_pair(d1, d2, rng);
        let alpha = random_bipartite(d1, d2, rng);
        let sq: f64 = schmidt(&alpha, &bases)?.lambdas.iter().map(|l| l * l).sum();
        p.dev((sq - alpha.norm().powi(2)).abs());
    }
    Ok(())
}

fn bell_coefficients(p: &mut Probe, _rng: &mut TestRng) -> Result<()> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let alpha = BipartiteVector::new(
        2,
        2,
        ComplexMatrix::from_real(&[&[h], &[0.0], &[0.0], &[h]])?,
    )?;
    let res = schmidt(&alpha, &BasisPair::standard(2, 2))?;
    for l in &res.lambdas {
        p.dev((l - h).abs());
    }
    p.require(res.lambdas.len() == 2 && schmidt_rank(&alpha, None) == 2);
    Ok(())
}

fn local_unitary_invariance(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for _ in 0..50 {
        let (d1, d2) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let alpha = random_bipartite(d1, d2, rng);
        let (u, v) = (random_unitary_with(d1, rng), random_unitary_with(d2, rng));
        let moved = BipartiteVector::new(d1, d2, &kron(&u, &v)? * alpha.vector())?;
        let before = schmidt(&alpha, &BasisPair::standard(d1, d2))?.lambdas;
        let after = schmidt(&moved, &BasisPair::standard(d1, d2))?.lambdas;
        // rotated bases carry the same coefficients
        let rotated = BasisPair::new(Basis::new(u)?, Basis::new(v)?);
        let in_rotated = schmidt(&moved, &rotated)?.lambdas;
        for ((a, b), c) in before.iter().zip(&after).zip(&in_rotated) {
            p.dev((a - b).abs());
            p.dev((a - c).abs());
        }
    }
    Ok(())
}

/// `S(A ⊗ B)` acts as `|ψ⟩⟨φ| ↦ |Bψ⟩⟨K A K φ|`; when `A` has a real
/// matrix in the `H1` basis this is `|Bψ⟩⟨Aφ|`.
fn factorized_action(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for _ in 0..30 {
        let d = rng.random_range(2..=4);
        let a = random_matrix(d, d, rng);
        let b = random_matrix(d, d, rng);
        let ab = kron(&a, &b)?;
        let std = BasisPair::standard(d, d);
        let s = lower_s(&ab, &std)?;
        let c = random_op(d, d, rng);
        let via_vec = devec_jstar(
            &BipartiteVector::new(d, d, &ab * vec_j(&c, &std)?.vector())?,
            &std,
        )?;
        p.diff(s.apply(&c)?.matrix(), via_vec.matrix());
        p.diff(
            s.apply(&c)?.matrix(),
            &(&(&b * c.matrix()) * &a.transpose()),
        );

        let bases = random_pair(d, d, rng);
        let s = lower_s(&ab, &bases)?;
        let phi = random_matrix(d, 1, rng);
        let psi = random_matrix(d, 1, rng);
        let k = |v: &ComplexMatrix| conjugate_in_basis(&bases.b1, v);
        let kakphi = k(&(&a * &k(&phi)?))?;
        let out = s.apply(&HsOperator::rank_one(&psi, &phi))?;
        p.diff(out.matrix(), &ComplexMatrix::outer(&(&b * &psi), &kakphi));

        // A with real coordinates in the H1 basis
        let u = bases.b1.matrix();
        let real = random_matrix(d, d, rng).map(|z| num_complex::Complex64::new(z.re, 0.0));
        let a_real = &(u * &real) * &u.adjoint();
        let s = lower_s(&kron(&a_real, &b)?, &bases)?;
        let out = s.apply(&HsOperator::rank_one(&psi, &phi))?;
        p.diff(
            out.matrix(),
            &ComplexMatrix::outer(&(&b * &psi), &(&a_real * &phi)),
        );
    }
    Ok(())
}

fn transport_projection(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for _ in 0..30 {
        let (d1, d2) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let bases = random_pair(d1, d2, rng);
        let phi = random_unit_vector(d1, rng);
        let psi = random_unit_vector(d2, rng);
        let s = pure_state_transport(&phi, &psi, &bases)?;
        let e = ComplexMatrix::outer(&psi, &conjugate_in_basis(&bases.b1, &phi)?);
        p.diff(s.apply(&HsOperator::new(e.clone()))?.matrix(), &e);
        let c = random_matrix(d2, d1, rng);
        let expected = &e * (hs_inner(&e, &c)? / hs_inner(&e, &e)?);
        p.diff(s.apply(&HsOperator::new(c))?.matrix(), &expected);
        let tr = trace(&r_of(&s, &bases)?)?;
        p.dev((tr - num_complex::Complex64::new(1.0, 0.0)).norm());
    }
    Ok(())
}

// ---------------------------------------------------------------- bench

fn bench_configs(seed: u64) -> [BenchConfig; 2] {
    [
        BenchConfig {
            trials: 3,
            seed,
            ..BenchConfig::new(2, 1, 1)
        },
        BenchConfig {
            trials: 3,
            seed,
            ..BenchConfig::new(4, 4, 10)
        },
    ]
}

fn bench_agreement(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for cfg in bench_configs(rng.random()) {
        let report = run_bench(&cfg)?;
        p.dev(report.max_deviation);
    }
    Ok(())
}

fn bench_determinism(p: &mut Probe, rng: &mut TestRng) -> Result<()> {
    for cfg in bench_configs(rng.random()) {
        let a = run_bench(&cfg)?.max_deviation;
        let b = run_bench(&cfg)?.max_deviation;
        p.require(a.to_bits() == b.to_bits());
    }
    Ok(())
}
