//! `hsdual`: vectorization, Choi matrices, channel checks, composition and
//! Schmidt analysis from the command line.
//!
//! Exit codes: 0 success, 1 a requested check failed, 2 usage or parse
//! error, 3 dimension error.

mod files;
mod format;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hsdual_core::bench::{run_bench, BenchConfig, CSV_HEADER};
use hsdual_core::entangle::{rank_from_lambdas, schmidt, DEFAULT_RANK_CUTOFF};
use hsdual_core::linalg::random::{random_density_matrix, rng_from_seed};
use hsdual_core::selftest::{run_suite, Suite};
use hsdual_core::superop::{
    check_tp, choi_map, cp_report, kraus_apply, kraus_to_r_closed_form, tp_deviation, OpOnHs,
    Representation,
};
use hsdual_core::vectorize::{column_stack, devec_jstar, unstack, vec_j};
use hsdual_core::{
    Basis, BasisPair, BipartiteVector, ComplexMatrix, Error, HsOperator, KrausList, SuperOp,
    Tolerance,
};

use crate::files::{read_channel, read_matrix};
use crate::format::{format_g, matrix_file, DEFAULT_DIGITS};

/// Unitarity tolerance for basis files.
const BASIS_TOLERANCE: f64 = 1e-8;
/// Per-factor dimension limit unless `HSDUAL_MAX_DIM` overrides it.
const DEFAULT_MAX_DIM: usize = 64;
const MAX_DIM_ENV: &str = "HSDUAL_MAX_DIM";
/// Bound on the `compose --verify` deviation.
const VERIFY_TOLERANCE: f64 = 1e-8;
const VERIFY_STATES: usize = 10;
const SCHMIDT_DIGITS: usize = 12;

/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn dimension(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }

    pub fn from_core(e: Error, context: &str) -> Self {
        let code = match &e {
            e if e.is_dimension_error() => 3,
            Error::Numerical(_) => 1,
            _ => 2,
        };
        Self {
            code,
            message: format!("{context}: {e}"),
        }
    }
}

trait Context<T> {
    fn ctx(self, context: &str) -> Result<T, Failure>;
}

impl<T> Context<T> for Result<T, Error> {
    fn ctx(self, context: &str) -> Result<T, Failure> {
        self.map_err(|e| Failure::from_core(e, context))
    }
}

#[derive(Parser)]
#[command(
    name = "hsdual",
    version,
    about = "Operators on Hilbert-Schmidt space as operators on tensor products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BasisFlags {
    /// Unitary matrix file whose columns form the H1 basis.
    #[arg(long = "basis-h1", value_name = "FILE")]
    basis_h1: Option<String>,
    /// Unitary matrix file whose columns form the H2 basis.
    #[arg(long = "basis-h2", value_name = "FILE")]
    basis_h2: Option<String>,
}

#[derive(Args)]
struct Digits {
    /// Significant digits for numeric output.
    #[arg(long, value_name = "N")]
    digits: Option<usize>,
}

impl Digits {
    fn get(&self, default: usize) -> Result<usize, Failure> {
        match self.digits {
            None => Ok(default),
            Some(d) if (1..=40).contains(&d) => Ok(d),
            Some(d) => Err(Failure::parse(format!(
                "--digits must be between 1 and 40, got {d}"
            ))),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Vectorize a d2 x d1 operator into H1 ⊗ H2.
    Vec {
        input: String,
        #[command(flatten)]
        bases: BasisFlags,
        #[command(flatten)]
        digits: Digits,
    },
    /// Turn a vector in H1 ⊗ H2 back into a d2 x d1 operator.
    Devec {
        input: String,
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
        #[command(flatten)]
        bases: BasisFlags,
        #[command(flatten)]
        digits: Digits,
    },
    /// Choi matrix of a Kraus channel.
    Choi {
        channel: String,
        /// Divide by the dimension, as for a unit maximally entangled vector.
        #[arg(long)]
        normalize: bool,
        /// Unitary matrix file whose columns form the basis of H.
        #[arg(long = "basis-h1", value_name = "FILE")]
        basis_h1: Option<String>,
        #[command(flatten)]
        digits: Digits,
    },
    /// Complete positivity and trace preservation of a Kraus channel.
    Check {
        channel: String,
        #[arg(long)]
        cp: bool,
        #[arg(long)]
        tp: bool,
        #[command(flatten)]
        digits: Digits,
    },
    /// R-matrix of a chain of channels; the first file acts first.
    Compose {
        #[arg(required = true, num_args = 2..)]
        channels: Vec<String>,
        /// Compare against nested Kraus sums on seeded random states.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        digits: Digits,
    },
    /// Schmidt coefficients, rank and entanglement of a bipartite vector.
    Schmidt {
        input: String,
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
        #[command(flatten)]
        digits: Digits,
    },
    /// Run the property suites.
    Selftest {
        #[arg(long, default_value = "all", value_parser = Suite::NAMES)]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        digits: Digits,
    },
    /// Time R-matrix composition against nested Kraus application.
    Bench {
        #[arg(long)]
        dim: usize,
        #[arg(long = "kraus-rank")]
        kraus_rank: usize,
        #[arg(long = "chain-length")]
        chain_length: usize,
        #[arg(long, default_value_t = 9)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        digits: Digits,
    },
}

/// Text for standard output and whether every requested check passed.
struct Outcome {
    stdout: String,
    passed: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            passed: true,
        }
    }
}

fn max_dim() -> Result<usize, Failure> {
    match std::env::var(MAX_DIM_ENV) {
        Err(_) => Ok(DEFAULT_MAX_DIM),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Failure::parse(format!(
                "{MAX_DIM_ENV} must be a positive integer, got '{v}'"
            ))),
        },
    }
}

fn guard_dims(dims: &[usize]) -> Result<(), Failure> {
    let limit = max_dim()?;
    for &d in dims {
        if d == 0 {
            return Err(Failure::dimension("dimensions must be positive"));
        }
        if d > limit {
            return Err(Failure::dimension(format!(
                "dimension {d} exceeds the limit of {limit} per factor (set {MAX_DIM_ENV} to raise it)"
            )));
        }
    }
    Ok(())
}

fn load_basis(path: Option<&str>, dim: usize, which: &str) -> Result<Basis, Failure> {
    let Some(path) = path else {
        return Ok(Basis::standard(dim));
    };
    let u = read_matrix(path)?;
    if !u.is_square() {
        return Err(Failure::parse(format!(
            "{path}: a basis file must be square, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    if u.rows() != dim {
        return Err(Failure::dimension(format!(
            "{path}: {which} basis has dimension {}, expected {dim}",
            u.rows()
        )));
    }
    Basis::with_tolerance(u, BASIS_TOLERANCE).ctx(path)
}

fn load_bases(flags: &BasisFlags, d1: usize, d2: usize) -> Result<BasisPair, Failure> {
    Ok(BasisPair::new(
        load_basis(flags.basis_h1.as_deref(), d1, "H1")?,
        load_basis(flags.basis_h2.as_deref(), d2, "H2")?,
    ))
}

fn load_vector(path: &str, d1: usize, d2: usize) -> Result<BipartiteVector, Failure> {
    guard_dims(&[d1, d2])?;
    let v = read_matrix(path)?;
    if v.cols() != 1 {
        return Err(Failure::dimension(format!(
            "{path}: expected a column vector, got {}x{}",
            v.rows(),
            v.cols()
        )));
    }
    if v.rows() != d1 * d2 {
        return Err(Failure::dimension(format!(
            "{path}: vector has length {}, expected d1*d2 = {}",
            v.rows(),
            d1 * d2
        )));
    }
    BipartiteVector::new(d1, d2, v).ctx(path)
}

fn load_channel(path: &str) -> Result<KrausList, Failure> {
    let list = read_channel(path)?;
    guard_dims(&[list.dim()])?;
    Ok(list)
}

fn cmd_vec(input: &str, bases: &BasisFlags, digits: usize) -> Result<Outcome, Failure> {
    let a = read_matrix(input)?;
    let (d2, d1) = a.shape();
    guard_dims(&[d1, d2])?;
    let pair = load_bases(bases, d1, d2)?;
    let v = vec_j(&HsOperator::new(a), &pair).ctx("vec")?;
    Ok(Outcome::ok(matrix_file(v.vector(), digits)))
}

fn cmd_devec(
    input: &str,
    d1: usize,
    d2: usize,
    bases: &BasisFlags,
    digits: usize,
) -> Result<Outcome, Failure> {
    let alpha = load_vector(input, d1, d2)?;
    let pair = load_bases(bases, d1, d2)?;
    let a = devec_jstar(&alpha, &pair).ctx("devec")?;
    Ok(Outcome::ok(matrix_file(a.matrix(), digits)))
}

fn cmd_choi(
    channel: &str,
    normalize: bool,
    basis: Option<&str>,
    digits: usize,
) -> Result<Outcome, Failure> {
    let list = load_channel(channel)?;
    let basis = load_basis(basis, list.dim(), "H")?;
    let op = choi_map(&OpOnHs::Kraus(list), &basis, normalize).ctx("choi")?;
    let Representation::Choi { matrix, .. } = op.representation() else {
        unreachable!("choi_map returns a Choi matrix");
    };
    Ok(Outcome::ok(matrix_file(matrix, digits)))
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_check(channel: &str, cp: bool, tp: bool, digits: usize) -> Result<Outcome, Failure> {
    let list = load_channel(channel)?;
    let (cp, tp) = if cp || tp { (cp, tp) } else { (true, true) };
    let tol = Tolerance::default();
    let mut out = String::new();
    let mut passed = true;
    if cp {
        let op = SuperOp::from_kraus(list.clone(), BasisPair::standard(list.dim(), list.dim()))
            .ctx("check")?;
        let (ok, lo) = cp_report(&op, tol).ctx("check")?;
        passed &= ok;
        out.push_str(&format!(
            "cp: {} (min eigenvalue = {})\n",
            pass_fail(ok),
            format_g(lo, digits)
        ));
    }
    if tp {
        let ok = check_tp(&list, tol);
        passed &= ok;
        out.push_str(&format!(
            "tp: {} (deviation = {})\n",
            pass_fail(ok),
            format_g(tp_deviation(&list), digits)
        ));
    }
    Ok(Outcome {
        stdout: out,
        passed,
    })
}

fn cmd_compose(
    paths: &[String],
    verify: bool,
    seed: u64,
    digits: usize,
) -> Result<Outcome, Failure> {
    let chain = paths
        .iter()
        .map(|p| load_channel(p))
        .collect::<Result<Vec<_>, _>>()?;
    let d = chain[0].dim();
    if let Some((path, other)) = paths.iter().zip(&chain).find(|(_, l)| l.dim() != d) {
        return Err(Failure::dimension(format!(
            "{path}: channel dimension {} differs from {d} in {}",
            other.dim(),
            paths[0]
        )));
    }
    let basis = Basis::standard(d);
    let mut total = ComplexMatrix::identity(d * d);
    for list in &chain {
        total = &kraus_to_r_closed_form(list, &basis).ctx("compose")? * &total;
    }
    let stdout = matrix_file(&total, digits);
    if !verify {
        return Ok(Outcome::ok(stdout));
    }
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for _ in 0..VERIFY_STATES {
        let rho = random_density_matrix(d, &mut rng);
        let mut nested = HsOperator::new(rho.clone());
        for list in &chain {
            nested = kraus_apply(list, &nested).ctx("compose")?;
        }
        let via_r = unstack(&(&total * &column_stack(&rho)), d, d);
        worst = worst.max(via_r.max_abs_diff(nested.matrix()));
    }
    let ok = worst <= VERIFY_TOLERANCE;
    eprintln!(
        "verify: {} (max deviation = {})",
        pass_fail(ok),
        format_g(worst, digits)
    );
    Ok(Outcome { stdout, passed: ok })
}

fn cmd_schmidt(input: &str, d1: usize, d2: usize, digits: usize) -> Result<Outcome, Failure> {
    let alpha = load_vector(input, d1, d2)?;
    let res = schmidt(&alpha, &BasisPair::standard(d1, d2)).ctx("schmidt")?;
    let rank = rank_from_lambdas(&res.lambdas, DEFAULT_RANK_CUTOFF * alpha.norm());
    let shown: Vec<String> = res.lambdas[..rank]
        .iter()
        .map(|&l| format_g(l, digits))
        .collect();
    Ok(Outcome::ok(format!(
        "lambdas: [{}]\nrank: {rank}\nentangled: {}\n",
        shown.join(", "),
        if rank >= 2 { "yes" } else { "no" }
    )))
}

fn cmd_selftest(suite: &str, seed: u64, digits: usize) -> Result<Outcome, Failure> {
    let suite: Suite = suite.parse().ctx("selftest")?;
    let checks = run_suite(suite, seed);
    let mut out = String::new();
    for c in &checks {
        out.push_str(&format!(
            "{}: {} (max deviation = {})\n",
            c.name,
            pass_fail(c.passed),
            format_g(c.max_deviation, digits)
        ));
    }
    let n_pass = checks.iter().filter(|c| c.passed).count();
    out.push_str(&format!("passed: {n_pass}/{}\n", checks.len()));
    Ok(Outcome {
        stdout: out,
        passed: n_pass == checks.len(),
    })
}

fn cmd_bench(cfg: BenchConfig, digits: usize) -> Result<Outcome, Failure> {
    guard_dims(&[cfg.dim])?;
    let r = run_bench(&cfg).ctx("bench")?;
    Ok(Outcome::ok(format!(
        "{CSV_HEADER}\n{},{},{},{},{},{},{}\n",
        cfg.dim,
        cfg.kraus_rank,
        cfg.chain_length,
        r.t_rmatrix_ns,
        r.t_nested_ns,
        format_g(r.max_deviation, digits),
        cfg.seed
    )))
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Vec {
            input,
            bases,
            digits,
        } => cmd_vec(&input, &bases, digits.get(DEFAULT_DIGITS)?),
        Command::Devec {
            input,
            d1,
            d2,
            bases,
            digits,
        } => cmd_devec(&input, d1, d2, &bases, digits.get(DEFAULT_DIGITS)?),
        Command::Choi {
            channel,
            normalize,
            basis_h1,
            digits,
        } => cmd_choi(
            &channel,
            normalize,
            basis_h1.as_deref(),
            digits.get(DEFAULT_DIGITS)?,
        ),
        Command::Check {
            channel,
            cp,
            tp,
            digits,
        } => cmd_check(&channel, cp, tp, digits.get(DEFAULT_DIGITS)?),
        Command::Compose {
            channels,
            verify,
            seed,
            digits,
        } => cmd_compose(&channels, verify, seed, digits.get(DEFAULT_DIGITS)?),
        Command::Schmidt {
            input,
            d1,
            d2,
            digits,
        } => cmd_schmidt(&input, d1, d2, digits.get(SCHMIDT_DIGITS)?),
        Command::Selftest {
            suite,
            seed,
            digits,
        } => cmd_selftest(&suite, seed, digits.get(DEFAULT_DIGITS)?),
        Command::Bench {
            dim,
            kraus_rank,
            chain_length,
            trials,
            seed,
            digits,
        } => cmd_bench(
            BenchConfig {
                dim,
                kraus_rank,
                chain_length,
                trials,
                seed,
            },
            digits.get(DEFAULT_DIGITS)?,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(outcome.stdout.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("hsdual: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
