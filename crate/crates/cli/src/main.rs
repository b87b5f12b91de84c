//! `ddeg`: exact dynamical degrees of polynomial endomorphisms of affine
//! space, with certification trails, spectrum enumeration and weak-Perron
//! classification/realization.

mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ddeg_core::config::JobConfig;
use ddeg_core::degree::dynamical_degree;
use ddeg_core::error::DdError;
use ddeg_core::matrices::IntMatrix;
use ddeg_core::perron::{
    is_handelman, is_perron, is_weak_perron, minimal_dimension_quadratic, realize_weak_perron,
    AlgebraicCandidate, Ternary,
};
use ddeg_core::stability::oracle_degree_sequence;
use ddeg_core::text::{parse_endomorphism, parse_int_poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Records,
}

#[derive(Parser, Debug)]
#[command(
    name = "ddeg",
    version,
    about = "Exact dynamical degrees of polynomial endomorphisms of affine n-space"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Precision cap (bits) for numeric complex-root certification.
    #[arg(long, global = true, env = "DDEG_PRECISION_BITS", default_value_t = 256)]
    precision_bits: u32,

    /// Decimal digits in displayed approximations.
    #[arg(long, global = true, env = "DDEG_DIGITS", default_value_t = 30)]
    digits: u32,

    /// Depth of the degree-growth oracle.
    #[arg(long, global = true, env = "DDEG_ORACLE_DEPTH", default_value_t = 8)]
    oracle_depth: u32,

    /// Stability horizon (default: 2n + 4 for arity n).
    #[arg(long, global = true, env = "DDEG_HORIZON")]
    horizon: Option<u32>,

    /// Maximum number of terms a polynomial may reach.
    #[arg(long, global = true, env = "DDEG_BUDGET_TERMS", default_value_t = 2_000_000)]
    budget_terms: usize,

    /// Maximum number of support matrices enumerated.
    #[arg(long, global = true, env = "DDEG_BUDGET_MATRICES", default_value_t = 1_000_000)]
    budget_matrices: usize,

    /// Output format.
    #[arg(long, global = true, env = "DDEG_FORMAT", value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Compute the dynamical degree of an endomorphism.
    Compute {
        /// Endomorphism text, e.g. "(x3 + x1*x2, x2 + x1^3, x1)".
        input: Option<String>,
        /// Read the endomorphism from a file instead.
        #[arg(long, conflicts_with = "input")]
        file: Option<std::path::PathBuf>,
    },
    /// Enumerate degree spectra of affine-triangular automorphisms of
    /// affine 3-space.
    Enumerate {
        /// Which family: the full affine-triangular spectrum or the
        /// shift-like subfamily.
        kind: EnumerateKind,
        /// Degree bound (theorem set) or exact degree (shift-like).
        #[arg(short, long)]
        degree: u32,
        /// Only print values new at exactly this degree.
        #[arg(long)]
        new_only: bool,
    },
    /// Classify the largest real root of a monic integer polynomial.
    Classify {
        /// Polynomial text, e.g. "x^2 - 3*x + 1".
        input: Option<String>,
        #[arg(long, conflicts_with = "input")]
        file: Option<std::path::PathBuf>,
        /// Handelman certificate search degree cap (default 2·deg + 4).
        #[arg(long)]
        handelman_cap: Option<u32>,
    },
    /// Realize a weak Perron number as a dynamical degree.
    Realize {
        /// Polynomial text; the largest real root is realized.
        input: Option<String>,
        #[arg(long, conflicts_with = "input")]
        file: Option<std::path::PathBuf>,
        /// Irreducible non-negative matrix witness for the general case,
        /// as JSON rows, e.g. "[[0,1],[1,1]]".
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Print the exact degree-growth table of an endomorphism.
    Oracle {
        input: Option<String>,
        #[arg(long, conflicts_with = "input")]
        file: Option<std::path::PathBuf>,
        /// Override the oracle depth.
        #[arg(long)]
        depth: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnumerateKind {
    Theorem1,
    Shiftlike,
}

fn exit_code_for(err: &DdError) -> ExitCode {
    match err {
        DdError::Parse { .. } | DdError::Domain(_) | DdError::Structural(_) => ExitCode::from(3),
        DdError::NotDominant { .. } => ExitCode::from(3),
        DdError::Resource(_) => ExitCode::from(4),
        DdError::Internal(_) => ExitCode::from(1),
    }
}

fn read_input(arg: Option<String>, file: Option<std::path::PathBuf>) -> Result<String, DdError> {
    match (arg, file) {
        (Some(s), None) => Ok(s),
        (None, Some(p)) => std::fs::read_to_string(&p)
            .map(|s| s.trim().to_string())
            .map_err(|e| DdError::Structural(format!("cannot read {}: {e}", p.display()))),
        _ => Err(DdError::structural(
            "provide the input either as an argument or via --file",
        )),
    }
}

fn main() -> ExitCode {
    // die quietly on closed pipes instead of panicking in println!
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let cfg = JobConfig {
        precision_bits: cli.precision_bits,
        digits: cli.digits,
        oracle_depth: cli.oracle_depth,
        horizon: cli.horizon,
        budget_terms: cli.budget_terms,
        budget_matrices: cli.budget_matrices,
    };
    let records = cli.format == Format::Records;
    match run(cli.cmd, &cfg, records) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn run(cmd: Cmd, cfg: &JobConfig, records: bool) -> Result<ExitCode, DdError> {
    match cmd {
        Cmd::Compute { input, file } => {
            let text = read_input(input, file)?;
            let f = parse_endomorphism(&text)?;
            let result = dynamical_degree(&f, cfg)?;
            let exact_proven = output::print_compute(&text, &f, &result, cfg, records);
            Ok(if exact_proven {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Cmd::Enumerate {
            kind,
            degree,
            new_only,
        } => {
            if degree == 0 {
                return Err(DdError::domain("degree must be at least 1"));
            }
            let entries = match kind {
                EnumerateKind::Theorem1 => ddeg_core::dim3::enumerate_theorem1_set(degree),
                EnumerateKind::Shiftlike => ddeg_core::dim3::enumerate_shiftlike_set_a3(degree),
            };
            output::print_enumeration(kind == EnumerateKind::Theorem1, degree, &entries, new_only, cfg, records);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Classify {
            input,
            file,
            handelman_cap,
        } => {
            let text = read_input(input, file)?;
            let poly = parse_int_poly(&text)?;
            let cand = AlgebraicCandidate::largest_root(&poly)?;
            let cap = handelman_cap
                .unwrap_or(2 * poly.degree().unwrap_or(1) as u32 + 4);
            let weak = is_weak_perron(&cand, cfg)?;
            let strict = is_perron(&cand, cfg)?;
            let handelman = is_handelman(&cand, cap);
            let min_dim = minimal_dimension_quadratic(&cand).ok();
            let realization = if weak == Ternary::Yes {
                realize_weak_perron(&cand, None, cfg).ok()
            } else {
                None
            };
            output::print_classification(
                &text, &cand, weak, strict, &handelman, min_dim, realization.as_ref(), cfg, records,
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Realize {
            input,
            file,
            matrix,
        } => {
            let text = read_input(input, file)?;
            let poly = parse_int_poly(&text)?;
            let cand = AlgebraicCandidate::largest_root(&poly)?;
            let witness = match matrix {
                Some(m) => Some(parse_matrix(&m)?),
                None => None,
            };
            let plan = realize_weak_perron(&cand, witness.as_ref(), cfg)?;
            output::print_realization(&text, &cand, &plan, cfg, records);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Oracle { input, file, depth } => {
            let text = read_input(input, file)?;
            let f = parse_endomorphism(&text)?;
            let table = oracle_degree_sequence(
                &f,
                depth.unwrap_or(cfg.oracle_depth),
                &ddeg_core::config::Budget::from(cfg),
            )?;
            output::print_oracle(&text, &table, cfg, records);
            Ok(if table.truncated {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn parse_matrix(text: &str) -> Result<IntMatrix, DdError> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(text)
        .map_err(|e| DdError::domain(format!("cannot parse matrix JSON: {e}")))?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(DdError::domain("matrix must be square and non-empty"));
    }
    if rows.iter().flatten().any(|&x| x < 0) {
        return Err(DdError::domain("matrix entries must be non-negative"));
    }
    Ok(IntMatrix::new(
        rows.into_iter()
            .map(|r| r.into_iter().map(num_bigint::BigInt::from).collect())
            .collect(),
    ))
}
