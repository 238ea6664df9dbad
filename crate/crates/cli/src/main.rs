use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use nnrecover::certify::{complexity_bound, matrix_search, tau_exact, DEFAULT_REL_TOL};
use nnrecover::construct::{guaranteed_order, ConstructionKind, ConstructionSpec};
use nnrecover::decode::{l0_bruteforce, nn_basis_pursuit, nnlr, nnlr_complex, DecodeResult};
use nnrecover::experiments::{run_recovery_suite, ExperimentConfig};
use nnrecover::linalg::{realify, Field, Matrix, Rnorm, Vector};
use nnrecover::lp::LpStatus;

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_FAULT: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(name = "nnrecover", version, propagate_version = true)]
#[command(
    about = "Certified measurement matrices and LP decoders for non-negative sparse recovery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RnormArg {
    Inf,
    L1,
}

impl From<RnormArg> for Rnorm {
    fn from(r: RnormArg) -> Self {
        match r {
            RnormArg::Inf => Rnorm::Inf,
            RnormArg::L1 => Rnorm::L1,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderArg {
    Nnlr,
    Nnbp,
    L0,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect()
}

fn parse_q(s: &str) -> std::result::Result<f64, String> {
    match s {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => s.parse::<f64>().map_err(|e| e.to_string()),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a measurement matrix from one of the certified families
    Construct {
        #[arg(long, value_parser = |s: &str| s.parse::<ConstructionKind>().map_err(|e| e.to_string()))]
        kind: ConstructionKind,
        #[arg(long = "M", default_value_t = 0)]
        m: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "S")]
        s: Option<usize>,
        #[arg(long = "K")]
        k: Option<usize>,
        /// Comma-separated node magnitudes
        #[arg(long, value_parser = parse_list)]
        nodes: Option<Vec<f64>>,
        /// Comma-separated angles
        #[arg(long, value_parser = parse_list)]
        thetas: Option<Vec<f64>>,
        /// Print the guaranteed signed-kernel order and exit
        #[arg(long)]
        order: bool,
        #[arg(long, required_unless_present = "order")]
        out: Option<PathBuf>,
    },
    /// Decode a measurement vector
    Decode {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, value_enum, default_value = "nnlr")]
        decoder: DecoderArg,
        #[arg(long, value_enum, default_value = "inf")]
        rnorm: RnormArg,
        /// Sparsity for the l0 decoder
        #[arg(long = "S")]
        s: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute tau and kappa and decide the signed kernel condition
    Certify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long = "S")]
        s: usize,
        #[arg(long, value_enum, default_value = "inf")]
        rnorm: RnormArg,
        /// Include every alpha value in the report
        #[arg(long)]
        alphas: bool,
        #[arg(long, default_value_t = DEFAULT_REL_TOL)]
        rel_tol: f64,
        #[arg(long)]
        report: PathBuf,
    },
    /// Evaluate the upper bound on tau/kappa
    Bound {
        #[arg(long = "S")]
        s: usize,
        #[arg(long = "M")]
        m: usize,
        #[arg(long = "N")]
        n: usize,
        /// Norm exponent, a number >= 1 or `inf`
        #[arg(long, value_parser = parse_q, default_value = "inf")]
        q: f64,
        #[arg(long, value_enum, default_value = "real")]
        field: FieldArg,
    },
    /// Random hill climb for a matrix with large tau at kappa = 1
    Search {
        #[arg(long = "M")]
        m: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "S")]
        s: usize,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "inf")]
        rnorm: RnormArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a recovery campaign described by a JSON config
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// CSV path; overrides `output` in the config
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn construct(spec: ConstructionSpec, order: bool, out: Option<PathBuf>) -> Result<ExitCode> {
    if order {
        println!("{}", guaranteed_order(&spec)?);
        return Ok(ExitCode::SUCCESS);
    }
    let a = spec.build()?;
    let out = out.expect("clap requires --out");
    a.write_to(&out)
        .with_context(|| format!("writing {}", out.display()))?;
    Ok(ExitCode::SUCCESS)
}

fn run_decode(
    a: &Matrix,
    y: &Vector,
    decoder: DecoderArg,
    rnorm: Rnorm,
    s: Option<usize>,
) -> nnrecover::Result<DecodeResult> {
    if !a.is_real() {
        return match decoder {
            DecoderArg::Nnlr if rnorm == Rnorm::Inf => nnlr_complex(a, y),
            _ => Err(nnrecover::Error::FieldMismatch {
                expected: "real",
                found: "complex",
            }),
        };
    }
    let yr = y.as_real().ok_or(nnrecover::Error::FieldMismatch {
        expected: "real",
        found: "complex",
    })?;
    match decoder {
        DecoderArg::Nnlr => nnlr(a, yr, rnorm),
        DecoderArg::Nnbp => nn_basis_pursuit(a, yr),
        DecoderArg::L0 => {
            let s = s.ok_or_else(|| nnrecover::Error::InvalidArgument("l0 needs --S".into()))?;
            l0_bruteforce(a, yr, s, rnorm, true)
        }
    }
}

fn decode(
    matrix: PathBuf,
    y: PathBuf,
    decoder: DecoderArg,
    rnorm: Rnorm,
    s: Option<usize>,
    out: PathBuf,
) -> Result<ExitCode> {
    let a = Matrix::read_from(&matrix).with_context(|| format!("reading {}", matrix.display()))?;
    let yv = Vector::read_from(&y).with_context(|| format!("reading {}", y.display()))?;
    let r = match run_decode(&a, &yv, decoder, rnorm, s) {
        Ok(r) => r,
        Err(e @ nnrecover::Error::Solver(_)) => {
            eprintln!("error: {e}");
            println!(
                "{}",
                json!({"residual": null, "status": "fault", "iterations": null})
            );
            return Ok(ExitCode::from(EXIT_FAULT));
        }
        Err(e) => return Err(e.into()),
    };
    let residual = if r.residual_norm.is_finite() {
        json!(r.residual_norm)
    } else {
        json!(null)
    };
    println!(
        "{}",
        json!({"residual": residual, "status": r.status.name(), "iterations": r.iterations})
    );
    match r.status {
        LpStatus::Optimal => {
            Vector::real(r.estimate)?.write_to(&out)?;
            Ok(ExitCode::SUCCESS)
        }
        LpStatus::Infeasible => Ok(ExitCode::from(EXIT_INFEASIBLE)),
        _ => Ok(ExitCode::from(EXIT_FAULT)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Construct {
            kind,
            m,
            n,
            s,
            k,
            nodes,
            thetas,
            order,
            out,
        } => {
            let spec = ConstructionSpec {
                kind,
                m,
                n,
                s,
                k,
                nodes,
                thetas,
            };
            construct(spec, order, out)
        }
        Command::Decode {
            matrix,
            y,
            decoder,
            rnorm,
            s,
            out,
        } => decode(matrix, y, decoder, rnorm.into(), s, out),
        Command::Certify {
            matrix,
            s,
            rnorm,
            alphas,
            rel_tol,
            report,
        } => {
            let a = Matrix::read_from(&matrix)
                .with_context(|| format!("reading {}", matrix.display()))?;
            let real = if a.is_real() { a } else { realify(&a) };
            let mut r = tau_exact(&real, s, rnorm.into(), alphas)?;
            r.verdict = r.tau > rel_tol * r.kappa;
            std::fs::write(&report, r.to_json() + "\n")
                .with_context(|| format!("writing {}", report.display()))?;
            println!(
                "tau = {:e}, kappa = {:e}, verdict = {}, LPs = {}",
                r.tau, r.kappa, r.verdict, r.lp_count
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { s, m, n, q, field } => {
            let field = match field {
                FieldArg::Real => Field::Real,
                FieldArg::Complex => Field::Complex,
            };
            let b = complexity_bound(s, m, n, q, field)?;
            if b.vacuous {
                eprintln!("note: N <= 4S, the bound is vacuous");
            }
            println!("{}", b.value);
            Ok(ExitCode::SUCCESS)
        }
        Command::Search {
            m,
            n,
            s,
            iters,
            seed,
            rnorm,
            out,
        } => {
            let r = matrix_search(m, n, s, iters, seed, rnorm.into())?;
            r.matrix.write_to(&out)?;
            println!(
                "{}",
                json!({"initial_tau": r.trace[0], "final_tau": r.trace[r.trace.len() - 1], "trace": r.trace})
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment { config, out } => {
            let mut cfg = ExperimentConfig::read_from(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            if out.is_some() {
                cfg.output = out;
            }
            if cfg.output.is_none() {
                bail!("no output path: pass --out or set `output` in the config");
            }
            let outcome = run_recovery_suite(&cfg)?;
            let recovered = outcome.records.iter().filter(|r| r.recovered).count();
            println!(
                "{} rows, {} recovered, {} bound violations",
                outcome.records.len(),
                recovered,
                outcome.violations
            );
            if outcome.violations > 0 {
                Ok(ExitCode::from(EXIT_VIOLATION))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}
