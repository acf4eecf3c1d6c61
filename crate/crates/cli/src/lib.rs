//! `biharm`: solvers, verifiers, a classifier and a curve sampler, each
//! printing a [`BiharmonicReport`] as JSON (or CSV for `sample`).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;

use biharmonic_core::{GeometryError, ToleranceConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
pub mod report;

pub use report::{recheck, BiharmonicReport, Root, RootStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Domain(String),
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Domain(e.to_string())
    }
}

pub(crate) type CliResult<T> = Result<T, CliError>;

fn real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a decimal real"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn count(s: &str) -> Result<usize, String> {
    let v = real(s)?;
    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(format!("`{s}` is not a nonnegative integer"));
    }
    Ok(v as usize)
}

#[derive(Parser, Debug)]
#[command(name = "biharm", version, about = "Biharmonic curves and submanifolds in odd spheres and CP^n")]
struct Cli {
    /// Use this value for every tolerance instead of the defaults.
    #[arg(long, global = true, value_parser = real)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form and numerical solvers.
    #[command(subcommand)]
    Solve(SolveTarget),
    /// Residual checks for explicit curves and submanifolds.
    #[command(subcommand)]
    Verify(VerifyTarget),
    /// Complex-torsion classification.
    #[command(subcommand)]
    Classify(ClassifyTarget),
    /// CSV samples of a curve family.
    #[command(subcommand)]
    Sample(SampleTarget),
}

#[derive(Subcommand, Debug)]
enum SolveTarget {
    /// Radii making a product of minimal submanifolds (-4)-biharmonic.
    Clifford(CliffordArgs),
    /// Two-block flat Lagrangian tori.
    Zhang {
        #[arg(long, value_parser = count)]
        n: usize,
    },
    /// Order-4 proper-biharmonic helices in CP^2.
    Helix(HelixArgs),
    /// Tangent sphere bundle of an odd sphere.
    SphereBundle(BundleArgs),
}

#[derive(Args, Debug)]
struct CliffordArgs {
    #[arg(long, value_parser = count, requires = "m2", conflicts_with = "grid")]
    m1: Option<usize>,
    #[arg(long, value_parser = count, requires = "m1")]
    m2: Option<usize>,
    /// Screen this a² instead of solving.
    #[arg(long, value_parser = real, allow_negative_numbers = true, requires = "m1")]
    a_sq: Option<f64>,
    /// Solve every (m1, m2) in [1, GRID]².
    #[arg(long, value_parser = count)]
    grid: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
    Both,
}

#[derive(Args, Debug)]
struct HelixArgs {
    #[arg(long, value_parser = real, allow_negative_numbers = true, conflicts_with = "grid")]
    alpha0: Option<f64>,
    #[arg(long, value_enum, default_value = "both")]
    branch: BranchArg,
    /// Sweep this many admissible α₀, alternating between the two regimes.
    #[arg(long, value_parser = count)]
    grid: Option<usize>,
}

#[derive(Args, Debug)]
struct BundleArgs {
    #[arg(long, value_parser = count)]
    p: usize,
    /// Evaluate at one a² instead of solving.
    #[arg(long, value_parser = real, allow_negative_numbers = true, conflicts_with = "grid")]
    a_sq: Option<f64>,
    /// Locate the roots by scanning this many a² cells.
    #[arg(long, value_parser = count)]
    grid: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum VerifyTarget {
    /// Bitension residuals of a curve family along its parameter.
    Curve(VerifyCurveArgs),
    /// Flat torus in S^{2n+1} from its squared radii.
    Torus {
        #[arg(long, value_parser = real, value_delimiter = ',', required = true)]
        radii_sq: Vec<f64>,
        #[arg(long, value_parser = real, allow_negative_numbers = true, default_value = "-4")]
        lambda: f64,
    },
    /// Predicates for a CMC hypersurface with J̄H̄ tangent.
    Hypersurface {
        #[arg(long, value_parser = count)]
        n: usize,
        #[arg(long, value_parser = real)]
        mean_curvature_sq: f64,
        #[arg(long, value_parser = real)]
        second_ff_norm_sq: f64,
        #[arg(long, value_parser = real, allow_negative_numbers = true, default_value = "1")]
        c: f64,
        #[arg(long, value_parser = count)]
        m_bar: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum Family {
    Tau12Pm1,
    Tau12ZeroCircle,
    Tau12ZeroHelix,
    HolomorphicCircle,
    SphereHelix,
    HorizontalGeodesic,
}

#[derive(Args, Debug)]
pub(crate) struct CurveArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Complex dimension (the curve lives in S^{2n+1}).
    #[arg(long, value_parser = count)]
    n: Option<usize>,
    #[arg(long, value_parser = real, allow_negative_numbers = true)]
    k1: Option<f64>,
    #[arg(long, value_parser = real, allow_negative_numbers = true)]
    k2: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyCurveArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Points spread uniformly over [0, 2π].
    #[arg(long, value_parser = count, default_value = "100")]
    samples: usize,
    #[arg(long, value_parser = real, allow_negative_numbers = true, default_value = "-4")]
    lambda: f64,
}

#[derive(Subcommand, Debug)]
enum ClassifyTarget {
    /// Match constant complex torsions of a CP² helix to the class table.
    Helix {
        #[arg(long, value_parser = real, requires_all = ["k2", "k3", "torsions"], conflicts_with = "alpha0")]
        k1: Option<f64>,
        #[arg(long, value_parser = real)]
        k2: Option<f64>,
        #[arg(long, value_parser = real)]
        k3: Option<f64>,
        /// τ12,τ13,τ14,τ23,τ24,τ34
        #[arg(long, value_parser = real, value_delimiter = ',', allow_negative_numbers = true)]
        torsions: Option<Vec<f64>>,
        /// Solve the order-4 helix at this α₀ and classify it.
        #[arg(long, value_parser = real, allow_negative_numbers = true)]
        alpha0: Option<f64>,
        #[arg(long, value_enum, default_value = "plus")]
        branch: BranchArg,
    },
}

#[derive(Subcommand, Debug)]
enum SampleTarget {
    /// Positions of a curve family as CSV.
    Curve {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_parser = real, allow_negative_numbers = true, default_value = "0.01")]
        ds: f64,
        #[arg(long, value_parser = count, default_value = "100")]
        count: usize,
    },
}

/// Parses `argv` (program name first) and evaluates it.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let tol = match cli.tol {
        None => ToleranceConfig::default(),
        Some(t) if t > 0.0 => ToleranceConfig::uniform(t),
        Some(t) => {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: --tol must be positive, got {t}\n"),
            }
        }
    };
    let result = match cli.command {
        Command::Solve(SolveTarget::Clifford(a)) => commands::solve_clifford(a.m1, a.m2, a.a_sq, a.grid, &tol),
        Command::Solve(SolveTarget::Zhang { n }) => commands::solve_zhang(n, &tol),
        Command::Solve(SolveTarget::Helix(a)) => commands::solve_helix(a.alpha0, a.branch, a.grid, &tol),
        Command::Solve(SolveTarget::SphereBundle(a)) => commands::solve_sphere_bundle(a.p, a.a_sq, a.grid, &tol),
        Command::Verify(VerifyTarget::Curve(a)) => commands::verify_curve(&a.curve, a.samples, a.lambda, &tol),
        Command::Verify(VerifyTarget::Torus { radii_sq, lambda }) => commands::verify_torus(&radii_sq, lambda, &tol),
        Command::Verify(VerifyTarget::Hypersurface {
            n,
            mean_curvature_sq,
            second_ff_norm_sq,
            c,
            m_bar,
        }) => commands::verify_hypersurface(n, mean_curvature_sq, second_ff_norm_sq, c, m_bar, &tol),
        Command::Classify(ClassifyTarget::Helix {
            k1,
            k2,
            k3,
            torsions,
            alpha0,
            branch,
        }) => commands::classify_helix(k1.zip(k2).zip(k3), torsions, alpha0, branch, &tol),
        Command::Sample(SampleTarget::Curve { curve, ds, count }) => commands::sample_curve(&curve, ds, count, &tol),
    };
    match result {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(CliError::Usage(m)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
        Err(CliError::Domain(m)) => Outcome {
            code: EXIT_DOMAIN,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
    }
}
