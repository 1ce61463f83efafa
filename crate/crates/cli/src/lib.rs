//! Command-line front end for `moment-forge`: problem files in, reports out.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use moment_forge::groebner::{refine_to_exact, vanishing_ideal};
use moment_forge::moment::build_moment_matrix;
use moment_forge::solver::{
    check_extremal, exact_measure, extract_measure, generate_moments, numerical_conditions, BasisData, Verdict,
};
use moment_forge::variety::{solve_conjugate_system, Variety};
use moment_forge::{Complex64, GaussianRational, Scalar};

pub mod grid;
pub mod problem;
mod report;

pub use grid::{grid_sample, GridSpec};
pub use problem::{ProblemFile, Value};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const TOL_ENV: &str = "MOMENT_FORGE_TOL";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cli: {0}")]
    Problem(String),
    #[error("cli: {0}")]
    Usage(String),
    #[error("cli: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] moment_forge::Error),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    /// `key = value` lines, one per field.
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "moment-forge", version, about = "Truncated complex moment problems on algebraic curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Relative tolerance for rank, residual and vanishing tests.
    /// Falls back to the problem file, then MOMENT_FORGE_TOL, then 1e-9.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Run in exact arithmetic even when the file holds floats (taken at
    /// their exact binary value).
    #[arg(long, global = true)]
    pub exact: bool,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the moment matrix M(k).
    Matrix { problem: PathBuf },
    /// Solve p(z, z̄) = 0.
    Variety { problem: PathBuf },
    /// Reduced Gröbner basis of the vanishing ideal of the zero set of p.
    Groebner { problem: PathBuf },
    /// The moment conditions Λ(g) = 0 and Λ(z·g) = 0 for each basis element.
    Conditions { problem: PathBuf },
    /// Decide whether the moments have a representing measure on the zero set of p.
    Check { problem: PathBuf },
    /// Recover the atoms and densities of the representing measure.
    Extract { problem: PathBuf },
    /// Turn an atom list into a moment problem file.
    Generate { problem: PathBuf },
    /// Sample p(x + iy, x − iy) on a square window, as CSV.
    Grid {
        problem: Option<PathBuf>,
        /// Polynomial text; overrides the problem file.
        #[arg(long)]
        polynomial: Option<String>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        center_re: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        center_im: f64,
        #[arg(long)]
        half_width: f64,
        /// Samples per axis.
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
}

/// What a command produced: the text to emit and the process exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

impl Outcome {
    fn success(output: String) -> Outcome {
        Outcome { code: 0, output }
    }
}

/// 0 for yes, 2 for no, 3 for inconclusive. Errors exit with 1.
pub fn exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Yes => 0,
        Verdict::No => 2,
        Verdict::Inconclusive => 3,
    }
}

/// `--tol`, then the file, then the environment, then the default.
pub fn resolve_tol(flag: Option<f64>, file: Option<f64>, env: Option<&str>) -> Result<f64, CliError> {
    let tol = match (flag, file, env) {
        (Some(t), _, _) | (None, Some(t), _) => t,
        (None, None, Some(s)) => s.trim().parse().map_err(|_| CliError::Usage(format!("{TOL_ENV}: invalid number `{s}`")))?,
        (None, None, None) => DEFAULT_TOL,
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let env = std::env::var(TOL_ENV).ok();
    if let Command::Grid { problem, polynomial, center_re, center_im, half_width, samples } = &cli.command {
        let spec = GridSpec::new(Complex64::new(*center_re, *center_im), *half_width, *samples)?;
        let p = match (polynomial, problem) {
            (Some(text), _) => text.parse::<moment_forge::poly::ApproxPoly>()?,
            (None, Some(path)) => ProblemFile::read(path)?.polynomial::<Complex64>()?,
            (None, None) => return Err(CliError::Usage("grid needs --polynomial or a problem file".into())),
        };
        return Ok(Outcome::success(grid_sample(&p, &spec)));
    }
    let path = match &cli.command {
        Command::Matrix { problem }
        | Command::Variety { problem }
        | Command::Groebner { problem }
        | Command::Conditions { problem }
        | Command::Check { problem }
        | Command::Extract { problem }
        | Command::Generate { problem } => problem,
        Command::Grid { .. } => unreachable!("handled above"),
    };
    let problem = ProblemFile::read(path)?;
    let ctx = Context { tol: resolve_tol(cli.tol, problem.tol, env.as_deref())?, format: cli.format };
    if cli.exact || problem.is_exact() {
        dispatch::<GaussianRational>(&cli.command, &problem, &ctx)
    } else {
        dispatch::<Complex64>(&cli.command, &problem, &ctx)
    }
}

struct Context {
    tol: f64,
    format: Format,
}

/// Vanishing ideal of the variety; exact when the field is exact and the
/// coefficients can be recovered.
fn basis_of<F: Scalar>(v: &Variety, tol: f64) -> Result<BasisData, CliError> {
    let pts = v.coordinates();
    let approx = vanishing_ideal(&pts, tol)?;
    if F::EXACT {
        if let Some(exact) = refine_to_exact(&approx, &pts, tol) {
            return Ok(BasisData::Exact(exact));
        }
    }
    Ok(BasisData::Approx(approx))
}

fn dispatch<F: Scalar>(cmd: &Command, problem: &ProblemFile, ctx: &Context) -> Result<Outcome, CliError> {
    let structured = ctx.format == Format::Structured;
    match cmd {
        Command::Matrix { .. } => {
            let m = build_moment_matrix(&problem.moments::<F>()?);
            Ok(Outcome::success(report::matrix(&m, structured)))
        }
        Command::Variety { .. } => {
            let v = solve_conjugate_system(&problem.polynomial::<F>()?, ctx.tol)?;
            Ok(Outcome::success(report::variety(&v, structured)))
        }
        Command::Groebner { .. } => {
            let v = solve_conjugate_system(&problem.polynomial::<F>()?, ctx.tol)?;
            Ok(Outcome::success(report::basis(&basis_of::<F>(&v, ctx.tol)?, structured)?))
        }
        Command::Conditions { .. } => {
            let v = solve_conjugate_system(&problem.polynomial::<F>()?, ctx.tol)?;
            let text = match basis_of::<F>(&v, ctx.tol)? {
                BasisData::Exact(g) => report::conditions(&g, &numerical_conditions(&g), structured),
                BasisData::Approx(g) => report::conditions(&g, &numerical_conditions(&g), structured),
            };
            Ok(Outcome::success(text))
        }
        Command::Check { .. } => {
            let r = check_extremal(&problem.moments::<F>()?, &problem.polynomial::<F>()?, ctx.tol)?;
            Ok(Outcome { code: exit_code(r.verdict), output: report::check(&r, structured) })
        }
        Command::Extract { .. } => {
            let gamma = problem.moments::<F>()?;
            let v = solve_conjugate_system(&problem.polynomial::<F>()?, ctx.tol)?;
            let mu = extract_measure(&gamma, &v.zs(), ctx.tol)?;
            let exact = gamma.as_exact().and_then(|g| exact_measure(&mu, &g));
            let text = match (&exact, structured) {
                (Some(e), true) => problem.with_atoms(e).serialize(),
                (None, true) => problem.with_atoms(&mu).serialize(),
                (Some(e), false) => report::measure(e),
                (None, false) => report::measure(&mu),
            };
            Ok(Outcome::success(text))
        }
        Command::Generate { .. } => {
            let gamma = generate_moments(&problem.measure::<F>()?, problem.k)?;
            Ok(Outcome::success(problem.with_moments(&gamma).serialize()))
        }
        Command::Grid { .. } => unreachable!("grid does not read moments"),
    }
}
