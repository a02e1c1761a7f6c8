//! Command implementations behind the `randdiag` binary.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 numerical failure.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use randdiag_core::generators::rotation;
use randdiag_core::mmio::{self, MatrixKind};
use randdiag_core::randdiag::diagnose;
use randdiag_core::{
    counterexample_matrix, diag_of, eig_relative_error, haar_unitary, offdiag_error, rand_diag,
    random_normal_matrix, schur, thermal_unitary, ComplexDense, Error, RngState, ThermalModelSpec,
};

pub mod bench;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "randdiag",
    version,
    about = "Randomized diagonalization of normal matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a test matrix and write it in Matrix Market format.
    Gen(GenArgs),
    /// Diagonalize a matrix file with RandDiag.
    Diag(DiagArgs),
    /// Complex Schur decomposition of a matrix file.
    Schur(SchurArgs),
    /// Run the accuracy/timing experiment grid and append CSV rows.
    Bench(bench::BenchArgs),
    /// Measure how well a unitary diagonalizes a matrix.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Unitary,
    Normal,
    Thermal,
    Counterexample,
}

impl From<GenKind> for MatrixKind {
    fn from(k: GenKind) -> Self {
        match k {
            GenKind::Unitary => MatrixKind::Unitary,
            GenKind::Normal => MatrixKind::Normal,
            GenKind::Thermal => MatrixKind::Thermal,
            GenKind::Counterexample => MatrixKind::Counterexample,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Matrix size (unitary, normal).
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of sites; the matrix is 2^L x 2^L (thermal).
    #[arg(long = "L")]
    pub sites: Option<usize>,
    /// Multiply bond gates in the order 1..L-1 instead of a random order (thermal).
    #[arg(long)]
    pub identity_order: bool,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// Rotation angle of the 2x2 unitary U0 (counterexample).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DiagArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Where to write U.
    #[arg(long)]
    pub out_u: Option<PathBuf>,
    /// Where to write diag(U^* A U) as an n x 1 matrix.
    #[arg(long)]
    pub out_d: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SchurArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out_u: Option<PathBuf>,
    #[arg(long)]
    pub out_t: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Candidate diagonalizing unitary.
    #[arg(long)]
    pub u: PathBuf,
    /// Reference eigenvalues as an n x 1 matrix file.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
}

/// A command failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical() {
            EXIT_NUMERICAL
        } else {
            EXIT_USAGE
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T = ()> = std::result::Result<T, CliError>;

pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Diag(args) => cmd_diag(&args),
        Command::Schur(args) => cmd_schur(&args),
        Command::Bench(args) => bench::cmd_bench(&args),
        Command::Check(args) => cmd_check(&args),
    }
}

/// `key=value` line on stdout.
fn emit(key: &str, value: impl fmt::Display) {
    println!("{key}={value}");
}

fn read_square(path: &Path) -> CliResult<ComplexDense> {
    let a = mmio::read_matrix(path)?;
    if !a.is_square() {
        return Err(CliError::usage(format!(
            "{}: expected a square matrix, got {}x{}",
            path.display(),
            a.rows(),
            a.cols()
        )));
    }
    Ok(a)
}

pub fn spectrum_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".spectrum");
    PathBuf::from(s)
}

pub fn cmd_gen(args: &GenArgs) -> CliResult {
    let mut rng = RngState::new(args.seed);
    let need_n = |what: &str| {
        args.n
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::usage(format!("--kind {what} requires --n >= 1")))
    };
    let comment = format!("kind={:?} seed={}", args.kind, args.seed).to_lowercase();
    match args.kind {
        GenKind::Unitary => {
            let u = haar_unitary(need_n("unitary")?, &mut rng)?;
            mmio::write_matrix_with_comments(&args.out, &u, &[&comment])?;
        }
        GenKind::Normal => {
            let (a, spectrum) = random_normal_matrix(need_n("normal")?, &mut rng)?;
            mmio::write_matrix_with_comments(&args.out, &a, &[&comment])?;
            mmio::write_matrix_with_comments(
                spectrum_path(&args.out),
                &ComplexDense::column(&spectrum),
                &["ground-truth eigenvalues"],
            )?;
        }
        GenKind::Thermal => {
            let sites = args
                .sites
                .ok_or_else(|| CliError::usage("--kind thermal requires --L"))?;
            let spec = if args.identity_order {
                ThermalModelSpec::identity_order(sites)?
            } else {
                ThermalModelSpec::random_order(sites, &mut rng)?
            };
            let u = thermal_unitary(&spec, &mut rng)?;
            let order = format!("site_order={:?}", spec.site_order);
            mmio::write_matrix_with_comments(&args.out, &u, &[&comment, &order])?;
        }
        GenKind::Counterexample => {
            let a = counterexample_matrix(args.alpha, args.beta, &rotation(args.theta))?;
            let params = format!(
                "alpha={} beta={} theta={}",
                args.alpha, args.beta, args.theta
            );
            mmio::write_matrix_with_comments(&args.out, &a, &[&comment, &params])?;
        }
    }
    Ok(())
}

pub fn cmd_diag(args: &DiagArgs) -> CliResult {
    let a = read_square(&args.input)?;
    let mut rng = RngState::new(args.seed);
    let result = rand_diag(&a, &mut rng)?;
    let err = offdiag_error(&a, &result.u)?;
    let diag = diagnose(&a, &result)?;
    if !diag.is_normal() {
        eprintln!(
            "warning: input is not normal to working precision (relative normality residual {:e})",
            diag.relative_normality_residual
        );
    }
    if let Some(p) = &args.out_u {
        mmio::write_matrix(p, &result.u)?;
    }
    if let Some(p) = &args.out_d {
        mmio::write_matrix(p, &ComplexDense::column(&diag_of(&a, &result.u)?))?;
    }
    emit("n", a.rows());
    emit("mu_h", result.mu_h);
    emit("mu_s", result.mu_s);
    emit("offdiag_error", err);
    emit("normality_residual", diag.normality_residual);
    if let Some(gap) = diag.min_gap {
        emit("min_gap", gap);
    }
    Ok(())
}

pub fn cmd_schur(args: &SchurArgs) -> CliResult {
    let a = read_square(&args.input)?;
    let dec = schur(&a)?;
    if let Some(p) = &args.out_u {
        mmio::write_matrix(p, &dec.u)?;
    }
    if let Some(p) = &args.out_t {
        mmio::write_matrix(p, &dec.t)?;
    }
    emit("n", a.rows());
    emit("reconstruction_residual", dec.reconstruction_residual(&a)?);
    emit("offdiag_t", dec.t.offdiag_norm()?);
    Ok(())
}

pub fn cmd_check(args: &CheckArgs) -> CliResult {
    let a = read_square(&args.input)?;
    let u = read_square(&args.u)?;
    if u.rows() != a.rows() {
        return Err(CliError::usage(format!(
            "dimension mismatch: matrix is {n}x{n}, U is {m}x{m}",
            n = a.rows(),
            m = u.rows()
        )));
    }
    emit("offdiag_error", offdiag_error(&a, &u)?);
    if let Some(p) = &args.spectrum {
        let spectrum = mmio::read_matrix(p)?;
        if spectrum.cols() != 1 || spectrum.rows() != a.rows() {
            return Err(CliError::usage(format!(
                "{}: expected a {}x1 spectrum, got {}x{}",
                p.display(),
                a.rows(),
                spectrum.rows(),
                spectrum.cols()
            )));
        }
        let rel = eig_relative_error(spectrum.as_slice(), &diag_of(&a, &u)?)?;
        emit("eig_rel_error", rel);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_path_appends_suffix() {
        assert_eq!(
            spectrum_path(Path::new("/tmp/a.mtx")),
            PathBuf::from("/tmp/a.mtx.spectrum")
        );
    }

    #[test]
    fn numerical_errors_map_to_exit_three() {
        let e: CliError = Error::NoConvergence {
            op: "eigh",
            index: 3,
            iterations: 30,
        }
        .into();
        assert_eq!(e.code, EXIT_NUMERICAL);
        let e: CliError = Error::InvalidArgument("x".into()).into();
        assert_eq!(e.code, EXIT_USAGE);
    }

    #[test]
    fn cli_parses_flags() {
        let cli = Cli::try_parse_from([
            "randdiag", "gen", "--kind", "thermal", "--L", "3", "--seed", "1", "--out", "t.mtx",
        ])
        .unwrap();
        match cli.command {
            Command::Gen(g) => {
                assert_eq!(g.kind, GenKind::Thermal);
                assert_eq!(g.sites, Some(3));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(Cli::try_parse_from(["randdiag", "gen", "--kind", "bogus", "--out", "x"]).is_err());
    }
}
