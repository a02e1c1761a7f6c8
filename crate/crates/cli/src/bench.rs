//! The `bench` subcommand: a grid of (kind, n, run) trials, each decomposed by
//! every requested algorithm, written as CSV rows.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rayon::prelude::*;

use randdiag_core::generators::rotation;
use randdiag_core::metrics::Summary;
use randdiag_core::mmio::{self, Algorithm, MatrixKind, TrialRecord};
use randdiag_core::rng::derive_seed;
use randdiag_core::{
    counterexample_matrix, eig_relative_error, haar_unitary, offdiag_error, rand_diag,
    random_normal_matrix, schur, thermal_unitary, ComplexDense, RngState, ThermalModelSpec, C64,
};

use crate::{CliError, CliResult, GenKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchAlgorithm {
    Randdiag,
    Schur,
}

impl From<BenchAlgorithm> for Algorithm {
    fn from(a: BenchAlgorithm) -> Self {
        match a {
            BenchAlgorithm::Randdiag => Algorithm::RandDiag,
            BenchAlgorithm::Schur => Algorithm::Schur,
        }
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated matrix sizes. Thermal sizes must be powers of two; counterexample only accepts 2.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub runs: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [GenKind::Unitary])]
    pub kinds: Vec<GenKind>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [BenchAlgorithm::Randdiag, BenchAlgorithm::Schur])]
    pub algorithms: Vec<BenchAlgorithm>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV file to append to; created with a header if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Run trials one at a time.
    #[arg(long)]
    pub no_parallel: bool,
}

/// One generated test matrix, plus its spectrum when known exactly.
struct Instance {
    a: ComplexDense,
    spectrum: Option<Vec<C64>>,
}

fn validate(args: &BenchArgs) -> CliResult {
    if args.runs == 0 {
        return Err(CliError::usage("--runs must be at least 1"));
    }
    if args.algorithms.is_empty() || args.kinds.is_empty() {
        return Err(CliError::usage("need at least one kind and one algorithm"));
    }
    for &kind in &args.kinds {
        for &n in &args.sizes {
            let ok = match kind {
                GenKind::Unitary | GenKind::Normal => n >= 2,
                GenKind::Thermal => n >= 4 && n.is_power_of_two(),
                GenKind::Counterexample => n == 2,
            };
            if !ok {
                return Err(CliError::usage(format!(
                    "size {n} is not valid for kind {}",
                    MatrixKind::from(kind).as_str()
                )));
            }
        }
    }
    Ok(())
}

fn generate(kind: GenKind, n: usize, rng: &mut RngState) -> randdiag_core::Result<Instance> {
    Ok(match kind {
        GenKind::Unitary => Instance {
            a: haar_unitary(n, rng)?,
            spectrum: None,
        },
        GenKind::Normal => {
            let (a, spectrum) = random_normal_matrix(n, rng)?;
            Instance {
                a,
                spectrum: Some(spectrum),
            }
        }
        GenKind::Thermal => {
            let spec = ThermalModelSpec::random_order(n.trailing_zeros() as usize, rng)?;
            Instance {
                a: thermal_unitary(&spec, rng)?,
                spectrum: None,
            }
        }
        GenKind::Counterexample => Instance {
            a: counterexample_matrix(1.0, 1.0, &rotation(std::f64::consts::FRAC_PI_4))?,
            spectrum: Some(vec![C64::new(1.0, 1.0), C64::new(0.0, 0.0)]),
        },
    })
}

fn four_significant(x: f64) -> f64 {
    format!("{x:.3e}").parse().unwrap_or(x)
}

fn measure(
    algorithm: BenchAlgorithm,
    inst: &Instance,
    rng: &mut RngState,
) -> randdiag_core::Result<(f64, Option<f64>, f64)> {
    let start = Instant::now();
    let (u, eigs) = match algorithm {
        BenchAlgorithm::Randdiag => (rand_diag(&inst.a, rng)?.u, None),
        BenchAlgorithm::Schur => {
            let dec = schur(&inst.a)?;
            let eigs = dec.eigenvalues();
            (dec.u, Some(eigs))
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    let err = offdiag_error(&inst.a, &u)?;
    let rel = match &inst.spectrum {
        Some(s) => {
            let eigs = match eigs {
                Some(e) => e,
                None => randdiag_core::diag_of(&inst.a, &u)?,
            };
            Some(eig_relative_error(s, &eigs)?)
        }
        None => None,
    };
    Ok((err, rel, elapsed))
}

fn run_trial(args: &BenchArgs, kind: GenKind, n: usize, run: usize) -> Vec<TrialRecord> {
    let matrix_kind = MatrixKind::from(kind);
    let seed = derive_seed(args.seed, matrix_kind.as_str(), n, run);
    let mut rng = RngState::new(seed);
    let record = |algorithm: BenchAlgorithm, offdiag_error, eig_rel_error, wall: f64| TrialRecord {
        algorithm: algorithm.into(),
        n,
        seed,
        matrix_kind,
        offdiag_error,
        eig_rel_error,
        wall_time_seconds: four_significant(wall),
    };
    let inst = match generate(kind, n, &mut rng) {
        Ok(inst) => inst,
        Err(e) => {
            eprintln!(
                "trial {} n={n} run={run}: generation failed: {e}",
                matrix_kind.as_str()
            );
            return args
                .algorithms
                .iter()
                .map(|&alg| record(alg, f64::NAN, None, 0.0))
                .collect();
        }
    };
    args.algorithms
        .iter()
        .map(|&alg| match measure(alg, &inst, &mut rng) {
            Ok((err, rel, wall)) => record(alg, err, rel, wall),
            Err(e) => {
                eprintln!(
                    "trial {} {} n={n} run={run}: {e}",
                    Algorithm::from(alg).as_str(),
                    matrix_kind.as_str()
                );
                record(alg, f64::NAN, None, 0.0)
            }
        })
        .collect()
}

/// Runs the grid and returns the records in (kind, n, run, algorithm) order.
pub fn run_grid(args: &BenchArgs) -> CliResult<Vec<TrialRecord>> {
    validate(args)?;
    let trials: Vec<(GenKind, usize, usize)> = args
        .kinds
        .iter()
        .flat_map(|&k| {
            args.sizes
                .iter()
                .flat_map(move |&n| (0..args.runs).map(move |r| (k, n, r)))
        })
        .collect();
    let per_trial: Vec<Vec<TrialRecord>> = if args.no_parallel {
        trials
            .iter()
            .map(|&(k, n, r)| run_trial(args, k, n, r))
            .collect()
    } else {
        trials
            .par_iter()
            .map(|&(k, n, r)| run_trial(args, k, n, r))
            .collect()
    };
    Ok(per_trial.into_iter().flatten().collect())
}

pub fn cmd_bench(args: &BenchArgs) -> CliResult {
    let records = run_grid(args)?;
    mmio::append_trials(&args.out, &records)?;
    print_summary(&records);
    Ok(())
}

fn print_summary(records: &[TrialRecord]) {
    let mut groups: BTreeMap<(&str, &str, usize), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.algorithm.as_str(), r.matrix_kind.as_str(), r.n))
            .or_default()
            .push(r);
    }
    println!("algorithm,kind,n,metric,count,mean,std,min,max");
    for ((alg, kind, n), rs) in groups {
        let ok: Vec<_> = rs.iter().filter(|r| !r.failed()).collect();
        if ok.len() < rs.len() {
            println!("{alg},{kind},{n},failed,{},,,,", rs.len() - ok.len());
        }
        let metrics: [(&str, Vec<f64>); 3] = [
            (
                "offdiag_error",
                ok.iter().map(|r| r.offdiag_error).collect(),
            ),
            (
                "eig_rel_error",
                ok.iter().filter_map(|r| r.eig_rel_error).collect(),
            ),
            (
                "wall_time_seconds",
                ok.iter().map(|r| r.wall_time_seconds).collect(),
            ),
        ];
        for (name, values) in metrics {
            if let Some(s) = Summary::of(&values) {
                println!(
                    "{alg},{kind},{n},{name},{},{:.3e},{:.3e},{:.3e},{:.3e}",
                    s.count, s.mean, s.std, s.min, s.max
                );
            }
        }
    }
}
