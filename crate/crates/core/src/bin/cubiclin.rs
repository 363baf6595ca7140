//! `cubiclin`: properness analysis of `F_A(x) = x + (Ax)³` from the command line.
//!
//! Matrices are read as `{"rows": [["1","-5","4"], ...]}` with exact entries.
//! Exit status is 0 on success, 1 for bad input or a refused certification,
//! and 2 when an analysis cannot complete.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cubiclin::druzkowski::{druzkowski_test, DruzkowskiReport};
use cubiclin::family::{
    certify_class_z, instance_params, paper_instance, refute_claim_1, sample_family, ClassZCertificate, ClassZOutcome,
    FamilyParams, SpecialFamilyParams,
};
use cubiclin::json::{parse_scalar, read_file};
use cubiclin::properness::{
    criterion_check, decay_table, find_certificate, lift_witness, to_csv, CriterionOutcome, PropernessCertificate,
    WitnessSequence,
};
use cubiclin::report::{analyze, write_atomic, AnalysisOptions, Arithmetic, DEFAULT_TRIALS};
use cubiclin::scalar::{rational_from_f64, Rational};
use cubiclin::subspace::{colspace_basis, DEFAULT_TOLERANCE};
use cubiclin::{Error, Matrix, Vector};

type Q = Rational;

#[derive(Parser)]
#[command(
    name = "cubiclin",
    version,
    about = "Properness analysis for cubic-linear maps x + (Ax)^3"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one matrix
    Analyze(AnalyzeArgs),
    /// Decay table of a lifted witness as CSV
    Witness(WitnessArgs),
    /// The constructible family and the class-Z counterexample
    #[command(subcommand)]
    Family(FamilyCommand),
}

#[derive(Args)]
struct Seed {
    /// Seed for every randomized step
    #[arg(long, env = "CUBICLIN_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AnalyzeArgs {
    matrix: PathBuf,
    /// Keep only exactly representable candidate directions
    #[arg(long, conflicts_with = "tol")]
    exact: bool,
    /// Membership tolerance for irrational candidate directions
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    seed: Seed,
    /// Druzkowski trials and probe starts per lambda
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, value_delimiter = ',', value_parser = parse_gamma)]
    gammas: Option<Vec<Q>>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit wall-clock timings so output is reproducible
    #[arg(long)]
    no_timings: bool,
}

#[derive(Args)]
struct WitnessArgs {
    matrix: PathBuf,
    #[arg(long, value_delimiter = ',', value_parser = parse_gamma, default_value = "10,100,1000,10000")]
    gammas: Vec<Q>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Random members of the family
    Sample {
        #[arg(long)]
        count: usize,
        #[command(flatten)]
        seed: Seed,
        /// Restrict to lambda = 1, mu = 0
        #[arg(long)]
        special_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The fixed 3x3 instance and its alpha
    PaperInstance,
    /// Class-Z and non-properness certificates for a matrix
    Certify { matrix: PathBuf },
    /// Composite report: a class-Z matrix whose map is not proper
    #[command(name = "refute-claim1")]
    RefuteClaim1 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Accepts exact forms (`100`, `7/3`) and float notation (`1e4`).
fn parse_gamma(s: &str) -> Result<Q, String> {
    let q = parse_scalar::<Q>(s).or_else(|_| {
        s.trim()
            .parse::<f64>()
            .ok()
            .and_then(rational_from_f64)
            .ok_or_else(|| format!("invalid gamma {s:?}"))
    })?;
    if q <= Q::from_integer(0.into()) {
        return Err(format!("gamma must be positive, got {s}"));
    }
    Ok(q)
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.exit_code() == 1 {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

type CliResult = Result<(), Failure>;

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, out: Option<&Path>) -> CliResult {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()).map_err(|e| Failure::Internal(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_matrix(path: &Path) -> Result<Matrix<Q>, Failure> {
    let m: Matrix<Q> = read_file(path).map_err(|e| Failure::Input(e.to_string()))?;
    m.ensure_square()?;
    Ok(m)
}

fn cmd_analyze(args: AnalyzeArgs) -> CliResult {
    let a = load_matrix(&args.matrix)?;
    let arithmetic = if args.exact {
        Arithmetic::Exact
    } else {
        Arithmetic::Tolerance {
            eps: args.tol.unwrap_or(DEFAULT_TOLERANCE),
        }
    };
    let mut opts = AnalysisOptions {
        arithmetic,
        seed: args.seed.seed,
        trials: args.trials,
        timings: !args.no_timings,
        ..AnalysisOptions::default()
    };
    if let Some(g) = args.gammas {
        opts.gammas = g;
    }
    let report = analyze(&a, &opts)?;
    emit(&to_json(&report)?, args.out.as_deref())
}

fn cmd_witness(args: WitnessArgs) -> CliResult {
    let a = load_matrix(&args.matrix)?;
    let Some(cert) = find_certificate(&a)? else {
        return Err(Failure::Internal(
            "inconclusive: no certificate found for this matrix".into(),
        ));
    };
    let ws = WitnessSequence::new(cert, args.gammas)?;
    let rows = decay_table(&lift_witness(&a, &ws)?)?;
    emit(&to_csv(&rows), args.csv.as_deref())
}

#[derive(Serialize)]
struct CertificateSet {
    #[serde(rename = "classZ")]
    class_z: ClassZCertificate,
    nonproperness: Option<PropernessCertificate>,
}

#[derive(Serialize)]
struct FamilyReport {
    params: Option<FamilyParams>,
    matrix: Matrix<Q>,
    #[serde(with = "cubiclin::json::scalar_str")]
    alpha: Q,
    certificates: CertificateSet,
    druzkowski: DruzkowskiReport,
}

fn family_report(a: &Matrix<Q>, class_z: ClassZCertificate) -> Result<FamilyReport, Failure> {
    let alpha = class_z.alpha().clone();
    let params = SpecialFamilyParams::from_free(a[(0, 0)].clone(), a[(0, 2)].clone(), a[(1, 0)].clone())
        .ok()
        .map(|p| p.general());
    let nonproperness = match criterion_check(a, &colspace_basis(a), &Vector::ones(3))? {
        CriterionOutcome::Certified(c) => Some(c),
        CriterionOutcome::Refused(_) => None,
    };
    Ok(FamilyReport {
        params,
        matrix: a.clone(),
        alpha,
        certificates: CertificateSet { class_z, nonproperness },
        druzkowski: druzkowski_test(a, DEFAULT_TRIALS, 0)?,
    })
}

fn cmd_family(cmd: FamilyCommand) -> CliResult {
    match cmd {
        FamilyCommand::Sample {
            count,
            seed,
            special_only,
            out,
        } => {
            let samples = sample_family(count, seed.seed, special_only)?;
            emit(&to_json(&samples)?, out.as_deref())
        }
        FamilyCommand::PaperInstance => {
            let (a, _) = paper_instance();
            let ClassZOutcome::Certified(c) = certify_class_z(&a) else {
                return Err(Failure::Internal("the fixed instance failed certification".into()));
            };
            let mut report = family_report(&a, c)?;
            report.params = Some(instance_params().general());
            emit(&to_json(&report)?, None)
        }
        FamilyCommand::Certify { matrix } => {
            let a: Matrix<Q> = read_file(&matrix).map_err(|e| Failure::Input(e.to_string()))?;
            match certify_class_z(&a) {
                ClassZOutcome::Certified(c) => emit(&to_json(&family_report(&a, c)?)?, None),
                refused @ ClassZOutcome::Refused(_) => {
                    emit(&to_json(&refused)?, None)?;
                    Err(Failure::Input("certification refused".into()))
                }
            }
        }
        FamilyCommand::RefuteClaim1 { out } => {
            let report = refute_claim_1()?;
            emit(&to_json(&report)?, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are malformed input
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Witness(w) => cmd_witness(w),
        Command::Family(f) => cmd_family(f),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
