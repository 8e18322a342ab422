//! `exact-rank` command line.
//!
//! Exit codes: 0 success, 1 I/O or unreadable input, 2 usage error,
//! 3 algorithm failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::{fs, io};

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use exact_rank::harness::{point_instance, run_benchmark, stream_rng, Algorithm, Phase, TrialSpec};
use exact_rank::instance::{gap_profile, lower_bound_eq1, lower_bound_eq2, Family, InstanceFile, InstanceOracle};
use exact_rank::listwise::{listwise_merge_sort, MergeCounter};
use exact_rank::ranking::{iir_with_cap, DEFAULT_SCHEDULE_CAP};
use exact_rank::Error;

#[derive(Parser)]
#[command(name = "exact-rank", version, about = "Exact active ranking from noisy comparisons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Homo,
    Mnl,
    Random,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Homo => Family::Homo,
            FamilyArg::Mnl => Family::Mnl,
            FamilyArg::Random => Family::Random,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Iir,
    Lwms,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a synthetic instance and write it as JSON.
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        /// Gap parameter (homo and random families).
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rank the items of an instance and print the result as JSON.
    Rank {
        /// Instance file, `-` for stdin.
        #[arg(long, default_value = "-")]
        instance: PathBuf,
        #[arg(long)]
        confidence: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "iir")]
        algorithm: AlgorithmArg,
        /// Merge width for lwms.
        #[arg(long)]
        m: Option<usize>,
        /// Insertion attempts per item before iir gives up (exit code 3).
        #[arg(long, default_value_t = DEFAULT_SCHEDULE_CAP)]
        max_attempts: u32,
    },
    /// Run a seeded Monte-Carlo sweep and write CSV.
    Benchmark {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Comma-separated item counts.
        #[arg(long, value_delimiter = ',', required = true)]
        sweep: Vec<usize>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        confidence: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "iir")]
        algorithm: AlgorithmArg,
        #[arg(long)]
        m: Option<usize>,
        /// Worker threads; results do not depend on it.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print gap profile, transitivity flags and lower bounds as JSON.
    Diagnose {
        #[arg(long, default_value = "-")]
        instance: PathBuf,
        #[arg(long)]
        confidence: f64,
    },
}

enum Failure {
    Io(String),
    Usage(ErrorKind, String),
    Algorithm(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ScheduleExhausted { .. } => Failure::Algorithm(e.to_string()),
            Error::InvalidInstance(_) | Error::Json(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(ErrorKind::ValueValidation, e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(ErrorKind::ArgumentConflict, msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(kind, msg)) => Cli::command().error(kind, msg).exit(),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Algorithm(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Generate { family, n, delta, seed, output } => {
            let family = Family::from(family);
            check_gap_flag(family, delta)?;
            let spec = TrialSpec {
                family,
                sweep: vec![n],
                delta_gap: delta,
                confidence: 0.5,
                algorithm: Algorithm::Iir,
                trials: 1,
                master_seed: seed,
            };
            spec.validate()?;
            let provenance = match delta {
                Some(d) => format!("generate family={family} n={n} delta={d} seed={seed}"),
                None => format!("generate family={family} n={n} seed={seed}"),
            };
            let instance = point_instance(&spec, n)?.with_provenance(provenance);
            let mut text = instance.to_json()?;
            text.push('\n');
            emit(output.as_deref(), &text)
        }
        Command::Rank { instance, confidence, seed, algorithm, m, max_attempts } => {
            let algorithm = algorithm_from(algorithm, m)?;
            if !(confidence > 0.0 && confidence < 1.0) {
                return Err(usage(format!("--confidence must lie in (0, 1), got {confidence}")));
            }
            if max_attempts == 0 {
                return Err(usage("--max-attempts must be positive"));
            }
            let file = read_instance(&instance)?;
            let has_truth = file.true_ranking.is_some();
            let instance = file.into_instance()?;
            let n = instance.n();
            let mut rng = stream_rng(seed, n as u64, 0, Phase::Trial);
            let mut oracle = InstanceOracle::new(&instance);
            let (ranking, comparisons) = match algorithm {
                Algorithm::Iir => {
                    let out = iir_with_cap(&mut oracle, n, confidence, max_attempts, &mut rng)?;
                    (out.ranking, out.comparisons)
                }
                Algorithm::Lwms { m } => {
                    let mut counter = MergeCounter::default();
                    let items: Vec<usize> = (1..=n).collect();
                    let ranking = listwise_merge_sort(&mut oracle, &items, m, &mut counter, &mut rng)?;
                    (ranking, counter.listwise_comparisons)
                }
            };
            #[derive(Serialize)]
            struct RankOutput {
                ranking: Vec<usize>,
                comparisons: u64,
                #[serde(skip_serializing_if = "Option::is_none")]
                correct: Option<bool>,
            }
            let correct = has_truth.then(|| ranking == instance.true_ranking());
            let out = RankOutput { ranking, comparisons, correct };
            println!("{}", serde_json::to_string(&out).map_err(|e| Failure::Io(e.to_string()))?);
            Ok(())
        }
        Command::Benchmark { family, sweep, delta, confidence, trials, seed, algorithm, m, threads, output } => {
            let family = Family::from(family);
            check_gap_flag(family, delta)?;
            let spec = TrialSpec {
                family,
                sweep,
                delta_gap: delta,
                confidence,
                algorithm: algorithm_from(algorithm, m)?,
                trials,
                master_seed: seed,
            };
            spec.validate()?;
            let report = match threads {
                Some(0) => return Err(usage("--threads must be positive")),
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Failure::Io(e.to_string()))?
                    .install(|| run_benchmark(&spec))?,
                None => run_benchmark(&spec)?,
            };
            for p in &report.points {
                eprintln!(
                    "n={} error_rate={} mean_comparisons={:.1}",
                    p.n, p.aggregates.error_rate, p.aggregates.mean_comparisons
                );
            }
            emit(output.as_deref(), &report.to_csv()?)
        }
        Command::Diagnose { instance, confidence } => {
            if !(confidence > 0.0 && confidence < 1.0) {
                return Err(usage(format!("--confidence must lie in (0, 1), got {confidence}")));
            }
            let instance = read_instance(&instance)?.into_instance()?;
            let profile = gap_profile(&instance);
            #[derive(Serialize)]
            struct Diagnostics {
                n: usize,
                confidence: f64,
                delta_i: Vec<f64>,
                delta_tilde_i: Vec<f64>,
                sst_holds: bool,
                sti_holds: bool,
                bound_eq1: f64,
                bound_eq2: f64,
            }
            let out = Diagnostics {
                n: instance.n(),
                confidence,
                bound_eq1: lower_bound_eq1(&profile.delta_tilde_i, confidence)?,
                bound_eq2: lower_bound_eq2(&profile.delta_tilde_i, instance.n(), confidence)?,
                delta_i: profile.delta_i,
                delta_tilde_i: profile.delta_tilde_i,
                sst_holds: profile.sst_holds,
                sti_holds: profile.sti_holds,
            };
            let text = serde_json::to_string_pretty(&out).map_err(|e| Failure::Io(e.to_string()))?;
            println!("{text}");
            Ok(())
        }
    }
}

fn check_gap_flag(family: Family, delta: Option<f64>) -> Result<(), Failure> {
    match (family.needs_delta(), delta) {
        (true, None) => Err(Failure::Usage(
            ErrorKind::MissingRequiredArgument,
            format!("--delta is required for the {family} family"),
        )),
        (false, Some(_)) => Err(usage(format!("--delta does not apply to the {family} family"))),
        _ => Ok(()),
    }
}

fn algorithm_from(algorithm: AlgorithmArg, m: Option<usize>) -> Result<Algorithm, Failure> {
    match (algorithm, m) {
        (AlgorithmArg::Iir, None) => Ok(Algorithm::Iir),
        (AlgorithmArg::Iir, Some(_)) => Err(usage("--m only applies to --algorithm lwms")),
        (AlgorithmArg::Lwms, None) => {
            Err(Failure::Usage(ErrorKind::MissingRequiredArgument, "--algorithm lwms needs --m".into()))
        }
        (AlgorithmArg::Lwms, Some(m)) if m < 2 => Err(usage(format!("--m must be at least 2, got {m}"))),
        (AlgorithmArg::Lwms, Some(m)) => Ok(Algorithm::Lwms { m }),
    }
}

fn read_instance(path: &Path) -> Result<InstanceFile, Failure> {
    let text = if path.as_os_str() == "-" {
        io::read_to_string(io::stdin()).map_err(|e| Failure::Io(format!("stdin: {e}")))?
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
    };
    Ok(InstanceFile::from_json(&text)?)
}

/// Writes to a sibling temp file and renames, so a failed run leaves no
/// partial output behind.
fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    let Some(path) = output else {
        print!("{text}");
        return Ok(());
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text)
        .and_then(|()| fs::rename(&tmp, path))
        .map_err(|e| {
            let _ = fs::remove_file(&tmp);
            Failure::Io(format!("{}: {e}", path.display()))
        })
}
