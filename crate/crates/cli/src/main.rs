use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use perfclass::evaluator::sweep_csv;
use perfclass::harness::timer_resolution;
use perfclass::sorter::sort_dataset_traced;
use perfclass::{
    compare, load_dataset, run_manifest, save_dataset, score_baseline, score_sorted, sweep, CompareConfig,
    DatasetFormat, DistributionSpec, Error, HyperParams, Manifest, SampleSize, ScoreMethod, Statistic, TimingDataset,
};
use serde_json::{json, Value};

/// Rank algorithms into performance classes from repeated timing measurements.
#[derive(Debug, Parser)]
#[command(name = "perfclass", version)]
struct Cli {
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for score repetitions and evaluation trials.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Dataset format; inferred from the file extension when omitted.
    #[arg(long, global = true)]
    format: Option<DatasetFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a manifest of commands and record their timings.
    Measure {
        manifest: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Audit log path (default: `<output>.audit.json`).
        #[arg(long)]
        audit: Option<PathBuf>,
    },
    /// Compare two algorithms of a dataset.
    Compare {
        dataset: PathBuf,
        first: String,
        second: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Sort all algorithms of a dataset into ranked classes.
    Rank {
        dataset: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Print every comparison step to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Score how often each algorithm lands in the fastest class.
    Score {
        dataset: PathBuf,
        #[arg(long, default_value = "sorted")]
        method: ScoreMethod,
        #[command(flatten)]
        params: ParamArgs,
        /// Write the JSON report to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Precision and recall of the fastest set on truncated measurements.
    Eval {
        dataset: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        n_values: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Generate a synthetic dataset from distribution specs.
    Synth {
        specfile: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Verdict threshold in [0.5, 1].
    #[arg(long, default_value_t = 0.9)]
    threshold: f64,
    /// Bootstrap iterations per comparison.
    #[arg(long = "m", default_value_t = 30)]
    m_iters: usize,
    /// Subsample size, fixed (`10`) or a range (`5-10`).
    #[arg(long = "k", default_value = "10")]
    sample_k: SampleSize,
    /// Repetitions for scoring.
    #[arg(long = "rep", default_value_t = 50)]
    rep_count: usize,
    #[arg(long, default_value = "min")]
    statistic: Statistic,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl From<&ParamArgs> for HyperParams {
    fn from(a: &ParamArgs) -> Self {
        HyperParams {
            threshold: a.threshold,
            m_iters: a.m_iters,
            sample_k: a.sample_k,
            rep_count: a.rep_count,
            statistic: a.statistic,
            seed: a.seed,
        }
    }
}

enum Failure {
    Data(Error),
    Harness(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Spawn { .. } | Error::CommandFailed(_) => Failure::Harness(e),
            e => Failure::Data(e),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Data(e.into())
    }
}

fn format_for(cli: &Cli, path: &Path) -> DatasetFormat {
    cli.format
        .or_else(|| DatasetFormat::from_path(path))
        .unwrap_or(DatasetFormat::Csv)
}

fn load(cli: &Cli, path: &Path) -> Result<TimingDataset, Failure> {
    Ok(load_dataset(path, format_for(cli, path))?)
}

fn print_json(out: &mut String, value: &Value) {
    out.push_str(&serde_json::to_string_pretty(value).expect("json values always serialize"));
    out.push('\n');
}

fn write_file(path: &Path, contents: String) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|source| {
        Error::File {
            path: path.to_path_buf(),
            source,
        }
        .into()
    })
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Runs the subcommand and returns what it prints on stdout.
fn run(cli: &Cli) -> Result<String, Failure> {
    let mut out = String::new();
    match &cli.command {
        Command::Measure {
            manifest,
            output,
            audit,
        } => {
            let manifest = Manifest::load(manifest)?;
            eprintln!("timer resolution: {:?}", timer_resolution());
            let audit_path = audit.clone().unwrap_or_else(|| with_suffix(output, ".audit.json"));
            match run_manifest(&manifest) {
                Ok(run) => {
                    save_dataset(&run.dataset, output, format_for(cli, output))?;
                    write_file(&audit_path, serde_json::to_string_pretty(&run.audit)?)?;
                    if cli.json {
                        print_json(
                            &mut out,
                            &json!({
                                "output": output,
                                "audit": audit_path,
                                "algorithms": run.dataset.len(),
                                "n": run.dataset.n(),
                            }),
                        );
                    }
                    Ok(out)
                }
                Err(Error::CommandFailed(failure)) => {
                    let partial = with_suffix(output, ".partial.json");
                    write_file(&partial, serde_json::to_string_pretty(&failure)?)?;
                    eprintln!("partial results written to {}", partial.display());
                    Err(Failure::Harness(Error::CommandFailed(failure)))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Compare {
            dataset,
            first,
            second,
            params,
        } => {
            let d = load(cli, dataset)?;
            let time = |name: &str| d.get(name).ok_or_else(|| Error::UnknownAlgorithm(name.to_string()));
            let cfg = CompareConfig::from_params(&params.into());
            let outcome = compare(time(first)?, time(second)?, &cfg)?;
            if cli.json {
                print_json(
                    &mut out,
                    &json!({
                        "first": first,
                        "second": second,
                        "verdict": outcome.verdict,
                        "empirical_prob": outcome.empirical_prob,
                    }),
                );
            } else {
                let _ = writeln!(out, "{} {:.4}", outcome.verdict, outcome.empirical_prob);
            }
            Ok(out)
        }
        Command::Rank { dataset, params, trace } => {
            let d = load(cli, dataset)?;
            let outcome = sort_dataset_traced(&d, &params.into())?;
            let steps: Vec<String> = outcome.trace.iter().map(|s| s.render(d.algorithms())).collect();
            if *trace && !cli.json {
                for line in &steps {
                    eprintln!("{line}");
                }
            }
            let seq = outcome.to_sequence(d.algorithms());
            if cli.json {
                let mut value = json!({ "classes": seq.class_count(), "entries": seq.entries });
                if *trace {
                    value["trace"] = json!(steps);
                }
                print_json(&mut out, &value);
            } else {
                for e in &seq.entries {
                    let _ = writeln!(out, "{} {}", e.rank, e.algorithm);
                }
            }
            Ok(out)
        }
        Command::Score {
            dataset,
            method,
            params,
            output,
        } => {
            let d = load(cli, dataset)?;
            let report = match method {
                ScoreMethod::Baseline => score_baseline(&d, params.rep_count, params.sample_k, params.seed)?,
                ScoreMethod::Sorted => score_sorted(&d, &params.into())?,
            };
            if let Some(path) = output {
                write_file(path, serde_json::to_string_pretty(&report)?)?;
            }
            if cli.json {
                print_json(&mut out, &serde_json::to_value(&report)?);
            } else {
                for (name, score) in &report.scores {
                    let _ = writeln!(out, "{score:.4} {name}");
                }
            }
            Ok(out)
        }
        Command::Eval {
            dataset,
            n_values,
            trials,
            params,
        } => {
            let d = load(cli, dataset)?;
            let rows = sweep(&d, &params.into(), n_values, *trials)?;
            if cli.json {
                print_json(&mut out, &serde_json::to_value(&rows)?);
            } else {
                out = sweep_csv(&rows);
            }
            Ok(out)
        }
        Command::Synth { specfile, output } => {
            let text = fs::read_to_string(specfile).map_err(|source| Error::File {
                path: specfile.clone(),
                source,
            })?;
            let mut value: Value = serde_json::from_str(&text)?;
            if let Some(specs) = value.get_mut("specs") {
                value = specs.take();
            }
            let mut specs: Vec<DistributionSpec> = serde_json::from_value(value)?;
            let base = specfile.parent().unwrap_or(Path::new(""));
            for spec in &mut specs {
                if let Some(source) = &mut spec.source {
                    if source.path.is_relative() {
                        source.path = base.join(&source.path);
                    }
                }
            }
            let d = perfclass::generate(&specs)?;
            save_dataset(&d, output, format_for(cli, output))?;
            if cli.json {
                print_json(
                    &mut out,
                    &json!({ "output": output, "algorithms": d.len(), "n": d.n() }),
                );
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Harness(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
