use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kerrcat_cli::{preset, run, summarize, ConfigError, Format, RunConfig, RunError, RunOptions, SweepResult, PRESETS};

const EXIT_CONFIG: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

#[derive(Parser)]
#[command(name = "kerrcat", version, about = "Drive-amplitude sweeps of driven SNAIL circuits")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Source {
    /// TOML run configuration (frequencies in Hz).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in scenario.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct Compute {
    #[command(flatten)]
    source: Source,
    /// Worker threads for per-amplitude analysis (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand)]
enum Verb {
    /// Run a sweep and write `sweep.<format>` into the output directory.
    Run(Compute),
    /// Continue an interrupted run from its checkpoint.
    Resume(Compute),
    /// Check a configuration and list every violation.
    Validate {
        #[command(flatten)]
        source: Source,
        /// Print the resolved configuration as TOML.
        #[arg(long)]
        print: bool,
    },
    /// Convert a result file to another format.
    Export {
        /// Result file (.csv or .json).
        input: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
    /// Summarize a result file: plateaus, steps, fidelity dips.
    Describe {
        input: PathBuf,
    },
}

fn load(source: &Source) -> Result<RunConfig, ConfigError> {
    match (&source.config, &source.preset) {
        (Some(p), _) => RunConfig::load(p),
        (None, Some(name)) => preset(name).ok_or_else(|| ConfigError::UnknownPreset(name.clone())),
        (None, None) => Err(ConfigError::Parse(format!("give --config PATH or --preset NAME (one of {})", PRESETS.join(", ")))),
    }
}

fn execute(c: Compute, resume: bool) -> Result<ExitCode, ExitCode> {
    let mut cfg = load(&c.source).map_err(config_failure)?;
    if let Some(w) = c.workers {
        cfg.compute.workers = w;
    }
    if c.checkpoint.is_some() {
        cfg.compute.checkpoint = c.checkpoint;
    }
    if resume {
        if cfg.compute.checkpoint.is_none() {
            return Err(config_failure(ConfigError::Invalid(vec!["compute.checkpoint: resume needs a checkpoint path".into()])));
        }
        cfg.compute.resume = true;
    }
    let opts = RunOptions { preset: c.source.preset.clone(), max_new_points: None };
    let result = run(&cfg, &opts).map_err(|e| match e {
        RunError::Config(e) => config_failure(e),
        e => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    })?;
    let path = result.export(&c.out, c.format).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::FAILURE
    })?;
    println!("wrote {}", path.display());
    println!("{}", summarize(&result, 3));
    if result.failed_rows() > 0 {
        eprintln!("{} of {} rows failed", result.failed_rows(), result.rows.len());
        return Ok(ExitCode::from(EXIT_PARTIAL));
    }
    Ok(ExitCode::SUCCESS)
}

fn config_failure(e: ConfigError) -> ExitCode {
    eprintln!("config error: {e}");
    ExitCode::from(EXIT_CONFIG)
}

fn import(path: &PathBuf) -> Result<SweepResult, ExitCode> {
    SweepResult::import(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let outcome = match Cli::parse().verb {
        Verb::Run(c) => execute(c, false),
        Verb::Resume(c) => execute(c, true),
        Verb::Validate { source, print } => load(&source).and_then(|c| c.validate().map(|_| c)).map_err(config_failure).map(|c| {
            if print {
                print!("{}", c.to_toml());
            }
            println!("configuration is valid (fingerprint {})", c.fingerprint());
            ExitCode::SUCCESS
        }),
        Verb::Export { input, out, format } => import(&input).and_then(|r| {
            r.export(&out, format)
                .map(|p| {
                    println!("wrote {}", p.display());
                    ExitCode::SUCCESS
                })
                .map_err(|e| {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                })
        }),
        Verb::Describe { input } => import(&input).map(|r| {
            println!("{}", summarize(&r, 3));
            ExitCode::SUCCESS
        }),
    };
    outcome.unwrap_or_else(|code| code)
}
