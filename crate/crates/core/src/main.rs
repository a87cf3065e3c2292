//! `welcherweg` command-line interface.
//!
//! Exit status: 0 on success, 1 when the command line or configuration is
//! invalid, 2 when the run itself fails (I/O and similar).

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use welcherweg::complementarity::{self, DEFAULT_CLASSIFY_TOL};
use welcherweg::experiments::config::SEED_ENV_VAR;
use welcherweg::experiments::{
    discriminate, emit, load_config, predict, resolve_seed, ExperimentConfig, Format,
};
use welcherweg::montecarlo::{run_shots, sweep_phase, PhysicalModel};
use welcherweg::Error;

#[derive(Parser)]
#[command(name = "welcherweg", version, about = "Two-path which-way interferometer simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate shots at the configured phase and print the run summary.
    Run(RunArgs),
    /// Simulate a phase sweep and print the binned fringe.
    Sweep(RunArgs),
    /// Print the closed-form collector current for one model.
    Predict(RunArgs),
    /// Compare unitary and orthodox predictions for a configuration.
    Discriminate(RunArgs),
    /// Classify operator pairs of a built-in complementarity scenario.
    Scenario(ScenarioArgs),
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: OutFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the model named in the configuration.
    #[arg(long)]
    model: Option<PhysicalModel>,
    /// Overrides the environment and the configuration seed.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(value_enum)]
    name: ScenarioName,
    /// Aharonov-Bohm phase of the Mach-Zehnder wave state.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioName {
    Biprism,
    MachZehnder,
}

/// Failure split by exit status.
enum Failure {
    Invalid(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Csv(_) => Failure::Runtime(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn load(args: &RunArgs) -> Result<(ExperimentConfig, PhysicalModel, u64), Failure> {
    let text = fs::read_to_string(&args.config).map_err(|e| {
        Failure::Invalid(format!("cannot read {}: {e}", args.config.display()))
    })?;
    let cfg = load_config(&text)?;
    let env = std::env::var(SEED_ENV_VAR).ok();
    let seed = resolve_seed(args.seed, env.as_deref(), cfg.seed)?;
    let model = args.model.unwrap_or(cfg.model);
    Ok((cfg, model, seed))
}

fn write_out(output: &Output, bytes: &[u8]) -> Result<(), Failure> {
    let res = match &output.out {
        Some(p) => fs::write(p, bytes),
        None => std::io::stdout().write_all(bytes),
    };
    res.map_err(|e| Failure::Runtime(format!("write failed: {e}")))
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let format_of = |o: &Output| match o.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    match cli.command {
        Command::Run(a) => {
            let (cfg, model, seed) = load(&a)?;
            let s = run_shots(&cfg, model, cfg.shots, seed)?;
            write_out(&a.output, &emit(&s, format_of(&a.output)))
        }
        Command::Sweep(a) => {
            let (cfg, model, seed) = load(&a)?;
            let f = sweep_phase(&cfg, model, &cfg.sweep_grid(), cfg.shots, seed)?;
            write_out(&a.output, &emit(&f, format_of(&a.output)))
        }
        Command::Predict(a) => {
            let (cfg, model, _) = load(&a)?;
            let p = predict(&cfg, model)?;
            write_out(&a.output, &emit(&p, format_of(&a.output)))
        }
        Command::Discriminate(a) => {
            let (cfg, _, _) = load(&a)?;
            let d = discriminate(&cfg)?;
            write_out(&a.output, &emit(&d, format_of(&a.output)))
        }
        Command::Scenario(a) => {
            let scenario = match a.name {
                ScenarioName::Biprism => complementarity::biprism_operators(),
                ScenarioName::MachZehnder => complementarity::mz_operators(a.theta),
            };
            let report = complementarity::classify(&scenario, a.tol)?;
            write_out(&a.output, &emit(&report, format_of(&a.output)))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
