//! `spectator`: evolutions, concurrence-purity tables, ensembles and the
//! propagator oracle from the command line.
//!
//! Exit codes: 0 success, 2 usage, 3 invalid configuration, 4 I/O,
//! 5 numerical failure, 6 oracle deviation above tolerance.

mod parse;
mod run;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spectator_core::ensemble::EnsembleConfig;
use spectator_core::models::{EvolutionConfig, ModelKind};
use spectator_core::states::{CouplingSpec, FieldSpec, WernerParams};

use run::{Failure, Job, RunConfig, EXIT_USAGE};
use table::Format;

#[derive(Parser, Debug)]
#[command(name = "spectator", version, about = "Two-qubit spectator dynamics", args_conflicts_with_subcommands = true)]
struct Cli {
    /// Run a JSON configuration file (as written by --dump-config).
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced two-qubit state, purity and concurrence on a time grid.
    Evolve(EvolveArgs),
    /// Concurrence-purity trajectory with unital-region flags.
    Cp(EvolveArgs),
    /// Teleportation thresholds along an evolution.
    Threshold(EvolveArgs),
    /// Spin-boson concurrence averaged over random couplings.
    Ensemble(EnsembleArgs),
    /// Werner, dephasing and maximal-concurrence boundary curves.
    Curves(CurvesArgs),
    /// Closed-form propagators against exponentiated Hamiltonians.
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Print the JSON configuration instead of running it.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args, Debug)]
struct StateArgs {
    /// Werner mixing parameter.
    #[arg(long, default_value_t = 1.0)]
    x: f64,
    /// Bell-like angle in radians; `pi/4` style shorthands accepted.
    #[arg(long, default_value = "pi/4", value_parser = parse::angle)]
    phi: f64,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    /// tc, bs or sb.
    #[arg(long, value_parser = parse::model)]
    model: ModelKind,
    /// fock:<n> or coherent:<re>[,<im>][:<cutoff>] for tc/bs; vacuum (or
    /// omitted) for sb.
    #[arg(long)]
    field: Option<String>,
    #[command(flatten)]
    state: StateArgs,
    /// Spin-boson couplings, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    g: Vec<f64>,
    /// Spin-boson frequencies, comma separated; a single value applies to
    /// every mode. Defaults to 1.
    #[arg(long, value_delimiter = ',')]
    omega: Vec<f64>,
    /// start:stop:step in gt (tc, bs) or t (sb).
    #[arg(long, value_parser = parse::grid)]
    grid: parse::TimeGrid,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct EnsembleArgs {
    /// Number of modes per sample.
    #[arg(long = "M")]
    modes: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads; the result does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Interval g and omega are drawn from, lo:hi.
    #[arg(long, value_parser = parse::interval, default_value = "0:1")]
    range: (f64, f64),
    #[command(flatten)]
    state: StateArgs,
    /// start:stop:step in t.
    #[arg(long, value_parser = parse::grid)]
    grid: parse::TimeGrid,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct CurvesArgs {
    /// Purity samples on [1/4, 1].
    #[arg(long, default_value_t = 301)]
    samples: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn werner(state: &StateArgs) -> Result<WernerParams, Failure> {
    Ok(WernerParams::new(state.x, state.phi)?)
}

fn evolution(args: &EvolveArgs) -> Result<EvolutionConfig, Failure> {
    let field = if args.model == ModelKind::SpinBosonSpectator {
        if args.field.as_deref().is_some_and(|f| f != "vacuum") {
            return Err(Failure::config("the sb model takes --g/--omega, not --field"));
        }
        if args.g.is_empty() {
            return Err(Failure::config("the sb model needs --g"));
        }
        let omega = match args.omega.as_slice() {
            [] => vec![1.0; args.g.len()],
            [w] => vec![*w; args.g.len()],
            ws => ws.to_vec(),
        };
        FieldSpec::MultimodeVacuum {
            couplings: CouplingSpec::new(args.g.clone(), omega)?,
        }
    } else {
        if !args.g.is_empty() || !args.omega.is_empty() {
            return Err(Failure::config("--g/--omega apply to sb only; tc/bs grids are in units of gt"));
        }
        let spec = args
            .field
            .as_deref()
            .ok_or_else(|| Failure::config("tc/bs need --field"))?;
        parse::field(spec).map_err(Failure::config)?
    };
    Ok(EvolutionConfig {
        model: args.model,
        werner: werner(&args.state)?,
        field,
        grid: args.grid.0.clone(),
    })
}

fn from_flags(command: Command) -> Result<(RunConfig, bool), Failure> {
    let (job, output) = match command {
        Command::Evolve(a) => (Job::Evolve(evolution(&a)?), a.output),
        Command::Cp(a) => (Job::Cp(evolution(&a)?), a.output),
        Command::Threshold(a) => (Job::Threshold(evolution(&a)?), a.output),
        Command::Ensemble(a) => {
            let mut config = EnsembleConfig::new(a.modes, a.samples, a.seed, a.grid.0.clone(), werner(&a.state)?);
            config.coupling_range = a.range;
            (
                Job::Ensemble {
                    config,
                    threads: a.threads,
                },
                a.output,
            )
        }
        Command::Curves(a) => (Job::Curves { samples: a.samples }, a.output),
        Command::Validate(a) => (
            Job::Validate {
                points: a.points,
                seed: a.seed,
            },
            OutputArgs {
                out: None,
                format: Format::Csv,
                dump_config: false,
            },
        ),
    };
    Ok((
        RunConfig {
            job,
            out: output.out,
            format: output.format,
        },
        output.dump_config,
    ))
}

fn from_file(path: &PathBuf) -> Result<RunConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::config(format!("bad configuration {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let (config, dump) = match (cli.config, cli.command) {
        (Some(path), None) => (from_file(&path)?, false),
        (None, Some(command)) => from_flags(command)?,
        _ => {
            return Err(Failure {
                code: EXIT_USAGE,
                message: "give a subcommand or --config FILE".into(),
            })
        }
    };
    if dump {
        config.validate()?;
        let text = serde_json::to_string_pretty(&config).map_err(|e| Failure::config(e.to_string()))?;
        println!("{text}");
        return Ok(0);
    }
    config.execute()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("spectator: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
