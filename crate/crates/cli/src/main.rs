use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bttp::bounds::bounds_report;
use bttp::construction::{ParamMode, Variant};
use bttp::instance::nba32;
use bttp::io::serialize_schedule;
use bttp::schedule::{render, total_distance, validate_schedule};
use bttp::solve::{solve, SolveConfig};
use bttp::{Error, Instance, Schedule};

/// Bipartite traveling tournament scheduler.
#[derive(Parser)]
#[command(name = "bttp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a schedule and print a JSON report.
    Solve(SolveArgs),
    /// Check a schedule file against the three scheduling constraints.
    Validate {
        #[arg(long)]
        schedule: PathBuf,
        /// Also report the schedule's total distance on this instance.
        #[arg(long)]
        instance: Option<String>,
    },
    /// Print lower bounds as JSON.
    Bounds {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a schedule as a day-by-team grid.
    Render {
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Write the built-in 32-team instance.
    Nba32 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Path3,
    Cycle3,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file, or `nba32` for the built-in instance.
    #[arg(long)]
    instance: String,
    #[arg(long, value_enum, default_value = "cycle3")]
    variant: VariantArg,
    /// Super-teams per league (needs --d).
    #[arg(long, requires = "d")]
    m: Option<usize>,
    /// 3-paths per super-team (needs --m).
    #[arg(long, requires = "m")]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent runs; the best one is kept.
    #[arg(long, default_value_t = 1)]
    seeds: usize,
    #[arg(long)]
    no_local_search: bool,
    /// Where to write the schedule JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn failed(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoFeasibleParams(_)
            | Error::Infeasible(_)
            | Error::Internal(_)
            | Error::TooLarge(_)
            | Error::RunTooLong { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::failed(format!("cannot write {}: {e}", path.display())))
}

fn load_instance(arg: &str) -> Result<Instance, Failure> {
    if arg == "nba32" {
        return Ok(nba32());
    }
    Ok(Instance::parse(&read(Path::new(arg))?)?)
}

fn load_schedule(path: &Path) -> Result<Schedule, Failure> {
    Ok(Schedule::parse(&read(path)?)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve(args) => {
            let inst = load_instance(&args.instance)?;
            let mode = match (args.m, args.d) {
                (Some(m), Some(d)) => ParamMode::Explicit { m, d },
                _ => ParamMode::Practical,
            };
            if args.seeds == 0 {
                return Err(Failure::usage("--seeds must be at least 1"));
            }
            let cfg = SolveConfig {
                variant: match args.variant {
                    VariantArg::Path3 => Variant::Path3,
                    VariantArg::Cycle3 => Variant::Cycle3,
                },
                mode,
                seed: args.seed,
                seeds: args.seeds,
                local_search: !args.no_local_search,
                max_passes: 0,
            };
            let sol = solve(&inst, &cfg)?;
            if let Some(out) = &args.out {
                write(out, &serialize_schedule(&sol.schedule))?;
            }
            println!("{}", serde_json::to_string_pretty(&sol.report).expect("report serializes"));
        }
        Command::Validate { schedule, instance } => {
            let s = load_schedule(&schedule)?;
            let violations = validate_schedule(&s);
            if violations.is_empty() {
                println!("feasible");
            } else {
                for v in &violations {
                    println!("{v}");
                }
            }
            if let Some(arg) = instance {
                let inst = load_instance(&arg)?;
                println!("total distance: {:.3}", total_distance(&s, &inst)?);
            }
            if !violations.is_empty() {
                return Err(Failure::failed(format!("{} violations", violations.len())));
            }
        }
        Command::Bounds { instance, out } => {
            let inst = load_instance(&instance)?;
            let json = bounds_report(&inst)?.to_json();
            match out {
                Some(path) => write(&path, &json)?,
                None => println!("{json}"),
            }
        }
        Command::Render { schedule } => {
            print!("{}", render(&load_schedule(&schedule)?));
        }
        Command::Nba32 { out } => {
            let json = nba32().to_json();
            match out {
                Some(path) => write(&path, &json)?,
                None => println!("{json}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
