//! `rateladder`: builds rate-adaptive LDPC code ladders and simulates them.

mod commands;
mod io;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{BuildArgs, CyclesArgs, ExtendArgs, InspectArgs, LiftArgs, OptimizeArgs, SimulateArgs};

#[derive(Parser, Debug)]
#[command(name = "rateladder", version, about = "Rate-adaptive protograph LDPC codes for Slepian-Wolf coding")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Global {
    /// Base seed for every random choice [default: $RATELADDER_SEED, else 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 1 gives a fully deterministic schedule.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

impl Global {
    /// The `--seed` flag, else the environment default, else 0.
    pub fn seed(&self) -> anyhow::Result<u64> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| rateladder::Error::InvalidArgument(format!("{SEED_ENV}={v} is not an unsigned integer")).into()),
            Err(_) => Ok(0),
        }
    }
}

pub const SEED_ENV: &str = "RATELADDER_SEED";

#[derive(Subcommand, Debug)]
enum Command {
    /// Search a protograph with differential evolution.
    Optimize(OptimizeArgs),
    /// Extend a protograph by cyclic-shift lifting of its types.
    Extend(ExtendArgs),
    /// Lift a protograph to a parity-check matrix.
    Lift(LiftArgs),
    /// Build a code ladder and write its manifest.
    Ladder(BuildArgs),
    /// Run the experiment described by a spec file.
    Simulate(SimulateArgs),
    /// Count length-4 cycles of a matrix or a ladder.
    Cycles(CyclesArgs),
    /// Summarize a protograph, matrix or ladder manifest.
    Inspect(InspectArgs),
}

/// Exit code for a failed command.
fn exit_code(err: &anyhow::Error) -> u8 {
    use rateladder::Error as E;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Io(_) | E::Json(_) | E::Alist { .. } => 4,
                E::InvalidArgument(_) | E::DegenerateChannel(_) | E::RateOffGrid { .. } => 2,
                _ => 3,
            };
        }
        if cause.is::<std::io::Error>() || cause.is::<serde_json::Error>() {
            return 4;
        }
    }
    3
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let g = cli.global;
    let run = || match cli.command {
        Command::Optimize(a) => commands::optimize(&g, a),
        Command::Extend(a) => commands::extend(&g, a),
        Command::Lift(a) => commands::lift(&g, a),
        Command::Ladder(a) => commands::build(&g, a),
        Command::Simulate(a) => commands::simulate(&g, a),
        Command::Cycles(a) => commands::cycles(&g, a),
        Command::Inspect(a) => commands::inspect(&g, a),
    };
    match rateladder::par::with_workers(g.workers, run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
