//! `mallows`: experiment driver for the mallows-core library.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::ConfigFile;

#[derive(Debug, Parser)]
#[command(
    name = "mallows",
    version,
    about = "Sweeps, Monte Carlo studies and exact checks for Mallows permutations"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Root seed for every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// CSV destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Flat JSON document supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads. Output does not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write the JSON summary here.
    #[arg(long, global = true)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Limiting and finite-volume pressure on a β grid.
    Pressure(commands::pressure::PressureArgs),
    /// The closed-form distribution function against the four-square solver.
    Rfun(commands::rfun::RfunArgs),
    /// One exact draw of n points from the Mallows point process.
    Sample(commands::sample::SampleArgs),
    /// Empirical distribution function at (θ₁, θ₂) across replicas and sizes.
    Converge(commands::converge::ConvergeArgs),
    /// Exact four-square probabilities against permutation enumeration.
    FoursquareExact(commands::foursquare::FoursquareArgs),
    /// Rate function of uniform, equilibrium or user-supplied grid measures.
    Ratefn(commands::ratefn::RatefnArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::FoursquareExact(a) = &cli.command {
        if let Err(msg) = a.check_budget() {
            use clap::CommandFactory;
            Cli::command()
                .error(clap::error::ErrorKind::ValueValidation, msg)
                .exit();
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let mut cfg = ConfigFile::load(cli.common.config.as_deref())?;
    let seed = cfg.pick("seed", cli.common.seed, 0u64)?;
    let threads = cfg.pick("threads", cli.common.threads, 0usize)?;
    let out: Option<PathBuf> = cfg.pick("out", cli.common.out.map(Some), None)?;
    let summary: Option<PathBuf> = cfg.pick("summary", cli.common.summary.map(Some), None)?;
    let job = match cli.command {
        Command::Pressure(a) => Job::Pressure(commands::pressure::resolve(a, &mut cfg, seed)?),
        Command::Rfun(a) => Job::Rfun(commands::rfun::resolve(a, &mut cfg, seed)?),
        Command::Sample(a) => Job::Sample(commands::sample::resolve(a, &mut cfg, seed)?),
        Command::Converge(a) => Job::Converge(commands::converge::resolve(a, &mut cfg, seed)?),
        Command::FoursquareExact(a) => Job::Foursquare(commands::foursquare::resolve(a, &mut cfg, seed)?),
        Command::Ratefn(a) => Job::Ratefn(commands::ratefn::resolve(a, &mut cfg, seed)?),
    };
    cfg.finish()?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    let report = match job {
        Job::Pressure(c) => commands::pressure::execute(&c)?,
        Job::Rfun(c) => commands::rfun::execute(&c)?,
        Job::Sample(c) => commands::sample::execute(&c)?,
        Job::Converge(c) => commands::converge::execute(&c)?,
        Job::Foursquare(c) => commands::foursquare::execute(&c)?,
        Job::Ratefn(c) => commands::ratefn::execute(&c)?,
    };
    report.emit(out.as_deref(), summary.as_deref())
}

enum Job {
    Pressure(commands::pressure::PressureConfig),
    Rfun(commands::rfun::RfunConfig),
    Sample(commands::sample::SampleConfig),
    Converge(commands::converge::ConvergeConfig),
    Foursquare(commands::foursquare::FoursquareConfig),
    Ratefn(commands::ratefn::RatefnConfig),
}
