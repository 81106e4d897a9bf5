use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use datamule::{Error, Scenario};

mod commands;
mod config;
mod report;

use commands::Ctx;
use config::ScenarioConfig;

/// Plan persistent data-muling rounds for a UAV fleet.
#[derive(Parser)]
#[command(name = "datamule", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the config scenario: free, late, wait or both.
    #[arg(long, global = true)]
    scenario: Option<Scenario>,
    /// Write SVG figures (the default).
    #[arg(long, global = true, overrides_with = "no_svg")]
    svg: bool,
    #[arg(long = "no-svg", global = true)]
    no_svg: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Plan one round.
    Plan,
    /// Repeat rounds, relocating UAVs to their delivery bases.
    Persist {
        /// Overrides run.max_rounds.
        #[arg(long)]
        rounds: Option<usize>,
        /// Also draw every round.
        #[arg(long)]
        round_svgs: bool,
    },
    /// Parameter or threshold sweep.
    Sweep,
    /// Compare the planner with the exact solver.
    Verify,
    /// Cluster bases and invert weights, or reduce a VRP instance.
    Reduce,
    /// Write the configured network to network.json.
    Gen,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::OracleRefused { .. }) => 4,
        Some(Error::NoPath { .. } | Error::InvalidPath(_)) => 3,
        Some(
            Error::Config(_)
            | Error::InvalidParameter(_)
            | Error::InvalidNetwork(_)
            | Error::Ingest { .. }
            | Error::UnknownNode(_)
            | Error::Domain(_)
            | Error::Json(_),
        ) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let path = cli.config.ok_or_else(|| Error::Config("--config is required".into()))?;
    let mut cfg = ScenarioConfig::load(&path)?;
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    let out = commands::output_dir(&cfg, cli.out.as_deref());
    commands::ensure_not_file(&out)?;
    let svg = if cli.no_svg { false } else { cli.svg || cfg.svg.unwrap_or(true) };
    let ctx = Ctx { cfg, out, svg, scenario: cli.scenario };
    match cli.command {
        Command::Plan => commands::plan(&ctx),
        Command::Persist { rounds, round_svgs } => commands::persist(&ctx, rounds, round_svgs),
        Command::Sweep => commands::sweep(&ctx),
        Command::Verify => commands::verify(&ctx),
        Command::Reduce => commands::reduce(&ctx),
        Command::Gen => commands::gen(&ctx),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if let Some(Error::OracleRefused { .. }) = err.chain().find_map(|e| e.downcast_ref::<Error>()) {
                eprintln!("hint: verify is meant for small instances; generate fewer sinks or raise oracle.max_sinks / oracle.max_uavs");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
