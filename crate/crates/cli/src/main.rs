//! `stabscope` command-line experiment runner.

mod commands;
mod error;
mod output;
mod source;

use std::env;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stabscope::limits::{self, Limits};

use crate::commands::{BoundsArgs, DistinguishArgs, DumpArgs, EtaArgs, FidelityArgs, ParseCheckArgs};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "stabscope", version, about = "Bell difference sampling experiments on small pure states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact eta by every path, with table summaries
    Eta(EtaArgs),
    /// Run the sampled distinguisher over seeded trials
    Distinguish(DistinguishArgs),
    /// Brute-force stabilizer fidelity and the extent bound
    Fidelity(FidelityArgs),
    /// Evaluate a named closed-form bound
    Bounds(BoundsArgs),
    /// Validate circuit or amplitude files
    ParseCheck(ParseCheckArgs),
    /// Write the p, q and p-hat tables as CSV
    DumpTables(DumpArgs),
}

fn apply_env_limits() -> Result<(), CliError> {
    if let Ok(raw) = env::var("STABSCOPE_MEM_CAP_MB") {
        let mb: u64 = raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("STABSCOPE_MEM_CAP_MB must be a whole number, got {raw:?}")))?;
        limits::set(Limits::from_mem_cap_mb(mb));
    }
    Ok(())
}

fn set_jobs(jobs: Option<usize>) -> Result<(), CliError> {
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    apply_env_limits()?;
    match cli.command {
        Command::Eta(a) => {
            set_jobs(a.common.jobs)?;
            commands::eta(&a)
        }
        Command::Distinguish(a) => {
            set_jobs(a.common.jobs)?;
            commands::distinguish(&a)
        }
        Command::Fidelity(a) => {
            set_jobs(a.common.jobs)?;
            commands::fidelity(&a)
        }
        Command::Bounds(a) => commands::bounds(&a),
        Command::ParseCheck(a) => return Ok(commands::parse_check(&a)),
        Command::DumpTables(a) => {
            set_jobs(a.common.jobs)?;
            commands::dump_tables(&a)
        }
    }
    .map(|()| ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("stabscope: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
