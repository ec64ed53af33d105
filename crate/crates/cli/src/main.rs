//! `irs-mec`: link budgets, offloading latency, and figure datasets for
//! direct and IRS-assisted uplinks to an edge server.
//!
//! Exit codes: 0 success, 1 domain or validation error, 2 usage error.
//! Errors are reported as one line on stderr: `error: <kind>: <message>`.

mod commands;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "irs-mec", version, about = "IRS-assisted MEC link and latency simulator")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Scenario config file (TOML, or JSON with --config-format json).
    #[arg(long, global = true, env = "IRS_MEC_CONFIG", value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Config encoding; defaults to json for `.json` files, toml otherwise.
    #[arg(long, global = true, value_parser = ["toml", "json"], value_name = "FORMAT")]
    pub config_format: Option<String>,

    /// Override a config key, e.g. `--set irs.tx_gain_db=17`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Print a single JSON object instead of key/value lines.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Received power, SNR and throughput of the direct or IRS uplink.
    Link(commands::LinkArgs),
    /// Offloading latency (transmission + edge processing) for one task.
    Offload(commands::OffloadArgs),
    /// Solve the interference power from an observed direct-link rate.
    Calibrate(commands::CalibrateArgs),
    /// Write figure datasets as CSV.
    Figure(commands::FigureArgs),
    /// Sweep one variable and print both links' rates and latencies as CSV.
    Sweep(commands::SweepArgs),
    /// Direct vs IRS comparison: throughput, bandwidth and power ratios.
    Headline(commands::HeadlineArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = err.print();
                return ExitCode::SUCCESS;
            }
            let rendered = err.to_string();
            let first = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("error: usage: {first}");
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.one_line());
            ExitCode::from(err.exit_code())
        }
    }
}

impl CliError {
    fn one_line(&self) -> String {
        let message = self.to_string().replace(['\n', '\r'], " ");
        format!("error: {}: {}", self.kind(), message)
    }
}
