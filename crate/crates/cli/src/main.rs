use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use waveqc::config::ConfigFile;
use waveqc::{exit_code, scenarios, sweep};

#[derive(Parser)]
#[command(
    name = "waveqc",
    version,
    about = "Deterministic scenario runner for ensemble cavity-QED simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a scenario once per value of a numeric parameter.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Name of the numeric scenario parameter to vary.
        #[arg(long)]
        axis: String,
        /// Comma-separated values (empty string: header-only output).
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config } => run_command(&config),
        Command::Sweep {
            config,
            axis,
            values,
        } => sweep_command(&config, &axis, &values),
    };
    ExitCode::from(code as u8)
}

fn run_command(config: &Path) -> i32 {
    let cfg = match ConfigFile::load(config).and_then(|cfg| cfg.resolve().map(|r| (cfg, r))) {
        Ok((_, resolved)) => resolved,
        Err(err) => {
            eprintln!("error: {err:#}");
            eprintln!("usage: waveqc run --config <file.toml>");
            return exit_code::USAGE_OR_CONFIG;
        }
    };
    match scenarios::run(&cfg) {
        Ok(report) => {
            for a in &report.assertions {
                let status = if a.passed { "pass" } else { "FAIL" };
                println!("[{status}] {}: {}", a.name, a.detail);
            }
            for (key, value) in &report.summary {
                println!("{key} = {value:e}");
            }
            if report.all_passed() {
                exit_code::SUCCESS
            } else {
                exit_code::ASSERTION_FAILURE
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code::USAGE_OR_CONFIG
        }
    }
}

fn sweep_command(config: &Path, axis: &str, values: &str) -> i32 {
    let cfg = match ConfigFile::load(config) {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: {err:#}");
            return exit_code::USAGE_OR_CONFIG;
        }
    };
    let values = match sweep::parse_values(values) {
        Ok(v) => v,
        Err(err) => {
            eprintln!("error: {err:#}");
            return exit_code::USAGE_OR_CONFIG;
        }
    };
    match sweep::run_sweep(&cfg, axis, &values) {
        Ok(outcome) => {
            for (idx, report) in outcome.reports.iter().enumerate() {
                for a in &report.assertions {
                    let status = if a.passed { "pass" } else { "FAIL" };
                    println!("[{status}] run {idx} {}: {}", a.name, a.detail);
                }
            }
            if outcome.all_passed {
                exit_code::SUCCESS
            } else {
                exit_code::ASSERTION_FAILURE
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code::USAGE_OR_CONFIG
        }
    }
}
