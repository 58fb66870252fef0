//! sgbh: batch driver for the soliton black-hole experiments.
//!
//! Reads a flat key-value config, runs the requested command, writes
//! deterministic data artifacts, and reports internal checks. Exit codes:
//! 0 all checks pass, 1 a check or the run itself failed, 2 bad config.

mod commands;
mod config;
mod table;

use clap::Parser;
use commands::{run_single, sweep};
use config::Config;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "sgbh", version)]
struct Cli {
    /// Experiment config file (flat `key = value` lines)
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir` and SGBH_OUTPUT_ROOT
    #[arg(long)]
    out: Option<PathBuf>,
    /// Validate the config and print its normalized form without running
    #[arg(long)]
    check: bool,
    /// Worker threads for sweep fan-out
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn output_dir(flag: &Option<PathBuf>, config: &Config) -> PathBuf {
    if let Some(dir) = flag {
        return dir.clone();
    }
    let configured = config.text("output.dir");
    if !configured.is_empty() {
        return PathBuf::from(configured);
    }
    let root = std::env::var("SGBH_OUTPUT_ROOT").unwrap_or_else(|_| "sgbh-out".to_string());
    Path::new(&root).join(config.command())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match Config::from_path(&cli.config) {
        Ok(config) => config,
        Err(error) => {
            eprintln!("config error: {error}");
            return ExitCode::from(2);
        }
    };
    if cli.check {
        print!("# sgbh {VERSION}\n{}", config.echo());
        return ExitCode::SUCCESS;
    }

    let dir = output_dir(&cli.out, &config);
    if config.command() == "sweep" {
        let key = config.text("sweep.key").to_string();
        match sweep(&config, &dir, cli.jobs, VERSION) {
            Ok(runs) => {
                let mut all_pass = true;
                for (index, run) in runs.iter().enumerate() {
                    match &run.outcome {
                        Ok(checks) => {
                            let passed = checks.iter().filter(|c| c.pass()).count();
                            all_pass &= passed == checks.len();
                            println!(
                                "run {index:02} {key} = {}: {passed}/{} checks passed ({})",
                                run.value,
                                checks.len(),
                                run.directory
                            );
                        }
                        Err(error) => {
                            all_pass = false;
                            eprintln!("run {index:02} {key} = {}: {error}", run.value);
                        }
                    }
                }
                if all_pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(error) => {
                eprintln!("sweep failed: {error}");
                ExitCode::from(1)
            }
        }
    } else {
        match run_single(&config, &dir, VERSION) {
            Ok(checks) => {
                let mut all_pass = true;
                for check in &checks {
                    println!("{}", check.describe());
                    all_pass &= check.pass();
                }
                if all_pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(error) => {
                eprintln!("{} failed: {error}", config.command());
                ExitCode::from(1)
            }
        }
    }
}
