use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use floquet_sweep::config::{Format, SweepConfig, Task};
use floquet_sweep::{exit, run, RunOptions};

/// Parameter sweeps of driven, weakly coupled qubits.
#[derive(Parser, Debug)]
#[command(name = "floquet-sweep", version)]
struct Cli {
    /// Task to run; falls back to `task` in the config file.
    #[arg(value_enum)]
    task: Option<Task>,
    /// TOML configuration file.
    #[arg(long, short)]
    config: PathBuf,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (overrides `numerics.workers`).
    #[arg(long)]
    workers: Option<usize>,
    /// Keep finished rows from an earlier run of the same config.
    #[arg(long)]
    resume: bool,
    /// Result format (overrides `output.format`).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Reserved; recorded in the metadata.
    #[arg(long)]
    seed: Option<u64>,
    /// Skip the plotting script.
    #[arg(long)]
    no_plot: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match SweepConfig::load(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(exit::CONFIG as u8);
        }
    };
    let Some(task) = cli.task.or(config.task) else {
        eprintln!("config error: no task given on the command line or in the config");
        return ExitCode::from(exit::CONFIG as u8);
    };
    if cli.workers == Some(0) {
        eprintln!("config error: --workers must be at least 1");
        return ExitCode::from(exit::CONFIG as u8);
    }
    let mut options = RunOptions::from_config(&config, task);
    if let Some(out) = cli.out {
        options.out_dir = out;
    }
    options.workers = cli.workers.or(options.workers);
    options.format = cli.format.unwrap_or(options.format);
    options.resume = cli.resume;
    options.seed = cli.seed;
    options.plot &= !cli.no_plot;

    let summary = match run(&config, &options) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::RUNTIME as u8);
        }
    };
    println!(
        "{}: {} points ({} computed, {} resumed), {} failed -> {}",
        task.name(),
        summary.n_points,
        summary.computed,
        summary.resumed,
        summary.failed,
        summary.result_file.display()
    );
    if let Some(d) = summary.max_disagreement {
        println!("max backend disagreement: {d:e} omega");
    }
    if summary.failure_fraction > config.numerics.failure_threshold {
        eprintln!(
            "failure fraction {:.3} exceeds threshold {:.3}",
            summary.failure_fraction, config.numerics.failure_threshold
        );
        return ExitCode::from(exit::FAILURE_THRESHOLD as u8);
    }
    ExitCode::SUCCESS
}
