// Copyright 2026 The ksdiv Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ksdiv_cli::{cmd_classify, cmd_region_scan, cmd_witness, CliError, CliResult, Overrides, RunConfig};

/// Classify qubit maps and dynamics in the P / KS / CP divisibility hierarchy.
#[derive(Parser)]
#[command(name = "ksdiv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time-resolved classification of a model; writes classification.csv,
    /// propagators.csv and summary.txt.
    Classify(Common),
    /// P / KS / CP flags over (p1, p2, p3); writes region.csv and region.svg.
    RegionScan(Common),
    /// Witness search for a map, or for a generator at `witness.t`.
    Witness(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Time grid points, or region resolution per axis.
    #[arg(long)]
    grid: Option<usize>,
}

impl Common {
    fn load(&self) -> CliResult<RunConfig> {
        let ov = Overrides {
            seed: self.seed,
            budget: self.budget,
            t_max: self.t_max,
            grid: self.grid,
        };
        match &self.config {
            Some(p) => RunConfig::load(p, &ov),
            None => {
                let mut cfg = RunConfig::default();
                cfg.apply(&ov)?;
                Ok(cfg)
            }
        }
    }

    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("KSDIV_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("KSDIV_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("KSDIV_THREADS: {e}")))
}

fn run(cli: Cli) -> CliResult<String> {
    configure_threads()?;
    let outcome = match &cli.command {
        Command::Classify(c) => cmd_classify(&c.load()?, &c.out_dir())?,
        Command::RegionScan(c) => cmd_region_scan(&c.load()?, &c.out_dir())?,
        Command::Witness(c) => cmd_witness(&c.load()?, c.out.as_deref())?,
    };
    Ok(outcome.summary)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ksdiv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
