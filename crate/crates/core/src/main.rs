use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gatetherm::config::RunConfig;
use gatetherm::exec::{init_workers_from_env, Backend};
use gatetherm::run::{emit_distributions, run_compare, run_sweep};
use gatetherm::Error;

/// TPM energetics of a two-qubit controlled-rotation gate.
///
/// Worker count is read from the GATETHERM_WORKERS environment variable.
#[derive(Parser)]
#[command(name = "gatetherm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Theory curves over the time grid: sweep.csv, realizations.csv, summary.json
    Sweep(Common),
    /// Energy and entropy histograms at the configured times: hist_dE.csv, hist_ds.csv
    Hist(Common),
    /// Monte Carlo and photonic-model errors: mc_error.csv, photonic_error.csv
    Compare(Common),
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` config file; defaults are used when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    /// Enable the photonic gate model
    #[arg(long)]
    photonic: bool,
}

impl Common {
    fn load(&self) -> gatetherm::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(samples) = self.samples {
            cfg.samples = samples;
        }
        if self.photonic {
            cfg.photonic.enabled = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidParam { .. } => 2,
        Error::Invariant(_) => 3,
        _ => 1,
    }
}

fn run(cli: Cli) -> gatetherm::Result<Vec<PathBuf>> {
    let backend = Backend::Parallel;
    match cli.command {
        Command::Sweep(c) => run_sweep(&c.load()?, backend)?.write(&c.out),
        Command::Hist(c) => emit_distributions(&c.load()?)?.write(&c.out),
        Command::Compare(c) => run_compare(&c.load()?, backend)?.write(&c.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_workers_from_env();
    match run(cli) {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
