use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sobolev_hf_cli::{configure_threads, load_config, run::describe, run_job};

/// Closed-shell Hartree-Fock by Riemannian optimization on a plane-wave grid.
///
/// The worker thread count is read from SOBOLEV_HF_THREADS.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the job described by a config file. Exits 0 only on convergence.
    Run {
        config: PathBuf,
        /// Override the random-guess seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let Command::Run { config, seed, out } = Cli::parse().command;
    let result = configure_threads().and_then(|_| {
        let mut job = load_config(&config)?;
        if let Some(seed) = seed {
            job.seed = seed;
        }
        if let Some(out) = out {
            job.output_dir = out;
        }
        run_job(&job)
    });
    match result {
        Ok(report) => {
            let _ = describe(&report, std::io::stdout());
            if report.summary.converged {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
