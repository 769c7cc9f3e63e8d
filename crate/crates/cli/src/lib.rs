//! Configuration parsing and job running for the `sobolev-hf` binary.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book {}

pub mod config;
pub mod run;

use std::path::{Path, PathBuf};

pub use config::{parse_config, ConfigError, GuessKind, RunConfig, SolverKind};
pub use run::{
    read_summary, read_trace, run_job, write_summary, write_trace, JobReport, Summary, TRACE_HEADER,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(#[from] ConfigError),

    #[error("molecule {path}: {source}")]
    Molecule {
        path: PathBuf,
        #[source]
        source: sobolev_hf::Error,
    },

    #[error(transparent)]
    Core(#[from] sobolev_hf::Error),

    #[error("solver failed: {0}")]
    Solver(#[from] sobolev_hf::optim::SolveError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("trace {path}, line {line}: {message}")]
    Trace {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("summary JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("environment variable {name}: {reason}")]
    Environment { name: &'static str, reason: String },
}

/// Read and parse a config file; relative paths inside it resolve against
/// the file's directory.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut config = parse_config(&text)?;
    config.resolve_paths(path.parent().unwrap_or(Path::new(".")));
    Ok(config)
}

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "SOBOLEV_HF_THREADS";

/// Size the global thread pool from [`THREADS_ENV`], if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Environment {
            name: THREADS_ENV,
            reason: format!("expected a positive integer, got `{value}`"),
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Environment {
            name: THREADS_ENV,
            reason: e.to_string(),
        })
}
