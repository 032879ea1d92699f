//! Experiment harness for online learning with long-term constraints:
//! random LP/QP instances, a seeded multi-repetition runner, CSV and SVG
//! output, and the property suites behind the `certify` command.

use std::path::{Path, PathBuf};

pub mod certify;
pub mod config;
pub mod emit;
pub mod env;
pub mod instance;
pub mod presets;
pub mod rng;
pub mod runner;

pub use config::{AlgorithmSpec, ExperimentConfig};
pub use runner::{run_experiment, ResultRow, ResultTable};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Run {
        context: String,
        #[source]
        source: ltc_core::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("results table: {0}")]
    Table(String),
}

impl BenchError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        BenchError::Io { path: path.to_path_buf(), source }
    }
}
