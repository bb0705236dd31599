//! Batch experiment runner over `rsl-core`: bound evaluation, exhaustive
//! verification, Monte Carlo rate sweeps and a quick self-test.

pub mod bound;
pub mod config;
pub mod model;
pub mod output;
pub mod rate;
pub mod selftest;
pub mod verify;

use thiserror::Error;

use config::{Command, ExperimentConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    /// 2 for configuration errors, 3 for cap and resource errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Cap(_) | Self::Resource(_) => 3,
        }
    }

    /// Maps a library error, prefixing configuration errors with `field`.
    pub fn from_core(e: rsl_core::Error, field: &str) -> Self {
        use rsl_core::Error as E;
        match e {
            E::CapExceeded { .. } => Self::Cap(e.to_string()),
            E::Io(msg) => Self::Resource(msg),
            other => Self::Config(format!("{field}: {other}")),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Resource(e.to_string())
    }
}

/// Numeric provenance tag attached to every emitted value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    GridApproximate,
    MonteCarlo,
}

/// Runs the configured command and returns the process exit code.
pub fn execute(cfg: &ExperimentConfig, inject: Option<verify::Injection>) -> Result<i32, CliError> {
    cfg.validate()?;
    let command = cfg
        .experiment
        .command
        .ok_or_else(|| CliError::Config("command: none given".into()))?;
    match command {
        Command::Bound => bound::run(cfg)?.emit(cfg).map(|_| 0),
        Command::Rate => rate::run(cfg)?.emit(cfg).map(|_| 0),
        Command::Verify => {
            let filter = match &cfg.verify.filter {
                Some(f) => verify::parse_filter(f)?,
                None => Vec::new(),
            };
            let report = verify::run(&filter, inject);
            report.emit(cfg)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Selftest => {
            let results = selftest::run();
            for (name, ok) in &results {
                println!("{} {name}", if *ok { "ok  " } else { "FAIL" });
            }
            Ok(if results.iter().all(|r| r.1) { 0 } else { 1 })
        }
    }
}
