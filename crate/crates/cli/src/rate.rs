//! `rate`: Monte Carlo `d_K` over an `n` grid and a log-log fit.

use std::time::Instant;

use serde::Serialize;

use rsl_core::empirics::{rate_fit, sweep, RateFit, RatePoint};

use crate::config::{ExperimentConfig, Format};
use crate::model::build_family;
use crate::output::{write_csv, write_json};
use crate::{CliError, Provenance};

pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct RateRow {
    pub n: usize,
    pub dk: f64,
    pub mc_sd: f64,
    pub prediction: f64,
    pub provenance: Provenance,
}

pub struct RateReport {
    pub points: Vec<RatePoint>,
    pub fit: Option<RateFit>,
    pub predicted_exponent: Option<f64>,
    pub elapsed_s: f64,
}

pub fn run(cfg: &ExperimentConfig) -> Result<RateReport, CliError> {
    let start = Instant::now();
    let grid = cfg
        .rate
        .n_grid
        .clone()
        .ok_or_else(|| CliError::Config("n-grid: required for rate".into()))?;
    let family = build_family(&cfg.model, cfg.rate.p_law.as_deref())?;
    let samples = cfg.rate.samples.unwrap_or(DEFAULT_SAMPLES);
    let seed = cfg.rate.seed.unwrap_or(DEFAULT_SEED);
    let points = sweep(&family, &grid, samples, seed).map_err(|e| CliError::from_core(e, "model"))?;
    let fit = (points.len() >= 3).then(|| rate_fit(&points)).transpose().ok().flatten();
    Ok(RateReport {
        predicted_exponent: family.predicted_exponent(),
        points,
        fit,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

impl RateReport {
    pub fn rows(&self) -> Vec<RateRow> {
        self.points
            .iter()
            .map(|p| RateRow {
                n: p.n,
                dk: p.dk,
                mc_sd: p.mc_sd,
                prediction: p.prediction,
                provenance: Provenance::MonteCarlo,
            })
            .collect()
    }

    /// One-line summary of the fit.
    pub fn summary(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.4}"));
        format!(
            "slope={} r2={} predicted_exponent={}",
            fmt(self.fit.map(|f| f.slope)),
            fmt(self.fit.map(|f| f.r_squared)),
            fmt(self.predicted_exponent)
        )
    }

    pub fn emit(&self, cfg: &ExperimentConfig) -> Result<(), CliError> {
        let out = cfg.output.out.as_deref();
        match cfg.output.format.unwrap_or_default() {
            Format::Csv => {
                write_csv(&self.rows(), out)?;
                eprintln!("{}", self.summary());
                Ok(())
            }
            Format::Json => write_json(
                &serde_json::json!({
                    "experiment": "rate",
                    "version": env!("CARGO_PKG_VERSION"),
                    "inputs": cfg,
                    "points": self.rows(),
                    "fit": self.fit.map(|f| serde_json::json!({
                        "slope": f.slope,
                        "intercept": f.intercept,
                        "r_squared": f.r_squared,
                    })),
                    "predicted_exponent": self.predicted_exponent,
                    "wall_time_s": self.elapsed_s,
                }),
                out,
            ),
        }
    }
}
