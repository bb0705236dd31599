//! `bound`: every requested bound on one exact model instance.

use std::time::Instant;

use serde::Serialize;

use rsl_core::chaos::to_chaos;
use rsl_core::distance::{kolmogorov_exact, wasserstein_exact};
use rsl_core::models::ModelInstance;
use rsl_core::stein::*;
use rsl_core::Functional;

use crate::config::{ExperimentConfig, Format};
use crate::model::{build_instance, model_name};
use crate::output::{write_csv, write_json};
use crate::{CliError, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVariant {
    R0,
    R1,
    R2,
    Gamma0,
    SecondR1,
    SecondR2,
    SecondW1,
    Fourth,
}

impl BoundVariant {
    pub const ALL: [BoundVariant; 8] = [
        Self::R0,
        Self::R1,
        Self::R2,
        Self::Gamma0,
        Self::SecondR1,
        Self::SecondR2,
        Self::SecondW1,
        Self::Fourth,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::R0 => "r0",
            Self::R1 => "r1",
            Self::R2 => "r2",
            Self::Gamma0 => "gamma0",
            Self::SecondR1 => "2nd_r1",
            Self::SecondR2 => "2nd_r2",
            Self::SecondW1 => "2nd_w1",
            Self::Fourth => "fourth",
        }
    }

    /// Comma-separated labels (case-insensitive) or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<Self>, CliError> {
        let mut out = Vec::new();
        for part in s.split(',').map(|t| t.trim().to_ascii_lowercase()) {
            if part == "all" {
                return Ok(Self::ALL.to_vec());
            }
            let v = Self::ALL
                .into_iter()
                .find(|v| v.label() == part)
                .ok_or_else(|| CliError::Config(format!("variant: unknown bound variant {part:?}")))?;
            if !out.contains(&v) {
                out.push(v);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub model: &'static str,
    pub n: Option<usize>,
    pub p: f64,
    pub d: Option<usize>,
    pub kappa_dim: Option<usize>,
    pub variant: String,
    pub value: f64,
    pub provenance: Provenance,
}

pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    pub elapsed_s: f64,
}

fn columns(model: &ModelInstance) -> (Option<usize>, Option<usize>, Option<usize>) {
    match model {
        ModelInstance::Degree(c) => (Some(c.n), Some(c.d), None),
        ModelInstance::Subgraph { n, .. } => (Some(*n), None, None),
        ModelInstance::Complex(c) => (Some(c.n), None, Some(c.kappa)),
        ModelInstance::Hypercube(c) => (Some(c.n), Some(c.d), None),
        ModelInstance::TwoRuns(c) => (Some(c.alpha.len()), None, None),
    }
}

/// The single chaos level carrying all of the variance, if any.
fn pure_level(f: &Functional) -> Option<usize> {
    let c = to_chaos(f);
    let var = c.variance();
    let levels: Vec<usize> = (1..=f.m()).filter(|&n| c.level_mass(n) > 1e-12 * var.max(1.0)).collect();
    (levels.len() == 1).then(|| levels[0])
}

pub fn run(cfg: &ExperimentConfig) -> Result<BoundReport, CliError> {
    let start = Instant::now();
    let variants = BoundVariant::parse_list(cfg.bound.variant.as_deref().unwrap_or("all"))?;
    let explicit_fourth = cfg.bound.variant.is_some() && variants.contains(&BoundVariant::Fourth) && variants.len() < 8;
    let refine = cfg.bound.refine.unwrap_or(DEFAULT_REFINE);
    let model = build_instance(&cfg.model)?;
    let f = model.functional().map_err(|e| CliError::from_core(e, "model"))?;
    let core = |e| CliError::from_core(e, "bound");

    let mut values: Vec<(String, f64, Provenance)> = vec![
        ("kolmogorov_exact".into(), kolmogorov_exact(&f), Provenance::Exact),
        ("wasserstein_exact".into(), wasserstein_exact(&f), Provenance::Exact),
    ];
    macro_rules! exact {
        ($name:expr, $v:expr) => {
            values.push(($name.to_string(), $v, Provenance::Exact))
        };
    }
    let needs_terms = variants
        .iter()
        .any(|v| matches!(v, BoundVariant::SecondR1 | BoundVariant::SecondR2 | BoundVariant::SecondW1));
    let terms = needs_terms.then(|| bound_terms(&f));
    let mut terms_emitted = false;
    for v in &variants {
        match v {
            BoundVariant::R0 => {
                let g = kol_r0(&f, refine).map_err(core)?;
                exact!("inner_first_term", g.first_term);
                values.push(("kol_r0".into(), g.value, Provenance::GridApproximate));
                values.push(("kol_r0_argmax_z".into(), g.argmax_z, Provenance::GridApproximate));
            }
            BoundVariant::R1 => exact!("kol_r1", kol_r1(&f).map_err(core)?),
            BoundVariant::R2 => exact!("kol_r2", kol_r2(&f).map_err(core)?),
            BoundVariant::Gamma0 => {
                let g = gamma0_first_term(&f).map_err(core)?;
                exact!("gamma0_first_term", g);
                let tail = 4.0 * f.space().kappa().sqrt() * b3(&f).sqrt();
                exact!("kol_r2_gamma0", g + tail);
            }
            BoundVariant::SecondR1 | BoundVariant::SecondR2 | BoundVariant::SecondW1 => {
                let t = terms.expect("computed above");
                if !terms_emitted {
                    for (name, x) in [
                        ("B1", t.b1),
                        ("B2", t.b2),
                        ("B3", t.b3),
                        ("B4", t.b4),
                        ("B5", t.b5),
                        ("kappa", t.kappa),
                        ("A3", t.a3),
                    ] {
                        exact!(name, x);
                    }
                    terms_emitted = true;
                }
                match v {
                    BoundVariant::SecondR1 => exact!("2nd_R1", second_order_kolmogorov(&t, Variant::R1)),
                    BoundVariant::SecondR2 => exact!("2nd_R2", second_order_kolmogorov(&t, Variant::R2)),
                    _ => exact!("2nd_W1", second_order_wasserstein(&t)),
                }
            }
            BoundVariant::Fourth => match pure_level(&f) {
                Some(level) => {
                    let rep = fourth_moment_bound_auto(&f, level).map_err(core)?;
                    exact!("chaos_order", level as f64);
                    exact!("fourth_moment", rep.fourth_moment);
                    exact!("max_influence", rep.max_influence);
                    exact!("gamma_m", rep.gamma_m);
                    exact!("fourth_moment_bound", rep.bound);
                }
                None if explicit_fourth => {
                    return Err(CliError::Config(
                        "variant: fourth needs a statistic living in a single chaos level".into(),
                    ))
                }
                None => {}
            },
        }
    }

    let name = model_name(&cfg.model)?;
    let (n, d, kappa_dim) = columns(&model);
    let p = model.p();
    let rows = values
        .into_iter()
        .map(|(variant, value, provenance)| BoundRow {
            model: name,
            n,
            p,
            d,
            kappa_dim,
            variant,
            value,
            provenance,
        })
        .collect();
    Ok(BoundReport {
        rows,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

impl BoundReport {
    pub fn emit(&self, cfg: &ExperimentConfig) -> Result<(), CliError> {
        let out = cfg.output.out.as_deref();
        match cfg.output.format.unwrap_or_default() {
            Format::Csv => write_csv(&self.rows, out),
            Format::Json => write_json(
                &serde_json::json!({
                    "experiment": "bound",
                    "version": env!("CARGO_PKG_VERSION"),
                    "inputs": cfg,
                    "records": self.rows,
                    "wall_time_s": self.elapsed_s,
                }),
                out,
            ),
        }
    }
}
