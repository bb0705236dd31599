//! Experiment configuration: a TOML file of `key = value` pairs grouped in
//! sections, overridden by command-line flags of the same names.
//!
//! ```toml
//! [experiment]
//! command = "rate"
//!
//! [model]
//! model = "degree"
//! d = 0
//!
//! [rate]
//! n-grid = [64, 128, 256]
//! p-law = "1/n"
//! samples = 100000
//! seed = 7
//!
//! [output]
//! format = "csv"
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Bound,
    Verify,
    Rate,
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ModelSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    /// Edge-list file, or a built-in name such as `triangle` or `cycle:4`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<String>,
    /// `dense` or `sparse`, for degree counts with `d >= 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct BoundSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refine: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RateSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_law: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct VerifySection {
    /// Comma-separated check groups.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "is_default")]
    pub experiment: ExperimentSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub model: ModelSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub bound: BoundSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub rate: RateSection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub verify: VerifySection,
    #[serde(default, skip_serializing_if = "is_default")]
    pub output: OutputSection,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($field:ident),*) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field.clone(); } )*
    };
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config file: {}", e.message())))
    }

    pub fn emit(&self) -> String {
        toml::to_string(self).expect("config values are always representable")
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("config: cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Values set in `other` replace those in `self`.
    pub fn overlay(&mut self, other: &ExperimentConfig) {
        overlay!(self.experiment, other.experiment, command);
        overlay!(self.model, other.model, model, n, p, d, kappa, alpha, pattern, regime, eps);
        overlay!(self.bound, other.bound, variant, refine);
        overlay!(self.rate, other.rate, n_grid, p_law, samples, seed);
        overlay!(self.verify, other.verify, filter);
        overlay!(self.output, other.output, out, format);
    }

    /// Range checks that do not depend on the command.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, why: String| Err(CliError::Config(format!("{field}: {why}")));
        let m = &self.model;
        if let Some(p) = m.p {
            if !(p > 0.0 && p < 1.0) {
                return bad("p", format!("{p} is not in (0, 1)"));
            }
        }
        if let Some(eps) = m.eps {
            if !(eps > 0.0 && eps < 1.0) {
                return bad("eps", format!("{eps} is not in (0, 1)"));
            }
        }
        if let Some(a) = &m.alpha {
            if a.is_empty() || a.iter().any(|v| !v.is_finite()) {
                return bad("alpha", "expected a nonempty list of finite weights".into());
            }
        }
        if let Some(r) = &m.regime {
            if r != "dense" && r != "sparse" {
                return bad("regime", format!("{r:?} is neither \"dense\" nor \"sparse\""));
            }
        }
        if self.bound.refine == Some(0) {
            return bad("refine", "must be at least 1".into());
        }
        if self.rate.samples == Some(0) {
            return bad("samples", "must be at least 1".into());
        }
        if let Some(g) = &self.rate.n_grid {
            if g.windows(2).any(|w| w[0] >= w[1]) {
                return bad("n-grid", "must be strictly increasing".into());
            }
        }
        if let Some(law) = &self.rate.p_law {
            law.parse::<rsl_core::empirics::PLaw>()
                .map_err(|e| CliError::Config(format!("p-law: {e}")))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = ExperimentConfig::default();
        c.experiment.command = Some(Command::Rate);
        c.model.model = Some("two-runs".into());
        c.model.alpha = Some(vec![1.0, -0.25, 3.5]);
        c.model.p = Some(0.1);
        c.rate.n_grid = Some(vec![8, 16, 32]);
        c.rate.p_law = Some("1/n".into());
        c.rate.seed = Some(u32::MAX as u64);
        c.output.format = Some(Format::Json);
        let text = c.emit();
        assert_eq!(ExperimentConfig::parse(&text).unwrap(), c);
        assert!(text.contains("[rate]") && text.contains("n-grid = [8, 16, 32]"));
        assert_eq!(ExperimentConfig::parse("").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentConfig::parse("[model]\nsize = 3\n").unwrap_err();
        assert!(err.to_string().contains("size"), "{err}");
        assert!(ExperimentConfig::parse("[rate]\nmodel = \"degree\"\n").is_err());
    }

    #[test]
    fn flags_win() {
        let mut file = ExperimentConfig::parse("[model]\nn = 5\np = 0.3\n").unwrap();
        let mut flags = ExperimentConfig::default();
        flags.model.n = Some(6);
        file.overlay(&flags);
        assert_eq!((file.model.n, file.model.p), (Some(6), Some(0.3)));
    }

    #[test]
    fn validation_names_the_field() {
        let mut c = ExperimentConfig::default();
        c.rate.p_law = Some("1/m".into());
        assert!(c.validate().unwrap_err().to_string().contains("p-law"));
        let mut c = ExperimentConfig::default();
        c.model.p = Some(1.5);
        assert!(c.validate().unwrap_err().to_string().starts_with("p:"));
    }
}
