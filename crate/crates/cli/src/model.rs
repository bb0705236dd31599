//! Building model instances and families from the `[model]` section.

use std::path::Path;

use rsl_core::empirics::{Family, PLaw};
use rsl_core::models::*;

use crate::config::ModelSection;
use crate::CliError;

fn need<T: Clone>(v: &Option<T>, field: &str, model: &str) -> Result<T, CliError> {
    v.clone()
        .ok_or_else(|| CliError::Config(format!("{field}: required for model {model}")))
}

/// Canonical model name.
pub fn model_name(m: &ModelSection) -> Result<&'static str, CliError> {
    let name = m.model.as_deref().ok_or_else(|| CliError::Config("model: not set".into()))?;
    match name.to_ascii_lowercase().as_str() {
        "degree" => Ok("degree"),
        "subgraph" => Ok("subgraph"),
        "complex" => Ok("complex"),
        "hypercube" => Ok("hypercube"),
        "two-runs" | "2-runs" | "tworuns" => Ok("two-runs"),
        other => Err(CliError::Config(format!(
            "model: unknown model {other:?} (expected degree, subgraph, complex, hypercube or two-runs)"
        ))),
    }
}

/// An edge-list file, or one of `edge`, `triangle`, `path:k`, `cycle:k`,
/// `star:k`, `complete:k`.
pub fn resolve_pattern(spec: &str) -> Result<SubgraphPattern, CliError> {
    let err = |e: rsl_core::Error| CliError::from_core(e, "pattern");
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)?;
        return SubgraphPattern::parse(&text).map_err(err);
    }
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (spec, None),
    };
    let size = |min: usize| -> Result<usize, CliError> {
        let k = match arg {
            Some(a) => a
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("pattern: bad size in {spec:?}")))?,
            None => return Err(CliError::Config(format!("pattern: {kind} needs a size, e.g. {kind}:{}", min.max(3)))),
        };
        if k < min || k > 16 {
            return Err(CliError::Config(format!("pattern: size {k} out of range in {spec:?}")));
        }
        Ok(k)
    };
    match kind {
        "edge" => Ok(SubgraphPattern::edge()),
        "triangle" => Ok(SubgraphPattern::triangle()),
        "path" => Ok(SubgraphPattern::path(size(1)?)),
        "cycle" => Ok(SubgraphPattern::cycle(size(3)?)),
        "star" => Ok(SubgraphPattern::star(size(1)?)),
        "complete" => Ok(SubgraphPattern::complete(size(2)?)),
        _ => Err(CliError::Config(format!("pattern: {spec:?} is neither a file nor a known pattern"))),
    }
}

fn regime(m: &ModelSection) -> Option<Regime> {
    match m.regime.as_deref() {
        Some("dense") => Some(Regime::Dense),
        Some("sparse") => Some(Regime::Sparse),
        _ => None,
    }
}

/// A single model instance at fixed parameters.
pub fn build_instance(m: &ModelSection) -> Result<ModelInstance, CliError> {
    let name = model_name(m)?;
    let inst = match name {
        "degree" => ModelInstance::Degree(DegreeCountConfig {
            n: need(&m.n, "n", name)?,
            p: need(&m.p, "p", name)?,
            d: m.d.unwrap_or(0),
        }),
        "subgraph" => ModelInstance::Subgraph {
            n: need(&m.n, "n", name)?,
            p: need(&m.p, "p", name)?,
            pattern: resolve_pattern(&need(&m.pattern, "pattern", name)?)?,
        },
        "complex" => ModelInstance::Complex(ComplexConfig {
            n: need(&m.n, "n", name)?,
            kappa: need(&m.kappa, "kappa", name)?,
            p: need(&m.p, "p", name)?,
        }),
        "hypercube" => ModelInstance::Hypercube(HypercubeConfig {
            n: need(&m.n, "n", name)?,
            p: need(&m.p, "p", name)?,
            d: m.d.unwrap_or(0),
        }),
        _ => match (&m.alpha, m.n) {
            (Some(a), _) => ModelInstance::TwoRuns(TwoRunsConfig::new(a.clone())),
            (None, Some(n)) => ModelInstance::TwoRuns(TwoRunsConfig::ones(n)),
            (None, None) => return Err(CliError::Config("alpha: required for model two-runs (or set n)".into())),
        },
    };
    inst.moments().map_err(|e| CliError::from_core(e, "model"))?;
    Ok(inst)
}

/// A model family indexed by `n` for rate sweeps. The edge probability
/// follows `p_law`, falling back to a constant `p`.
pub fn build_family(m: &ModelSection, p_law: Option<&str>) -> Result<Family, CliError> {
    let name = model_name(m)?;
    let law = || -> Result<PLaw, CliError> {
        match (p_law, m.p) {
            (Some(s), _) => s.parse().map_err(|e| CliError::Config(format!("p-law: {e}"))),
            (None, Some(p)) => Ok(PLaw::constant(p)),
            (None, None) => Err(CliError::Config(format!("p-law: required for model {name} (or set p)"))),
        }
    };
    Ok(match name {
        "degree" => Family::Degree {
            d: m.d.unwrap_or(0),
            p: law()?,
            regime: regime(m),
        },
        "subgraph" => Family::Subgraph {
            pattern: resolve_pattern(&need(&m.pattern, "pattern", name)?)?,
            p: law()?,
        },
        "complex" => Family::Complex {
            kappa: need(&m.kappa, "kappa", name)?,
            p: law()?,
        },
        "hypercube" => Family::Hypercube {
            d: m.d.unwrap_or(0),
            p: law()?,
            eps: m.eps.unwrap_or(0.5),
        },
        _ => Family::TwoRunsOnes,
    })
}

/// Short label used in verification messages.
pub fn describe(model: &ModelInstance) -> String {
    match model {
        ModelInstance::Degree(c) => format!("degree n={} p={} d={}", c.n, c.p, c.d),
        ModelInstance::Subgraph { n, p, pattern } => {
            format!("subgraph n={n} p={p} pattern={}", pattern.to_edge_list().trim().replace('\n', ";"))
        }
        ModelInstance::Complex(c) => format!("complex n={} kappa={} p={}", c.n, c.kappa, c.p),
        ModelInstance::Hypercube(c) => format!("hypercube n={} p={} d={}", c.n, c.p, c.d),
        ModelInstance::TwoRuns(c) => format!("two-runs alpha={:?}", c.alpha),
    }
}
