use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rsl_cli::config::{Command, ExperimentConfig, Format};
use rsl_cli::verify::Injection;
use rsl_cli::CliError;

#[derive(Parser)]
#[command(name = "rsl", version, about = "Normal-approximation bounds and rate experiments on Rademacher spaces")]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,
    /// TOML experiment file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate exact distances and bounds for one model instance.
    Bound,
    /// Run the exhaustive check suite.
    Verify {
        /// Deliberately break one computation (for testing the suite).
        #[arg(long, hide = true, value_parser = ["b3-sign"])]
        inject: Option<String>,
    },
    /// Monte Carlo sweep of d_K over a grid of n.
    Rate,
    /// Quick sanity checks.
    Selftest,
}

#[derive(Args)]
struct Flags {
    /// degree, subgraph, complex, hypercube or two-runs.
    #[arg(long, global = true)]
    model: Option<String>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    p: Option<f64>,
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long, global = true)]
    kappa: Option<usize>,
    /// Comma-separated weights for two-runs.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Option<Vec<f64>>,
    /// Edge-list file or a name such as triangle, path:3, cycle:4, star:3.
    #[arg(long, global = true)]
    pattern: Option<String>,
    /// dense or sparse.
    #[arg(long, global = true)]
    regime: Option<String>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Comma-separated bound variants, or "all".
    #[arg(long, global = true)]
    variant: Option<String>,
    /// Grid points per atom gap for kol_r0.
    #[arg(long, global = true)]
    refine: Option<usize>,
    /// Comma-separated, strictly increasing.
    #[arg(long = "n-grid", global = true, value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
    /// Edge probability as a function of n, e.g. "0.3", "1/n", "n^-0.5", "2*n^(-1/2)".
    #[arg(long = "p-law", global = true)]
    p_law: Option<String>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated verify groups: core, models, stein, bounds, empirics.
    #[arg(long, global = true)]
    filter: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

impl Flags {
    fn into_config(self) -> ExperimentConfig {
        let mut c = ExperimentConfig::default();
        let m = &mut c.model;
        (m.model, m.n, m.p, m.d, m.kappa, m.alpha) = (self.model, self.n, self.p, self.d, self.kappa, self.alpha);
        (m.pattern, m.regime, m.eps) = (self.pattern, self.regime, self.eps);
        (c.bound.variant, c.bound.refine) = (self.variant, self.refine);
        let r = &mut c.rate;
        (r.n_grid, r.p_law, r.samples, r.seed) = (self.n_grid, self.p_law, self.samples, self.seed);
        c.verify.filter = self.filter;
        (c.output.out, c.output.format) = (self.out, self.format);
        c
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("RSL_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("RSL_THREADS: {v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Resource(e.to_string()))
}

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    init_threads()?;
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let mut flags = cli.flags.into_config();
    let mut inject = None;
    flags.experiment.command = match cli.command {
        Some(Cmd::Bound) => Some(Command::Bound),
        Some(Cmd::Verify { inject: i }) => {
            inject = i.map(|_| Injection::B3Sign);
            Some(Command::Verify)
        }
        Some(Cmd::Rate) => Some(Command::Rate),
        Some(Cmd::Selftest) => Some(Command::Selftest),
        None => None,
    };
    cfg.overlay(&flags);
    rsl_cli::execute(&cfg, inject)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
