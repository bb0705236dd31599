//! `verify`: exhaustive checks of operator identities, closed forms, bound
//! validity, Stein-solution properties and sampling, on the desk corpus and
//! on seeded random functionals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rsl_core::chaos::{apply_l, apply_l_inv, from_chaos, multiple_integral, to_chaos};
use rsl_core::distance::{kolmogorov_exact, wasserstein_exact};
use rsl_core::empirics::{empirical_kolmogorov, ks_statistic, mc_sd, sample_statistic};
use rsl_core::models::{
    desk_corpus, ComplexConfig, DegreeCountConfig, HypercubeConfig, ModelInstance, SubgraphPattern, TwoRunsConfig,
};
use rsl_core::normal::{normal_cdf, normal_quantile};
use rsl_core::operators::field_inner;
use rsl_core::stein::*;
use rsl_core::{divergence, gamma0, gradient_vector, malliavin_inner, BiasedSpace, Functional, Kernel};

use crate::config::{ExperimentConfig, Format};
use crate::model::describe;
use crate::output::{write_csv, write_json};
use crate::{CliError, Provenance};

pub const GROUPS: [&str; 5] = ["core", "models", "stein", "bounds", "empirics"];

/// Deliberate defects for mutation smoke tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Injection {
    /// Flips the sign of the `B_3` contribution to `kol_r2`.
    B3Sign,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub group: &'static str,
    pub cases: usize,
    pub worst_margin: f64,
    pub status: &'static str,
    pub provenance: Provenance,
}

/// Running record of one inequality `lhs <= rhs` over many cases.
struct Check {
    name: String,
    group: &'static str,
    provenance: Provenance,
    cases: usize,
    worst: f64,
    failures: Vec<String>,
}

impl Check {
    fn new(group: &'static str, name: &str) -> Self {
        Self {
            name: name.into(),
            group,
            provenance: Provenance::Exact,
            cases: 0,
            worst: f64::INFINITY,
            failures: Vec::new(),
        }
    }

    fn le(&mut self, case: &str, lhs: f64, rhs: f64) {
        self.cases += 1;
        let margin = rhs - lhs;
        if margin.is_nan() || margin < 0.0 {
            self.failures
                .push(format!("{case}: {lhs:.6e} <= {rhs:.6e} violated by {:.3e}", -margin));
            self.worst = f64::NEG_INFINITY.max(if margin.is_nan() { f64::NEG_INFINITY } else { margin.min(self.worst) });
        } else {
            self.worst = self.worst.min(margin);
        }
    }

    /// `|a - b| <= tol * max(1, |a|, |b|)`.
    fn close(&mut self, case: &str, a: f64, b: f64, tol: f64) {
        self.le(case, (a - b).abs(), tol * 1f64.max(a.abs()).max(b.abs()));
    }
}

pub struct VerifyReport {
    checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures.is_empty())
    }

    pub fn rows(&self) -> Vec<CheckRow> {
        self.checks
            .iter()
            .map(|c| CheckRow {
                check: c.name.clone(),
                group: c.group,
                cases: c.cases,
                worst_margin: if c.worst.is_finite() { c.worst } else { 0.0 },
                status: if c.failures.is_empty() { "pass" } else { "fail" },
                provenance: c.provenance,
            })
            .collect()
    }

    /// Human-readable lines, failures first with up to three cases each.
    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in self.checks.iter().filter(|c| !c.failures.is_empty()) {
            out.push(format!("FAIL {} ({} of {} cases)", c.name, c.failures.len(), c.cases));
            for f in c.failures.iter().take(3) {
                out.push(format!("     {f}"));
            }
        }
        for c in self.checks.iter().filter(|c| c.failures.is_empty()) {
            out.push(format!("ok   {} ({} cases, worst margin {:.3e})", c.name, c.cases, c.worst));
        }
        out
    }
}

impl VerifyReport {
    /// Per-check lines go to standard output; the table goes to `--out`
    /// when one is given.
    pub fn emit(&self, cfg: &ExperimentConfig) -> Result<(), CliError> {
        for l in self.lines() {
            println!("{l}");
        }
        let Some(out) = cfg.output.out.as_deref() else {
            return Ok(());
        };
        match cfg.output.format.unwrap_or_default() {
            Format::Csv => write_csv(&self.rows(), Some(out)),
            Format::Json => write_json(
                &serde_json::json!({
                    "experiment": "verify",
                    "version": env!("CARGO_PKG_VERSION"),
                    "inputs": cfg,
                    "records": self.rows(),
                    "passed": self.passed(),
                }),
                Some(out),
            ),
        }
    }
}

/// Parses a comma-separated group list.
pub fn parse_filter(s: &str) -> Result<Vec<String>, CliError> {
    let groups: Vec<String> = s.split(',').map(|g| g.trim().to_string()).filter(|g| !g.is_empty()).collect();
    for g in &groups {
        if !GROUPS.contains(&g.as_str()) {
            return Err(CliError::Config(format!(
                "filter: unknown group {g:?}; expected some of {}",
                GROUPS.join(",")
            )));
        }
    }
    Ok(groups)
}

/// Sizes of the randomized parts of the suite.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Random functionals per operator identity.
    pub identity_cases: usize,
    /// Largest coordinate count of those functionals.
    pub identity_max_m: usize,
    /// Random functionals and random pure chaoses in the bound checks.
    pub bound_cases: usize,
    /// Samples per model in the Monte Carlo cross-check.
    pub mc_samples: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            identity_cases: 60,
            identity_max_m: 8,
            bound_cases: 30,
            mc_samples: 200_000,
        }
    }
}

/// Runs the selected groups (all when `filter` is empty).
pub fn run(filter: &[String], inject: Option<Injection>) -> VerifyReport {
    run_with(filter, inject, &Budget::default())
}

pub fn run_with(filter: &[String], inject: Option<Injection>, budget: &Budget) -> VerifyReport {
    let want = |g: &str| filter.is_empty() || filter.iter().any(|f| f == g);
    let mut checks = Vec::new();
    if want("core") {
        checks.extend(core_checks(budget));
    }
    if want("models") {
        checks.extend(model_checks());
    }
    if want("stein") {
        checks.extend(stein_checks());
    }
    if want("bounds") {
        checks.extend(bound_checks(inject, budget));
    }
    if want("empirics") {
        checks.extend(empirics_checks(budget));
    }
    VerifyReport { checks }
}

pub fn random_functional(rng: &mut ChaCha8Rng, max_m: usize) -> Functional {
    let m = rng.random_range(1..=max_m);
    let probs: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..0.95)).collect();
    let values: Vec<f64> = (0..1 << m).map(|_| rng.random_range(-3.0..3.0)).collect();
    Functional::new(BiasedSpace::new(probs).unwrap(), values).unwrap()
}

fn random_on(rng: &mut ChaCha8Rng, f: &Functional) -> Functional {
    let values = (0..f.space().num_states()).map(|_| rng.random_range(-3.0..3.0)).collect();
    Functional::new(f.space().clone(), values).unwrap()
}

fn core_checks(budget: &Budget) -> Vec<Check> {
    const TOL: f64 = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c0e);
    let mut duality = Check::new("core", "duality");
    let mut isometry = Check::new("core", "isometry");
    let mut product = Check::new("core", "product formula");
    let mut centering = Check::new("core", "L L^-1 centering");
    let mut contraction = Check::new("core", "gradient of L^-1 contraction");
    let mut sup = Check::new("core", "gradient sup-norm");
    let mut poincare = Check::new("core", "Poincare inequality");
    let mut inner = Check::new("core", "E inner = Var");
    let mut gam = Check::new("core", "E Gamma0 = Var");
    for i in 0..budget.identity_cases {
        let case = format!("random functional #{i}");
        let f = random_functional(&mut rng, budget.identity_max_m);
        let g = random_on(&mut rng, &f);
        let m = f.m();

        let u: Vec<Functional> = (0..m).map(|_| random_on(&mut rng, &f)).collect();
        let lhs = field_inner(&gradient_vector(&f), &u).unwrap().mean();
        let rhs = f.mul(&divergence(&u).unwrap()).unwrap().mean();
        duality.close(&case, lhs, rhs, TOL);

        let k = rng.random_range(0..m);
        let s = f.space();
        let (df, dg) = (f.gradient(k).unwrap(), g.gradient(k).unwrap());
        let x = Functional::x_coordinate(s.clone(), k).unwrap();
        let want = g
            .mul(&df)
            .unwrap()
            .add(&f.mul(&dg).unwrap())
            .unwrap()
            .sub(&x.mul(&df).unwrap().mul(&dg).unwrap().scale(1.0 / s.pq(k).sqrt()))
            .unwrap();
        let got = f.mul(&g).unwrap().gradient(k).unwrap();
        product.le(&case, got.max_abs_diff(&want), 1e-12 * (4.0 * f.max_abs() * g.max_abs()).max(1.0));

        let back = apply_l(&apply_l_inv(&f));
        centering.le(&case, back.max_abs_diff(&f.shift(-f.mean())), TOL * f.max_abs().max(1.0));

        let l = apply_l_inv(&f);
        for k in 0..m {
            let (a, b) = (l.gradient(k).unwrap(), f.gradient(k).unwrap());
            for q in [2.0, 4.0] {
                let r = b.lq_norm(q);
                contraction.le(&case, a.lq_norm(q), r + TOL * r.max(1.0));
            }
            sup.le(&case, b.max_abs(), f.max_abs() * (1.0 + 1e-15));
        }

        let energy: f64 = gradient_vector(&f).iter().map(|d| d.expectation(2)).sum();
        poincare.le(&case, f.variance(), energy + TOL * energy.max(1.0));
        let low = from_chaos(&to_chaos(&f).scale_levels(|n| if n <= 1 { 1.0 } else { 0.0 }));
        let low_energy: f64 = gradient_vector(&low).iter().map(|d| d.expectation(2)).sum();
        poincare.close(&format!("{case}, levels <= 1"), low.variance(), low_energy, TOL);
        // energy - Var = sum_n (n - 1) |level n|^2 >= mass above level 1
        let high = f.variance() - low.variance();
        poincare.le(&format!("{case}, strict part"), f.variance() + high, energy + TOL * energy.max(1.0));

        inner.close(&case, malliavin_inner(&f).mean(), f.variance(), TOL);
        let gg = gamma0(&f, &l.scale(-1.0)).unwrap();
        gam.close(&case, gg.mean(), f.variance(), TOL);

        let (p, q) = (rng.random_range(1..=m.min(3)), rng.random_range(1..=m.min(3)));
        let kp = random_kernel(&mut rng, m, p);
        let kq = random_kernel(&mut rng, m, q);
        let jp = multiple_integral(s.clone(), p, &kp).unwrap();
        let jq = multiple_integral(s.clone(), q, &kq).unwrap();
        let fact: f64 = (1..=p).map(|i| i as f64).product();
        let dot: f64 = kp.data().iter().zip(kq.data()).map(|(a, b)| a * b).sum();
        let want = if p == q { fact * dot } else { 0.0 };
        isometry.close(&case, jp.mul(&jq).unwrap().mean(), want, TOL);
    }
    vec![duality, isometry, product, centering, contraction, sup, poincare, inner, gam]
}

fn random_kernel(rng: &mut ChaCha8Rng, dim: usize, order: usize) -> Kernel {
    let data = (0..dim.pow(order as u32)).map(|_| rng.random_range(-1.0..1.0)).collect();
    Kernel::from_data(dim, order, data).unwrap().canonical()
}

/// Every small instance whose moments have a closed form, plus random
/// two-runs weights of each length up to 15.
pub fn moment_corpus() -> Vec<ModelInstance> {
    let mut out = Vec::new();
    for n in 2..=6 {
        for d in 0..n {
            for p in [0.2, 0.5, 0.7] {
                out.push(ModelInstance::Degree(DegreeCountConfig { n, p, d }));
            }
        }
    }
    for n in 3..=5 {
        for pattern in [SubgraphPattern::edge(), SubgraphPattern::path(2), SubgraphPattern::triangle()] {
            for p in [0.3, 0.6] {
                out.push(ModelInstance::Subgraph { n, p, pattern: pattern.clone() });
            }
        }
    }
    for n in 3..=5 {
        for p in [0.25, 0.5, 0.8] {
            out.push(ModelInstance::Complex(ComplexConfig { n, kappa: 2, p }));
        }
    }
    for n in 1..=3 {
        for d in 0..=n {
            for p in [0.4, 0.5] {
                out.push(ModelInstance::Hypercube(HypercubeConfig { n, p, d }));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x2a);
    for len in 1..=15 {
        let alpha = (0..len).map(|_| rng.random_range(-2.0..2.0)).collect();
        out.push(ModelInstance::TwoRuns(TwoRunsConfig::new(alpha)));
    }
    out
}

fn model_checks() -> Vec<Check> {
    let mut moments = Check::new("models", "closed-form moments");
    let mut standardized = Check::new("models", "standardized statistics");
    for model in &moment_corpus() {
        let case = describe(model);
        let raw = model.raw_functional().unwrap();
        let (mean, var) = model.moments().unwrap();
        moments.le(&case, (raw.mean() - mean).abs(), 1e-9 * mean.abs());
        moments.le(&case, (raw.variance() - var).abs(), 1e-9 * var.abs());
        let f = model.functional().unwrap();
        standardized.le(&case, f.mean().abs(), 1e-10);
        standardized.le(&case, (f.variance() - 1.0).abs(), 1e-10);
    }
    vec![moments, standardized]
}

fn stein_checks() -> Vec<Check> {
    let bound = (2.0 * std::f64::consts::PI).sqrt() / 4.0;
    let mut sup = Check::new("stein", "stein solution sup bound");
    let mut xf = Check::new("stein", "stein |x f_z(x)| <= 1");
    let mut mono = Check::new("stein", "stein x f_z(x) monotone");
    let mut residual = Check::new("stein", "stein equation residual");
    for iz in -64..=64 {
        let z = iz as f64 / 16.0;
        let case = format!("z={z}");
        let mut prev = f64::NEG_INFINITY;
        for ix in -512..=512 {
            let x = ix as f64 / 64.0;
            let f = stein_solution(z, x);
            sup.le(&case, f.abs(), bound + 1e-12);
            xf.le(&case, (x * f).abs(), 1.0 + 1e-12);
            mono.le(&case, prev - x * f, 1e-12);
            prev = x * f;
            if (x - z).abs() > 1e-3 {
                let h = 1e-5;
                let fd = (stein_solution(z, x + h) - stein_solution(z, x - h)) / (2.0 * h);
                let ind = if x <= z { 1.0 } else { 0.0 };
                residual.le(&case, (fd - x * f - (ind - normal_cdf(z))).abs(), 1e-6);
            }
        }
    }
    vec![sup, xf, mono, residual]
}

/// `kol_r2` with the `B_3` term's sign under the caller's control.
fn kol_r2_signed(f: &Functional, sign: f64) -> f64 {
    inner_first_term(f) + sign * 4.0 * f.space().kappa().sqrt() * b3(f).sqrt()
}

fn bound_checks(inject: Option<Injection>, budget: &Budget) -> Vec<Check> {
    const SLACK: f64 = 1e-9;
    let mut r0 = Check::new("bounds", "kol_r0 validity");
    r0.provenance = Provenance::GridApproximate;
    let mut r1 = Check::new("bounds", "kol_r1 validity");
    let mut r2 = Check::new("bounds", "kol_r2 validity");
    let mut s1 = Check::new("bounds", "2nd_R1 validity");
    let mut s2 = Check::new("bounds", "2nd_R2 validity");
    let mut w1 = Check::new("bounds", "2nd_W1 validity");
    let mut fourth = Check::new("bounds", "fourth-moment validity");
    let mut head = Check::new("bounds", "inner term <= B1/B2 terms");
    let mut tail = Check::new("bounds", "divergence term <= B3/B4/B5 terms");
    let sign = if inject == Some(Injection::B3Sign) { -1.0 } else { 1.0 };

    let mut cases: Vec<(String, Functional)> = desk_corpus()
        .iter()
        .map(|m| (describe(m), m.functional().unwrap()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0);
    for i in 0..budget.bound_cases {
        let f = random_functional(&mut rng, 6);
        if f.variance() > 1e-6 {
            cases.push((format!("random functional #{i}"), f.standardize().unwrap()));
        }
    }
    for (case, f) in &cases {
        let dk = kolmogorov_exact(f);
        let t = bound_terms(f);
        r0.le(case, dk, kol_r0(f, DEFAULT_REFINE).unwrap().value + SLACK);
        r1.le(case, dk, kol_r1(f).unwrap() + SLACK);
        r2.le(case, dk, kol_r2_signed(f, sign) + SLACK);
        s1.le(case, dk, second_order_kolmogorov(&t, Variant::R1) + SLACK);
        s2.le(case, dk, second_order_kolmogorov(&t, Variant::R2) + SLACK);
        w1.le(case, wasserstein_exact(f), second_order_wasserstein(&t) + SLACK);
        let h = 15f64.sqrt() / 2.0 * t.b1.sqrt() + 3f64.sqrt() / 2.0 * t.b2.sqrt();
        head.le(case, inner_first_term(f), h + SLACK);
        let tl = 4.0 * t.b3.sqrt() + 4.0 * 6f64.sqrt() * t.b4.sqrt() + 4.0 * 3f64.sqrt() * t.b5.sqrt();
        tail.le(case, 2.0 * kol_r1_divergence_norm(f), tl + SLACK);
    }
    for i in 0..budget.bound_cases {
        let f = random_functional(&mut rng, 8);
        let level = rng.random_range(1..=f.m().min(3));
        let g = from_chaos(&to_chaos(&f).scale_levels(|n| if n == level { 1.0 } else { 0.0 }));
        if g.variance() > 1e-6 {
            let g = g.standardize().unwrap();
            let rep = fourth_moment_bound_auto(&g, level).unwrap();
            fourth.le(&format!("random level-{level} chaos #{i}"), kolmogorov_exact(&g), rep.bound + SLACK);
        }
    }
    vec![r0, r1, r2, s1, s2, w1, fourth, head, tail]
}

fn empirics_checks(budget: &Budget) -> Vec<Check> {
    let mut ks = Check::new("empirics", "KS statistic examples");
    ks.close("single sample at 0", ks_statistic(&[0.0]).unwrap(), 0.5, 1e-15);
    let n = 1000;
    let q: Vec<f64> = (1..=n).map(|i| normal_quantile((i as f64 - 0.5) / n as f64)).collect();
    ks.close("quantile batch", ks_statistic(&q).unwrap(), 0.5 / n as f64, 1e-10);

    let mut det = Check::new("empirics", "sampling determinism");
    let mut cross = Check::new("empirics", "Monte Carlo vs exact d_K");
    cross.provenance = Provenance::MonteCarlo;
    for model in desk_corpus().into_iter().step_by(9) {
        let case = describe(&model);
        let samples = budget.mc_samples;
        let a = sample_statistic(&model, samples, 17).unwrap();
        let b = sample_statistic(&model, samples, 17).unwrap();
        det.le(&case, if a == b { 0.0 } else { 1.0 }, 0.0);
        let emp = empirical_kolmogorov(&a).unwrap();
        let exact = kolmogorov_exact(&model.functional().unwrap());
        cross.le(&case, (emp - exact).abs(), 5.0 * mc_sd(samples));
    }
    vec![ks, det, cross]
}
