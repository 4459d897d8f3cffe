//! Scenario runner behind the `torus-renorm` binary.
//!
//! A run turns an [`ExperimentConfig`] into CSV tables, pass/fail certificates
//! and a JSON manifest. Output depends only on the configuration, so repeated
//! runs produce byte-identical files named after the configuration hash.

mod config;

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::fourier_field::{mode_norm, FieldError, FourierVectorField, Side};
use crate::normalization_step::{eliminate_far, NormalizationError};
use crate::number_theory::{cf_expand, CfError, CfExpansion, Interval, Slope, Termination};
use crate::renorm_driver::{
    constant_block, renorm_orbit, stable_decay_probe, step_cone, transient_step, Orbit, Perturbation, RenormError,
};
use crate::scaling_step::{cone_containment_certificate, scale_step, ScaleError};

pub use config::{parse_config_text, ExperimentConfig, Scenario, KEYS};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Renorm(#[from] RenormError),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error(transparent)]
    Normalization(#[from] NormalizationError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn cert(name: &str, passed: bool, detail: String) -> Certificate {
    Certificate { name: name.into(), passed, detail }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub hash: String,
    pub tables: Vec<Table>,
    pub certificates: Vec<Certificate>,
    pub summary: serde_json::Value,
}

/// Shortest round-trip rendering, so equal values always print identically.
fn num(x: f64) -> String {
    format!("{x:e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl RunOutput {
    pub fn passed(&self) -> bool {
        self.certificates.iter().all(|c| c.passed)
    }

    fn stem(&self) -> String {
        format!("{}-{}", self.config.scenario, self.hash)
    }

    pub fn file_name(&self, table: &Table) -> String {
        if self.tables.len() == 1 {
            format!("{}.csv", self.stem())
        } else {
            format!("{}-{}.csv", self.stem(), table.name)
        }
    }

    /// CSV text with the resolved configuration as `#` comment lines.
    pub fn csv(&self, table: &Table) -> Result<String, ExperimentError> {
        let mut head = String::new();
        for (k, v) in self.config.resolved() {
            head.push_str(&format!("# {k}={v}\n"));
        }
        head.push_str(&format!("# hash={}\n", self.hash));
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| ExperimentError::Io { path: table.name.clone(), message: e.to_string() };
        w.write_record(&table.header).map_err(io)?;
        for r in &table.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| ExperimentError::Io { path: table.name.clone(), message: e.to_string() })?;
        Ok(head + &String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn manifest(&self) -> serde_json::Value {
        let config: serde_json::Map<String, serde_json::Value> =
            self.config.resolved().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        json!({
            "scenario": self.config.scenario.name(),
            "hash": self.hash,
            "config": config,
            "tables": self.tables.iter().map(|t| self.file_name(t)).collect::<Vec<_>>(),
            "certificates": self.certificates,
            "passed": self.passed(),
            "summary": self.summary,
        })
    }

    /// Writes every table and the manifest into `dir`; returns the paths written.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, ExperimentError> {
        let io = |p: &Path, e: std::io::Error| ExperimentError::Io { path: p.display().to_string(), message: e.to_string() };
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let mut written = Vec::new();
        for t in &self.tables {
            let path = dir.join(self.file_name(t));
            fs::write(&path, self.csv(t)?).map_err(|e| io(&path, e))?;
            written.push(path);
        }
        let path = dir.join(format!("{}.json", self.stem()));
        let text = serde_json::to_string_pretty(&self.manifest()).expect("manifest serialises") + "\n";
        fs::write(&path, text).map_err(|e| io(&path, e))?;
        written.push(path);
        Ok(written)
    }
}

pub fn run_scenario(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    let (tables, certificates, summary) = match config.scenario {
        Scenario::Cf => run_cf(config)?,
        Scenario::Project => run_project(config)?,
        Scenario::Scale => run_scale(config)?,
        Scenario::Eliminate => run_eliminate(config)?,
        Scenario::Orbit => run_orbit(config)?,
        Scenario::Spectrum => run_spectrum(config)?,
        Scenario::DecayProbe => run_decay_probe(config)?,
        Scenario::Sweep => run_sweep(config)?,
    };
    Ok(RunOutput { config: config.clone(), hash: config.hash(), tables, certificates, summary })
}

type Parts = (Vec<Table>, Vec<Certificate>, serde_json::Value);

fn slope_of(text: &str) -> Result<Slope, ExperimentError> {
    Ok(text.parse::<Slope>()?)
}

/// Slope after the transient adjustment, i.e. the `α₀ > 1` the orbit starts from.
fn adjusted_slope(text: &str) -> Result<Slope, ExperimentError> {
    let slope = slope_of(text)?;
    let probe = FourierVectorField::new(1.0, 1)?;
    Ok(transient_step(&probe, &slope)?.slope)
}

fn run_cf(c: &ExperimentConfig) -> Result<Parts, ExperimentError> {
    let cf = cf_expand(&slope_of(&c.slope)?, c.terms)?;
    let mut t = Table::new("cf", &["n", "a_n", "p_n", "q_n", "alpha_n", "beta_n", "atilde_n", "beta_sandwich", "beta_agreement"]);
    let tol = BigRational::new(BigInt::one(), BigInt::from(10).pow(30u32));
    let mut sandwich_ok = true;
    let mut agree_ok = true;
    for n in 0..cf.len() {
        let (p, q) = cf.convergent(n as i64)?;
        let beta = cf.beta(n as i64)?;
        let sandwich = if n + 1 < cf.len() {
            let (_, q1) = cf.convergent(n as i64 + 1)?;
            let upper = Interval::point(BigRational::new(BigInt::one(), q1.clone()));
            let lower = Interval::point(BigRational::new(BigInt::one(), q1 * 2));
            let ok = lower.lt(&beta) && beta.lt(&upper);
            sandwich_ok &= ok;
            ok.to_string()
        } else {
            String::new()
        };
        let agree = beta.max_abs_diff(&cf.beta_from_convergent(n)?) <= tol;
        agree_ok &= agree;
        t.push(vec![
            n.to_string(),
            cf.coefficient(n)?.to_string(),
            p.to_string(),
            q.to_string(),
            num(cf.tail(n)?.to_f64()),
            num(beta.to_f64()),
            num(cf.atilde(n as i64)?.to_f64()),
            sandwich,
            agree.to_string(),
        ]);
    }
    let complete = cf.termination() != Termination::PrecisionExhausted;
    let certs = vec![
        cert("certified-terms", complete, format!("{} of {} coefficients certified", cf.len(), c.terms)),
        cert("beta-sandwich", sandwich_ok, "1/(2q_{n+1}) < beta_n < 1/q_{n+1}".into()),
        cert("beta-agreement", agree_ok, "product and convergent forms agree to 1e-30".into()),
    ];
    let periodicity = cf.periodicity().map(|p| json!({"preperiod": p.preperiod, "period": p.period}));
    let summary = json!({
        "coefficients": cf.coefficients().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "periodicity": periodicity,
        "termination": format!("{:?}", cf.termination()),
    });
    Ok((vec![t], certs, summary))
}

fn initial_perturbation(c: &ExperimentConfig, alpha: f64, perturb: Perturbation, seed_offset: u64) -> Result<FourierVectorField, ExperimentError> {
    Ok(perturb.build(alpha, c.sigma, c.rho_prime, c.truncation, c.seed.unwrap_or(0).wrapping_add(seed_offset))?)
}

fn run_project(c: &ExperimentConfig) -> Result<Parts, ExperimentError> {
    let alpha = adjusted_slope(&c.slope)?.to_f64();
    let perturb = if c.perturb == Perturbation::None { Perturbation::Mixed(1e-3) } else { c.perturb };
    let f = initial_perturbation(c, alpha, perturb, 0)?;
    let cone = step_cone(alpha, c.sigma)?;
    let inside = f.project(&cone, Side::Inside);
    let outside = f.project(&cone, Side::Outside);
    let mut t = Table::new("modes", &["k1", "k2", "side", "weighted_l1"]);
    let mut modes: Vec<_> = f.iter().collect();
    modes.sort_by_key(|(k, _)| *k);
    for (k, coeff) in modes {
        let side = if cone.contains(k) { "inside" } else { "outside" };
        let w = (coeff[0].norm() + coeff[1].norm()) * (c.rho_prime * mode_norm(k) as f64).exp();
        t.push(vec![k[0].to_string(), k[1].to_string(), side.into(), num(w)]);
    }
    let total = f.norm_r(c.rho_prime);
    let split = inside.norm_r(c.rho_prime) + outside.norm_r(c.rho_prime);
    let ok = inside.len() + outside.len() == f.len() && (split - total).abs() <= 1e-12 * total.max(f64::MIN_POSITIVE);
    let certs = vec![cert("partition", ok, format!("inside + outside = {split:e}, total = {total:e}"))];
    let summary = json!({
        "alpha0": alpha,
        "inside_norm": inside.norm_r(c.rho_prime),
        "outside_norm": outside.norm_r(c.rho_prime),
        "modes": f.len(),
    });
    Ok((vec![t], certs, summary))
}

fn run_scale(c: &ExperimentConfig) -> Result<Parts, ExperimentError> {
    let slope = adjusted_slope(&c.slope)?;
    let cf = cf_expand(&slope, 2)?;
    let alpha = slope.to_f64();
    let a: u64 = cf.coefficient(0)?.try_into().map_err(|_| ExperimentError::ConfigInvalid("partial quotient too large".into()))?;
    let certificate = cone_containment_certificate([1.0, alpha], c.sigma, a, c.kappa, c.k_max);
    let widths = c.widths();
    let cone = step_cone(alpha, c.sigma)?;
    let mut t = Table::new("samples", &["sample", "input_norm", "output_norm", "gain", "bound", "margin"]);
    let mut worst: f64 = 0.0;
    let mut bound = 0.0;
    for i in 0..c.samples {
        let f = initial_perturbation(c, alpha, Perturbation::Mixed(1.0), i as u64)?.project(&cone, Side::Inside);
        let out = scale_step(&f, a, &widths)?;
        worst = worst.max(out.gain());
        bound = out.bound;
        t.push(vec![i.to_string(), num(out.input_norm), num(out.output_norm), num(out.gain()), num(out.bound), num(out.margin())]);
    }
    let certs = vec![
        cert(
            "cone-containment",
            certificate.passed,
            format!("{} resonant modes with |k| <= {}, worst ratio {:e}, witness {:?}", certificate.checked, c.k_max, certificate.worst_ratio, certificate.witness),
        ),
        cert("norm-bound", worst <= bound, format!("largest gain {worst:e} against bound {bound:e}")),
    ];
    let summary = json!({
        "alpha0": alpha,
        "a0": a,
        "kappa": c.kappa,
        "slopes": certificate.slopes,
        "nested": certificate.slopes.nested(),
        "worst_gain": worst,
        "bound": bound,
    });
    Ok((vec![t], certs, summary))
}

fn run_eliminate(c: &ExperimentConfig) -> Result<Parts, ExperimentError> {
    let alpha = adjusted_slope(&c.slope)?.to_f64();
    let psi = [1.0 / alpha, 1.0];
    let g = initial_perturbation(c, alpha, c.perturb, 0)?.with_width(c.rho)?;
    let mut x = g.scale(Complex64::new(1.0 / alpha, 0.0));
    let avg = x.average();
    x.set([0, 0], [avg[0] + psi[0], avg[1] + psi[1]])?;
    let opts = c.renorm_params().elimination;
    let out = eliminate_far(&x, psi, c.sigma / alpha, &opts)?;
    let r = &out.report;
    let mut t = Table::new("newton", &["sweep", "far_residual", "gmres_iterations"]);
    for (i, res) in r.residuals.iter().enumerate() {
        let iters = if i == 0 { String::new() } else { r.gmres_iterations.get(i - 1).map(|v| v.to_string()).unwrap_or_default() };
        t.push(vec![i.to_string(), num(*res), iters]);
    }
    let certs = vec![cert(
        "far-residual",
        r.final_residual() <= c.tol,
        format!("{:e} after {} sweeps", r.final_residual(), r.sweeps),
    )];
    let summary = json!({
        "alpha0": alpha,
        "order": r.convergence_order(1e-14),
        "report": r,
        "displacement_norm": out.map.displacement().norm_r(c.rho_prime),
    });
    Ok((vec![t], certs, summary))
}

/// Orbit of the configured perturbation, placed after the transient, for `slope_text`.
/// Also returns the adjusted starting slope `α₀`.
pub fn orbit_for(c: &ExperimentConfig, slope_text: &str) -> Result<(Orbit, f64), ExperimentError> {
    let slope = adjusted_slope(slope_text)?;
    let alpha = slope.to_f64();
    let x0 = c.perturb.initial_field(alpha, c.sigma, c.rho_prime, c.truncation, c.seed.unwrap_or(0))?;
    Ok((renorm_orbit(&x0, &slope, c.steps, &c.renorm_params())?, alpha))
}

/// Per-step factors of the `Ω` coefficient.
fn growth_factors(orbit: &Orbit) -> Vec<f64> {
    orbit
        .states
        .windows(2)
        .map(|w| w[1].norms.orthogonal_coefficient / w[0].norms.orthogonal_coefficient)
        .collect()
}

fn orbit_certificate(c: &ExperimentConfig, orbit: &Orbit) -> Certificate {
    match c.perturb {
        Perturbation::None => {
            let worst = orbit.states.iter().map(|s| s.norms.total.abs()).fold(0.0, f64::max);
            cert("fixed-orbit", orbit.failure.is_none() && worst <= 1e-12, format!("largest deviation {worst:e}"))
        }
        Perturbation::Resonant(_) => {
            let d = &orbit.decay;
            let ok = orbit.failure.is_none() && d.consistent;
            let detail = format!(
                "theta_hat {}, monotone from step 2: {}, failure: {}",
                opt(d.theta_hat),
                d.monotone_from_two,
                orbit.failure.as_ref().map_or("none".to_string(), |e| e.to_string())
            );
            cert("decay", ok, detail)
        }
        Perturbation::Unstable(_) => {
            let factors = growth_factors(orbit);
            let expected: Vec<f64> = orbit.states.iter().take(factors.len()).map(|s| constant_block(s.alpha).nu).collect();
            let checked = factors.len().min(4);
            let ok = checked == 4 && factors.iter().zip(&expected).take(4).all(|(f, nu)| (f.abs() / nu.abs() - 1.0).abs() <= 0.1);
            cert("unstable-growth", ok, format!("factors {:?} against nu {:?}", &factors[..checked], &expected[..checked]))
        }
        Perturbation::Mixed(_) => cert("completed", true, "mixed perturbations are reported without a certificate".into()),
    }
}

fn run_orbit(c: &ExperimentConfig) -> Result<Parts, ExperimentError> {
    let (orbit, alpha) = orbit_for(c, &c.slope)?;
    let mut t = Table::new(
        "orbit",
        &[
            "n",
            "a_n",
            "alpha_n",
            "norm_total",
            "norm_osc",
            "norm_const_omega",
            "norm_const_Omega",
            "far_residual",
            "newton_sweeps",
            "theta_hat_running",
        ],
    );
    for s in &orbit.states {
        let elim = match &s.step {
            Some(d) => Some(&d.elimination),
            None => orbit.initial_elimination.as_ref(),
        };
        t.push(vec![
            s.n.to_string(),
            orbit.cf.coefficient(s.n).map(|a| a.to_string()).unwrap_or_default(),
            num(s.alpha),
            num(s.norms.total),
            num(s.norms.oscillatory),
            num(s.norms.const_omega),
            num(s.norms.const_orthogonal),
            num(elim.map_or(0.0, |e| e.final_residual())),
            elim.map_or(0, |e| e.sweeps).to_string(),
            opt(orbit.running_theta(s.n)),
        ]);
    }
    let certs = vec![orbit_certificate(c, &orbit)];
    let summary = json!({
        "alpha0": alpha,
        "decay": orbit.decay,
        "failure": orbit.failure.as_ref().map(|e| e.to_string()),
        "steps_completed": orbit.states.len() - 1,
        "growth_factors": growth_factors(&orbit),
        "retracted": orbit.states.iter().filter_map(|s| s.step.as_ref().map(|d| d.retracted)).collect::<Vec<_>>(),
    });
    Ok((vec![t], certs, summary))
}

fn run_spectrum(c: &ExperimentConfig) -> Result<Parts, ExperimentError> {
    let cf: CfExpansion = cf_expand(&adjusted_slope(&c.slope)?, c.steps + 2)?;
    let mut t = Table::new("spectrum", &["n", "a_n", "alpha_n", "nu", "det", "g11", "g12", "g21", "g22", "unstable_1", "unstable_2"]);
    let mut ok = true;
    for n in 0..cf.len().saturating_sub(1).min(c.steps + 1) {
        let alpha = cf.tail(n)?.to_f64();
        let b = constant_block(alpha);
        let m = b.matrix;
        let scale = 1.0 + m.iter().flatten().map(|v| v * v).sum::<f64>();
        ok &= b.det().abs() <= 1e-12 * scale && b.nu.abs() > 1.0;
        t.push(vec![
            n.to_string(),
            cf.coefficient(n)?.to_string(),
            num(alpha),
            num(b.nu),
            num(b.det()),
            num(m[0][0]),
            num(m[0][1]),
            num(m[1][0]),
            num(m[1][1]),
            num(b.unstable[0]),
            num(b.unstable[1]),
        ]);
    }
    let certs = vec![cert("constant-block", ok, "det G_n = 0 and |nu_n| > 1 on every row".into())];
    let summary = json!({"rows": t.rows.len()});
    Ok((vec![t], certs, summary))
}

fn run_decay_probe(c: &ExperimentConfig) -> Result<Parts, ExperimentError> {
    let cf = cf_expand(&adjusted_slope(&c.slope)?, c.steps + 3)?;
    let probe = stable_decay_probe(&cf, &c.renorm_params(), c.probe_truncation, c.steps)?;
    let mut t = Table::new("decay", &["j", "factors", "log_norm", "log_ratio", "lambda", "extremal_k1", "extremal_k2", "surviving_modes"]);
    for r in &probe.rows {
        t.push(vec![
            r.j.to_string(),
            r.factors.to_string(),
            opt(r.log_norm),
            opt(r.log_ratio),
            num(r.lambda),
            r.extremal_mode.map(|k| k[0].to_string()).unwrap_or_default(),
            r.extremal_mode.map(|k| k[1].to_string()).unwrap_or_default(),
            r.surviving_modes.to_string(),
        ]);
    }
    let certs = vec![cert("super-geometric", probe.super_geometric, "-log ratios strictly increase with chain length".into())];
    Ok((vec![t], certs, json!({"n": probe.n, "truncation": probe.truncation})))
}

fn run_sweep(c: &ExperimentConfig) -> Result<Parts, ExperimentError> {
    let results: Vec<Result<(Orbit, f64), ExperimentError>> = std::thread::scope(|s| {
        let handles: Vec<_> = c.sweep_slopes.iter().map(|slope| s.spawn(move || orbit_for(c, slope))).collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut t = Table::new("sweep", &["slope", "alpha0", "steps_completed", "final_norm", "theta_hat", "monotone_from_two", "failure", "passed"]);
    let mut certs = Vec::new();
    for (slope, res) in c.sweep_slopes.iter().zip(results) {
        let (orbit, alpha) = res?;
        let certificate = orbit_certificate(c, &orbit);
        t.push(vec![
            slope.clone(),
            num(alpha),
            (orbit.states.len() - 1).to_string(),
            num(orbit.states.last().map_or(0.0, |s| s.norms.total)),
            opt(orbit.decay.theta_hat),
            orbit.decay.monotone_from_two.to_string(),
            orbit.failure.as_ref().map(|e| e.to_string()).unwrap_or_default(),
            certificate.passed.to_string(),
        ]);
        certs.push(Certificate { name: format!("{}:{slope}", certificate.name), ..certificate });
    }
    Ok((vec![t], certs, json!({"runs": c.sweep_slopes.len()})))
}
