//! Flat `key=value` experiment configuration with a canonical rendering.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ExperimentError;
use crate::renorm_driver::{Perturbation, RenormParams};
use crate::scaling_step::{default_kappa, StepWidths};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Cf,
    Project,
    Scale,
    Eliminate,
    Orbit,
    Spectrum,
    DecayProbe,
    Sweep,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Cf,
        Scenario::Project,
        Scenario::Scale,
        Scenario::Eliminate,
        Scenario::Orbit,
        Scenario::Spectrum,
        Scenario::DecayProbe,
        Scenario::Sweep,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Cf => "cf",
            Scenario::Project => "project",
            Scenario::Scale => "scale",
            Scenario::Eliminate => "eliminate",
            Scenario::Orbit => "orbit",
            Scenario::Spectrum => "spectrum",
            Scenario::DecayProbe => "decay-probe",
            Scenario::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim().replace('_', "-");
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| format!("unknown scenario {s:?}; expected one of cf, project, scale, eliminate, orbit, spectrum, decay-probe, sweep"))
    }
}

/// Fully resolved experiment settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    /// Slope of `ω₀ = (1, α₀)` in any form accepted by [`crate::number_theory::Slope`].
    pub slope: String,
    pub sigma: f64,
    pub rho: f64,
    pub rho_prime: f64,
    pub kappa: f64,
    pub truncation: u32,
    pub steps: usize,
    /// Coefficients requested by the `cf` scenario.
    pub terms: usize,
    pub perturb: Perturbation,
    pub seed: Option<u64>,
    pub zeta_scale: f64,
    /// Far-residual tolerance of the elimination.
    pub tol: f64,
    pub cone_retraction: bool,
    /// Mode radius of the stable-decay probe.
    pub probe_truncation: i64,
    /// Mode radius of the containment certificate.
    pub k_max: i64,
    /// Random fields drawn by the `scale` scenario.
    pub samples: usize,
    pub sweep_slopes: Vec<String>,
}

/// Keys in canonical order.
pub const KEYS: [&str; 18] = [
    "scenario",
    "slope",
    "sigma",
    "rho",
    "rho-prime",
    "kappa",
    "truncation",
    "steps",
    "terms",
    "perturb",
    "seed",
    "zeta-scale",
    "tol",
    "cone-retraction",
    "probe-truncation",
    "k-max",
    "samples",
    "sweep-slopes",
];

fn invalid(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::ConfigInvalid(msg.into())
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ExperimentError>
where
    T::Err: fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| invalid(format!("{key}: cannot parse {value:?}: {e}")))
}

/// Parses `key = value` lines; `#` starts a comment and blank lines are ignored.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, ExperimentError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| invalid(format!("line {}: expected key=value, got {line:?}", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl ExperimentConfig {
    /// Builds a configuration from `(key, value)` pairs; later pairs override earlier ones.
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(pairs: impl IntoIterator<Item = (K, V)>) -> Result<Self, ExperimentError> {
        let mut values: Vec<Option<String>> = vec![None; KEYS.len()];
        for (k, v) in pairs {
            let key = k.as_ref().trim().replace('_', "-");
            let idx = KEYS.iter().position(|x| *x == key).ok_or_else(|| invalid(format!("unknown key {key:?}")))?;
            values[idx] = Some(v.as_ref().trim().to_string());
        }
        let get = |key: &str| values[KEYS.iter().position(|x| *x == key).unwrap()].as_deref();

        let scenario: Scenario = match get("scenario") {
            Some(v) => v.parse().map_err(invalid)?,
            None => return Err(invalid("scenario is required")),
        };
        let sigma = get("sigma").map(|v| parse("sigma", v)).transpose()?.unwrap_or(0.1);
        let perturb: Perturbation = match get("perturb") {
            Some(v) => v.parse().map_err(|e: String| invalid(format!("perturb: {e}")))?,
            None => Perturbation::None,
        };
        let config = ExperimentConfig {
            scenario,
            slope: get("slope").unwrap_or("golden").to_string(),
            sigma,
            rho: get("rho").map(|v| parse("rho", v)).transpose()?.unwrap_or(1.0),
            rho_prime: get("rho-prime").map(|v| parse("rho-prime", v)).transpose()?.unwrap_or(0.9),
            kappa: get("kappa").map(|v| parse("kappa", v)).transpose()?.unwrap_or_else(|| default_kappa(sigma)),
            truncation: get("truncation").map(|v| parse("truncation", v)).transpose()?.unwrap_or(32),
            steps: get("steps").map(|v| parse("steps", v)).transpose()?.unwrap_or(8),
            terms: get("terms").map(|v| parse("terms", v)).transpose()?.unwrap_or(30),
            perturb,
            seed: get("seed").map(|v| parse("seed", v)).transpose()?,
            zeta_scale: get("zeta-scale").map(|v| parse("zeta-scale", v)).transpose()?.unwrap_or(1e-2),
            tol: get("tol").map(|v| parse("tol", v)).transpose()?.unwrap_or(1e-12),
            cone_retraction: get("cone-retraction")
                .map(|v| parse("cone-retraction", v))
                .transpose()?
                .unwrap_or(matches!(perturb, Perturbation::Resonant(_))),
            probe_truncation: get("probe-truncation").map(|v| parse("probe-truncation", v)).transpose()?.unwrap_or(160),
            k_max: get("k-max").map(|v| parse("k-max", v)).transpose()?.unwrap_or(50),
            samples: get("samples").map(|v| parse("samples", v)).transpose()?.unwrap_or(100),
            sweep_slopes: get("sweep-slopes")
                .unwrap_or("golden;silver;sqrt2")
                .split(';')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect(),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        self.widths().validate().map_err(|e| invalid(e.to_string()))?;
        self.renorm_params().validate().map_err(|e| invalid(e.to_string()))?;
        if self.truncation == 0 || self.terms == 0 || self.samples == 0 || self.probe_truncation < 1 || self.k_max < 1 {
            return Err(invalid("truncation, terms, samples, probe-truncation and k-max must be positive"));
        }
        if self.steps == 0 && matches!(self.scenario, Scenario::Orbit | Scenario::Sweep) {
            return Err(invalid("steps must be positive"));
        }
        if self.sweep_slopes.is_empty() {
            return Err(invalid("sweep-slopes is empty"));
        }
        let random = matches!(self.perturb, Perturbation::Resonant(_) | Perturbation::Mixed(_))
            || matches!(self.scenario, Scenario::Scale | Scenario::Project | Scenario::Eliminate);
        if random && self.seed.is_none() {
            return Err(invalid(format!("scenario {} with perturbation {} needs a seed", self.scenario, self.perturb)));
        }
        if self.scenario == Scenario::Eliminate && self.perturb == Perturbation::None {
            return Err(invalid("eliminate needs a perturbation"));
        }
        Ok(())
    }

    pub fn widths(&self) -> StepWidths {
        StepWidths { rho: self.rho, rho_prime: self.rho_prime, kappa: self.kappa }
    }

    pub fn renorm_params(&self) -> RenormParams {
        let mut p = RenormParams {
            sigma: self.sigma,
            widths: self.widths(),
            truncation: self.truncation,
            zeta_scale: self.zeta_scale,
            cone_retraction: self.cone_retraction,
            ..RenormParams::default()
        };
        p.elimination.tol = self.tol;
        p.elimination.output_width = self.rho_prime;
        p
    }

    /// `(key, value)` in canonical order; parsing these pairs gives back the same configuration.
    pub fn resolved(&self) -> Vec<(&'static str, String)> {
        let values = [
            self.scenario.to_string(),
            self.slope.clone(),
            format!("{:e}", self.sigma),
            format!("{:e}", self.rho),
            format!("{:e}", self.rho_prime),
            format!("{:e}", self.kappa),
            self.truncation.to_string(),
            self.steps.to_string(),
            self.terms.to_string(),
            self.perturb.to_string(),
            self.seed.map_or_else(|| "none".to_string(), |s| s.to_string()),
            format!("{:e}", self.zeta_scale),
            format!("{:e}", self.tol),
            self.cone_retraction.to_string(),
            self.probe_truncation.to_string(),
            self.k_max.to_string(),
            self.samples.to_string(),
            self.sweep_slopes.join(";"),
        ];
        KEYS.into_iter().zip(values).filter(|(k, v)| !(*k == "seed" && v == "none")).collect()
    }

    /// First 16 hex digits of the SHA-256 of the canonical rendering.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in self.resolved() {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        hex::encode(&h.finalize()[..8])
    }
}
