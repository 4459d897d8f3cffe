//! Runs one experiment scenario and writes its tables and manifest.
//!
//! Exit status: 0 when every certificate passes, 1 when one fails, 2 on errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use torus_renorm::cli_experiments::{parse_config_text, run_scenario, ExperimentConfig, ExperimentError};

#[derive(Parser, Debug)]
#[command(name = "torus-renorm", version, about = "Renormalisation experiments for vector fields on the 2-torus")]
struct Args {
    /// File of `key = value` lines; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// cf, project, scale, eliminate, orbit, spectrum, decay-probe or sweep.
    #[arg(long)]
    scenario: Option<String>,
    /// golden, silver, sqrt2, p/q, u,v,d,w for (u+v√d)/w, or a decimal with optional @bits.
    #[arg(long)]
    slope: Option<String>,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long = "rho-prime")]
    rho_prime: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    /// Fourier truncation radius in the ℓ1 mode norm.
    #[arg(long)]
    truncation: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    terms: Option<String>,
    /// none, resonant:AMP, unstable:AMP or mixed:AMP.
    #[arg(long)]
    perturb: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long = "zeta-scale")]
    zeta_scale: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long = "cone-retraction")]
    cone_retraction: Option<String>,
    #[arg(long = "probe-truncation")]
    probe_truncation: Option<String>,
    #[arg(long = "k-max")]
    k_max: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// Semicolon-separated slopes for the sweep scenario.
    #[arg(long = "sweep-slopes")]
    sweep_slopes: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl Args {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let flags = [
            ("scenario", &self.scenario),
            ("slope", &self.slope),
            ("sigma", &self.sigma),
            ("rho", &self.rho),
            ("rho-prime", &self.rho_prime),
            ("kappa", &self.kappa),
            ("truncation", &self.truncation),
            ("steps", &self.steps),
            ("terms", &self.terms),
            ("perturb", &self.perturb),
            ("seed", &self.seed),
            ("zeta-scale", &self.zeta_scale),
            ("tol", &self.tol),
            ("cone-retraction", &self.cone_retraction),
            ("probe-truncation", &self.probe_truncation),
            ("k-max", &self.k_max),
            ("samples", &self.samples),
            ("sweep-slopes", &self.sweep_slopes),
        ];
        flags.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, v))).collect()
    }
}

fn run(args: &Args) -> Result<bool, ExperimentError> {
    let mut pairs = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ExperimentError::Io { path: path.display().to_string(), message: e.to_string() })?;
            parse_config_text(&text)?
        }
        None => Vec::new(),
    };
    pairs.extend(args.overrides().into_iter().map(|(k, v)| (k.to_string(), v)));
    let config = ExperimentConfig::from_pairs(pairs)?;
    let output = run_scenario(&config)?;
    for path in output.write(&args.out)? {
        println!("wrote {}", path.display());
    }
    for c in &output.certificates {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(output.passed())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
