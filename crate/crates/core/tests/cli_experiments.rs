//! Configuration handling, scenario outputs and the binary's exit codes.

use std::process::Command;

use torus_renorm::cli_experiments::*;
use torus_renorm::renorm_driver::Perturbation;

fn config(pairs: &[(&str, &str)]) -> Result<ExperimentConfig, ExperimentError> {
    ExperimentConfig::from_pairs(pairs.iter().copied())
}

#[test]
fn defaults_and_overrides() {
    let c = config(&[("scenario", "orbit")]).unwrap();
    assert_eq!(c.slope, "golden");
    assert_eq!((c.sigma, c.rho, c.rho_prime, c.truncation, c.steps), (0.1, 1.0, 0.9, 32, 8));
    assert_eq!(c.perturb, Perturbation::None);
    assert!(!c.cone_retraction);

    let c = config(&[("scenario", "orbit"), ("perturb", "resonant:1e-3"), ("seed", "4"), ("steps", "3"), ("steps", "5")]).unwrap();
    assert_eq!(c.steps, 5);
    assert!(c.cone_retraction);
    let c = config(&[("scenario", "orbit"), ("perturb", "resonant:1e-3"), ("seed", "4"), ("cone_retraction", "false")]).unwrap();
    assert!(!c.cone_retraction);
}

#[test]
fn invalid_configurations_are_rejected() {
    let bad: &[&[(&str, &str)]] = &[
        &[],
        &[("scenario", "nope")],
        &[("scenario", "orbit"), ("colour", "red")],
        &[("scenario", "orbit"), ("sigma", "0.5")],
        &[("scenario", "orbit"), ("sigma", "abc")],
        &[("scenario", "orbit"), ("rho-prime", "1.2")],
        &[("scenario", "orbit"), ("perturb", "resonant:1e-3")],
        &[("scenario", "scale")],
        &[("scenario", "eliminate"), ("seed", "1")],
        &[("scenario", "orbit"), ("steps", "0")],
        &[("scenario", "sweep"), ("sweep-slopes", ";")],
    ];
    for pairs in bad {
        assert!(matches!(config(pairs), Err(ExperimentError::ConfigInvalid(_))), "{pairs:?}");
    }
}

#[test]
fn config_text_parsing() {
    let text = "# experiment\nscenario = cf\n\nslope=silver  # trailing comment\nterms = 7\n";
    let pairs = parse_config_text(text).unwrap();
    assert_eq!(pairs.len(), 3);
    let c = ExperimentConfig::from_pairs(pairs).unwrap();
    assert_eq!((c.scenario, c.slope.as_str(), c.terms), (Scenario::Cf, "silver", 7));
    assert!(parse_config_text("scenario cf").is_err());
}

#[test]
fn resolved_config_round_trips_and_hashes_stably() {
    let c = config(&[("scenario", "sweep"), ("perturb", "mixed:2e-4"), ("seed", "9"), ("sigma", "0.05"), ("kappa", "0.8")]).unwrap();
    let again = ExperimentConfig::from_pairs(c.resolved()).unwrap();
    assert_eq!(c, again);
    assert_eq!(c.hash(), again.hash());
    assert_eq!(c.hash().len(), 16);
    let other = config(&[("scenario", "sweep"), ("perturb", "mixed:2e-4"), ("seed", "10"), ("sigma", "0.05"), ("kappa", "0.8")]).unwrap();
    assert_ne!(c.hash(), other.hash());
    assert!(config(&[("scenario", "cf")]).unwrap().resolved().iter().all(|(k, _)| *k != "seed"));
    for s in Scenario::ALL {
        assert_eq!(s.name().parse::<Scenario>(), Ok(s));
    }
}

#[test]
fn cf_scenario_table() {
    let out = run_scenario(&config(&[("scenario", "cf"), ("terms", "10")]).unwrap()).unwrap();
    assert!(out.passed());
    let t = &out.tables[0];
    assert_eq!(t.rows.len(), 10);
    let q = t.column("q_n").unwrap();
    let qs: Vec<&str> = t.rows.iter().map(|r| r[q].as_str()).collect();
    assert_eq!(qs[..6], ["1", "1", "2", "3", "5", "8"]);
    assert_eq!(out.summary["periodicity"]["period"], 1);
}

#[test]
fn orbit_scenario_columns_and_certificates() {
    let c = config(&[("scenario", "orbit"), ("perturb", "resonant:1e-3"), ("seed", "1"), ("steps", "5")]).unwrap();
    let out = run_scenario(&c).unwrap();
    let t = &out.tables[0];
    assert_eq!(
        t.header,
        [
            "n",
            "a_n",
            "alpha_n",
            "norm_total",
            "norm_osc",
            "norm_const_omega",
            "norm_const_Omega",
            "far_residual",
            "newton_sweeps",
            "theta_hat_running"
        ]
    );
    assert_eq!(t.rows.len(), 6);
    assert!(out.passed(), "{:?}", out.certificates);

    let c = config(&[("scenario", "orbit"), ("perturb", "unstable:1e-6"), ("steps", "14")]).unwrap();
    let out = run_scenario(&c).unwrap();
    assert!(out.passed(), "{:?}", out.certificates);
    assert!(out.summary["failure"].as_str().is_some());
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let c = config(&[("scenario", "sweep"), ("perturb", "resonant:1e-3"), ("seed", "2"), ("steps", "4"), ("sweep-slopes", "golden;sqrt2")]).unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let wa = run_scenario(&c).unwrap().write(a.path()).unwrap();
    let wb = run_scenario(&c).unwrap().write(b.path()).unwrap();
    assert_eq!(wa.len(), 2);
    for (x, y) in wa.iter().zip(&wb) {
        assert_eq!(x.file_name(), y.file_name());
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
    }
    let csv = std::fs::read_to_string(&wa[0]).unwrap();
    assert!(csv.starts_with("# scenario=sweep\n"));
    assert!(csv.contains(&format!("# hash={}\n", c.hash())));
}

#[test]
fn every_scenario_runs_and_passes() {
    let runs: &[&[(&str, &str)]] = &[
        &[("scenario", "project"), ("seed", "3")],
        &[("scenario", "scale"), ("seed", "3"), ("samples", "4"), ("k-max", "20")],
        &[("scenario", "eliminate"), ("seed", "3"), ("perturb", "mixed:1e-3")],
        &[("scenario", "orbit")],
        &[("scenario", "spectrum"), ("slope", "silver")],
        &[("scenario", "decay-probe"), ("steps", "4"), ("probe-truncation", "80")],
    ];
    for pairs in runs {
        let out = run_scenario(&config(pairs).unwrap()).unwrap();
        assert!(out.passed(), "{pairs:?}: {:?}", out.certificates);
        assert!(!out.tables[0].rows.is_empty());
        assert_eq!(out.manifest()["passed"], true);
    }
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torus-renorm"))
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = binary().args(["--scenario", "cf", "--terms", "8", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("PASS"));

    // Two steps give only two growth factors; the certificate needs four.
    let fail = binary()
        .args(["--scenario", "orbit", "--perturb", "unstable:1e-6", "--steps", "2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));

    let err = binary().args(["--scenario", "orbit", "--sigma", "0.9"]).output().unwrap();
    assert_eq!(err.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&err.stderr).contains("invalid configuration"));
}

#[test]
fn binary_reads_config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.conf");
    std::fs::write(&file, "scenario = cf\nslope = silver\nterms = 5\n").unwrap();
    let out = binary().arg("--config").arg(&file).args(["--terms", "6", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let c = config(&[("scenario", "cf"), ("slope", "silver"), ("terms", "6")]).unwrap();
    let csv = std::fs::read_to_string(dir.path().join(format!("cf-{}.csv", c.hash()))).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 7);
}
