//! Near-identity elimination of far-from-resonance modes.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torus_renorm::fourier_field::*;
use torus_renorm::normalization_step::*;

const GOLDEN: f64 = 1.618_033_988_749_895;
const SIGMA: f64 = 0.1 / GOLDEN;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `ψ = (1/γ, 1)`, the normalised frequency after one golden step.
fn psi() -> [f64; 2] {
    [1.0 / GOLDEN, 1.0]
}

fn cone() -> ConeSpec {
    ConeSpec::resonant(psi(), SIGMA).unwrap()
}

fn with_far_mode(eps: f64, truncation: u32) -> FourierVectorField {
    let mut x = FourierVectorField::constant(psi(), 1.0, truncation).unwrap();
    assert!(!cone().contains([1, 1]));
    x.add_mode([1, 1], [c(eps, 0.3 * eps), c(-0.5 * eps, 0.2 * eps)]).unwrap();
    x.add_mode([-1, -1], [c(eps, -0.3 * eps), c(-0.5 * eps, -0.2 * eps)]).unwrap();
    x
}

/// Real perturbation with `modes` random conjugate pairs, scaled to `‖f‖′_ρ = amp`.
fn random_perturbation(seed: u64, truncation: i64, modes: usize, amp: f64) -> FourierVectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = FourierVectorField::new(1.0, truncation as u32).unwrap();
    for _ in 0..modes {
        let k = loop {
            let k = [rng.gen_range(-truncation..=truncation), rng.gen_range(-truncation..=truncation)];
            if k != [0, 0] && mode_norm(k) <= truncation {
                break k;
            }
        };
        let decay = (-1.2 * mode_norm(k) as f64).exp();
        let v = [
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * decay,
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * decay,
        ];
        f.add_mode(k, v).unwrap();
        f.add_mode([-k[0], -k[1]], [v[0].conj(), v[1].conj()]).unwrap();
    }
    let n = f.norm_prime_r(1.0);
    f.scale(c(amp / n, 0.0))
}

fn psi_field(truncation: u32) -> FourierVectorField {
    FourierVectorField::constant(psi(), 1.0, truncation).unwrap()
}

#[test]
fn identity_on_resonant_input() {
    let x = psi_field(32);
    let out = eliminate_far(&x, psi(), SIGMA, &EliminationOptions::default()).unwrap();
    assert!(out.map.is_identity());
    assert!(out.report.identity);
    assert_eq!(out.field, x.clone().with_width(0.9).unwrap());

    let resonant = x.add(&random_perturbation(3, 32, 40, 1e-3).project(&cone(), Side::Inside));
    assert!(resonant.len() > 1);
    let out = eliminate_far(&resonant, psi(), SIGMA, &EliminationOptions::default()).unwrap();
    assert!(out.map.is_identity());
    // Mode-exact: the same coefficients, bit for bit.
    assert_eq!(out.field.iter().collect::<Vec<_>>(), resonant.iter().collect::<Vec<_>>());
    assert_eq!(out.report.sweeps, 0);
}

#[test]
fn single_far_mode_converges_quadratically() {
    let opts = EliminationOptions { tol: 1e-14, ..EliminationOptions::default() };
    let mut first_sweep = Vec::new();
    for eps in [1e-4, 1e-5, 1e-6] {
        let out = eliminate_far(&with_far_mode(eps, 12), psi(), SIGMA, &opts).unwrap();
        assert!(out.report.sweeps <= 3, "{:?}", out.report.residuals);
        assert!(out.report.final_residual() <= 1e-14);
        // First sweep leaves a residual of second order.
        let r = &out.report.residuals;
        assert!(r[1] < 100.0 * r[0] * r[0], "{r:?}");
        first_sweep.push((eps.ln(), r[1].ln()));
        // Far part of the output is the reported residual.
        let far = out.field.project(&cone(), Side::Outside).norm_r(0.9);
        assert!((far - out.report.final_residual()).abs() <= 1e-15);
    }
    let n = first_sweep.len() as f64;
    let mx = first_sweep.iter().map(|p| p.0).sum::<f64>() / n;
    let my = first_sweep.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = first_sweep.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / first_sweep.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope - 2.0).abs() < 0.2, "fitted order {slope}");
}

#[test]
fn generic_perturbation_at_working_truncation() {
    let x = psi_field(32).add(&random_perturbation(11, 32, 60, 1e-3));
    let out = eliminate_far(&x, psi(), SIGMA, &EliminationOptions::default()).unwrap();
    let rep = &out.report;
    assert!(rep.final_residual() <= 1e-12);
    assert!(rep.sweeps <= 6, "{:?}", rep.residuals);
    assert!(rep.convergence_order(1e-13).map_or(true, |p| p >= 1.8), "{:?}", rep.residuals);
    assert!(rep.contraction_holds);
    assert!(!rep.inside_ball, "amplitude 1e-3 lies outside the guaranteed radius {}", rep.eps_hat);
    assert!(out.field.is_real(1e-13));
    assert!(out.map.displacement().is_real(1e-13));
    assert_eq!(out.map.displacement().get([0, 0]), ZERO);
    for (k, _) in out.map.displacement().iter() {
        assert!(!cone().contains(k));
    }
    assert!(out.map.jacobian_bound(0.0) < 1.0);
    // The returned field is the pullback by the returned map.
    let again = compose_pullback(&x, &out.map, Some(rep.grid), 0.9).unwrap();
    assert!(again.field.sub(&out.field).norm_r(0.9) < 1e-13);
}

#[test]
fn derivative_at_psi_is_resonant_projection() {
    let f = random_perturbation(5, 16, 30, 1.0);
    let eps = 1e-6;
    let opts = EliminationOptions { tol: 1e-15, ..EliminationOptions::default() };
    let base = psi_field(16);
    let plus = eliminate_far(&base.add(&f.scale(c(eps, 0.0))), psi(), SIGMA, &opts).unwrap();
    let minus = eliminate_far(&base.add(&f.scale(c(-eps, 0.0))), psi(), SIGMA, &opts).unwrap();
    let derivative = plus.field.sub(&minus.field).scale(c(0.5 / eps, 0.0));
    let expected = f.project(&cone(), Side::Inside).with_width(0.9).unwrap();
    let err = derivative.sub(&expected).norm_r(0.9);
    assert!(err < 1e-8, "derivative error {err:.3e}");
}

#[test]
fn pullback_by_identity_is_exact_to_round_off() {
    let x = psi_field(16).add(&random_perturbation(2, 16, 30, 1e-2));
    let id = TorusMap::identity(1.0, 16).unwrap();
    let p = compose_pullback(&x, &id, None, 0.9).unwrap();
    assert!(p.field.sub(&x).norm_r(0.9) < 1e-12);
    assert!(p.tail_mass < 1e-12);
}

fn small_map(amp: f64) -> TorusMap {
    let mut u = FourierVectorField::new(1.0, 8).unwrap();
    u.add_mode([2, 1], [c(amp, 0.5 * amp), c(-amp, 0.0)]).unwrap();
    u.add_mode([-2, -1], [c(amp, -0.5 * amp), c(-amp, 0.0)]).unwrap();
    u.add_mode([0, 3], [c(0.0, amp), c(0.3 * amp, 0.0)]).unwrap();
    u.add_mode([0, -3], [c(0.0, -amp), c(0.3 * amp, 0.0)]).unwrap();
    TorusMap::from_displacement(u).unwrap()
}

#[test]
fn pullback_of_constant_field() {
    let x = psi_field(8);
    for amp in [1e-3, 1e-4] {
        let u = small_map(amp);
        let p = compose_pullback(&x, &u, None, 0.5).unwrap();
        let avg = p.field.average();
        let du = u.jacobian_bound(0.0);
        // The correction −(Du)ψ has zero mean; the average moves only at second order.
        let drift = (avg[0] - c(psi()[0], 0.0)).norm() + (avg[1] - c(psi()[1], 0.0)).norm();
        assert!(drift <= 2.0 * du * du, "drift {drift:.3e}, |Du| {du:.3e}");
        assert!(p.field.oscillatory().norm_r(0.0) > 0.1 * du);
    }
}

#[test]
fn pullback_linearisation_matches_finite_difference() {
    let x = psi_field(8);
    let v = small_map(1.0);
    let eps = 1e-7;
    let scaled = TorusMap::from_displacement(v.displacement().scale(c(eps, 0.0))).unwrap();
    let p = compose_pullback(&x, &scaled, None, 0.5).unwrap();
    let quotient = p.field.sub(&x).scale(c(1.0 / eps, 0.0));
    // −(Dv)ψ has coefficients −2πi (ψ·k) v_k.
    let expected = v
        .displacement()
        .map_coefficients(|k, f| {
            let d = c(0.0, -2.0 * PI * (psi()[0] * k[0] as f64 + psi()[1] * k[1] as f64));
            [f[0] * d, f[1] * d]
        })
        .with_width(0.5)
        .unwrap();
    let err = quotient.sub(&expected).norm_r(0.5);
    assert!(err < 1e-4 * expected.norm_r(0.5), "err {err:.3e}");
}

#[test]
fn error_cases() {
    let x = psi_field(8);
    // Constant X: the output truncation 8 sets the requirement 2·8 + 1.
    assert!(matches!(
        compose_pullback(&x, &small_map(1e-3), Some(16), 0.5),
        Err(NormalizationError::GridTooCoarse { grid: 16, required: 17 })
    ));
    let wavy = x.add(&random_perturbation(1, 8, 10, 1e-3));
    let needed = 2 * (wavy.max_mode_norm() as usize + 3) + 1;
    assert!(needed > 17);
    assert!(matches!(
        compose_pullback(&wavy, &small_map(1e-3), Some(needed - 1), 0.5),
        Err(NormalizationError::GridTooCoarse { .. })
    ));
    assert!(matches!(
        compose_pullback(&x, &small_map(0.5), None, 0.5),
        Err(NormalizationError::SingularJacobian { .. })
    ));
    let far = with_far_mode(1e-3, 8);
    let strict = EliminationOptions { enforce_ball: true, ..EliminationOptions::default() };
    assert!(matches!(eliminate_far(&far, psi(), SIGMA, &strict), Err(NormalizationError::OutsideBall { .. })));
    let tiny = with_far_mode(1e-9, 8);
    let rep = eliminate_far(&tiny, psi(), SIGMA, &strict).unwrap().report;
    assert!(rep.inside_ball);
    let one = EliminationOptions { tol: 1e-30, max_iter: 1, ..EliminationOptions::default() };
    assert!(matches!(eliminate_far(&far, psi(), SIGMA, &one), Err(NormalizationError::NoConvergence { sweeps: 1, .. })));
    let wide = EliminationOptions { output_width: 1.0, ..EliminationOptions::default() };
    assert!(matches!(eliminate_far(&far, psi(), SIGMA, &wide), Err(NormalizationError::InvalidInput(_))));
}

#[test]
fn torus_map_serialisation() {
    let u = small_map(1e-3);
    let back = TorusMap::from_json(&u.to_json()).unwrap();
    assert_eq!(back, u);
    assert!(TorusMap::from_json(&psi_field(8).to_json()).is_err());
    assert!(TorusMap::from_displacement(psi_field(8)).is_err());
    let p = u.apply([0.25, 0.5]);
    let d = u.displacement().evaluate_real([0.25, 0.5]);
    assert_eq!(p, [0.25 + d[0], 0.5 + d[1]]);
}
