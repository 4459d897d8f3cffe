//! Norms, cone projections and winding ratios of truncated Fourier fields.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use proptest::prelude::*;

use torus_renorm::fourier_field::*;

const GOLDEN: f64 = 1.618_033_988_749_895;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn omega() -> FourierVectorField {
    FourierVectorField::constant([1.0, GOLDEN], 1.0, 32).unwrap()
}

#[test]
fn norm_examples() {
    let w = omega();
    for r in [0.1, 1.0, 3.0] {
        assert!((w.norm_r(r) - (1.0 + GOLDEN)).abs() < 1e-15);
        assert_eq!(w.norm_prime_r(r), w.norm_r(r));
    }
    let eps = 1e-3;
    let single = FourierVectorField::from_modes([([1, 0], [c(eps, 0.0), c(0.0, 0.0)])], 1.0, 32).unwrap();
    assert!((single.norm_r(1.0) - eps * E).abs() < 1e-17);
    let sum = w.add(&single);
    assert!((sum.norm_r(1.0) - (1.0 + GOLDEN + eps * E)).abs() < 1e-14);

    let diag = FourierVectorField::from_modes([([1, -1], [c(0.0, 0.0), c(eps, 0.0)])], 1.0, 32).unwrap();
    assert!((diag.norm_prime_r(0.5) - eps * (1.0 + 4.0 * PI) * 1f64.exp()).abs() < 1e-15);
}

#[test]
fn projection_examples() {
    let cone = ConeSpec::resonant([1.0, GOLDEN], 0.25).unwrap();
    assert!(cone.contains([-3, 2]));
    assert!(!cone.contains([1, 1]));
    assert!(cone.contains([0, 0]));
    let f = FourierVectorField::from_modes(
        [([-3, 2], [c(1.0, 0.0), c(0.0, 0.0)]), ([1, 1], [c(0.0, 1.0), c(0.0, 0.0)]), ([0, 0], [c(1.0, 0.0), c(GOLDEN, 0.0)])],
        1.0,
        32,
    )
    .unwrap();
    let inside = f.project(&cone, Side::Inside);
    assert_eq!(inside.len(), 2);
    assert_eq!(f.project(&cone, Side::Outside).len(), 1);
    assert_eq!(inside.average(), [c(1.0, 0.0), c(GOLDEN, 0.0)]);
}

#[test]
fn average_examples() {
    assert_eq!(omega().average(), [c(1.0, 0.0), c(GOLDEN, 0.0)]);
    let osc = FourierVectorField::from_modes([([2, -1], [c(1.0, 0.0), c(0.0, 0.0)])], 1.0, 8).unwrap();
    assert_eq!(osc.average(), ZERO);
    assert_eq!(omega().add(&osc).average(), omega().average());
}

#[test]
fn cone_validation() {
    assert!(ConeSpec::resonant([1.0, GOLDEN], 3.0).is_err());
    assert!(ConeSpec::resonant([1.0, GOLDEN], 0.0).is_err());
    assert!(ConeSpec::kappa(1, 0.4).is_err());
    assert!(ConeSpec::kappa(0, 0.7).is_err());
    let k = ConeSpec::kappa(1, 0.7).unwrap();
    assert!(k.contains([1, -1]));
    assert!(!k.contains([1, 1]));
}

fn field_strategy() -> impl Strategy<Value = FourierVectorField> {
    prop::collection::vec(((-8i64..=8, -8i64..=8), (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)), 0..40)
        .prop_map(|entries| {
            let mut f = FourierVectorField::new(1.0, 16).unwrap();
            for ((k1, k2), (a, b, cc, d)) in entries {
                f.set([k1, k2], [c(a, b), c(cc, d)]).unwrap();
            }
            f
        })
}

fn cone_strategy() -> impl Strategy<Value = ConeSpec> {
    prop_oneof![
        (0.5f64..3.0, 0.01f64..0.5).prop_map(|(a, s)| ConeSpec::resonant([1.0, a], s).unwrap()),
        (1u64..4, 0.51f64..0.99).prop_map(|(a, k)| ConeSpec::kappa(a, k).unwrap()),
    ]
}

proptest! {
    #[test]
    fn projections_partition_modes(f in field_strategy(), cone in cone_strategy()) {
        let inside = f.project(&cone, Side::Inside);
        let outside = f.project(&cone, Side::Outside);
        prop_assert_eq!(inside.len() + outside.len(), f.len());
        prop_assert_eq!(&inside.add(&outside), &f);
        prop_assert_eq!(&inside.project(&cone, Side::Inside), &inside);
        prop_assert!(outside.project(&cone, Side::Inside).is_empty());
        for r in [0.3, 1.0] {
            prop_assert!(inside.norm_r(r) <= f.norm_r(r) + 1e-12);
            prop_assert!(outside.norm_r(r) <= f.norm_r(r) + 1e-12);
            prop_assert!((inside.norm_r(r) + outside.norm_r(r) - f.norm_r(r)).abs() <= 1e-12 * (1.0 + f.norm_r(r)));
        }
    }

    #[test]
    fn norms_are_ordered(f in field_strategy(), r in 0.01f64..2.0, dr in 0.0f64..1.0) {
        prop_assert!(f.norm_prime_r(r) >= f.norm_r(r));
        prop_assert!(f.norm_r(r + dr) >= f.norm_r(r));
    }

    #[test]
    fn json_roundtrip(f in field_strategy()) {
        let back = FourierVectorField::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn change_basis_roundtrip(f in field_strategy(), a in 1i64..4) {
        let t = [[0, 1], [1, a]];
        let t_inv = [[-a, 1], [1, 0]];
        let wide = FourierVectorField::from_modes(f.iter(), 1.0, 200).unwrap();
        let back = wide.change_basis(t).change_basis(t_inv);
        prop_assert_eq!(back.len(), wide.len());
        prop_assert!(back.sub(&wide).norm_r(0.0) <= 1e-14 * (1.0 + wide.norm_r(0.0)));
    }
}

fn opts() -> WindingOptions {
    WindingOptions { tol: 1e-6, ..WindingOptions::default() }
}

#[test]
fn winding_of_constant_field_is_exact() {
    match winding_ratio(&omega(), &opts()).unwrap() {
        WindingOutcome::Direction { direction, slope, .. } => {
            assert!((slope - GOLDEN).abs() < 1e-12);
            assert!((direction[0] - 1.0 / (1.0 + GOLDEN)).abs() < 1e-12);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn winding_unchanged_by_small_resonant_terms() {
    let cone = ConeSpec::resonant([1.0, GOLDEN], 0.25).unwrap();
    // Scalar multiple of ω: orbits are time-reparametrised, the winding ratio is unchanged exactly.
    let mut parallel = omega();
    for (k, a) in [([-3, 2], 1e-3), ([2, -1], 4e-4)] {
        assert!(cone.contains(k));
        parallel.add_mode(k, [c(a, 0.0), c(a * GOLDEN, 0.0)]).unwrap();
        parallel.add_mode([-k[0], -k[1]], [c(a, 0.0), c(a * GOLDEN, 0.0)]).unwrap();
    }
    // A generic resonant term of size 1e-6 moves the direction by far less than the tolerance.
    let mut generic = omega();
    generic.add_mode([-3, 2], [c(1e-6, 2e-7), c(-3e-7, 5e-7)]).unwrap();
    generic.add_mode([3, -2], [c(1e-6, -2e-7), c(-3e-7, -5e-7)]).unwrap();
    for x in [parallel, generic] {
        match winding_ratio(&x, &WindingOptions { tol: 1e-4, ..WindingOptions::default() }).unwrap() {
            WindingOutcome::Direction { slope, .. } => assert!((slope - GOLDEN).abs() < 1e-4, "slope {slope}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}

#[test]
fn winding_detects_constant_shift_along_orthogonal_direction() {
    let delta = 0.1;
    let x = FourierVectorField::constant([1.0 + delta, GOLDEN - delta / GOLDEN], 1.0, 32).unwrap();
    match winding_ratio(&x, &opts()).unwrap() {
        WindingOutcome::Direction { slope, .. } => {
            let expected = (GOLDEN - delta / GOLDEN) / (1.0 + delta);
            assert!((slope - expected).abs() < 1e-10);
            assert!((slope - GOLDEN).abs() > 1e-2);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn winding_of_field_with_equilibria_is_bounded() {
    // X = (sin 2πθ₁, 0) has equilibria on θ₁ ∈ {0, 1/2}; orbits stay bounded.
    let x = FourierVectorField::from_modes(
        [([1, 0], [c(0.0, -0.5), c(0.0, 0.0)]), ([-1, 0], [c(0.0, 0.5), c(0.0, 0.0)])],
        1.0,
        4,
    )
    .unwrap();
    let o = WindingOptions { horizon: 50.0, ..opts() };
    assert!(matches!(winding_ratio(&x, &o).unwrap(), WindingOutcome::Bounded { .. }));
    let complex = FourierVectorField::from_modes([([1, 0], [c(1.0, 0.0), c(0.0, 0.0)])], 1.0, 4).unwrap();
    assert_eq!(winding_ratio(&complex, &o), Err(FieldError::NotReal));
}
