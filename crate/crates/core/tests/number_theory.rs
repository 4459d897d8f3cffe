//! Continued-fraction invariants checked against independent oracles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use torus_renorm::number_theory::*;

const GOLDEN: f64 = 1.618_033_988_749_895;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Oracle: Fibonacci numbers by plain iteration, 1, 2, 3, 5, 8, ...
fn fibonacci_from_one(count: usize) -> Vec<BigInt> {
    let (mut a, mut b) = (BigInt::one(), BigInt::from(2));
    let mut out = Vec::new();
    for _ in 0..count {
        out.push(a.clone());
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    out
}

#[test]
fn golden_and_sqrt2_expansions() {
    let g = cf_expand(&Slope::golden(), 30).unwrap();
    assert_eq!(g.termination(), Termination::Complete);
    assert!(g.coefficients().iter().all(|a| a.is_one()));
    assert_eq!(g.periodicity(), Some(Periodicity { preperiod: 0, period: 1 }));

    let s = cf_expand(&Slope::sqrt2(), 30).unwrap();
    assert_eq!(s.coefficients()[0], BigInt::one());
    assert!(s.coefficients()[1..].iter().all(|a| a == &BigInt::from(2)));
    assert_eq!(s.periodicity(), Some(Periodicity { preperiod: 1, period: 1 }));
}

#[test]
fn golden_denominators_are_fibonacci() {
    let cf = cf_expand(&Slope::golden(), 5).unwrap();
    let ps: Vec<BigInt> = (0..5).map(|n| cf.convergent(n).unwrap().0).collect();
    let qs: Vec<BigInt> = (0..5).map(|n| cf.convergent(n).unwrap().1).collect();
    // With q_{-1} = 0 and q_0 = 1 the denominators lag the numerators by one index.
    assert_eq!(ps, fibonacci_from_one(5));
    assert_eq!(ps, ints(&[1, 2, 3, 5, 8]));
    assert_eq!(qs, ints(&[1, 1, 2, 3, 5]));
    let p4 = cf.convergent_matrix(4).unwrap();
    assert_eq!(p4, GL2ZMatrix::from_i64(3, 5, 5, 8).unwrap());
}

#[test]
fn sqrt2_convergents() {
    let cf = cf_expand(&Slope::sqrt2(), 3).unwrap();
    let pq: Vec<(BigInt, BigInt)> = (0..3).map(|n| cf.convergent(n).unwrap()).collect();
    assert_eq!(pq, vec![(1.into(), 1.into()), (3.into(), 2.into()), (7.into(), 5.into())]);
    // Oracle: p² - 2q² = ±1 for every convergent of √2.
    for (p, q) in pq {
        let norm: BigInt = &p * &p - BigInt::from(2) * &q * &q;
        assert_eq!(norm.abs(), BigInt::one());
    }
}

#[test]
fn shift_eigenvectors() {
    let t = t_matrix(&BigInt::one());
    assert_eq!(t, GL2ZMatrix::from_i64(0, 1, 1, 1).unwrap());
    let e = t_matrix_eigen(1.0);
    assert!((e.lambda - GOLDEN).abs() < 1e-15);
    // T (1, λ) = λ (1, λ)
    let v = e.unstable;
    let tv = [v[1], v[0] + v[1]];
    assert!((tv[0] - e.lambda * v[0]).abs() < 1e-14 && (tv[1] - e.lambda * v[1]).abs() < 1e-14);
    let s = e.stable;
    let ts = [s[1], s[0] + s[1]];
    assert!((ts[0] - e.lambda_stable * s[0]).abs() < 1e-14);
}

#[test]
fn generator_actions() {
    let alpha = Slope::quadratic(3, 2, 7, 5).unwrap();
    let minus_one = alpha.act(&GL2ZMatrix::shear().inverse()).unwrap();
    assert_eq!(minus_one, Slope::quadratic(-2, 2, 7, 5).unwrap());
    let swapped = act_on_slope(&GL2ZMatrix::swap(), &alpha).unwrap();
    assert!((swapped.to_f64() * alpha.to_f64() - 1.0).abs() < 1e-14);
    assert_eq!(alpha.act(&GL2ZMatrix::reflect()).unwrap(), Slope::quadratic(-3, -2, 7, 5).unwrap());
}

#[test]
fn dyadic_growth_probe_is_unbounded() {
    let coeffs: Vec<BigInt> = (0..=10).map(|n| BigInt::one() << n).collect();
    let cf = CfExpansion::from_coefficients(&coeffs).unwrap();
    assert_eq!(cf.coefficients(), coeffs.as_slice());
    let probe = diophantine_probe(&cf, 0.0, 10);
    // a_{n+1} = 2^{n+1}, so the K for the coefficient bound doubles every row.
    for (n, row) in probe.rows.iter().enumerate() {
        assert!((row.k_a - 2f64.powi(n as i32 + 1)).abs() < 1e-9);
    }
    for w in probe.rows.windows(2) {
        assert!(w[1].k_q > w[0].k_q);
    }
}

#[test]
fn bounded_type_probes() {
    let g = diophantine_probe(&cf_expand(&Slope::golden(), 32).unwrap(), 0.0, 30);
    assert_eq!(g.rows.len(), 31);
    assert!(g.is_bounded_by(2.0), "{g:?}");
    let s = diophantine_probe(&cf_expand(&Slope::sqrt2(), 32).unwrap(), 0.0, 30);
    assert!(s.is_bounded_by(3.0), "{s:?}");
}

#[test]
fn decimal_slope_tracks_e_minus_two() {
    // e - 2 = [0; 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8, ...]
    let text = "0.718281828459045235360287471352662497757247093699959574966967627724076630353547594571382179";
    let cf = cf_expand(&Slope::decimal(text, 256).unwrap(), 40).unwrap();
    let expected: Vec<i64> = (0..cf.len())
        .map(|n| if n == 0 { 0 } else if n % 3 == 2 { 2 * (n as i64 + 1) / 3 } else { 1 })
        .collect();
    assert!(cf.len() >= 30, "only {} coefficients certified", cf.len());
    assert_eq!(cf.coefficients(), ints(&expected).as_slice());
}

fn slope_strategy() -> impl Strategy<Value = Slope> {
    (-20i64..20, 1i64..6, 2i64..60, 1i64..12)
        .prop_filter_map("square radicand", |(u, v, d, w)| {
            let r = (d as f64).sqrt() as i64;
            (r * r != d && (r + 1) * (r + 1) != d).then(|| Slope::quadratic(u, v, d, w).unwrap())
        })
}

/// Oracle for the best-approximation property: brute force over every denominator below `q_max`,
/// using exact enclosures of `α`. Returns a lower bound for `min |p - αq|`.
fn best_brute_force(alpha: &Interval, q_max: i64) -> BigRational {
    let mut best: Option<BigRational> = None;
    for q in 1..q_max {
        let aq = alpha.mul_rational(&BigRational::from_integer(q.into()), None);
        for p in [aq.lo().floor().to_integer(), aq.hi().ceil().to_integer()] {
            let d = aq.add_rational(&BigRational::from_integer(-p), None);
            let lower = if d.contains_zero() { BigRational::zero() } else { d.lo().abs().min(d.hi().abs()) };
            best = Some(match best {
                Some(b) if b <= lower => b,
                _ => lower,
            });
        }
    }
    best.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recurrences_and_determinants(alpha in slope_strategy()) {
        let cf = cf_expand(&alpha, 27).unwrap();
        prop_assert_eq!(cf.len(), 27);
        for n in 0..cf.len() as i64 {
            let (p, q) = cf.convergent(n).unwrap();
            prop_assert!(p.gcd(&q).is_one());
            let m = cf.convergent_matrix(n).unwrap();
            let sign = if n % 2 == 0 { -1 } else { 1 };
            prop_assert_eq!(m.det(), BigInt::from(sign));
            prop_assert_eq!(&m, &cf.convergent_matrix_product(n).unwrap());
            if n >= 1 {
                let a = cf.coefficient(n as usize).unwrap();
                let (p1, q1) = cf.convergent(n - 1).unwrap();
                let (p2, q2) = cf.convergent(n - 2).unwrap();
                prop_assert_eq!(p, a * p1 + p2);
                prop_assert_eq!(q, a * q1 + q2);
            }
        }
    }

    #[test]
    fn beta_sandwich_and_agreement(alpha in slope_strategy()) {
        let cf = cf_expand(&alpha, 28).unwrap();
        let tol = BigRational::new(BigInt::one(), BigInt::from(10).pow(30));
        for n in 0..=25usize {
            let prod = cf.beta(n as i64).unwrap();
            let conv = cf.beta_from_convergent(n).unwrap();
            prop_assert!(prod.max_abs_diff(&conv) < tol);
            let (_, q1) = cf.convergent(n as i64 + 1).unwrap();
            let upper = BigRational::new(BigInt::one(), q1.clone());
            let lower = BigRational::new(BigInt::one(), 2 * q1);
            prop_assert!(prod.lo() > &lower && prod.hi() < &upper);
            prop_assert!(prod.to_f64() <= GOLDEN.powi(-(n as i32)) * (1.0 + 1e-12));
            // The three-term recurrence β_{n-2} = a_n β_{n-1} + β_n.
            if n >= 1 {
                let a = BigRational::from_integer(cf.coefficient(n).unwrap().clone());
                let lhs = cf.beta(n as i64 - 2).unwrap();
                let rhs = cf.beta(n as i64 - 1).unwrap().mul_rational(&a, None).add(&prod, None);
                prop_assert!(lhs.max_abs_diff(&rhs) < tol);
            }
            for j in 0..=n {
                let ratio = prod.to_f64() / cf.beta(j as i64 - 1).unwrap().to_f64();
                prop_assert!(ratio <= GOLDEN.powi(-((n - j) as i32)) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn atilde_relations(alpha in slope_strategy()) {
        let alpha = if alpha.to_f64() > 1.0 { alpha } else {
            // move into (1, ∞) by an integer shift
            let k = BigInt::from(1) - alpha.floor().unwrap();
            alpha.act(&GL2ZMatrix::new(BigInt::one(), BigInt::zero(), k, BigInt::one()).unwrap()).unwrap()
        };
        let cf = cf_expand(&alpha, 26).unwrap();
        let a0 = alpha.to_f64();
        for n in 0..25i64 {
            let at = cf.atilde(n).unwrap().to_f64();
            let at_next = cf.atilde(n + 1).unwrap().to_f64();
            let beta = cf.beta(n).unwrap().to_f64();
            prop_assert!((at_next * beta / a0 - 1.0).abs() < 1e-12);
            let q = cf.convergent(n).unwrap().1.to_f64().unwrap();
            if n >= 1 {
                prop_assert!(a0 * q < at && at < 2.0 * a0 * q);
            } else {
                prop_assert!((at - a0 * q).abs() < 1e-12 * at);
            }
            prop_assert!(at >= a0 * GOLDEN.powi(n as i32 - 1) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn coefficient_product_bounds(alpha in slope_strategy()) {
        let cf = cf_expand(&alpha, 26).unwrap();
        let a: Vec<f64> = cf.coefficients().iter().map(|x| x.to_f64().unwrap()).collect();
        let (mut prod, mut factor) = (1.0, 1.0);
        for n in 1..26usize {
            prod *= a[n];
            if n >= 2 {
                factor *= 1.0 + 1.0 / (a[n] * a[n - 1]);
            }
            let q = cf.convergent(n as i64).unwrap().1.to_f64().unwrap();
            prop_assert!(prod <= q * (1.0 + 1e-12));
            prop_assert!(q <= prod * factor * (1.0 + 1e-12));
        }
    }

    #[test]
    fn convergents_are_best_approximations(alpha in slope_strategy()) {
        let cf = cf_expand(&alpha, 14).unwrap();
        let x = alpha.to_interval(256);
        for n in 1..13i64 {
            let (p, q) = cf.convergent(n).unwrap();
            let (_, q1) = cf.convergent(n + 1).unwrap();
            let err = x
                .mul_rational(&BigRational::from_integer(q.clone()), None)
                .add_rational(&BigRational::from_integer(-p), None);
            let own = err.lo().abs().max(err.hi().abs());
            // |α - p/q| < 1/(q q')  ⇔  |αq - p| < 1/q'
            prop_assert!(own < BigRational::new(BigInt::one(), q1));
            if let Some(qi) = q.to_i64().filter(|&v| v > 1 && v < 400) {
                prop_assert!(own < best_brute_force(&x, qi));
            }
        }
    }

    #[test]
    fn shift_property(alpha in slope_strategy()) {
        let cf = cf_expand(&alpha, 20).unwrap();
        let a0 = cf.coefficient(0).unwrap().clone();
        let inv_t = t_matrix(&a0).inverse();
        let shifted = alpha.act(&inv_t).unwrap();
        prop_assert_eq!(&shifted, cf.tail(1).unwrap());
        let cf1 = cf_expand(&shifted, 19).unwrap();
        prop_assert_eq!(cf1.coefficients(), &cf.coefficients()[1..]);
    }

    #[test]
    fn quadratic_expansions_are_periodic(alpha in slope_strategy()) {
        let cf = cf_expand(&alpha, 200).unwrap();
        let per = cf.periodicity();
        prop_assert!(per.is_some());
        let per = per.unwrap();
        for n in per.preperiod..cf.len() - per.period {
            prop_assert_eq!(cf.coefficient(n).unwrap(), cf.coefficient(n + per.period).unwrap());
        }
    }

    #[test]
    fn rational_expansion_reconstructs(p in -500i64..500, q in 1i64..500) {
        prop_assume!(p != 0);
        let cf = cf_expand(&Slope::rational(p, q).unwrap(), 64).unwrap();
        let n = cf.len() as i64 - 1;
        let (pn, qn) = cf.convergent(n).unwrap();
        prop_assert_eq!(BigRational::new(pn, qn), BigRational::new(p.into(), q.into()));
        if cf.len() > 1 {
            prop_assert!(cf.coefficients().last().unwrap() >= &BigInt::from(2));
        }
        prop_assert!(cf.remainder(n as usize).unwrap().lo().is_zero());
    }

    #[test]
    fn gauss_map_stays_in_unit_interval(p in 1i64..1000, q in 1i64..1000) {
        prop_assume!(p < q);
        let y = gauss_step(&Slope::rational(p, q).unwrap()).unwrap();
        let v = y.to_f64();
        prop_assert!((0.0..1.0).contains(&v));
        let expected = (q as f64 / p as f64).fract();
        prop_assert!((v - expected).abs() < 1e-12);
    }
}

#[test]
fn precision_exhaustion_is_reported() {
    let cf = cf_expand(&Slope::decimal("0.7182818", 256).unwrap(), 30).unwrap();
    assert_eq!(cf.termination(), Termination::PrecisionExhausted);
    assert!(matches!(cf.require(30), Err(CfError::PrecisionExhausted { .. })));
    assert!(cf.coefficient(cf.len()).is_err());
    assert!(!cf.remainder(0).unwrap().lo().is_negative());
}
