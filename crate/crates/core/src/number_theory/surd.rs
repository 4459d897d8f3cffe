//! Exact quadratic irrationals `(u + v√d) / w`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::Interval;

/// A real quadratic irrational in canonical form: `w > 0`, `gcd(u, v, w) = 1`,
/// `v ≠ 0` and `d > 1` not a perfect square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    u: BigInt,
    v: BigInt,
    d: BigInt,
    w: BigInt,
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &s * &s == *n
}

impl QuadraticSurd {
    /// Builds and canonicalises `(u + v√d)/w`. Returns `None` when the value is
    /// rational (`v = 0` or `d` a square) or malformed (`w = 0`, `d ≤ 0`).
    pub fn new(u: BigInt, v: BigInt, d: BigInt, w: BigInt) -> Option<Self> {
        if w.is_zero() || v.is_zero() || !d.is_positive() || is_square(&d) {
            return None;
        }
        let (mut u, mut v, mut w) = (u, v, w);
        if w.is_negative() {
            u = -u;
            v = -v;
            w = -w;
        }
        let g = u.gcd(&v).gcd(&w);
        if !g.is_one() {
            u /= &g;
            v /= &g;
            w /= &g;
        }
        Some(QuadraticSurd { u, v, d, w })
    }

    pub fn from_i64(u: i64, v: i64, d: i64, w: i64) -> Option<Self> {
        Self::new(u.into(), v.into(), d.into(), w.into())
    }

    /// `(1 + √5)/2`.
    pub fn golden() -> Self {
        Self::from_i64(1, 1, 5, 2).unwrap()
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.u, &self.v, &self.d, &self.w)
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    /// `⌊value⌋`, exact.
    pub fn floor(&self) -> BigInt {
        // v√d = ±√(v²d); the root is irrational, so floor(u ± √N) is u + isqrt(N) or u - isqrt(N) - 1.
        let n = &self.v * &self.v * &self.d;
        let s = n.sqrt();
        let numer_floor = if self.v.is_positive() {
            &self.u + s
        } else {
            &self.u - s - 1
        };
        numer_floor.div_floor(&self.w)
    }

    pub fn is_positive(&self) -> bool {
        // Sign of u + v√d compared without square roots.
        let vsd_sq = &self.v * &self.v * &self.d;
        let u_sq = &self.u * &self.u;
        if self.v.is_positive() {
            !self.u.is_negative() || vsd_sq > u_sq
        } else {
            self.u.is_positive() && u_sq > vsd_sq
        }
    }

    /// `(c + d·x)/(a + b·x)`; `None` only when the denominator vanishes identically.
    pub fn mobius(&self, a: &BigInt, b: &BigInt, c: &BigInt, dd: &BigInt) -> Option<QuadraticSurd> {
        // numerator (n0 + n1√d)/w, denominator (m0 + m1√d)/w
        let n0 = c * &self.w + dd * &self.u;
        let n1 = dd * &self.v;
        let m0 = a * &self.w + b * &self.u;
        let m1 = b * &self.v;
        if m0.is_zero() && m1.is_zero() {
            return None;
        }
        let den = &m0 * &m0 - &m1 * &m1 * &self.d;
        let u = &n0 * &m0 - &n1 * &m1 * &self.d;
        let v = &n1 * &m0 - &n0 * &m1;
        QuadraticSurd::new(u, v, self.d.clone(), den)
    }

    pub fn add_integer(&self, k: &BigInt) -> QuadraticSurd {
        self.mobius(&BigInt::one(), &BigInt::zero(), k, &BigInt::one())
            .expect("translation is unimodular")
    }

    pub fn recip(&self) -> QuadraticSurd {
        self.mobius(&BigInt::zero(), &BigInt::one(), &BigInt::one(), &BigInt::zero())
            .expect("nonzero irrational has a reciprocal")
    }

    pub fn neg(&self) -> QuadraticSurd {
        QuadraticSurd {
            u: -self.u.clone(),
            v: -self.v.clone(),
            d: self.d.clone(),
            w: self.w.clone(),
        }
    }

    /// Enclosure with `2^-bits` resolution.
    pub fn to_interval(&self, bits: u32) -> Interval {
        let root = Interval::sqrt_of_integer(&(&self.v * &self.v * &self.d), bits + 8);
        let signed = if self.v.is_positive() { root } else { root.neg() };
        signed
            .add_rational(&BigRational::from_integer(self.u.clone()), None)
            .mul_rational(&BigRational::new(BigInt::one(), self.w.clone()), Some(bits))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_interval(80).to_f64()
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/{}", self.u, self.v, self.d, self.w)
    }
}
