//! Closed rational intervals with outward rounding onto a dyadic grid.
//!
//! Every operation returns an interval that contains the exact result for all
//! inputs drawn from the operand intervals. With `prec = None` no rounding
//! happens, which keeps rational computations exact.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Closed interval `[lo, hi]` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn round_down(x: &BigRational, bits: u32) -> BigRational {
    let scale = pow2(bits);
    let scaled = x * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.floor().to_integer(), scale)
}

fn round_up(x: &BigRational, bits: u32) -> BigRational {
    let scale = pow2(bits);
    let scaled = x * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.ceil().to_integer(), scale)
}

/// Converts a big rational to the nearest-ish `f64`, robust to huge numerators and denominators.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 1e300 && d < 1e300 {
            return n / d;
        }
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    (sign * rational_ln_abs(x).exp()).clamp(f64::MIN, f64::MAX)
}

/// Natural log of a positive big integer, computed from its leading bits.
pub fn bigint_ln(x: &BigInt) -> f64 {
    assert!(x.sign() == Sign::Plus, "logarithm of non-positive integer");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of `|x|` for a nonzero rational.
pub fn rational_ln_abs(x: &BigRational) -> f64 {
    bigint_ln(&x.numer().abs()) - bigint_ln(x.denom())
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self::point(BigRational::from_integer(n))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.mid())
    }

    /// Log of the midpoint's magnitude; usable far outside the `f64` range.
    pub fn ln_abs(&self) -> f64 {
        rational_ln_abs(&self.mid())
    }

    fn rounded(self, prec: Option<u32>) -> Self {
        match prec {
            None => self,
            Some(bits) => Interval {
                lo: round_down(&self.lo, bits),
                hi: round_up(&self.hi, bits),
            },
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn add(&self, other: &Interval, prec: Option<u32>) -> Self {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
        .rounded(prec)
    }

    pub fn sub(&self, other: &Interval, prec: Option<u32>) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Interval, prec: Option<u32>) -> Self {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }.rounded(prec)
    }

    pub fn add_rational(&self, x: &BigRational, prec: Option<u32>) -> Self {
        self.add(&Interval::point(x.clone()), prec)
    }

    pub fn mul_rational(&self, x: &BigRational, prec: Option<u32>) -> Self {
        self.mul(&Interval::point(x.clone()), prec)
    }

    /// Reciprocal, or `None` when the interval touches zero.
    pub fn recip(&self, prec: Option<u32>) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(
            Interval {
                lo: self.hi.recip(),
                hi: self.lo.recip(),
            }
            .rounded(prec),
        )
    }

    /// The common floor of every point, if there is one.
    pub fn floor_certified(&self) -> Option<BigInt> {
        let a = self.lo.floor().to_integer();
        let b = self.hi.floor().to_integer();
        (a == b).then_some(a)
    }

    /// Enclosure of `√n` for a non-negative integer, with `2^-bits` resolution.
    pub fn sqrt_of_integer(n: &BigInt, bits: u32) -> Self {
        assert!(!n.is_negative(), "square root of negative integer");
        let scale = pow2(bits);
        let s = (n * &scale * &scale).sqrt();
        let exact = &s * &s == n * &scale * &scale;
        let lo = BigRational::new(s.clone(), scale.clone());
        let hi = if exact {
            lo.clone()
        } else {
            BigRational::new(s + 1, scale)
        };
        Interval { lo, hi }
    }

    /// Interval for a decimal literal with an uncertainty of half a unit in its last digit.
    pub fn from_decimal(text: &str, bits: u32) -> Option<Self> {
        let t = text.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let mut numer: BigInt = digits.parse().ok()?;
        if neg {
            numer = -numer;
        }
        let denom = BigInt::from(10).pow(frac_part.len() as u32);
        let value = BigRational::new(numer, denom.clone());
        let half_ulp = BigRational::new(BigInt::one(), denom * 2);
        Some(
            Interval {
                lo: &value - &half_ulp,
                hi: &value + &half_ulp,
            }
            .rounded(Some(bits)),
        )
    }

    /// Intersection with another enclosure of the same quantity.
    pub fn intersect(&self, other: &Interval) -> Option<Self> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Whether every point is strictly below every point of `other`.
    pub fn lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    /// Distance bound between midpoints, useful when comparing two enclosures.
    pub fn max_abs_diff(&self, other: &Interval) -> BigRational {
        let a = (&self.hi - &other.lo).abs();
        let b = (&other.hi - &self.lo).abs();
        a.max(b)
    }
}

/// `n mod 2` as a sign: `+1` for even, `-1` for odd.
pub(crate) fn parity_sign(n: usize) -> BigRational {
    if n.is_even() {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt_enclosure_brackets_value() {
        let iv = Interval::sqrt_of_integer(&BigInt::from(2), 64);
        let lo2 = iv.lo() * iv.lo();
        let hi2 = iv.hi() * iv.hi();
        assert!(lo2 < q(2, 1) && q(2, 1) < hi2);
        let exact = Interval::sqrt_of_integer(&BigInt::from(49), 64);
        assert!(exact.is_point());
    }

    #[test]
    fn recip_rejects_zero_straddle() {
        assert!(Interval::new(q(-1, 2), q(1, 2)).recip(None).is_none());
        let r = Interval::new(q(1, 4), q(1, 2)).recip(None).unwrap();
        assert_eq!(r, Interval::new(q(2, 1), q(4, 1)));
    }

    #[test]
    fn decimal_literal_encloses_value() {
        let iv = Interval::from_decimal("0.125", 128).unwrap();
        assert!(iv.contains(&q(1, 8)));
        assert!(iv.width() <= q(2, 1000));
        assert!(Interval::from_decimal("1.2.3", 64).is_none());
        assert!(Interval::from_decimal("abc", 64).is_none());
    }

    #[test]
    fn floor_certification() {
        assert_eq!(Interval::new(q(3, 2), q(7, 4)).floor_certified(), Some(1.into()));
        assert_eq!(Interval::new(q(3, 4), q(5, 4)).floor_certified(), None);
    }

    #[test]
    fn logs_of_huge_integers() {
        let big = BigInt::from(3).pow(2000);
        let expected = 2000.0 * 3f64.ln();
        assert!((bigint_ln(&big) - expected).abs() < 1e-9 * expected);
    }
}
