//! Frequency slopes: exact rationals, exact quadratic irrationals, or certified reals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::Interval;
use super::matrix::GL2ZMatrix;
use super::surd::QuadraticSurd;
use super::CfError;

/// Default working precision, in bits, for non-exact evaluations.
pub const DEFAULT_PRECISION_BITS: u32 = 256;

/// A real number given by an enclosing interval, computed at `bits` of precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedReal {
    pub enclosure: Interval,
    pub bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slope {
    Rational(BigRational),
    Quadratic(QuadraticSurd),
    Real(CertifiedReal),
}

impl Slope {
    pub fn golden() -> Slope {
        Slope::Quadratic(QuadraticSurd::golden())
    }

    pub fn sqrt2() -> Slope {
        Slope::Quadratic(QuadraticSurd::from_i64(0, 1, 2, 1).unwrap())
    }

    /// `1 + √2`.
    pub fn silver() -> Slope {
        Slope::Quadratic(QuadraticSurd::from_i64(1, 1, 2, 1).unwrap())
    }

    pub fn rational(p: i64, q: i64) -> Result<Slope, CfError> {
        if q == 0 {
            return Err(CfError::InvalidSlope("zero denominator".into()));
        }
        Ok(Slope::Rational(BigRational::new(p.into(), q.into())))
    }

    /// `(u + v√d)/w`; collapses to a rational when `v = 0` or `d` is a perfect square.
    pub fn quadratic(u: i64, v: i64, d: i64, w: i64) -> Result<Slope, CfError> {
        Self::quadratic_big(u.into(), v.into(), d.into(), w.into())
    }

    pub fn quadratic_big(u: BigInt, v: BigInt, d: BigInt, w: BigInt) -> Result<Slope, CfError> {
        if w.is_zero() {
            return Err(CfError::InvalidSlope("zero denominator".into()));
        }
        if d.is_negative() {
            return Err(CfError::InvalidSlope("negative radicand".into()));
        }
        if let Some(s) = QuadraticSurd::new(u.clone(), v.clone(), d.clone(), w.clone()) {
            return Ok(Slope::Quadratic(s));
        }
        // Rational after all: v = 0 or d a square.
        let root = num_integer::Roots::sqrt(&d);
        if &root * &root != d {
            return Err(CfError::InvalidSlope("degenerate quadratic form".into()));
        }
        Ok(Slope::Rational(BigRational::new(u + v * root, w)))
    }

    /// Decimal literal read as an enclosure of a real number.
    pub fn decimal(text: &str, bits: u32) -> Result<Slope, CfError> {
        let enclosure = Interval::from_decimal(text, bits)
            .ok_or_else(|| CfError::InvalidSlope(format!("not a decimal literal: {text}")))?;
        Ok(Slope::Real(CertifiedReal { enclosure, bits }))
    }

    /// Working precision used for numeric enclosures of this slope.
    pub fn bits(&self) -> u32 {
        match self {
            Slope::Real(r) => r.bits,
            _ => DEFAULT_PRECISION_BITS,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Slope::Real(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Slope::Rational(q) => q.is_zero(),
            Slope::Quadratic(_) => false,
            Slope::Real(r) => r.enclosure.is_point() && r.enclosure.lo().is_zero(),
        }
    }

    /// Certified sign: `Some(true)` positive, `Some(false)` negative, `None` undecided or zero.
    pub fn is_positive(&self) -> Option<bool> {
        match self {
            Slope::Rational(q) => (!q.is_zero()).then(|| q.is_positive()),
            Slope::Quadratic(s) => Some(s.is_positive()),
            Slope::Real(r) => {
                if r.enclosure.is_positive() {
                    Some(true)
                } else if r.enclosure.hi().is_negative() {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    pub fn to_interval(&self, bits: u32) -> Interval {
        match self {
            Slope::Rational(q) => Interval::point(q.clone()),
            Slope::Quadratic(s) => s.to_interval(bits),
            Slope::Real(r) => r.enclosure.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Slope::Quadratic(s) => s.to_f64(),
            other => other.to_interval(DEFAULT_PRECISION_BITS).to_f64(),
        }
    }

    /// Certified integer part.
    pub fn floor(&self) -> Result<BigInt, CfError> {
        match self {
            Slope::Rational(q) => Ok(q.floor().to_integer()),
            Slope::Quadratic(s) => Ok(s.floor()),
            Slope::Real(r) => r
                .enclosure
                .floor_certified()
                .ok_or(CfError::PrecisionExhausted { available: 0 }),
        }
    }

    /// Möbius action `(c + dα)/(a + bα)` of `[[a, b], [c, d]]`.
    pub fn act(&self, m: &GL2ZMatrix) -> Result<Slope, CfError> {
        let [a, b, c, d] = m.entries();
        match self {
            Slope::Rational(x) => {
                let den = BigRational::from_integer(a.clone()) + BigRational::from_integer(b.clone()) * x;
                if den.is_zero() {
                    return Err(CfError::PoleAtInput);
                }
                let num = BigRational::from_integer(c.clone()) + BigRational::from_integer(d.clone()) * x;
                Ok(Slope::Rational(num / den))
            }
            Slope::Quadratic(s) => s.mobius(a, b, c, d).map(Slope::Quadratic).ok_or(CfError::PoleAtInput),
            Slope::Real(r) => {
                let bits = Some(r.bits);
                let den = r
                    .enclosure
                    .mul_rational(&BigRational::from_integer(b.clone()), None)
                    .add_rational(&BigRational::from_integer(a.clone()), None);
                let inv = den.recip(bits).ok_or(CfError::PoleAtInput)?;
                let num = r
                    .enclosure
                    .mul_rational(&BigRational::from_integer(d.clone()), None)
                    .add_rational(&BigRational::from_integer(c.clone()), None);
                Ok(Slope::Real(CertifiedReal {
                    enclosure: num.mul(&inv, bits),
                    bits: r.bits,
                }))
            }
        }
    }

    /// Negation (reflection of the frequency).
    pub fn neg(&self) -> Slope {
        self.act(&GL2ZMatrix::reflect()).expect("reflection has no pole")
    }
}

/// One step of the Gauss map `x ↦ {1/x}`.
pub fn gauss_step(x: &Slope) -> Result<Slope, CfError> {
    if x.is_zero() {
        return Err(CfError::ZeroInput);
    }
    if x.is_positive() == Some(false) {
        return Err(CfError::InvalidSlope("Gauss map needs a positive input".into()));
    }
    let inv = x.act(&GL2ZMatrix::swap()).map_err(|_| CfError::ZeroInput)?;
    let a = inv.floor()?;
    inv.act(&GL2ZMatrix::new(BigInt::one(), BigInt::zero(), -a, BigInt::one()).unwrap())
}

impl FromStr for Slope {
    type Err = CfError;

    /// Accepts `golden`, `sqrt2`, `silver`, `p/q`, `u,v,d,w`, an integer, or a
    /// decimal literal optionally suffixed with `@bits`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "golden" | "gamma" => return Ok(Slope::golden()),
            "sqrt2" => return Ok(Slope::sqrt2()),
            "silver" | "1+sqrt2" => return Ok(Slope::silver()),
            _ => {}
        }
        let bad = || CfError::InvalidSlope(format!("cannot parse slope {t:?}"));
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(CfError::InvalidSlope("zero denominator".into()));
            }
            return Ok(Slope::Rational(BigRational::new(p, q)));
        }
        if t.contains(',') {
            let parts: Vec<BigInt> = t
                .split(',')
                .map(|p| p.trim().parse::<BigInt>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad())?;
            let [u, v, d, w]: [BigInt; 4] = parts.try_into().map_err(|_| bad())?;
            return Slope::quadratic_big(u, v, d, w);
        }
        let (body, bits) = match t.split_once('@') {
            Some((b, p)) => (b, p.trim().parse::<u32>().map_err(|_| bad())?),
            None => (t, DEFAULT_PRECISION_BITS),
        };
        if !body.contains('.') {
            let n: BigInt = body.parse().map_err(|_| bad())?;
            return Ok(Slope::Rational(BigRational::from_integer(n)));
        }
        Slope::decimal(body, bits)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Rational(q) => write!(f, "{q}"),
            Slope::Quadratic(s) => write!(f, "{s}"),
            Slope::Real(r) => write!(f, "{:.17}@{}", r.enclosure.to_f64(), r.bits),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_and_literal_forms() {
        assert_eq!("golden".parse::<Slope>().unwrap(), Slope::golden());
        assert_eq!("0,1,2,1".parse::<Slope>().unwrap(), Slope::sqrt2());
        assert_eq!("5/2".parse::<Slope>().unwrap(), Slope::rational(5, 2).unwrap());
        assert_eq!("3".parse::<Slope>().unwrap(), Slope::rational(3, 1).unwrap());
        assert!(matches!("0.7182@128".parse::<Slope>().unwrap(), Slope::Real(r) if r.bits == 128));
        assert!("1/0".parse::<Slope>().is_err());
        assert!("x".parse::<Slope>().is_err());
    }

    #[test]
    fn square_radicand_collapses_to_rational() {
        assert_eq!(Slope::quadratic(1, 1, 4, 3).unwrap(), Slope::rational(1, 1).unwrap());
    }

    #[test]
    fn basic_generators_on_slopes() {
        let g = Slope::golden();
        let down = g.act(&GL2ZMatrix::shear().inverse()).unwrap();
        assert_eq!(down, Slope::quadratic(-1, 1, 5, 2).unwrap());
        let sw = g.act(&GL2ZMatrix::swap()).unwrap();
        assert_eq!(sw, down);
        assert_eq!(g.act(&GL2ZMatrix::reflect()).unwrap(), Slope::quadratic(-1, -1, 5, 2).unwrap());
        let half = Slope::rational(1, 2).unwrap();
        assert_eq!(half.act(&GL2ZMatrix::swap()).unwrap(), Slope::rational(2, 1).unwrap());
        let zero = Slope::rational(0, 1).unwrap();
        assert_eq!(zero.act(&GL2ZMatrix::swap()), Err(CfError::PoleAtInput));
    }

    #[test]
    fn gauss_map_values() {
        let inv_golden = Slope::quadratic(-1, 1, 5, 2).unwrap();
        assert_eq!(gauss_step(&inv_golden).unwrap(), inv_golden);
        assert_eq!(gauss_step(&Slope::rational(1, 2).unwrap()).unwrap(), Slope::rational(0, 1).unwrap());
        assert_eq!(gauss_step(&Slope::rational(2, 5).unwrap()).unwrap(), Slope::rational(1, 2).unwrap());
        assert_eq!(gauss_step(&Slope::rational(0, 1).unwrap()), Err(CfError::ZeroInput));
    }
}
