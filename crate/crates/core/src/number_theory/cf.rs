//! Continued-fraction expansions with certified tails, convergents and the β/Ã products.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::{parity_sign, Interval};
use super::matrix::{t_matrix, GL2ZMatrix};
use super::slope::Slope;
use super::surd::QuadraticSurd;
use super::CfError;

/// Why an expansion stopped where it did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// All requested coefficients were produced.
    Complete,
    /// The input is rational and its expansion ended early.
    RationalExhausted,
    /// The enclosure of a real input could not certify the next coefficient.
    PrecisionExhausted,
}

/// Eventual periodicity of a quadratic irrational: `α_{n+period} = α_n` for `n ≥ preperiod`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Periodicity {
    pub preperiod: usize,
    pub period: usize,
}

#[derive(Clone, Debug)]
pub struct CfExpansion {
    slope: Slope,
    bits: u32,
    coefficients: Vec<BigInt>,
    tails: Vec<Slope>,
    remainders: Vec<Interval>,
    convergents: Vec<(BigInt, BigInt)>,
    beta: Vec<Interval>,
    atilde: Vec<Interval>,
    periodicity: Option<Periodicity>,
    termination: Termination,
    requested: usize,
}

/// Expands `alpha` into at most `n_terms` coefficients.
///
/// Early termination is not an error here; it is recorded in
/// [`CfExpansion::termination`]. Use [`CfExpansion::require`] to turn a short
/// expansion into `RationalExhausted` / `PrecisionExhausted`.
pub fn cf_expand(alpha: &Slope, n_terms: usize) -> Result<CfExpansion, CfError> {
    if n_terms == 0 {
        return Err(CfError::InvalidTermCount);
    }
    if alpha.is_zero() {
        return Err(CfError::ZeroSlope);
    }
    let bits = alpha.bits();
    let round = (!matches!(alpha, Slope::Rational(_))).then_some(bits);

    let mut cf = CfExpansion {
        slope: alpha.clone(),
        bits,
        coefficients: Vec::with_capacity(n_terms),
        tails: Vec::with_capacity(n_terms),
        remainders: Vec::with_capacity(n_terms),
        convergents: Vec::with_capacity(n_terms),
        beta: Vec::with_capacity(n_terms),
        atilde: Vec::with_capacity(n_terms),
        periodicity: None,
        termination: Termination::Complete,
        requested: n_terms,
    };
    let mut seen: HashMap<QuadraticSurd, usize> = HashMap::new();
    let mut tail = alpha.clone();
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    let mut beta = Interval::from_integer(BigInt::one());
    let mut atilde = Interval::from_integer(BigInt::one());

    for n in 0..n_terms {
        let a = match tail.floor() {
            Ok(a) => a,
            Err(_) => {
                cf.termination = Termination::PrecisionExhausted;
                break;
            }
        };
        let shift = GL2ZMatrix::new(BigInt::one(), BigInt::zero(), -a.clone(), BigInt::one()).unwrap();
        let rem = tail.act(&shift)?;
        let rem_iv = rem.to_interval(bits);
        // A real remainder that may be zero cannot be inverted with certainty.
        if matches!(rem, Slope::Real(_)) && !rem_iv.is_positive() {
            cf.termination = Termination::PrecisionExhausted;
            break;
        }
        if n > 0 && !a.is_positive() {
            cf.termination = Termination::PrecisionExhausted;
            break;
        }
        if let (Slope::Quadratic(s), None) = (&tail, cf.periodicity) {
            if let Some(&j) = seen.get(s) {
                cf.periodicity = Some(Periodicity { preperiod: j, period: n - j });
            } else {
                seen.insert(s.clone(), n);
            }
        }

        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        beta = beta.mul(&rem_iv, round);
        atilde = atilde.mul(&tail.to_interval(bits), round);

        cf.coefficients.push(a);
        cf.convergents.push((p.clone(), q.clone()));
        cf.beta.push(beta.clone());
        cf.atilde.push(atilde.clone());
        cf.remainders.push(rem_iv);

        let exhausted = rem.is_zero();
        cf.tails.push(tail);
        if exhausted {
            if n + 1 < n_terms {
                cf.termination = Termination::RationalExhausted;
            }
            break;
        }
        tail = rem.act(&GL2ZMatrix::swap())?;
    }
    if cf.coefficients.is_empty() {
        return Err(CfError::PrecisionExhausted { available: 0 });
    }
    Ok(cf)
}

impl CfExpansion {
    /// Expansion of the finite continued fraction `[a_0; a_1, …, a_N]`.
    ///
    /// The value is expanded again from scratch, so a trailing coefficient 1
    /// is merged into its predecessor.
    pub fn from_coefficients(coefficients: &[BigInt]) -> Result<CfExpansion, CfError> {
        let (last, rest) = coefficients.split_last().ok_or(CfError::InvalidTermCount)?;
        if coefficients.iter().skip(1).any(|a| !a.is_positive()) {
            return Err(CfError::InvalidSlope("partial quotients after the first must be positive".into()));
        }
        let mut value = BigRational::from_integer(last.clone());
        for a in rest.iter().rev() {
            value = BigRational::from_integer(a.clone()) + value.recip();
        }
        cf_expand(&Slope::Rational(value), coefficients.len())
    }

    pub fn slope(&self) -> &Slope {
        &self.slope
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn requested(&self) -> usize {
        self.requested
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn periodicity(&self) -> Option<Periodicity> {
        self.periodicity
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// Errors unless at least `count` coefficients are certified.
    pub fn require(&self, count: usize) -> Result<(), CfError> {
        if count <= self.len() {
            return Ok(());
        }
        let available = self.len();
        Err(match self.termination {
            Termination::RationalExhausted => CfError::RationalExhausted { available },
            Termination::PrecisionExhausted => CfError::PrecisionExhausted { available },
            Termination::Complete => CfError::IndexOutOfRange { index: count as i64 - 1, available },
        })
    }

    fn index(&self, n: i64) -> Result<usize, CfError> {
        if n < 0 || n as usize >= self.len() {
            return Err(CfError::IndexOutOfRange { index: n, available: self.len() });
        }
        Ok(n as usize)
    }

    pub fn coefficient(&self, n: usize) -> Result<&BigInt, CfError> {
        self.index(n as i64).map(|i| &self.coefficients[i])
    }

    /// Tail `α_n = [a_n; a_{n+1}, …]`.
    pub fn tail(&self, n: usize) -> Result<&Slope, CfError> {
        self.index(n as i64).map(|i| &self.tails[i])
    }

    /// Remainder `x_n = α_n - a_n`.
    pub fn remainder(&self, n: usize) -> Result<&Interval, CfError> {
        self.index(n as i64).map(|i| &self.remainders[i])
    }

    /// `(p_n, q_n)`, with `(p_{-1}, q_{-1}) = (1, 0)` and `(p_{-2}, q_{-2}) = (0, 1)`.
    pub fn convergent(&self, n: i64) -> Result<(BigInt, BigInt), CfError> {
        match n {
            -2 => Ok((BigInt::zero(), BigInt::one())),
            -1 => Ok((BigInt::one(), BigInt::zero())),
            _ => self.index(n).map(|i| self.convergents[i].clone()),
        }
    }

    /// `β_n = x_0 x_1 ⋯ x_n`, with `β_{-1} = 1`.
    pub fn beta(&self, n: i64) -> Result<Interval, CfError> {
        if n == -1 {
            return Ok(Interval::from_integer(BigInt::one()));
        }
        self.index(n).map(|i| self.beta[i].clone())
    }

    /// `β_n` recomputed as `(-1)^n (α q_n - p_n)`.
    pub fn beta_from_convergent(&self, n: usize) -> Result<Interval, CfError> {
        let (p, q) = self.convergent(n as i64)?;
        let alpha = self.slope.to_interval(self.bits);
        let round = (!matches!(self.slope, Slope::Rational(_))).then_some(self.bits);
        Ok(alpha
            .mul_rational(&BigRational::from_integer(q), round)
            .add_rational(&BigRational::from_integer(-p), round)
            .mul_rational(&parity_sign(n), None))
    }

    /// `Ã_n = α_0 α_1 ⋯ α_n`, with `Ã_{-1} = 1`.
    pub fn atilde(&self, n: i64) -> Result<Interval, CfError> {
        if n == -1 {
            return Ok(Interval::from_integer(BigInt::one()));
        }
        self.index(n).map(|i| self.atilde[i].clone())
    }

    /// `P_n = T_{a_n} ⋯ T_{a_0}`, rows `(q_{n-1}, p_{n-1})` and `(q_n, p_n)`; `P_{-1} = I`.
    pub fn convergent_matrix(&self, n: i64) -> Result<GL2ZMatrix, CfError> {
        if n == -1 {
            return Ok(GL2ZMatrix::identity());
        }
        self.index(n)?;
        let (p0, q0) = self.convergent(n - 1)?;
        let (p1, q1) = self.convergent(n)?;
        Ok(GL2ZMatrix::new(q0, p0, q1, p1).expect("convergent matrices are unimodular"))
    }

    /// `P_n` as the explicit product `T_{a_n} ⋯ T_{a_0}`.
    pub fn convergent_matrix_product(&self, n: i64) -> Result<GL2ZMatrix, CfError> {
        if n >= 0 {
            self.index(n)?;
        }
        let mut m = GL2ZMatrix::identity();
        for a in self.coefficients.iter().take((n + 1).max(0) as usize) {
            m = t_matrix(a).mul(&m);
        }
        Ok(m)
    }
}
