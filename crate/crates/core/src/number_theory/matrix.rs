//! Integer 2×2 matrices of determinant ±1 and the change-of-basis generators.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer matrix `[[a, b], [c, d]]` with `ad - bc = ±1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GL2ZMatrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl GL2ZMatrix {
    /// Returns `None` unless the determinant is `±1`.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Option<Self> {
        let det = &a * &d - &b * &c;
        (det.abs().is_one()).then_some(GL2ZMatrix { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Option<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1).unwrap()
    }

    /// Lower shear `[[1,0],[1,1]]`; its inverse lowers the slope by one.
    pub fn shear() -> Self {
        Self::from_i64(1, 0, 1, 1).unwrap()
    }

    /// Coordinate swap `[[0,1],[1,0]]`.
    pub fn swap() -> Self {
        Self::from_i64(0, 1, 1, 0).unwrap()
    }

    /// Reflection `[[-1,0],[0,1]]`.
    pub fn reflect() -> Self {
        Self::from_i64(-1, 0, 0, 1).unwrap()
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Entries as `i64` when they all fit.
    pub fn to_i64(&self) -> Option<[[i64; 2]; 2]> {
        Some([
            [self.a.to_i64()?, self.b.to_i64()?],
            [self.c.to_i64()?, self.d.to_i64()?],
        ])
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, rhs: &GL2ZMatrix) -> GL2ZMatrix {
        GL2ZMatrix {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    pub fn inverse(&self) -> GL2ZMatrix {
        let det = self.det();
        GL2ZMatrix {
            a: &self.d * &det,
            b: -&self.b * &det,
            c: -&self.c * &det,
            d: &self.a * &det,
        }
    }

    pub fn transpose(&self) -> GL2ZMatrix {
        GL2ZMatrix {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }
}

impl fmt::Display for GL2ZMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// The shift generator `[[0,1],[1,a]]`.
pub fn t_matrix(a: &BigInt) -> GL2ZMatrix {
    GL2ZMatrix {
        a: BigInt::zero(),
        b: BigInt::one(),
        c: BigInt::one(),
        d: a.clone(),
    }
}

/// Eigen-data of `[[0,1],[1,a]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftEigen {
    /// Expanding eigenvalue `(a + √(a²+4))/2`.
    pub lambda: f64,
    /// Contracting eigenvalue `-1/λ`.
    pub lambda_stable: f64,
    pub unstable: [f64; 2],
    pub stable: [f64; 2],
}

pub fn t_matrix_eigen(a: f64) -> ShiftEigen {
    let lambda = 0.5 * (a + (a * a + 4.0).sqrt());
    ShiftEigen {
        lambda,
        lambda_stable: -1.0 / lambda,
        unstable: [1.0, lambda],
        stable: [1.0, -1.0 / lambda],
    }
}
