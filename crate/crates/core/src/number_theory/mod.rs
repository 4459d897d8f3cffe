//! Exact continued-fraction arithmetic: slopes, expansions, convergent
//! matrices and the diophantine diagnostics built on them.

mod cf;
mod interval;
mod matrix;
mod probe;
mod slope;
mod surd;

pub use cf::{cf_expand, CfExpansion, Periodicity, Termination};
pub use interval::{bigint_ln, rational_ln_abs, rational_to_f64, Interval};
pub use matrix::{t_matrix, t_matrix_eigen, GL2ZMatrix, ShiftEigen};
pub use probe::{diophantine_probe, DiophantineProbe, ProbeRow};
pub use slope::{gauss_step, CertifiedReal, Slope, DEFAULT_PRECISION_BITS};
pub use surd::QuadraticSurd;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("slope is zero")]
    ZeroSlope,
    #[error("term count must be at least 1")]
    InvalidTermCount,
    #[error("rational expansion ended after {available} coefficients")]
    RationalExhausted { available: usize },
    #[error("precision exhausted after {available} certified coefficients")]
    PrecisionExhausted { available: usize },
    #[error("index {index} out of range ({available} coefficients available)")]
    IndexOutOfRange { index: i64, available: usize },
    #[error("denominator vanishes at the input slope")]
    PoleAtInput,
    #[error("Gauss map undefined at zero")]
    ZeroInput,
    #[error("invalid slope: {0}")]
    InvalidSlope(String),
}

/// Möbius action `α ↦ (c + dα)/(a + bα)` of `M = [[a, b], [c, d]]`.
pub fn act_on_slope(m: &GL2ZMatrix, alpha: &Slope) -> Result<Slope, CfError> {
    alpha.act(m)
}
