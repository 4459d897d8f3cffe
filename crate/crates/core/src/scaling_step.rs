//! The linear step: transport of a resonant field by the shift `T_a = [[0,1],[1,a]]`.
//!
//! Modes move as `k ↦ T_a k` and coefficients as `f ↦ T_a⁻¹ f`, i.e. the
//! field becomes `T_a⁻¹ X(T_a θ)`. On the contracting cone
//! `‖T_a k‖₁ ≤ κ‖k‖₁` this trades width `ρ′` for the larger width `ρ`,
//! which is where analyticity improves.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fourier_field::{mode_norm, shift_mode, FourierVectorField, Mode};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ScaleError {
    #[error("mode {mode:?} leaves the contracting cone: |T k|/|k| = {ratio} > kappa = {kappa}")]
    ConeViolation { mode: Mode, ratio: f64, kappa: f64 },
    #[error("need kappa*rho < rho' with positive widths (rho = {rho}, rho' = {rho_prime}, kappa = {kappa})")]
    DomainError { rho: f64, rho_prime: f64, kappa: f64 },
    #[error("partial quotient must be positive")]
    ZeroQuotient,
}

/// Target width `ρ`, source width `ρ′` and cone factor `κ`, shared by every step of an orbit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepWidths {
    pub rho: f64,
    pub rho_prime: f64,
    pub kappa: f64,
}

/// Default resonance half-width.
pub const DEFAULT_SIGMA: f64 = 0.1;

impl Default for StepWidths {
    fn default() -> Self {
        StepWidths { rho: 1.0, rho_prime: 0.9, kappa: default_kappa(DEFAULT_SIGMA) }
    }
}

impl StepWidths {
    pub fn validate(&self) -> Result<(), ScaleError> {
        let ok = self.rho > 0.0
            && self.rho_prime > 0.0
            && self.kappa > 0.0
            && self.kappa < 1.0
            && self.kappa * self.rho < self.rho_prime;
        if ok {
            Ok(())
        } else {
            Err(ScaleError::DomainError { rho: self.rho, rho_prime: self.rho_prime, kappa: self.kappa })
        }
    }

    /// Width lost when passing to derivatives, `δ = κ(ρ′ − κρ)`.
    pub fn cauchy_margin(&self) -> f64 {
        self.kappa * (self.rho_prime - self.kappa * self.rho)
    }
}

/// `κ = 1 − (1 − 3σ)/3`, enough for containment whenever `ω = (1, α)`, `α > 1`, `σ < 1/3`.
pub fn default_kappa(sigma: f64) -> f64 {
    1.0 - (1.0 - 3.0 * sigma) / 3.0
}

/// Smallest `κ` for which the general containment criterion applies to `ω`, `σ`, `a`.
pub fn sufficient_kappa(omega: [f64; 2], sigma: f64, a: u64) -> f64 {
    let a = a as f64;
    let norm = omega[0].abs() + omega[1].abs();
    let gap = (a * (omega[0] - sigma)).min(2.0 * (omega[1] - sigma) - a * (omega[0] + sigma));
    1.0 - gap / norm
}

/// `6πa/(ρ′ − κρ) + 3a`.
pub fn operator_norm_bound(a: u64, widths: &StepWidths) -> Result<f64, ScaleError> {
    widths.validate()?;
    let a = a as f64;
    Ok(6.0 * PI * a / (widths.rho_prime - widths.kappa * widths.rho) + 3.0 * a)
}

/// Shift matrix as used by [`FourierVectorField::change_basis`].
pub fn shift_matrix(a: u64) -> [[i64; 2]; 2] {
    [[0, 1], [1, a as i64]]
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleOutcome {
    /// `T_a⁻¹ X(T_a θ)` at width `ρ`.
    pub field: FourierVectorField,
    /// `norm_ρ′` of the input.
    pub input_norm: f64,
    /// `norm′_ρ` of the output.
    pub output_norm: f64,
    pub bound: f64,
    /// Largest `‖T_a k‖₁ / ‖k‖₁` over the non-constant input modes (0 if there are none).
    pub worst_contraction: f64,
}

impl ScaleOutcome {
    /// `output_norm / input_norm`, or 0 for the zero field.
    pub fn gain(&self) -> f64 {
        if self.input_norm == 0.0 {
            0.0
        } else {
            self.output_norm / self.input_norm
        }
    }

    /// Fraction of the bound left unused.
    pub fn margin(&self) -> f64 {
        1.0 - self.gain() / self.bound
    }
}

/// Applies the shift to a field whose modes all lie in the contracting cone.
///
/// Modes outside the cone are rejected rather than dropped.
pub fn scale_step(x: &FourierVectorField, a: u64, widths: &StepWidths) -> Result<ScaleOutcome, ScaleError> {
    if a == 0 {
        return Err(ScaleError::ZeroQuotient);
    }
    let bound = operator_norm_bound(a, widths)?;
    let mut worst = 0.0f64;
    for (k, _) in x.iter() {
        if k == [0, 0] {
            continue;
        }
        let ratio = mode_norm(shift_mode(k, a as i64)) as f64 / mode_norm(k) as f64;
        if ratio > widths.kappa {
            return Err(ScaleError::ConeViolation { mode: k, ratio, kappa: widths.kappa });
        }
        worst = worst.max(ratio);
    }
    let field = x
        .change_basis(shift_matrix(a))
        .with_width(widths.rho)
        .expect("validated width");
    Ok(ScaleOutcome {
        input_norm: x.norm_r(widths.rho_prime),
        output_norm: field.norm_prime_r(widths.rho),
        field,
        bound,
        worst_contraction: worst,
    })
}

/// Lines `k₂ = m k₁`, `k₂ = l k₁` bounding the resonant cone and `k₂ = s k₁`, `k₂ = r k₁` bounding the contracting cone.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySlopes {
    pub m: f64,
    pub l: f64,
    pub s: f64,
    pub r: f64,
}

impl BoundarySlopes {
    pub fn new(omega: [f64; 2], sigma: f64, a: u64, kappa: f64) -> Self {
        let a = a as f64;
        BoundarySlopes {
            m: -(omega[0] - sigma) / (omega[1] + sigma),
            l: -(omega[0] + sigma) / (omega[1] - sigma),
            s: -(1.0 - kappa) / (a - 1.0 + kappa),
            r: -(1.0 + kappa) / (a + 1.0 - kappa),
        }
    }

    /// `r ≤ l ≤ m ≤ s`: the resonant wedge sits inside the contracting wedge.
    pub fn nested(&self) -> bool {
        self.r <= self.l && self.l <= self.m && self.m <= self.s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainmentCertificate {
    pub passed: bool,
    /// First resonant mode (lexicographic) that is not contracted.
    pub witness: Option<Mode>,
    /// Number of non-zero resonant modes examined.
    pub checked: usize,
    pub worst_ratio: f64,
    pub slopes: BoundarySlopes,
}

/// Checks `‖T_a k‖₁ ≤ κ‖k‖₁` for every non-zero `k` with `|ω·k| ≤ σ‖k‖₁` and `‖k‖₁ ≤ k_max`.
pub fn cone_containment_certificate(omega: [f64; 2], sigma: f64, a: u64, kappa: f64, k_max: i64) -> ContainmentCertificate {
    let mut witness = None;
    let mut checked = 0;
    let mut worst = 0.0f64;
    for k1 in -k_max..=k_max {
        let rest = k_max - k1.abs();
        for k2 in -rest..=rest {
            let k = [k1, k2];
            let n = mode_norm(k);
            if n == 0 || (omega[0] * k1 as f64 + omega[1] * k2 as f64).abs() > sigma * n as f64 {
                continue;
            }
            checked += 1;
            let image = mode_norm(shift_mode(k, a as i64));
            worst = worst.max(image as f64 / n as f64);
            if image as f64 > kappa * n as f64 && witness.is_none() {
                witness = Some(k);
            }
        }
    }
    ContainmentCertificate {
        passed: witness.is_none(),
        witness,
        checked,
        worst_ratio: worst,
        slopes: BoundarySlopes::new(omega, sigma, a, kappa),
    }
}
