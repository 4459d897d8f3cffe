//! Mode cones: resonant / far-from-resonance splits and the contracting cones of the shift.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{l1, FieldError, Mode};

/// Which part of a cone projection to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Resonant modes (`|ψ·k| ≤ σ‖k‖`) or contracting modes (`‖T_a k‖ ≤ κ‖k‖`).
    Inside,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeSpec {
    /// Resonant cone `{k : |ψ·k| ≤ σ‖k‖₁}` around the direction orthogonal to `ψ`.
    FarResonant { psi: [Complex64; 2], sigma: f64 },
    /// Contracting cone `{k : ‖T_a k‖₁ ≤ κ‖k‖₁}` of the shift `T_a = [[0,1],[1,a]]`.
    Kappa { a: u64, kappa: f64 },
}

impl ConeSpec {
    pub fn far_resonant(psi: [Complex64; 2], sigma: f64) -> Result<ConeSpec, FieldError> {
        if !(sigma > 0.0) || !(sigma < l1(&psi)) {
            return Err(FieldError::InvalidCone(format!(
                "need 0 < sigma < |psi| (sigma = {sigma}, |psi| = {})",
                l1(&psi)
            )));
        }
        Ok(ConeSpec::FarResonant { psi, sigma })
    }

    /// Resonant cone of a real frequency vector.
    pub fn resonant(psi: [f64; 2], sigma: f64) -> Result<ConeSpec, FieldError> {
        Self::far_resonant([psi[0].into(), psi[1].into()], sigma)
    }

    pub fn kappa(a: u64, kappa: f64) -> Result<ConeSpec, FieldError> {
        if a == 0 || !(kappa > 0.5 && kappa < 1.0) {
            return Err(FieldError::InvalidCone(format!("need a >= 1 and 1/2 < kappa < 1 (a = {a}, kappa = {kappa})")));
        }
        Ok(ConeSpec::Kappa { a, kappa })
    }

    pub fn contains(&self, k: Mode) -> bool {
        let norm = (k[0].abs() + k[1].abs()) as f64;
        match *self {
            ConeSpec::FarResonant { psi, sigma } => {
                let dot = psi[0] * k[0] as f64 + psi[1] * k[1] as f64;
                dot.norm() <= sigma * norm
            }
            ConeSpec::Kappa { a, kappa } => {
                let image = shift_mode(k, a as i64);
                (image[0].abs() + image[1].abs()) as f64 <= kappa * norm
            }
        }
    }

    pub fn keeps(&self, k: Mode, side: Side) -> bool {
        self.contains(k) == (side == Side::Inside)
    }
}

/// `T_a k = (k₂, k₁ + a k₂)`; `T_a` is symmetric, so this is also its transpose action.
pub fn shift_mode(k: Mode, a: i64) -> Mode {
    [k[1], k[0] + a * k[1]]
}

/// `ψ · k` for a complex frequency.
pub fn dot_mode(psi: &[Complex64; 2], k: Mode) -> Complex64 {
    psi[0] * k[0] as f64 + psi[1] * k[1] as f64
}
