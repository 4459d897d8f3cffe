//! Seeded initial perturbations of a constant field `ω₀ = (1, α₀)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::orthogonal;
use crate::fourier_field::{real_coeff, ConeSpec, FieldError, FourierVectorField, Mode, Side};

/// Kind and `‖·‖_{ρ′}` size of a perturbation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Perturbation {
    None,
    /// `φ ω₀` with `φ` real, zero-mean and supported on resonant modes.
    /// Orbits are only reparametrised, so the winding ratio stays `α₀`.
    Resonant(f64),
    /// Constant `δ Ω₀` along the expanding direction.
    Unstable(f64),
    /// Half generic resonant, half far-from-resonance.
    Mixed(f64),
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Perturbation::None => write!(f, "none"),
            Perturbation::Resonant(a) => write!(f, "resonant:{a:e}"),
            Perturbation::Unstable(a) => write!(f, "unstable:{a:e}"),
            Perturbation::Mixed(a) => write!(f, "mixed:{a:e}"),
        }
    }
}

impl FromStr for Perturbation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "none" {
            return Ok(Perturbation::None);
        }
        let (kind, amp) = s.split_once(':').ok_or_else(|| format!("expected kind:amplitude, got {s:?}"))?;
        let amp: f64 = amp.trim().parse().map_err(|e| format!("bad amplitude {amp:?}: {e}"))?;
        if !amp.is_finite() {
            return Err(format!("amplitude must be finite, got {amp}"));
        }
        match kind.trim() {
            "resonant" => Ok(Perturbation::Resonant(amp)),
            "unstable" => Ok(Perturbation::Unstable(amp)),
            "mixed" => Ok(Perturbation::Mixed(amp)),
            other => Err(format!("unknown perturbation kind {other:?}")),
        }
    }
}

/// Modes used for oscillatory perturbations.
const MAX_MODE: i64 = 12;
const MODES_PER_PART: usize = 6;

fn half_plane(k: Mode) -> bool {
    k[0] > 0 || (k[0] == 0 && k[1] > 0)
}

/// Random real field on `count` modes of `candidates`, coefficients `c(k) e^{−ρ′‖k‖}` with `c(k)`
/// from `shape`, rescaled to `‖·‖_{ρ′} = amplitude`.
fn random_real(
    rng: &mut ChaCha8Rng,
    candidates: &[Mode],
    shape: impl Fn(&mut ChaCha8Rng) -> [Complex64; 2],
    amplitude: f64,
    rho_prime: f64,
    truncation: u32,
) -> Result<FourierVectorField, FieldError> {
    let mut f = FourierVectorField::new(rho_prime, truncation)?;
    for &k in candidates.choose_multiple(rng, MODES_PER_PART) {
        let w = (-rho_prime * (k[0].abs() + k[1].abs()) as f64).exp();
        let c = shape(rng);
        f.add_mode(k, [c[0] * w, c[1] * w])?;
        f.add_mode([-k[0], -k[1]], [c[0].conj() * w, c[1].conj() * w])?;
    }
    let norm = f.norm_r(rho_prime);
    Ok(if norm > 0.0 { f.scale(Complex64::new(amplitude / norm, 0.0)) } else { f })
}

fn phase(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen_range(0.5..1.0), rng.gen_range(0.0..std::f64::consts::TAU))
}

impl Perturbation {
    pub fn amplitude(&self) -> f64 {
        match *self {
            Perturbation::None => 0.0,
            Perturbation::Resonant(a) | Perturbation::Unstable(a) | Perturbation::Mixed(a) => a,
        }
    }

    /// The perturbation alone (to be added to `ω₀`), deterministic in `seed`.
    pub fn build(&self, alpha: f64, sigma: f64, rho_prime: f64, truncation: u32, seed: u64) -> Result<FourierVectorField, FieldError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let omega = [1.0, alpha];
        let cone = ConeSpec::resonant([1.0 / alpha, 1.0], sigma / alpha.abs())?;
        let reach = MAX_MODE.min(truncation as i64);
        let mut resonant = Vec::new();
        let mut far = Vec::new();
        for k1 in -reach..=reach {
            let rest = reach - k1.abs();
            for k2 in -rest..=rest {
                let k = [k1, k2];
                if half_plane(k) {
                    if cone.contains(k) {
                        resonant.push(k)
                    } else {
                        far.push(k)
                    }
                }
            }
        }
        let parallel = |rng: &mut ChaCha8Rng| {
            let c = phase(rng);
            [c * omega[0], c * omega[1]]
        };
        let generic = |rng: &mut ChaCha8Rng| [phase(rng), phase(rng)];
        match *self {
            Perturbation::None => FourierVectorField::new(rho_prime, truncation),
            Perturbation::Resonant(a) => random_real(&mut rng, &resonant, parallel, a, rho_prime, truncation),
            Perturbation::Unstable(a) => {
                let big = orthogonal(alpha);
                FourierVectorField::constant([a * big[0], a * big[1]], rho_prime, truncation)
            }
            Perturbation::Mixed(a) => {
                let inside = random_real(&mut rng, &resonant, generic, a / 2.0, rho_prime, truncation)?;
                let outside = random_real(&mut rng, &far, generic, a / 2.0, rho_prime, truncation)?;
                debug_assert!(outside.project(&cone, Side::Inside).is_empty());
                Ok(inside.add(&outside))
            }
        }
    }

    /// `ω₀` plus the perturbation.
    pub fn initial_field(&self, alpha: f64, sigma: f64, rho_prime: f64, truncation: u32, seed: u64) -> Result<FourierVectorField, FieldError> {
        let mut base = FourierVectorField::new(rho_prime, truncation)?;
        base.set([0, 0], real_coeff([1.0, alpha]))?;
        Ok(base.add(&self.build(alpha, sigma, rho_prime, truncation, seed)?))
    }
}
