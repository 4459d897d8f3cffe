//! Truncated Fourier representation of vector fields on the 2-torus.
//!
//! A field is `X(θ) = Σ_k f_k e^{2πi k·θ}` with `k ∈ ℤ²`, `f_k ∈ ℂ²` and
//! period 1 in each coordinate. Norms use `ℓ₁` both on modes and on
//! coefficients.

mod cone;
mod winding;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cone::{dot_mode, shift_mode, ConeSpec, Side};
pub use winding::{winding_ratio, WindingOptions, WindingOutcome};

/// Integer Fourier mode `(k₁, k₂)`; lexicographic order.
pub type Mode = [i64; 2];
/// Vector coefficient in `ℂ²`.
pub type Coeff = [Complex64; 2];

pub const ZERO: Coeff = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];

/// Default `ℓ₁` radius of the admitted mode set.
pub const DEFAULT_TRUNCATION: u32 = 32;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FieldError {
    #[error("width must be positive, got {0}")]
    InvalidWidth(f64),
    #[error("mode {mode:?} exceeds truncation {truncation}")]
    ModeOutsideTruncation { mode: Mode, truncation: u32 },
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("field is not real-valued on the real torus")]
    NotReal,
    #[error("winding ratio inconclusive: {0}")]
    Inconclusive(String),
    #[error("malformed field document: {0}")]
    Format(String),
}

pub fn mode_norm(k: Mode) -> i64 {
    k[0].abs() + k[1].abs()
}

/// `ℓ₁` norm on `ℂ²`.
pub fn l1(c: &Coeff) -> f64 {
    c[0].norm() + c[1].norm()
}

pub fn real_coeff(v: [f64; 2]) -> Coeff {
    [Complex64::new(v[0], 0.0), Complex64::new(v[1], 0.0)]
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierVectorField {
    modes: BTreeMap<Mode, Coeff>,
    width: f64,
    truncation: u32,
    discarded: f64,
}

impl FourierVectorField {
    pub fn new(width: f64, truncation: u32) -> Result<Self, FieldError> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(FieldError::InvalidWidth(width));
        }
        Ok(FourierVectorField {
            modes: BTreeMap::new(),
            width,
            truncation,
            discarded: 0.0,
        })
    }

    pub fn constant(omega: [f64; 2], width: f64, truncation: u32) -> Result<Self, FieldError> {
        let mut f = Self::new(width, truncation)?;
        f.set([0, 0], real_coeff(omega))?;
        Ok(f)
    }

    pub fn from_modes<I>(modes: I, width: f64, truncation: u32) -> Result<Self, FieldError>
    where
        I: IntoIterator<Item = (Mode, Coeff)>,
    {
        let mut f = Self::new(width, truncation)?;
        for (k, c) in modes {
            f.add_mode(k, c)?;
        }
        Ok(f)
    }

    /// Same modes, empty; keeps width and truncation.
    pub fn empty_like(&self) -> Self {
        FourierVectorField {
            modes: BTreeMap::new(),
            width: self.width,
            truncation: self.truncation,
            discarded: 0.0,
        }
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Accumulated `ℓ₁` mass (at this field's width) of modes dropped by truncation.
    pub fn discarded(&self) -> f64 {
        self.discarded
    }

    pub fn set_discarded(&mut self, mass: f64) {
        self.discarded = mass;
    }

    pub fn with_width(mut self, width: f64) -> Result<Self, FieldError> {
        if !(width > 0.0) {
            return Err(FieldError::InvalidWidth(width));
        }
        self.width = width;
        Ok(self)
    }

    pub fn admits(&self, k: Mode) -> bool {
        mode_norm(k) <= self.truncation as i64
    }

    /// Overwrites the coefficient of `k`; zero coefficients are stored as absent.
    pub fn set(&mut self, k: Mode, c: Coeff) -> Result<(), FieldError> {
        if !self.admits(k) {
            return Err(FieldError::ModeOutsideTruncation { mode: k, truncation: self.truncation });
        }
        if c == ZERO {
            self.modes.remove(&k);
        } else {
            self.modes.insert(k, c);
        }
        Ok(())
    }

    pub fn add_mode(&mut self, k: Mode, c: Coeff) -> Result<(), FieldError> {
        let cur = self.get(k);
        self.set(k, [cur[0] + c[0], cur[1] + c[1]])
    }

    /// Adds a coefficient, recording it as discarded mass when `k` is not admitted.
    pub fn add_or_discard(&mut self, k: Mode, c: Coeff) {
        if self.admits(k) {
            self.add_mode(k, c).expect("admitted mode");
        } else {
            self.discarded += l1(&c) * (self.width * mode_norm(k) as f64).exp();
        }
    }

    pub fn get(&self, k: Mode) -> Coeff {
        self.modes.get(&k).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Mode, Coeff)> + '_ {
        self.modes.iter().map(|(k, c)| (*k, *c))
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Largest `‖k‖₁` present.
    pub fn max_mode_norm(&self) -> i64 {
        self.modes.keys().map(|k| mode_norm(*k)).max().unwrap_or(0)
    }

    /// Spatial average `f₀`.
    pub fn average(&self) -> Coeff {
        self.get([0, 0])
    }

    /// `(I - E) X`: the field without its average.
    pub fn oscillatory(&self) -> Self {
        let mut out = self.clone();
        out.modes.remove(&[0, 0]);
        out
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(Mode, Coeff) -> Coeff) -> Self {
        let mut out = self.empty_like();
        out.discarded = self.discarded;
        for (k, c) in self.iter() {
            out.set(k, f(k, c)).expect("same mode set");
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map_coefficients(|_, c| [c[0] * s, c[1] * s])
    }

    /// `self + s·other`, keeping this field's width and truncation.
    pub fn axpy(&self, s: Complex64, other: &FourierVectorField) -> Self {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.add_or_discard(k, [c[0] * s, c[1] * s]);
        }
        out
    }

    pub fn add(&self, other: &FourierVectorField) -> Self {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &FourierVectorField) -> Self {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    /// Subtracts a constant vector from the average.
    pub fn sub_constant(&self, v: [f64; 2]) -> Self {
        let mut out = self.clone();
        out.add_mode([0, 0], real_coeff([-v[0], -v[1]])).expect("zero mode is admitted");
        out
    }

    /// `Σ_k ‖f_k‖₁ e^{r‖k‖₁}`.
    pub fn norm_r(&self, r: f64) -> f64 {
        // Folding from +0 keeps the norm of an empty field at +0 rather than -0.
        self.iter().map(|(k, c)| l1(&c) * (r * mode_norm(k) as f64).exp()).fold(0.0, |a, b| a + b)
    }

    /// `Σ_k (1 + 2π‖k‖₁) ‖f_k‖₁ e^{r‖k‖₁}`.
    pub fn norm_prime_r(&self, r: f64) -> f64 {
        self.iter()
            .map(|(k, c)| {
                let n = mode_norm(k) as f64;
                (1.0 + 2.0 * PI * n) * l1(&c) * (r * n).exp()
            })
            .fold(0.0, |a, b| a + b)
    }

    /// Largest coefficient magnitude, unweighted.
    pub fn max_abs(&self) -> f64 {
        self.iter().map(|(_, c)| l1(&c)).fold(0.0, f64::max)
    }

    pub fn project(&self, cone: &ConeSpec, side: Side) -> Self {
        let mut out = self.empty_like();
        for (k, c) in self.iter() {
            if cone.keeps(k, side) {
                out.modes.insert(k, c);
            }
        }
        out
    }

    /// Drops every coefficient with `‖f_k‖₁ ≤ tol`; returns the dropped weighted mass.
    pub fn prune(&mut self, tol: f64, r: f64) -> f64 {
        let mut mass = 0.0;
        self.modes.retain(|k, c| {
            let keep = l1(c) > tol;
            if !keep {
                mass += l1(c) * (r * mode_norm(*k) as f64).exp();
            }
            keep
        });
        mass
    }

    /// Whether `f_{-k} = conj(f_k)` up to `tol` for every mode.
    pub fn is_real(&self, tol: f64) -> bool {
        self.iter().all(|(k, c)| {
            let m = self.get([-k[0], -k[1]]);
            (c[0] - m[0].conj()).norm() + (c[1] - m[1].conj()).norm() <= tol
        })
    }

    /// Replaces the field by its real part `(X + X̄)/2` in coefficient form.
    pub fn real_part(&self) -> Self {
        let mut out = self.empty_like();
        out.discarded = self.discarded;
        for (k, c) in self.iter() {
            let m = self.get([-k[0], -k[1]]);
            let v = [(c[0] + m[0].conj()) * 0.5, (c[1] + m[1].conj()) * 0.5];
            out.set(k, v).unwrap();
            let w = [v[0].conj(), v[1].conj()];
            out.set([-k[0], -k[1]], w).unwrap();
        }
        out
    }

    /// Evaluates at a complex point (diagnostics only).
    pub fn evaluate(&self, z: [Complex64; 2]) -> Coeff {
        let mut out = ZERO;
        for (k, c) in self.iter() {
            let phase = (Complex64::i() * 2.0 * PI * (z[0] * k[0] as f64 + z[1] * k[1] as f64)).exp();
            out[0] += c[0] * phase;
            out[1] += c[1] * phase;
        }
        out
    }

    /// Real part of the field at a real point.
    pub fn evaluate_real(&self, theta: [f64; 2]) -> [f64; 2] {
        let v = self.evaluate([theta[0].into(), theta[1].into()]);
        [v[0].re, v[1].re]
    }

    /// Change of variables by an integer matrix: returns `M⁻¹ X(Mθ)`.
    ///
    /// Modes move as `k ↦ Mᵀk`; coefficients as `f ↦ M⁻¹f`. Modes leaving the
    /// truncation radius are counted in [`discarded`](Self::discarded).
    pub fn change_basis(&self, m: [[i64; 2]; 2]) -> Self {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert!(det == 1 || det == -1, "change of basis must be unimodular");
        let inv = [
            [(m[1][1] * det) as f64, (-m[0][1] * det) as f64],
            [(-m[1][0] * det) as f64, (m[0][0] * det) as f64],
        ];
        let mut out = self.empty_like();
        out.discarded = self.discarded;
        for (k, c) in self.iter() {
            let kt = [m[0][0] * k[0] + m[1][0] * k[1], m[0][1] * k[0] + m[1][1] * k[1]];
            let ct = [c[0] * inv[0][0] + c[1] * inv[0][1], c[0] * inv[1][0] + c[1] * inv[1][1]];
            out.add_or_discard(kt, ct);
        }
        out
    }

    pub fn to_document(&self, map: bool) -> FieldDocument {
        FieldDocument {
            width: self.width,
            truncation: self.truncation,
            map,
            discarded: self.discarded,
            entries: self
                .iter()
                .map(|(k, c)| Entry {
                    k,
                    re: [c[0].re, c[1].re],
                    im: [c[0].im, c[1].im],
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &FieldDocument) -> Result<Self, FieldError> {
        let mut f = Self::from_modes(
            doc.entries.iter().map(|e| {
                (e.k, [Complex64::new(e.re[0], e.im[0]), Complex64::new(e.re[1], e.im[1])])
            }),
            doc.width,
            doc.truncation,
        )?;
        f.discarded = doc.discarded;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document(false)).expect("field serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, FieldError> {
        let doc: FieldDocument = serde_json::from_str(text).map_err(|e| FieldError::Format(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// Serialised form shared by fields and torus maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldDocument {
    pub width: f64,
    pub truncation: u32,
    /// Set for displacement maps `u` of `U = id + u`.
    #[serde(default)]
    pub map: bool,
    #[serde(default)]
    pub discarded: f64,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub k: Mode,
    pub re: [f64; 2],
    pub im: [f64; 2],
}
