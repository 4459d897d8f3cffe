//! Collocation on complex-shifted grids.
//!
//! Sampling `g = Σ c_k e^{2πik·θ}` on `θ_j + i y_s`, with `y_s = −r s/(2π)`
//! and `s ∈ {±1}²`, gives discrete Fourier coefficients `c_k e^{r s·k}`. For
//! `k` in the closed quadrant of `s` this is the weighted coefficient
//! `c_k e^{r‖k‖₁}`, so each mode is read from the grid of its own quadrant and
//! round-off stays relative to the weighted norm instead of being amplified by
//! `e^{r‖k‖₁}`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::fourier_field::{mode_norm, Mode};

pub(crate) const QUADRANTS: [[i64; 2]; 4] = [[1, 1], [1, -1], [-1, 1], [-1, -1]];

/// Quadrant whose grid carries the weighted coefficient of `k` (zero components count as positive).
pub(crate) fn quadrant(k: Mode) -> usize {
    (if k[0] >= 0 { 0 } else { 2 }) + (if k[1] >= 0 { 0 } else { 1 })
}

/// Smallest `2^a 3^b 5^c ≥ n`.
pub fn smooth_size(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

pub(crate) struct Grid {
    m: usize,
    r: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub fn new(m: usize, r: f64) -> Self {
        let mut planner = FftPlanner::new();
        Grid { m, r, forward: planner.plan_fft_forward(m), inverse: planner.plan_fft_inverse(m) }
    }

    pub fn points(&self) -> usize {
        self.m * self.m
    }

    pub fn index(&self, k: Mode) -> usize {
        let m = self.m as i64;
        (k[0].rem_euclid(m) * m + k[1].rem_euclid(m)) as usize
    }

    /// Grid point `θ_j + i y_s` for flat index `j`.
    pub fn point(&self, q: usize, j: usize) -> [Complex64; 2] {
        let s = QUADRANTS[q];
        let shift = -self.r / (2.0 * PI);
        let m = self.m as f64;
        [
            Complex64::new((j / self.m) as f64 / m, shift * s[0] as f64),
            Complex64::new((j % self.m) as f64 / m, shift * s[1] as f64),
        ]
    }

    fn transpose(&self, data: &mut [Complex64]) {
        for i in 0..self.m {
            for j in i + 1..self.m {
                data.swap(i * self.m + j, j * self.m + i);
            }
        }
    }

    fn fft2(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        plan.process(data);
        self.transpose(data);
        plan.process(data);
        self.transpose(data);
    }

    /// Values on grid `q` of the function with weighted coefficients `terms`.
    pub fn synthesize(&self, q: usize, terms: impl Iterator<Item = (Mode, Complex64)>) -> Vec<Complex64> {
        let s = QUADRANTS[q];
        let mut data = vec![Complex64::new(0.0, 0.0); self.points()];
        for (k, w) in terms {
            let excess = (s[0] * k[0] + s[1] * k[1] - mode_norm(k)) as f64;
            let factor = if excess == 0.0 { 1.0 } else { (self.r * excess).exp() };
            data[self.index(k)] += w * factor;
        }
        self.fft2(&mut data, &self.inverse);
        data
    }

    /// Discrete Fourier coefficients of grid values; entry `index(k)` is weighted for `k` in quadrant `q`.
    pub fn analyze(&self, mut values: Vec<Complex64>) -> Vec<Complex64> {
        self.fft2(&mut values, &self.forward);
        let scale = 1.0 / self.points() as f64;
        for v in values.iter_mut() {
            *v *= scale;
        }
        values
    }

    /// Weighted `ℓ₁` mass of representable modes in quadrant `q` beyond `‖k‖₁ = n`.
    pub fn tail_mass(&self, q: usize, spectra: &[Vec<Complex64>], n: i64) -> f64 {
        let half = (self.m as i64 - 1) / 2;
        let s = QUADRANTS[q];
        let mut mass = 0.0;
        for a in 0..=half {
            for b in 0..=half {
                let k = [s[0] * a, s[1] * b];
                if a + b <= n || quadrant(k) != q {
                    continue;
                }
                let idx = self.index(k);
                mass += spectra.iter().map(|sp| sp[idx].norm()).sum::<f64>();
            }
        }
        mass
    }
}
