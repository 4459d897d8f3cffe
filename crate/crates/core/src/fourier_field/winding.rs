//! Winding ratio of a real torus flow, estimated by integrating the lifted orbit.

use std::f64::consts::PI;

use super::{FieldError, FourierVectorField};

#[derive(Clone, Debug, PartialEq)]
pub struct WindingOptions {
    /// Maximum integration time.
    pub horizon: f64,
    /// Allowed `ℓ₁` spread of the unit direction over the stability window and across initial points.
    pub tol: f64,
    /// Displacement `‖Φ_T - θ₀‖₁` required before the direction is read.
    pub growth_threshold: f64,
    /// Fraction of the trajectory (by time) over which the direction must be settled.
    pub window: f64,
    pub initial_points: Vec<[f64; 2]>,
    /// Local error tolerance of the integrator.
    pub step_tol: f64,
    pub max_step: f64,
}

impl Default for WindingOptions {
    fn default() -> Self {
        WindingOptions {
            horizon: 5.0e3,
            tol: 1e-4,
            growth_threshold: 1e3,
            window: 0.1,
            initial_points: vec![[0.0, 0.0], [0.37, 0.11], [0.71, 0.53]],
            step_tol: 1e-10,
            max_step: 0.25,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WindingOutcome {
    /// Orbits escape with a common asymptotic direction.
    Direction {
        /// `ℓ₁`-unit direction, averaged over initial points.
        direction: [f64; 2],
        /// `direction[1] / direction[0]`.
        slope: f64,
        per_point: Vec<[f64; 2]>,
    },
    /// Every orbit stayed in a bounded region up to the horizon (winding ratio 0).
    Bounded { max_displacement: f64 },
}

/// Real-valued evaluator with the mode data unpacked once.
struct RealField {
    k: Vec<[f64; 2]>,
    re: Vec<[f64; 2]>,
    im: Vec<[f64; 2]>,
}

impl RealField {
    fn new(x: &FourierVectorField) -> Self {
        let mut f = RealField { k: Vec::new(), re: Vec::new(), im: Vec::new() };
        for (k, c) in x.iter() {
            f.k.push([2.0 * PI * k[0] as f64, 2.0 * PI * k[1] as f64]);
            f.re.push([c[0].re, c[1].re]);
            f.im.push([c[0].im, c[1].im]);
        }
        f
    }

    fn eval(&self, t: [f64; 2]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for i in 0..self.k.len() {
            let (s, c) = (self.k[i][0] * t[0] + self.k[i][1] * t[1]).sin_cos();
            out[0] += self.re[i][0] * c - self.im[i][0] * s;
            out[1] += self.re[i][1] * c - self.im[i][1] * s;
        }
        out
    }
}

// Dormand–Prince 5(4) tableau; the field is autonomous, so the nodes are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One adaptive trajectory; returns `(time, displacement)` samples at accepted steps.
fn integrate(field: &RealField, theta0: [f64; 2], opts: &WindingOptions) -> Vec<(f64, [f64; 2])> {
    let mut t = 0.0;
    let mut y = theta0;
    let mut h: f64 = 1e-2;
    let mut samples = vec![(0.0, [0.0, 0.0])];
    while t < opts.horizon {
        h = h.min(opts.horizon - t).min(opts.max_step);
        let mut k = [[0.0; 2]; 7];
        for s in 0..7 {
            let mut ys = y;
            for j in 0..s {
                ys[0] += h * A[s][j] * k[j][0];
                ys[1] += h * A[s][j] * k[j][1];
            }
            k[s] = field.eval(ys);
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for i in 0..2 {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for s in 0..7 {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] += h * d5;
            err = err.max((h * (d5 - d4)).abs());
        }
        if err <= opts.step_tol || h < 1e-12 {
            t += h;
            y = y5;
            let disp = [y[0] - theta0[0], y[1] - theta0[1]];
            samples.push((t, disp));
            if disp[0].abs() + disp[1].abs() >= opts.growth_threshold {
                break;
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * (opts.step_tol / err).powf(0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    samples
}

fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].abs() + v[1].abs();
    [v[0] / n, v[1] / n]
}

/// Asymptotic direction `Φ_T/‖Φ_T‖₁` of the lifted flow.
///
/// Each orbit is integrated until its displacement reaches the growth
/// threshold; the direction must then be stable over the last `window`
/// fraction of the run and agree across initial points.
pub fn winding_ratio(x: &FourierVectorField, opts: &WindingOptions) -> Result<WindingOutcome, FieldError> {
    if !x.is_real(1e-12 * (1.0 + x.max_abs())) {
        return Err(FieldError::NotReal);
    }
    let field = RealField::new(x);
    let mut directions = Vec::new();
    let mut max_bounded = 0.0f64;
    for &theta0 in &opts.initial_points {
        let samples = integrate(&field, theta0, opts);
        let &(t_end, last) = samples.last().unwrap();
        let reached = last[0].abs() + last[1].abs() >= opts.growth_threshold;
        if !reached {
            let max_disp = samples.iter().map(|(_, d)| d[0].abs() + d[1].abs()).fold(0.0, f64::max);
            if max_disp < opts.growth_threshold.sqrt() {
                max_bounded = max_bounded.max(max_disp);
                continue;
            }
            return Err(FieldError::Inconclusive(format!(
                "displacement {max_disp:.3e} below threshold at horizon {}",
                opts.horizon
            )));
        }
        let dir = unit(last);
        let spread = samples
            .iter()
            .filter(|(t, _)| *t >= (1.0 - opts.window) * t_end)
            .map(|(_, d)| {
                let u = unit(*d);
                (u[0] - dir[0]).abs() + (u[1] - dir[1]).abs()
            })
            .fold(0.0, f64::max);
        if spread > opts.tol {
            return Err(FieldError::Inconclusive(format!("direction spread {spread:.3e} exceeds tol {}", opts.tol)));
        }
        directions.push(dir);
    }
    if directions.is_empty() {
        return Ok(WindingOutcome::Bounded { max_displacement: max_bounded });
    }
    if directions.len() != opts.initial_points.len() {
        return Err(FieldError::Inconclusive("some orbits bounded, others escaping".into()));
    }
    let n = directions.len() as f64;
    let mean = unit([
        directions.iter().map(|d| d[0]).sum::<f64>() / n,
        directions.iter().map(|d| d[1]).sum::<f64>() / n,
    ]);
    let disagreement = directions
        .iter()
        .map(|d| (d[0] - mean[0]).abs() + (d[1] - mean[1]).abs())
        .fold(0.0, f64::max);
    if disagreement > opts.tol {
        return Err(FieldError::Inconclusive(format!("initial points disagree by {disagreement:.3e}")));
    }
    Ok(WindingOutcome::Direction { direction: mean, slope: mean[1] / mean[0], per_point: directions })
}
