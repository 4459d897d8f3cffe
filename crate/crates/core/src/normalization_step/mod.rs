//! Elimination of far-from-resonance modes by a near-identity change of coordinates.
//!
//! Given `X` close to a constant `ψ`, find `U = id + u`, with `u` supported on
//! the far modes `|ψ·k| > σ‖k‖₁`, such that the far part of `(DU)⁻¹ X∘U`
//! vanishes. The equation is solved by Newton's method. Each linear solve is
//! GMRES preconditioned by the homological division `u_k = g_k / (2πi ψ·k)`,
//! which is the exact inverse when `X = ψ`.
//!
//! All compositions are evaluated on complex-shifted collocation grids (see
//! `grid`), so every coefficient is computed in the weighted norm it is
//! measured in.

mod gmres;
mod grid;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fourier_field::{l1, mode_norm, Coeff, ConeSpec, FieldError, FourierVectorField, Mode, Side, ZERO};
use grid::{quadrant, Grid};

pub use grid::smooth_size;

type C = Complex64;
type Mat = [[C; 2]; 2];

const CZERO: C = C::new(0.0, 0.0);

/// Smallest admissible `Re det DU` on the grid.
const MIN_DET: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum NormalizationError {
    #[error("grid of size {grid} cannot resolve the composition (need at least {required})")]
    GridTooCoarse { grid: usize, required: usize },
    #[error("Jacobian of the coordinate change degenerates (|det| = {det:.3e})")]
    SingularJacobian { det: f64 },
    #[error("distance {distance:.3e} to the constant field is outside the ball of radius {radius:.3e}")]
    OutsideBall { distance: f64, radius: f64 },
    #[error("far residual {residual:.3e} still above tolerance after {sweeps} sweeps")]
    NoConvergence { residual: f64, sweeps: usize, residuals: Vec<f64> },
    #[error("invalid elimination input: {0}")]
    InvalidInput(String),
}

impl From<FieldError> for NormalizationError {
    fn from(e: FieldError) -> Self {
        NormalizationError::InvalidInput(e.to_string())
    }
}

/// `U(θ) = θ + u(θ)` with a mean-zero periodic displacement `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusMap {
    displacement: FourierVectorField,
}

impl TorusMap {
    pub fn identity(width: f64, truncation: u32) -> Result<Self, NormalizationError> {
        Ok(TorusMap { displacement: FourierVectorField::new(width, truncation)? })
    }

    pub fn from_displacement(u: FourierVectorField) -> Result<Self, NormalizationError> {
        if u.get([0, 0]) != ZERO {
            return Err(NormalizationError::InvalidInput("displacement has a constant mode".into()));
        }
        Ok(TorusMap { displacement: u })
    }

    pub fn displacement(&self) -> &FourierVectorField {
        &self.displacement
    }

    pub fn is_identity(&self) -> bool {
        self.displacement.is_empty()
    }

    /// Upper bound `Σ 2π‖k‖₁ ‖u_k‖₁ e^{r‖k‖₁}` for `|Du|` on the strip of half-width `r/2π`.
    pub fn jacobian_bound(&self, r: f64) -> f64 {
        self.displacement
            .iter()
            .map(|(k, c)| {
                let n = mode_norm(k) as f64;
                2.0 * PI * n * l1(&c) * (r * n).exp()
            })
            .sum()
    }

    /// `U(θ)` at a real point.
    pub fn apply(&self, theta: [f64; 2]) -> [f64; 2] {
        let d = self.displacement.evaluate_real(theta);
        [theta[0] + d[0], theta[1] + d[1]]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.displacement.to_document(true)).expect("map serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, NormalizationError> {
        let doc: crate::fourier_field::FieldDocument =
            serde_json::from_str(text).map_err(|e| NormalizationError::InvalidInput(e.to_string()))?;
        if !doc.map {
            return Err(NormalizationError::InvalidInput("document is a field, not a map".into()));
        }
        Self::from_displacement(FourierVectorField::from_document(&doc)?)
    }
}

/// Radius `((√6−2)/12) σ min{(ρ−ρ′)/(4π), ((3−√6)/6) σ/‖ψ‖}` of the ball where elimination is guaranteed.
pub fn eps_hat(sigma: f64, rho: f64, rho_prime: f64, psi_norm: f64) -> f64 {
    let s6 = 6f64.sqrt();
    (s6 - 2.0) / 12.0 * sigma * ((rho - rho_prime) / (4.0 * PI)).min((3.0 - s6) / 6.0 * sigma / psi_norm)
}

/// Factor `2(1 + max{(2/3)(3−√6), 6(√6+2)‖ψ‖/σ})` bounding `‖X′−ψ‖_{ρ′}` by `‖X−ψ‖′_ρ`.
pub fn contraction_constant(sigma: f64, psi_norm: f64) -> f64 {
    let s6 = 6f64.sqrt();
    2.0 * (1.0 + (2.0 / 3.0 * (3.0 - s6)).max(6.0 * (s6 + 2.0) * psi_norm / sigma))
}

/// Fourier series unpacked for pointwise evaluation at complex points.
struct Terms {
    modes: Vec<Mode>,
    coeffs: Vec<Coeff>,
    reach: usize,
}

impl Terms {
    fn new(x: &FourierVectorField) -> Self {
        let mut t = Terms { modes: Vec::new(), coeffs: Vec::new(), reach: 0 };
        for (k, c) in x.iter() {
            t.reach = t.reach.max(k[0].unsigned_abs() as usize).max(k[1].unsigned_abs() as usize);
            t.modes.push(k);
            t.coeffs.push(c);
        }
        t
    }

    fn powers(&self, z: C, table: &mut [C]) {
        let n = self.reach;
        let e = (C::i() * 2.0 * PI * z).exp();
        let inv = e.inv();
        table[n] = C::new(1.0, 0.0);
        for j in 1..=n {
            table[n + j] = table[n + j - 1] * e;
            table[n - j] = table[n - j + 1] * inv;
        }
    }

    /// `X(z)` and, if requested, `DX(z)` with `DX[i][j] = ∂_j X_i`.
    fn eval(&self, z: [C; 2], t1: &mut [C], t2: &mut [C], derivative: bool) -> (Coeff, Mat) {
        self.powers(z[0], t1);
        self.powers(z[1], t2);
        let n = self.reach as i64;
        let mut v = ZERO;
        let mut d = [[CZERO; 2]; 2];
        for (k, c) in self.modes.iter().zip(&self.coeffs) {
            let ph = t1[(n + k[0]) as usize] * t2[(n + k[1]) as usize];
            let a = c[0] * ph;
            let b = c[1] * ph;
            v[0] += a;
            v[1] += b;
            if derivative {
                let (k0, k1) = (2.0 * PI * k[0] as f64, 2.0 * PI * k[1] as f64);
                let ia = C::new(-a.im, a.re);
                let ib = C::new(-b.im, b.re);
                d[0][0] += ia * k0;
                d[0][1] += ia * k1;
                d[1][0] += ib * k0;
                d[1][1] += ib * k1;
            }
        }
        (v, d)
    }
}

fn mat_vec(m: &Mat, v: [C; 2]) -> [C; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// Samples of one composition on one quadrant grid.
struct Sampled {
    jinv: Vec<Mat>,
    dxu: Vec<Mat>,
    y: Vec<[C; 2]>,
}

/// `(DU)⁻¹ X∘U` on every quadrant grid, with the spectra of its two components.
struct Composition {
    sampled: Vec<Sampled>,
    spectra: Vec<[Vec<C>; 2]>,
    min_det: f64,
}

/// Grid, input field and mode bookkeeping for one elimination or pullback.
struct Collocation {
    grid: Grid,
    r: f64,
    truncation: i64,
    x: Terms,
    /// Constant `ψ` carried implicitly: `x` holds `X − ψ` and compositions return `(DU)⁻¹ X∘U − ψ`.
    shift: [f64; 2],
    /// Modes carrying the displacement (weighted coordinates).
    support: Vec<Mode>,
    support_by_quadrant: Vec<Vec<usize>>,
}

impl Collocation {
    fn new(x: &FourierVectorField, shift: [f64; 2], support: Vec<Mode>, m: usize, r: f64) -> Self {
        let mut support_by_quadrant = vec![Vec::new(); 4];
        for (i, k) in support.iter().enumerate() {
            support_by_quadrant[quadrant(*k)].push(i);
        }
        Collocation {
            grid: Grid::new(m, r),
            r,
            truncation: x.truncation() as i64,
            x: Terms::new(x),
            shift,
            support,
            support_by_quadrant,
        }
    }

    fn synthesize_components(&self, q: usize, w: &[Coeff]) -> ([Vec<C>; 2], [[Vec<C>; 2]; 2]) {
        let g = &self.grid;
        let comp = |i: usize| g.synthesize(q, self.support.iter().zip(w).map(move |(k, c)| (*k, c[i])));
        let deriv = |i: usize, j: usize| {
            g.synthesize(
                q,
                self.support.iter().zip(w).map(move |(k, c)| (*k, c[i] * C::new(0.0, 2.0 * PI * k[j] as f64))),
            )
        };
        ([comp(0), comp(1)], [[deriv(0, 0), deriv(0, 1)], [deriv(1, 0), deriv(1, 1)]])
    }

    /// Evaluates `(DU)⁻¹ X∘U − ψ = (DU)⁻¹ ((X − ψ)∘U − Du ψ)` for `u` given by weighted
    /// coefficients on `support`. Every term is of the size of `X − ψ` and `u`, so
    /// round-off stays relative to the deviation rather than to `ψ`.
    fn compose(&self, u: &[Coeff], keep_derivative: bool) -> Result<Composition, NormalizationError> {
        let points = self.grid.points();
        let empty = u.iter().all(|c| *c == ZERO);
        let mut t1 = vec![CZERO; 2 * self.x.reach + 1];
        let mut t2 = t1.clone();
        let mut sampled = Vec::with_capacity(4);
        let mut spectra = Vec::with_capacity(4);
        let mut min_det = f64::INFINITY;
        for q in 0..4 {
            let (uv, du) = if empty { Default::default() } else { self.synthesize_components(q, u) };
            let mut s = Sampled {
                jinv: Vec::with_capacity(points),
                dxu: if keep_derivative { Vec::with_capacity(points) } else { Vec::new() },
                y: Vec::with_capacity(points),
            };
            let mut y0 = Vec::with_capacity(points);
            let mut y1 = Vec::with_capacity(points);
            for j in 0..points {
                let mut z = self.grid.point(q, j);
                let mut jac = [[C::new(1.0, 0.0), CZERO], [CZERO, C::new(1.0, 0.0)]];
                if !empty {
                    z[0] += uv[0][j];
                    z[1] += uv[1][j];
                    for a in 0..2 {
                        for b in 0..2 {
                            jac[a][b] += du[a][b][j];
                        }
                    }
                }
                let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                min_det = min_det.min(det.re);
                // DU must stay connected to the identity: a determinant reaching
                // the imaginary axis means it has passed through (or near) zero.
                if det.re < MIN_DET {
                    return Err(NormalizationError::SingularJacobian { det: det.norm() });
                }
                let jinv = [[jac[1][1] / det, -jac[0][1] / det], [-jac[1][0] / det, jac[0][0] / det]];
                let (mut xv, dx) = self.x.eval(z, &mut t1, &mut t2, keep_derivative);
                if !empty {
                    for (a, v) in xv.iter_mut().enumerate() {
                        *v -= du[a][0][j] * self.shift[0] + du[a][1][j] * self.shift[1];
                    }
                }
                let y = mat_vec(&jinv, xv);
                y0.push(y[0]);
                y1.push(y[1]);
                s.jinv.push(jinv);
                if keep_derivative {
                    s.dxu.push(dx);
                }
                s.y.push(y);
            }
            spectra.push([self.grid.analyze(y0), self.grid.analyze(y1)]);
            sampled.push(s);
        }
        Ok(Composition { sampled, spectra, min_det })
    }

    fn weighted(&self, comp: &Composition, k: Mode) -> Coeff {
        let sp = &comp.spectra[quadrant(k)];
        let idx = self.grid.index(k);
        [sp[0][idx], sp[1][idx]]
    }

    /// Weighted coefficients of the composition on the displacement support.
    fn on_support(&self, comp: &Composition) -> Vec<Coeff> {
        self.support.iter().map(|k| self.weighted(comp, *k)).collect()
    }

    fn tail_mass(&self, comp: &Composition) -> f64 {
        (0..4).map(|q| self.grid.tail_mass(q, &comp.spectra[q], self.truncation)).sum()
    }

    /// Truncated output field at width `r`; modes beyond the truncation go to `discarded`.
    fn output(&self, comp: &Composition) -> FourierVectorField {
        let n = self.truncation;
        let mut out = FourierVectorField::new(self.r, n as u32).expect("positive width");
        for k1 in -n..=n {
            let rest = n - k1.abs();
            for k2 in -rest..=rest {
                let k = [k1, k2];
                let w = self.weighted(comp, k);
                let damp = (-self.r * mode_norm(k) as f64).exp();
                out.set(k, [w[0] * damp, w[1] * damp]).expect("mode within truncation");
            }
        }
        out.set_discarded(self.tail_mass(comp));
        out
    }

    /// Derivative of the support part of the composition in direction `w`:
    /// `(DU)⁻¹ [(DX∘U) w − (Dw) Y]`, projected back onto the support.
    fn apply_jacobian(&self, comp: &Composition, w: &[Coeff]) -> Vec<Coeff> {
        let mut out = vec![ZERO; self.support.len()];
        for q in 0..4 {
            if self.support_by_quadrant[q].is_empty() {
                continue;
            }
            let s = &comp.sampled[q];
            let (wv, dw) = self.synthesize_components(q, w);
            let points = self.grid.points();
            let mut v0 = Vec::with_capacity(points);
            let mut v1 = Vec::with_capacity(points);
            for j in 0..points {
                let wj = [wv[0][j], wv[1][j]];
                let y = [s.y[j][0] + self.shift[0], s.y[j][1] + self.shift[1]];
                let a = mat_vec(&s.dxu[j], wj);
                let t = [
                    a[0] - dw[0][0][j] * y[0] - dw[0][1][j] * y[1],
                    a[1] - dw[1][0][j] * y[0] - dw[1][1][j] * y[1],
                ];
                let v = mat_vec(&s.jinv[j], t);
                v0.push(v[0]);
                v1.push(v[1]);
            }
            let sp = [self.grid.analyze(v0), self.grid.analyze(v1)];
            for &i in &self.support_by_quadrant[q] {
                let idx = self.grid.index(self.support[i]);
                out[i] = [sp[0][idx], sp[1][idx]];
            }
        }
        out
    }

    /// Converts weighted support coefficients to a displacement field.
    fn displacement(&self, u: &[Coeff]) -> FourierVectorField {
        let mut f = FourierVectorField::new(self.r, self.truncation as u32).expect("positive width");
        for (k, c) in self.support.iter().zip(u) {
            let damp = (-self.r * mode_norm(*k) as f64).exp();
            f.set(*k, [c[0] * damp, c[1] * damp]).expect("mode within truncation");
        }
        f
    }
}

fn weighted_l1(v: &[Coeff]) -> f64 {
    v.iter().map(l1).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pullback {
    /// `(DU)⁻¹ X∘U` truncated to the truncation of `X`, at the grid width.
    pub field: FourierVectorField,
    /// Weighted mass of resolved modes beyond the truncation.
    pub tail_mass: f64,
    /// Smallest `Re det DU` over the grid points.
    pub min_det: f64,
    pub grid: usize,
}

/// Smallest admissible grid for a composition: `2(N_X + N_u) + 1`, and at least `2N + 1` for the output.
pub fn required_grid(x_reach: i64, u_reach: i64, truncation: u32) -> usize {
    (2 * (x_reach + u_reach) + 1).max(2 * truncation as i64 + 1) as usize
}

/// Evaluates `(DU)⁻¹ X∘U` and fits its Fourier coefficients in the norm of width `width`.
///
/// Defaults to the smallest smooth grid size allowed by [`required_grid`].
pub fn compose_pullback(
    x: &FourierVectorField,
    u: &TorusMap,
    grid: Option<usize>,
    width: f64,
) -> Result<Pullback, NormalizationError> {
    if !(width > 0.0) {
        return Err(NormalizationError::InvalidInput(format!("width must be positive, got {width}")));
    }
    let disp = u.displacement();
    let required = required_grid(x.max_mode_norm(), disp.max_mode_norm(), x.truncation());
    let m = grid.unwrap_or_else(|| smooth_size(required));
    if m < required {
        return Err(NormalizationError::GridTooCoarse { grid: m, required });
    }
    let support: Vec<Mode> = disp.iter().map(|(k, _)| k).collect();
    let weighted: Vec<Coeff> = disp
        .iter()
        .map(|(k, c)| {
            let w = (width * mode_norm(k) as f64).exp();
            [c[0] * w, c[1] * w]
        })
        .collect();
    let col = Collocation::new(x, [0.0; 2], support, m, width);
    let comp = col.compose(&weighted, false)?;
    Ok(Pullback { field: col.output(&comp), tail_mass: col.tail_mass(&comp), min_det: comp.min_det, grid: m })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EliminationOptions {
    /// Absolute tolerance on the far residual, in the output norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Output width `ρ′`; must be below the width of the input field.
    pub output_width: f64,
    /// Grid size; defaults to the smallest smooth size `≥ 4N + 1`.
    pub grid: Option<usize>,
    pub max_halvings: usize,
    /// Reject inputs outside the guaranteed ball instead of only reporting it.
    pub enforce_ball: bool,
}

impl Default for EliminationOptions {
    fn default() -> Self {
        EliminationOptions { tol: 1e-12, max_iter: 20, output_width: 0.9, grid: None, max_halvings: 8, enforce_ball: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EliminationReport {
    /// Far residual `‖I⁻ X′‖_{ρ′}` before the first sweep and after each sweep.
    pub residuals: Vec<f64>,
    pub sweeps: usize,
    pub halvings: usize,
    pub gmres_iterations: Vec<usize>,
    pub far_modes: usize,
    pub grid: usize,
    /// `‖X − ψ‖′_ρ`.
    pub input_distance: f64,
    /// `‖X′ − ψ‖_{ρ′}`.
    pub output_distance: f64,
    pub eps_hat: f64,
    pub inside_ball: bool,
    pub contraction_constant: f64,
    pub contraction_holds: bool,
    pub tail_mass: f64,
    pub min_det: f64,
    /// `U = id` was returned without touching the field.
    pub identity: bool,
}

impl EliminationReport {
    /// Order estimate `log(r₂/r₁) / log(r₁/r₀)` from the last three residuals above `floor`.
    ///
    /// Residuals at the round-off floor carry no rate information and are skipped.
    pub fn convergence_order(&self, floor: f64) -> Option<f64> {
        let r: Vec<f64> = self.residuals.iter().copied().take_while(|&v| v > floor).collect();
        if r.len() < 3 {
            return None;
        }
        let n = r.len();
        let (a, b, c) = (r[n - 3], r[n - 2], r[n - 1]);
        if !(a > b && b > c) {
            return None;
        }
        Some((c / b).ln() / (b / a).ln())
    }

    pub fn final_residual(&self) -> f64 {
        *self.residuals.last().unwrap_or(&0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Elimination {
    pub map: TorusMap,
    /// `(DU)⁻¹ X∘U` at width `ρ′`.
    pub field: FourierVectorField,
    pub report: EliminationReport,
}

/// Finds `U = id + u` removing the far modes of `(DU)⁻¹ X∘U` with respect to `(ψ, σ)`.
///
/// If the far part of `X` is already within tolerance the identity is
/// returned and `X` is passed through unchanged.
pub fn eliminate_far(
    x: &FourierVectorField,
    psi: [f64; 2],
    sigma: f64,
    opts: &EliminationOptions,
) -> Result<Elimination, NormalizationError> {
    let out = eliminate_deviation(&x.sub_constant(psi), psi, sigma, opts)?;
    let field = if out.report.identity {
        x.clone().with_width(opts.output_width)?
    } else {
        let mut f = out.field;
        let avg = f.average();
        f.set([0, 0], [avg[0] + psi[0], avg[1] + psi[1]])?;
        f
    };
    Ok(Elimination { field, ..out })
}

/// [`eliminate_far`] for the field `ψ + x` given by its deviation `x`; the returned field is `(DU)⁻¹ X∘U − ψ`.
///
/// Accuracy is relative to `g`, which matters once `g` is far below the size of `ψ`.
pub fn eliminate_deviation(
    x: &FourierVectorField,
    psi: [f64; 2],
    sigma: f64,
    opts: &EliminationOptions,
) -> Result<Elimination, NormalizationError> {
    let cone = ConeSpec::resonant(psi, sigma)?;
    let rho = x.width();
    let r = opts.output_width;
    if !(r > 0.0 && r < rho) {
        return Err(NormalizationError::InvalidInput(format!("need 0 < rho' < rho (rho = {rho}, rho' = {r})")));
    }
    let psi_norm = psi[0].abs() + psi[1].abs();
    let input_distance = x.norm_prime_r(rho);
    let radius = eps_hat(sigma, rho, r, psi_norm);
    let inside_ball = input_distance < radius;
    if opts.enforce_ball && !inside_ball {
        return Err(NormalizationError::OutsideBall { distance: input_distance, radius });
    }
    let contraction = contraction_constant(sigma, psi_norm);
    let n = x.truncation() as i64;
    let mut far = Vec::new();
    for k1 in -n..=n {
        let rest = n - k1.abs();
        for k2 in -rest..=rest {
            if !cone.contains([k1, k2]) {
                far.push([k1, k2]);
            }
        }
    }
    let mut report = EliminationReport {
        residuals: Vec::new(),
        sweeps: 0,
        halvings: 0,
        gmres_iterations: Vec::new(),
        far_modes: far.len(),
        grid: 0,
        input_distance,
        output_distance: 0.0,
        eps_hat: radius,
        inside_ball,
        contraction_constant: contraction,
        contraction_holds: true,
        tail_mass: 0.0,
        min_det: 1.0,
        identity: false,
    };

    let initial = x.project(&cone, Side::Outside).norm_r(r);
    if initial <= opts.tol {
        let field = x.clone().with_width(r)?;
        report.residuals.push(initial);
        report.identity = true;
        report.output_distance = field.norm_r(r);
        report.contraction_holds = report.output_distance <= contraction * input_distance * (1.0 + 1e-12);
        let map = TorusMap::identity(r, x.truncation())?;
        return Ok(Elimination { map, field, report });
    }

    let required = required_grid(n, n, x.truncation());
    let m = opts.grid.unwrap_or_else(|| smooth_size(required));
    if m < required {
        return Err(NormalizationError::GridTooCoarse { grid: m, required });
    }
    report.grid = m;
    let col = Collocation::new(x, psi, far, m, r);
    let divisor: Vec<C> = col
        .support
        .iter()
        .map(|k| C::new(0.0, -2.0 * PI * (psi[0] * k[0] as f64 + psi[1] * k[1] as f64)))
        .collect();

    let mut u = vec![ZERO; col.support.len()];
    let mut comp = col.compose(&u, true)?;
    let mut g = col.on_support(&comp);
    let mut res = weighted_l1(&g);
    report.residuals.push(res);
    while res > opts.tol {
        if report.sweeps == opts.max_iter {
            return Err(NormalizationError::NoConvergence { residual: res, sweeps: report.sweeps, residuals: report.residuals });
        }
        // Right-preconditioned Newton system: J P⁻¹ z = −g, step w = P⁻¹ z.
        let rhs: Vec<C> = g.iter().flat_map(|c| [-c[0], -c[1]]).collect();
        let unprecondition = |z: &[C]| -> Vec<Coeff> {
            z.chunks(2).zip(&divisor).map(|(p, d)| [p[0] / d, p[1] / d]).collect()
        };
        let eta = (0.1 * res).clamp(1e-13, 1e-2);
        let solve = gmres::gmres(
            |z| col.apply_jacobian(&comp, &unprecondition(z)).into_iter().flatten().collect(),
            &rhs,
            eta,
            60,
            400,
        );
        report.gmres_iterations.push(solve.iterations);
        let step = unprecondition(&solve.x);
        let mut lambda = 1.0;
        let mut halvings = 0;
        let accepted = loop {
            let trial: Vec<Coeff> = u
                .iter()
                .zip(&step)
                .map(|(a, b)| [a[0] + b[0] * lambda, a[1] + b[1] * lambda])
                .collect();
            if let Ok(c) = col.compose(&trial, true) {
                let gt = col.on_support(&c);
                let rt = weighted_l1(&gt);
                if rt < res {
                    break Some((trial, c, gt, rt));
                }
            }
            if halvings == opts.max_halvings {
                break None;
            }
            halvings += 1;
            lambda *= 0.5;
        };
        report.halvings += halvings;
        report.sweeps += 1;
        match accepted {
            Some((trial, c, gt, rt)) => {
                u = trial;
                comp = c;
                g = gt;
                res = rt;
                report.residuals.push(res);
            }
            None => {
                return Err(NormalizationError::NoConvergence { residual: res, sweeps: report.sweeps, residuals: report.residuals });
            }
        }
    }
    let field = col.output(&comp);
    report.tail_mass = field.discarded();
    report.min_det = comp.min_det;
    report.output_distance = field.norm_r(r);
    report.contraction_holds = report.output_distance <= contraction * input_distance * (1.0 + 1e-12);
    let map = TorusMap::from_displacement(col.displacement(&u))?;
    Ok(Elimination { map, field, report })
}
