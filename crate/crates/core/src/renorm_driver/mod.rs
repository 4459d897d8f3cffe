//! Iteration of the one-step renormalisation along the continued-fraction orbit.
//!
//! State `n` carries a field `X_n` close to `ω_n = (1, α_n)`, where `α_n` is
//! the `n`-th tail of the expansion of the slope. One step rescales by the
//! shift `T_{a_n}`, eliminates the far-from-resonance modes with respect to
//! `ω_{n+1}/α_{n+1}` and divides by `ω̂_{n+1}·E(X′)`, so that the constant
//! orbit `ω_n ↦ ω_{n+1}` is reproduced exactly.
//!
//! States are stored as deviations `X_n − ω_n` with `ω_n` implicit, so that the
//! accuracy of every step is relative to the size of the deviation.

mod decay;
mod perturbation;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fourier_field::{l1, Coeff, ConeSpec, FieldError, FourierVectorField, Side};
use crate::normalization_step::{eliminate_deviation, EliminationOptions, EliminationReport, NormalizationError};
use crate::number_theory::{cf_expand, CfError, CfExpansion, Slope};
use crate::scaling_step::{scale_step, ScaleError, StepWidths, DEFAULT_SIGMA};

pub use decay::{lambda_jn, linear_chain, stable_decay_probe, DecayProbe, DecayRow};
pub use perturbation::Perturbation;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum RenormError {
    #[error("slope is zero")]
    ZeroSlope,
    #[error("step {n}: distance {distance:.3e} to the constant field exceeds the domain radius {zeta:.3e}")]
    DomainExceeded { n: usize, distance: f64, zeta: f64 },
    #[error("step {n}: normalisation |alpha' z - 1| = {deviation:.3} leaves the disk of radius 1/2")]
    NormalizationGuard { n: usize, deviation: f64 },
    #[error("step {n}: far-from-resonance mass {mass:.3e} exceeds {tolerance:.1e}")]
    FarModes { n: usize, mass: f64, tolerance: f64 },
    #[error("step {n}: {source}")]
    Scale { n: usize, source: ScaleError },
    #[error("step {n}: {source}")]
    Elimination { n: usize, source: NormalizationError },
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenormParams {
    pub sigma: f64,
    pub widths: StepWidths,
    pub truncation: u32,
    /// `c′` in the domain radius `ζ_n = c′/(α_n α_{n+1})`.
    pub zeta_scale: f64,
    /// Far mass allowed to be discarded at the start of a step.
    pub far_tolerance: f64,
    /// Newton settings; the output width is always `widths.rho_prime` and
    /// `tol` is taken relative to `‖X − ψ‖_{ρ′}` of the field being normalised.
    pub elimination: EliminationOptions,
    /// Stop with `DomainExceeded` when a state leaves its ball.
    pub enforce_domain: bool,
    /// Shrink the constant component along `Ω_n` to satisfy the winding-cone
    /// inequality after every step. Only meaningful for orbits known to keep the
    /// winding ratio of `ω_0`, where it stops round-off from feeding the expanding direction.
    pub cone_retraction: bool,
}

impl Default for RenormParams {
    fn default() -> Self {
        let widths = StepWidths::default();
        RenormParams {
            sigma: DEFAULT_SIGMA,
            widths,
            truncation: crate::fourier_field::DEFAULT_TRUNCATION,
            zeta_scale: 1e-2,
            far_tolerance: 1e-10,
            elimination: EliminationOptions { output_width: widths.rho_prime, ..EliminationOptions::default() },
            enforce_domain: true,
            cone_retraction: false,
        }
    }
}

impl RenormParams {
    pub fn validate(&self) -> Result<(), RenormError> {
        self.widths.validate().map_err(|e| RenormError::InvalidParams(e.to_string()))?;
        if !(self.sigma > 0.0 && self.sigma < 1.0 / 3.0) {
            return Err(RenormError::InvalidParams(format!("sigma must lie in (0, 1/3), got {}", self.sigma)));
        }
        if self.widths.rho_prime >= self.widths.rho {
            return Err(RenormError::InvalidParams(format!(
                "the elimination loses width, so rho' must be below rho (got {} >= {})",
                self.widths.rho_prime, self.widths.rho
            )));
        }
        if !(self.zeta_scale > 0.0) {
            return Err(RenormError::InvalidParams("zeta scale must be positive".into()));
        }
        Ok(())
    }

    fn elimination_options(&self, scale: f64) -> EliminationOptions {
        EliminationOptions { output_width: self.widths.rho_prime, tol: self.elimination.tol * scale, ..self.elimination.clone() }
    }
}

/// `v/(v·v)`.
pub fn dual(v: [f64; 2]) -> [f64; 2] {
    let n = v[0] * v[0] + v[1] * v[1];
    [v[0] / n, v[1] / n]
}

fn dot(a: [f64; 2], c: &Coeff) -> Complex64 {
    c[0] * a[0] + c[1] * a[1]
}

/// `Ω = (1, −1/α)`, orthogonal to `ω = (1, α)`.
pub fn orthogonal(alpha: f64) -> [f64; 2] {
    [1.0, -1.0 / alpha]
}

/// Norm split of `X − ω` at width `ρ′`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateNorms {
    /// `‖X − ω‖_{ρ′}`.
    pub total: f64,
    /// `‖(I − E)X‖_{ρ′}`.
    pub oscillatory: f64,
    /// `‖(ω̂·(E X − ω)) ω‖₁`.
    pub const_omega: f64,
    /// `‖(Ω̂·(E X − ω)) Ω‖₁`.
    pub const_orthogonal: f64,
    /// Signed real part of the `Ω` coefficient, for growth-rate fits.
    pub orthogonal_coefficient: f64,
}

impl StateNorms {
    /// Norms of the deviation `f = X − ω`.
    pub fn of(f: &FourierVectorField, alpha: f64, rho_prime: f64) -> Self {
        let omega = [1.0, alpha];
        let big = orthogonal(alpha);
        let delta = f.average();
        let c_omega = dot(dual(omega), &delta);
        let c_big = dot(dual(big), &delta);
        StateNorms {
            total: f.norm_r(rho_prime),
            oscillatory: f.oscillatory().norm_r(rho_prime),
            const_omega: c_omega.norm() * (omega[0].abs() + omega[1].abs()),
            const_orthogonal: c_big.norm() * (big[0].abs() + big[1].abs()),
            orthogonal_coefficient: c_big.re,
        }
    }
}

/// Diagnostics of the step that produced a state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepDiagnostics {
    pub a: u64,
    pub zeta: f64,
    /// `‖X_n − ω_n‖_{ρ′}` before the step.
    pub distance: f64,
    /// Far mass dropped before rescaling.
    pub dropped_far: f64,
    pub scale_gain: f64,
    pub scale_bound: f64,
    pub elimination: EliminationReport,
    /// `ω̂_{n+1}·E(X′)`.
    pub normaliser: Complex64,
    /// `|α_{n+1} z − 1|`.
    pub normaliser_deviation: f64,
    /// `‖·‖₁` of the constant removed along `Ω_{n+1}` by the cone retraction.
    pub retracted: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenormState {
    pub n: usize,
    pub alpha: f64,
    pub omega: [f64; 2],
    /// `X_n − ω_n`.
    pub deviation: FourierVectorField,
    /// Radius `ζ_n` of the ball around `ω_n`.
    pub zeta: f64,
    pub norms: StateNorms,
    /// Present for every state after the first.
    pub step: Option<StepDiagnostics>,
}

impl RenormState {
    /// State with deviation `f` from `ω_n = (1, α_n)`.
    pub fn new(n: usize, alpha: f64, alpha_next: f64, deviation: FourierVectorField, params: &RenormParams) -> Self {
        RenormState {
            n,
            alpha,
            omega: [1.0, alpha],
            norms: StateNorms::of(&deviation, alpha, params.widths.rho_prime),
            zeta: params.zeta_scale / (alpha * alpha_next),
            deviation,
            step: None,
        }
    }

    /// State for the full field `X`.
    pub fn from_field(n: usize, alpha: f64, alpha_next: f64, field: &FourierVectorField, params: &RenormParams) -> Self {
        Self::new(n, alpha, alpha_next, field.sub_constant([1.0, alpha]), params)
    }

    /// `X_n = ω_n + (X_n − ω_n)`.
    pub fn field(&self) -> FourierVectorField {
        let mut x = self.deviation.clone();
        let avg = x.average();
        x.set([0, 0], [avg[0] + self.omega[0], avg[1] + self.omega[1]]).expect("constant mode is admissible");
        x
    }
}

/// Resonant cone used at step `n`, in the normalised form `((1/α, 1), σ/α)`.
///
/// The same representation is produced by the elimination of the previous
/// step, so cone membership is decided by identical floating-point tests.
pub fn step_cone(alpha: f64, sigma: f64) -> Result<ConeSpec, FieldError> {
    ConeSpec::resonant([1.0 / alpha, 1.0], sigma / alpha)
}

/// Result of the transient adjustment of the slope.
#[derive(Clone, Debug, PartialEq)]
pub struct Transient {
    pub field: FourierVectorField,
    /// Slope after adjustment, greater than 1 unless it was exactly 1.
    pub slope: Slope,
    pub reflected: bool,
    pub swapped: bool,
}

/// Brings `ω₀ = (1, α₀)` to slope `≥ 1`: the reflection `θ₂ ↦ −θ₂` for negative
/// slopes, then the swap of coordinates (with time rescaled by `α`) for slopes in `(0, 1)`.
pub fn transient_step(x: &FourierVectorField, slope: &Slope) -> Result<Transient, RenormError> {
    if slope.is_zero() {
        return Err(RenormError::ZeroSlope);
    }
    let mut field = x.clone();
    let mut s = slope.clone();
    let mut reflected = false;
    let mut swapped = false;
    if s.is_positive() == Some(false) {
        field = field.change_basis([[1, 0], [0, -1]]);
        s = s.neg();
        reflected = true;
    }
    if s.is_positive().is_none() {
        return Err(RenormError::Cf(CfError::PrecisionExhausted { available: 0 }));
    }
    if s.floor()? == 0.into() {
        let alpha = s.to_f64();
        field = field.change_basis([[0, 1], [1, 0]]).scale(Complex64::new(1.0 / alpha, 0.0));
        s = s.act(&crate::number_theory::GL2ZMatrix::swap())?;
        swapped = true;
    }
    Ok(Transient { field, slope: s, reflected, swapped })
}

/// Slope data for step `n`: `(a_n, α_n, α_{n+1})`.
fn step_data(cf: &CfExpansion, n: usize) -> Result<(u64, f64, f64), RenormError> {
    cf.require(n + 2)?;
    let a = cf.coefficient(n)?;
    let a: u64 = a.try_into().map_err(|_| RenormError::InvalidParams(format!("coefficient {a} out of range")))?;
    Ok((a, cf.tail(n)?.to_f64(), cf.tail(n + 1)?.to_f64()))
}

/// `R_{ω_n}(X_n)`.
pub fn one_step(state: &RenormState, cf: &CfExpansion, params: &RenormParams) -> Result<RenormState, RenormError> {
    let n = state.n;
    let (a, alpha, alpha_next) = step_data(cf, n)?;
    let zeta = params.zeta_scale / (alpha * alpha_next);
    let rho_prime = params.widths.rho_prime;
    let f = &state.deviation;
    let distance = f.norm_r(rho_prime);
    if params.enforce_domain && !(distance < zeta) {
        return Err(RenormError::DomainExceeded { n, distance, zeta });
    }

    let cone = step_cone(alpha, params.sigma)?;
    let dropped_far = f.project(&cone, Side::Outside).norm_r(rho_prime);
    if dropped_far > params.far_tolerance {
        return Err(RenormError::FarModes { n, mass: dropped_far, tolerance: params.far_tolerance });
    }
    let resonant = f.project(&cone, Side::Inside);

    // T⁻¹ω_n = ω_{n+1}/α_{n+1} = ψ, so only the deviation is transported.
    let scaled = scale_step(&resonant, a, &params.widths).map_err(|source| RenormError::Scale { n, source })?;
    let psi = [1.0 / alpha_next, 1.0];
    let opts = params.elimination_options(scaled.field.norm_r(rho_prime));
    let eliminated = eliminate_deviation(&scaled.field, psi, params.sigma / alpha_next, &opts)
        .map_err(|source| RenormError::Elimination { n, source })?;

    // z = ω̂′·E(ψ + g) = 1/α′ + ω̂′·E g, and (ψ + g)/z − ω′ = (g − α′(ω̂′·E g)ψ)/z.
    let omega_next = [1.0, alpha_next];
    let mut g = eliminated.field;
    let avg = g.average();
    let e = dot(dual(omega_next), &avg);
    let z = e + 1.0 / alpha_next;
    let deviation = (e * alpha_next).norm();
    if !(deviation < 0.5) {
        return Err(RenormError::NormalizationGuard { n, deviation });
    }
    g.set([0, 0], [avg[0] - e * alpha_next * psi[0], avg[1] - e * alpha_next * psi[1]])?;
    let mut next_dev = g.scale(z.inv());
    let retracted = if params.cone_retraction { retract_to_cone(&mut next_dev, alpha_next, rho_prime)? } else { 0.0 };

    let alpha_after = cf.tail(n + 2).map(|t| t.to_f64()).unwrap_or(f64::NAN);
    let mut next = RenormState::new(n + 1, alpha_next, alpha_after, next_dev, params);
    next.step = Some(StepDiagnostics {
        a,
        zeta,
        distance,
        dropped_far,
        scale_gain: scaled.gain(),
        scale_bound: scaled.bound,
        elimination: eliminated.report,
        normaliser: z,
        normaliser_deviation: deviation,
        retracted,
    });
    Ok(next)
}

/// Shrinks the `Ω` component of the constant part of a deviation until
/// `‖(I − P)E X‖₁ ≤ ‖(I − E)X‖_{ρ′}` holds; returns the `ℓ₁` size removed.
///
/// The `ω` component is left alone: it lies in the kernel of the constant block.
pub fn retract_to_cone(f: &mut FourierVectorField, alpha: f64, rho_prime: f64) -> Result<f64, FieldError> {
    let big = orthogonal(alpha);
    let avg = f.average();
    let c = dot(dual(big), &avg);
    let size = c.norm() * (big[0].abs() + big[1].abs());
    let allowed = f.oscillatory().norm_r(rho_prime);
    if size <= allowed {
        return Ok(0.0);
    }
    let cut = c * (1.0 - allowed / size);
    f.set([0, 0], [avg[0] - cut * big[0], avg[1] - cut * big[1]])?;
    Ok(size - allowed)
}

/// `G_n`, the action of the derivative on constant fields, with its eigen-data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantBlock {
    pub matrix: [[f64; 2]; 2],
    /// Non-zero eigenvalue, equal to the trace.
    pub nu: f64,
    /// Kernel direction `ω_n`.
    pub kernel: [f64; 2],
    /// Eigenvector `Ω_{n+1}` of `ν`.
    pub unstable: [f64; 2],
}

impl ConstantBlock {
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.matrix;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn det(&self) -> f64 {
        let m = &self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }
}

/// `G_n = (α_{n+1}/(1+{α_n}²)) [[−α_n, 1], [{α_n}α_n, −{α_n}]]` for `α_n > 1`.
pub fn constant_block(alpha: f64) -> ConstantBlock {
    let frac = alpha - alpha.floor();
    let next = 1.0 / frac;
    let s = next / (1.0 + frac * frac);
    let matrix = [[-alpha * s, s], [frac * alpha * s, -frac * s]];
    ConstantBlock { matrix, nu: matrix[0][0] + matrix[1][1], kernel: [1.0, alpha], unstable: orthogonal(next) }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingConeCheck {
    /// `‖(I − P_n)E(X_n)‖₁`.
    pub constant_defect: f64,
    /// `‖(I − E)X_n‖_{ρ′}`.
    pub oscillatory: f64,
    pub passed: bool,
}

/// Necessary condition for `X_n` to share the winding ratio of `ω_n`:
/// the constant part off the line of `ω_n` is dominated by the oscillatory part.
pub fn winding_cone_check(state: &RenormState, rho_prime: f64) -> WindingConeCheck {
    // (I − P_n) annihilates ω_n, so the deviation gives the same defect.
    let avg = state.deviation.average();
    let p = dot(dual(state.omega), &avg);
    let defect = [avg[0] - p * state.omega[0], avg[1] - p * state.omega[1]];
    let constant_defect = l1(&defect);
    let oscillatory = state.deviation.oscillatory().norm_r(rho_prime);
    WindingConeCheck { constant_defect, oscillatory, passed: constant_defect <= oscillatory }
}

/// Per-orbit decay summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub norms: Vec<f64>,
    /// Geometric rate fitted by least squares on `ln ‖X_n − ω_n‖` over `n ≥ 2`.
    pub theta_hat: Option<f64>,
    /// Smallest `K` with `‖X_n − ω_n‖ ≤ K θ̂ⁿ` on the orbit.
    pub k_hat: Option<f64>,
    /// Norms strictly decrease from step 2 on.
    pub monotone_from_two: bool,
    /// `θ̂ < 1` and monotone decay.
    pub consistent: bool,
}

/// Least-squares rate over `norms[2..=upto]`, ignoring exact zeros.
pub fn fit_rate(norms: &[f64], upto: usize) -> Option<f64> {
    let pts: Vec<(f64, f64)> = norms
        .iter()
        .enumerate()
        .take(upto + 1)
        .skip(2)
        .filter(|(_, v)| **v > 0.0)
        .map(|(i, v)| (i as f64, v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some((sxy / sxx).exp())
}

impl DecayReport {
    pub fn from_norms(norms: Vec<f64>) -> Self {
        let theta_hat = fit_rate(&norms, norms.len().saturating_sub(1));
        let k_hat = theta_hat.map(|t| {
            norms.iter().enumerate().map(|(i, v)| v / t.powi(i as i32)).fold(0.0, f64::max)
        });
        let monotone_from_two = norms.len() > 3 && norms.windows(2).skip(2).all(|w| w[1] < w[0]);
        let consistent = monotone_from_two && theta_hat.is_some_and(|t| t < 1.0);
        DecayReport { norms, theta_hat, k_hat, monotone_from_two, consistent }
    }
}

#[derive(Clone, Debug)]
pub struct Orbit {
    pub transient: Transient,
    pub cf: CfExpansion,
    /// Far elimination applied to the initial field, if it had far modes.
    pub initial_elimination: Option<EliminationReport>,
    pub states: Vec<RenormState>,
    /// First failing step, if the orbit stopped early.
    pub failure: Option<RenormError>,
    pub decay: DecayReport,
}

impl Orbit {
    /// `θ̂` fitted on the states up to `n`.
    pub fn running_theta(&self, n: usize) -> Option<f64> {
        let norms: Vec<f64> = self.states.iter().map(|s| s.norms.total).collect();
        fit_rate(&norms, n)
    }
}

/// Transient adjustment, optional initial elimination and `steps` renormalisations.
///
/// Step failures truncate the orbit and are recorded rather than returned.
pub fn renorm_orbit(x0: &FourierVectorField, slope: &Slope, steps: usize, params: &RenormParams) -> Result<Orbit, RenormError> {
    params.validate()?;
    let transient = transient_step(x0, slope)?;
    let cf = cf_expand(&transient.slope, steps + 3)?;
    cf.require(steps + 2)?;
    let alpha0 = cf.tail(0)?.to_f64();
    let alpha1 = cf.tail(1)?.to_f64();
    let rho_prime = params.widths.rho_prime;

    let mut deviation = transient.field.sub_constant([1.0, alpha0]).with_width(rho_prime)?;
    let cone = step_cone(alpha0, params.sigma)?;
    let mut initial_elimination = None;
    if deviation.project(&cone, Side::Outside).norm_r(rho_prime) > params.far_tolerance {
        // X₀ = α₀(ψ₀ + f₀/α₀); a trigonometric polynomial is analytic on any strip, so widen it to ρ.
        let g = deviation.clone().with_width(params.widths.rho)?.scale(Complex64::new(1.0 / alpha0, 0.0));
        let out = eliminate_deviation(&g, [1.0 / alpha0, 1.0], params.sigma / alpha0, &params.elimination_options(g.norm_r(rho_prime)))
            .map_err(|source| RenormError::Elimination { n: 0, source })?;
        deviation = out.field.scale(Complex64::new(alpha0, 0.0));
        initial_elimination = Some(out.report);
    }

    let mut states = vec![RenormState::new(0, alpha0, alpha1, deviation, params)];
    let mut failure = None;
    for _ in 0..steps {
        match one_step(states.last().unwrap(), &cf, params) {
            Ok(s) => states.push(s),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    let decay = DecayReport::from_norms(states.iter().map(|s| s.norms.total).collect());
    Ok(Orbit { transient, cf, initial_elimination, states, failure, decay })
}

/// `DR(ω_n) f = (I − P_{n+1}E) α_{n+1} I⁺_σ(ω_{n+1}) T_{a_n} f` for a resonant `f`.
pub fn linearized_step(f: &FourierVectorField, cf: &CfExpansion, n: usize, params: &RenormParams) -> Result<FourierVectorField, RenormError> {
    let (a, _, alpha_next) = step_data(cf, n)?;
    let scaled = scale_step(f, a, &params.widths).map_err(|source| RenormError::Scale { n, source })?;
    let cone = step_cone(alpha_next, params.sigma)?;
    let mut out = scaled
        .field
        .project(&cone, Side::Inside)
        .scale(Complex64::new(alpha_next, 0.0))
        .with_width(params.widths.rho_prime)?;
    let omega = [1.0, alpha_next];
    let p = dot(dual(omega), &out.average());
    let avg = out.average();
    out.set([0, 0], [avg[0] - p * omega[0], avg[1] - p * omega[1]])?;
    Ok(out)
}

/// Probe-based choice of `c′`: starting from `params.zeta_scale`, halve until every
/// probe `f` with `‖f‖ = ζ_0/2` along the given directions satisfies
/// `‖R(ω+f) − ω′‖ ≤ ‖f‖/ζ_0` and the step succeeds.
pub fn calibrate_zeta_scale(
    cf: &CfExpansion,
    directions: &[FourierVectorField],
    params: &RenormParams,
    max_halvings: usize,
) -> Result<f64, RenormError> {
    let (_, alpha, alpha_next) = step_data(cf, 0)?;
    let mut c = params.zeta_scale;
    'outer: for _ in 0..=max_halvings {
        let zeta = c / (alpha * alpha_next);
        let trial = RenormParams { zeta_scale: c, ..params.clone() };
        for d in directions {
            let norm = d.norm_r(params.widths.rho_prime);
            if norm == 0.0 {
                continue;
            }
            let f = d.scale(Complex64::new(0.5 * zeta / norm, 0.0));
            let state = RenormState::new(0, alpha, alpha_next, f, &trial);
            // ‖R(ω + f) − ω′‖ ≤ ‖f‖/ζ with ‖f‖ = ζ/2.
            let ok = match one_step(&state, cf, &trial) {
                Ok(next) => next.norms.total <= 0.5,
                Err(_) => false,
            };
            if !ok {
                c *= 0.5;
                continue 'outer;
            }
        }
        return Ok(c);
    }
    Err(RenormError::InvalidParams(format!("no admissible zeta scale down to {c:.3e}")))
}
