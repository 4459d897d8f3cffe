//! Decay of compositions of the linearised step on oscillatory resonant fields.
//!
//! On `(I − E)` the derivative is `L_i = α_{i+1} I⁺_σ(ω_{i+1}) ∘ T_{a_i}`, which
//! acts on each mode separately: `k ↦ T_{a_i} k` while the coefficient is
//! multiplied by `α_{i+1} T_{a_i}⁻¹`. The weighted `ℓ₁` norm of the chain
//! `L_n ⋯ L_j` is therefore the column-sum norm of the matrix product times the
//! largest weight ratio `e^{ρ′(‖k_out‖ − ‖k‖)}` over modes surviving every cut.

use serde::{Deserialize, Serialize};

use super::{linearized_step, step_cone, step_data, RenormError, RenormParams};
use crate::fourier_field::{mode_norm, shift_mode, FourierVectorField, Mode, Side};
use crate::number_theory::CfExpansion;

/// `Λ_{j,n} = [Ã_{n+1} Ã_n / (σ Ã_{j−1}^{2+β})]^{1/(2+β)}`, evaluated in logarithms.
pub fn lambda_jn(cf: &CfExpansion, sigma: f64, beta: f64, j: usize, n: usize) -> Result<f64, RenormError> {
    if j > n {
        return Err(RenormError::InvalidParams(format!("need j <= n (j = {j}, n = {n})")));
    }
    let p = 2.0 + beta;
    let ln = cf.atilde(n as i64 + 1)?.ln_abs() + cf.atilde(n as i64)?.ln_abs()
        - sigma.ln()
        - p * cf.atilde(j as i64 - 1)?.ln_abs();
    Ok((ln / p).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub j: usize,
    /// Number of factors `n − j + 1`.
    pub factors: usize,
    /// `ln ‖L_n ⋯ L_j (I − E)‖`; `None` when no mode survives.
    pub log_norm: Option<f64>,
    /// `ln(N_j / N_{j+1})`, with `N_{n+1} = 1`.
    pub log_ratio: Option<f64>,
    /// Mode attaining the weight maximum.
    pub extremal_mode: Option<Mode>,
    pub surviving_modes: usize,
    pub lambda: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayProbe {
    pub n: usize,
    pub truncation: i64,
    /// Ordered by decreasing `j`, i.e. increasing chain length.
    pub rows: Vec<DecayRow>,
    /// `−ln(N_j/N_{j+1})` strictly increases with chain length.
    pub super_geometric: bool,
}

/// `‖M‖_{1→1}`, the largest column `ℓ₁` sum.
fn column_norm(m: &[[f64; 2]; 2]) -> f64 {
    (m[0][0].abs() + m[1][0].abs()).max(m[0][1].abs() + m[1][1].abs())
}

fn mul(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Exact norms of `L_n ⋯ L_j (I − E)` for `j = n, n−1, …, 0`, over input modes with `‖k‖₁ ≤ truncation`.
pub fn stable_decay_probe(cf: &CfExpansion, params: &RenormParams, truncation: i64, n: usize) -> Result<DecayProbe, RenormError> {
    params.validate()?;
    let rho_prime = params.widths.rho_prime;
    let mut data = Vec::with_capacity(n + 1);
    let mut cones = Vec::with_capacity(n + 2);
    for i in 0..=n {
        let (a, alpha, alpha_next) = step_data(cf, i)?;
        data.push((a as i64, alpha_next));
        cones.push(step_cone(alpha, params.sigma)?);
    }
    cones.push(step_cone(data[n].1, params.sigma)?);

    let mut rows = Vec::with_capacity(n + 1);
    let mut previous: Option<f64> = Some(0.0);
    for j in (0..=n).rev() {
        let mut matrix = [[1.0, 0.0], [0.0, 1.0]];
        for &(a, alpha_next) in &data[j..=n] {
            let inv = [[-(a as f64) * alpha_next, alpha_next], [alpha_next, 0.0]];
            matrix = mul(&inv, &matrix);
        }
        let mut best: Option<(i64, Mode)> = None;
        let mut surviving = 0;
        for k1 in -truncation..=truncation {
            let rest = truncation - k1.abs();
            for k2 in -rest..=rest {
                let k = [k1, k2];
                if k == [0, 0] || !cones[j].contains(k) {
                    continue;
                }
                let mut image = k;
                let survived = data[j..=n].iter().enumerate().all(|(offset, &(a, _))| {
                    image = shift_mode(image, a);
                    cones[j + offset + 1].contains(image)
                });
                if survived {
                    surviving += 1;
                    let gain = mode_norm(image) - mode_norm(k);
                    if best.map_or(true, |(g, _)| gain > g) {
                        best = Some((gain, k));
                    }
                }
            }
        }
        let log_norm = best.map(|(gain, _)| column_norm(&matrix).ln() + rho_prime * gain as f64);
        let log_ratio = match (log_norm, previous) {
            (Some(cur), Some(prev)) => Some(cur - prev),
            _ => None,
        };
        rows.push(DecayRow {
            j,
            factors: n - j + 1,
            log_norm,
            log_ratio,
            extremal_mode: best.map(|b| b.1),
            surviving_modes: surviving,
            lambda: lambda_jn(cf, params.sigma, 0.0, j, n)?,
        });
        previous = log_norm;
    }
    let rates: Vec<Option<f64>> = rows.iter().map(|r| r.log_ratio.map(|x| -x)).collect();
    let super_geometric = rates.iter().all(Option::is_some)
        && rates.windows(2).all(|w| w[1].unwrap() > w[0].unwrap());
    Ok(DecayProbe { n, truncation, rows, super_geometric })
}

/// `L_n ⋯ L_j (I − E) f` by repeated application of the linearised step.
pub fn linear_chain(f: &FourierVectorField, cf: &CfExpansion, params: &RenormParams, j: usize, n: usize) -> Result<FourierVectorField, RenormError> {
    let mut g = f.oscillatory().project(&step_cone(step_data(cf, j)?.1, params.sigma)?, Side::Inside);
    for i in j..=n {
        g = linearized_step(&g, cf, i, params)?;
    }
    Ok(g)
}
