//! Diophantine-condition diagnostics: the four equivalent growth bounds, each
//! with its own constant.

use serde::Serialize;

use super::cf::CfExpansion;
use super::interval::bigint_ln;

/// Per-index constants; each is the smallest `K` making the bound at `n` hold with equality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub n: usize,
    /// `q_{n+1} / q_n^{1+β}`
    pub k_q: f64,
    /// `a_{n+1} / q_n^β`
    pub k_a: f64,
    /// `β_n^{1+β} / (2 β_{n+1})`
    pub k_beta: f64,
    /// `Ã_{n+1} / (2 Ã_n^{1+β})`
    pub k_atilde: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiophantineProbe {
    pub order: f64,
    pub rows: Vec<ProbeRow>,
    /// Running supremum of each constant over the rows.
    pub k_q: f64,
    pub k_a: f64,
    pub k_beta: f64,
    pub k_atilde: f64,
}

impl DiophantineProbe {
    pub fn is_bounded_by(&self, k: f64) -> bool {
        [self.k_q, self.k_a, self.k_beta, self.k_atilde].iter().all(|v| v.is_finite() && *v <= k)
    }
}

/// Rows cover `n ≤ n_max` as far as the expansion provides index `n + 1`.
pub fn diophantine_probe(cf: &CfExpansion, order: f64, n_max: usize) -> DiophantineProbe {
    let mut rows = Vec::new();
    let last = n_max.min(cf.len().saturating_sub(2));
    for n in 0..=last {
        if cf.len() < n + 2 {
            break;
        }
        let (_, q0) = cf.convergent(n as i64).unwrap();
        let (_, q1) = cf.convergent(n as i64 + 1).unwrap();
        let a1 = cf.coefficient(n + 1).unwrap();
        let ln_q0 = bigint_ln(&q0);
        let ln_q1 = bigint_ln(&q1);
        let ln_a1 = bigint_ln(a1);
        let b0 = cf.beta(n as i64).unwrap();
        let b1 = cf.beta(n as i64 + 1).unwrap();
        let k_beta = if b1.is_positive() {
            ((1.0 + order) * b0.ln_abs() - b1.ln_abs() - std::f64::consts::LN_2).exp()
        } else {
            f64::INFINITY
        };
        let at0 = cf.atilde(n as i64).unwrap().ln_abs();
        let at1 = cf.atilde(n as i64 + 1).unwrap().ln_abs();
        rows.push(ProbeRow {
            n,
            k_q: (ln_q1 - (1.0 + order) * ln_q0).exp(),
            k_a: (ln_a1 - order * ln_q0).exp(),
            k_beta,
            k_atilde: (at1 - (1.0 + order) * at0 - std::f64::consts::LN_2).exp(),
        });
    }
    let sup = |f: fn(&ProbeRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    DiophantineProbe {
        order,
        k_q: sup(|r| r.k_q),
        k_a: sup(|r| r.k_a),
        k_beta: sup(|r| r.k_beta),
        k_atilde: sup(|r| r.k_atilde),
        rows,
    }
}
