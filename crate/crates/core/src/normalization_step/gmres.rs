//! Restarted GMRES over complex vectors.

use num_complex::Complex64;

pub(crate) struct GmresOutcome {
    pub x: Vec<Complex64>,
    pub iterations: usize,
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Solves `A x = b` from `x = 0`; stops at relative residual `tol` or after `max_iter` matvecs.
pub(crate) fn gmres(
    mut apply: impl FnMut(&[Complex64]) -> Vec<Complex64>,
    b: &[Complex64],
    tol: f64,
    restart: usize,
    max_iter: usize,
) -> GmresOutcome {
    let n = b.len();
    let b_norm = norm2(b);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    if b_norm == 0.0 {
        return GmresOutcome { x, iterations: 0 };
    }
    let mut iterations = 0;
    let mut rel;
    while iterations < max_iter {
        let ax = if iterations == 0 { vec![Complex64::new(0.0, 0.0); n] } else { apply(&x) };
        let r: Vec<Complex64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm2(&r);
        rel = beta / b_norm;
        if rel <= tol {
            break;
        }
        let mut basis: Vec<Vec<Complex64>> = vec![r.iter().map(|z| z / beta).collect()];
        let mut h: Vec<Vec<Complex64>> = Vec::new();
        let mut cs: Vec<f64> = Vec::new();
        let mut sn: Vec<Complex64> = Vec::new();
        let mut g = vec![Complex64::new(beta, 0.0)];
        let mut k = 0;
        while k < restart && iterations < max_iter {
            let mut w = apply(&basis[k]);
            iterations += 1;
            let mut col = vec![Complex64::new(0.0, 0.0); k + 2];
            for (j, v) in basis.iter().enumerate() {
                let hij = dot(v, &w);
                col[j] = hij;
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= hij * vi;
                }
            }
            let wn = norm2(&w);
            col[k + 1] = Complex64::new(wn, 0.0);
            for j in 0..k {
                let t = cs[j] * col[j] + sn[j] * col[j + 1];
                col[j + 1] = -sn[j].conj() * col[j] + cs[j] * col[j + 1];
                col[j] = t;
            }
            let (a, bb) = (col[k], col[k + 1]);
            let denom = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            let (c, s) = if denom == 0.0 {
                (1.0, Complex64::new(0.0, 0.0))
            } else if a.norm() == 0.0 {
                (0.0, bb.conj() / bb.norm())
            } else {
                (a.norm() / denom, (a / a.norm()) * bb.conj() / denom)
            };
            col[k] = c * a + s * bb;
            col[k + 1] = Complex64::new(0.0, 0.0);
            cs.push(c);
            sn.push(s);
            let gk = g[k];
            g[k] = c * gk;
            g.push(-s.conj() * gk);
            h.push(col);
            k += 1;
            rel = g[k].norm() / b_norm;
            if rel <= tol || wn == 0.0 {
                break;
            }
            basis.push(w.iter().map(|z| z / wn).collect());
        }
        // Back substitution on the triangular factor.
        let mut y = vec![Complex64::new(0.0, 0.0); k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= h[j][i] * y[j];
            }
            y[i] = s / h[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            for (xi, vi) in x.iter_mut().zip(&basis[j]) {
                *xi += yj * vi;
            }
        }
        if rel <= tol {
            break;
        }
    }
    GmresOutcome { x, iterations }
}
