//! Helpers shared by the integration tests: a direct transcription of the
//! analysis constants and small dense-matrix oracles on top of nalgebra.

#![allow(dead_code, clippy::too_many_arguments)]

use nalgebra::{DMatrix, DVector};

/// `[c0, h0, u0, u1, w0, w1, b0, b1, b2]`, written out term by term from the
/// published definitions with no shared subexpressions.
pub fn constants_by_hand(
    l: f64,
    u: f64,
    rho_min: f64,
    gamma: f64,
    kappa: f64,
    d: usize,
    alpha: f64,
    g: f64,
    delta: f64,
    b: f64,
) -> [f64; 9] {
    let d = d as f64;
    let c0 = (l * l) / ((u * u) * (gamma + u * u / (rho_min * rho_min)) * (1.0 / kappa + 1.0 / gamma));
    let lg = (1.0 + (u * u / (rho_min * rho_min)) / gamma).ln();
    let h0 = 8.0 * (5.0_f64 / 4.0).ln() + 4.0 * (1.0 / delta).ln() + 2.0 * d * lg + 2.0 * gamma * b * b;
    let u0 = c0 / (6.0 + 16.0 / (g * g)) * 2.0_f64.ln() + (1.0 - alpha) / alpha * d * lg;
    let u1 = c0 / (12.0 + 32.0 / (g * g)) - (1.0 - alpha) / (2.0 * alpha) * d;
    let w0 = c0 / (6.0 + 16.0 / (g * g)) + (1.0 - alpha) / alpha * d * lg;
    let w1 = c0 / (12.0 + 32.0 / (g * g)) - (1.0 - alpha) / alpha * d;
    let r = u * u / (rho_min * rho_min);
    let b0 = (w0 * (gamma / d * u0 - gamma + r) - gamma * u0) / d + gamma - r;
    let b1 = (gamma * u1 - gamma / d * u1 * w0 - gamma / d * u0 * w1 + gamma * w1 - r * w1) / d;
    let b2 = gamma / (d * d) * u1 * w1;
    [c0, h0, u0, u1, w0, w1, b0, b1, b2]
}

pub fn min_alpha_by_hand(d: usize, c0: f64, g: f64) -> f64 {
    d as f64 / (d as f64 + c0 / (12.0 + 32.0 / (g * g)))
}

/// `max{4, exp[(h0 + 2d + 8)/b2 · (4/(g² B*²) + |b1|/(2d + 8) + |b0|/(h0 + 2d + 8))]}`.
pub fn horizon_by_hand(k: &[f64; 9], d: usize, g: f64, b_star: f64) -> f64 {
    let [_, h0, _, _, _, _, b0, b1, b2] = *k;
    let d = d as f64;
    let e = (h0 + 2.0 * d + 8.0) / b2
        * (4.0 / (g * g) / (b_star * b_star) + b1.abs() / (2.0 * d + 8.0) + b0.abs() / (h0 + 2.0 * d + 8.0));
    f64::max(4.0, e.exp())
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

pub fn matrix(flat: &[f64], d: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(d, d, flat)
}

/// `γ I + Σ wᵢ φᵢ φᵢᵀ` built directly.
pub fn gram(d: usize, gamma: f64, rows: &[(f64, Vec<f64>)]) -> DMatrix<f64> {
    let mut w = DMatrix::identity(d, d) * gamma;
    for (weight, phi) in rows {
        let v = DVector::from_column_slice(phi);
        w += &v * v.transpose() * *weight;
    }
    w
}

pub fn quad(m: &DMatrix<f64>, x: &[f64]) -> f64 {
    let v = DVector::from_column_slice(x);
    (v.transpose() * m * &v)[(0, 0)]
}
