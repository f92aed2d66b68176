//! Online weighted ridge regression with self-normalized confidence radii and
//! empirical parameter-norm bounds.
//!
//! After `t − 1` observations the estimator holds
//!
//! ```text
//! W_t = γ I + Σ ρ(A_s)⁻² φ(A_s) φ(A_s)ᵀ,   b_t = Σ ρ(A_s)⁻² φ(A_s) Y_s,   θ̂_t = W_t⁻¹ b_t
//! ```
//!
//! and the confidence radius
//!
//! ```text
//! β_t(δ', B') = [ √(2 log(1/δ') + log det W_t − log det W_1) + √γ B' ]²
//! ```
//!
//! from which it derives the running norm bounds
//! `B̂_t = min{B, ‖θ̂_t‖ + β_t(ζ_t(δ), B)^½ λ_min(W_t)^−½}` and
//! `B̃_t = min{B, min_{τ≤t} ‖θ̂_τ‖ + β_τ(ζ_τ(δ), B̂_τ)^½ λ_min(W_τ)^−½}`.

use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, mat_vec, norm2, PrecisionState};

/// `ζ_t(δ) = min{δ, 1/t²}`.
pub fn zeta(t: u64, delta: f64) -> f64 {
    let t = t.max(1) as f64;
    delta.min(1.0 / (t * t))
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("{what} must lie in (0, 1), got {p}")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct WlsEstimator {
    precision: PrecisionState,
    moment: Vec<f64>,
    theta_hat: Vec<f64>,
    gamma: f64,
    step: u64,
    bound: f64,
    delta: f64,
    b_hat: f64,
    b_tilde: f64,
    tilde_candidate: f64,
}

impl WlsEstimator {
    /// Fresh estimator at step 1 (no data) with ridge penalty `gamma`,
    /// conservative norm bound `bound` and error tolerance `delta`.
    pub fn new(dim: usize, gamma: f64, bound: f64, delta: f64) -> Result<Self> {
        if !(bound >= 0.0) || !bound.is_finite() {
            return Err(invalid(format!("norm bound must be finite and nonnegative, got {bound}")));
        }
        check_probability(delta, "delta")?;
        let precision = PrecisionState::new(dim, gamma)?;
        let mut est = Self {
            precision,
            moment: vec![0.0; dim],
            theta_hat: vec![0.0; dim],
            gamma,
            step: 1,
            bound,
            delta,
            b_hat: bound,
            b_tilde: bound,
            tilde_candidate: f64::INFINITY,
        };
        est.refresh_bounds()?;
        Ok(est)
    }

    pub fn dim(&self) -> usize {
        self.precision.dim()
    }

    pub fn precision(&self) -> &PrecisionState {
        &self.precision
    }

    pub fn moment_vector(&self) -> &[f64] {
        &self.moment
    }

    pub fn theta_hat(&self) -> &[f64] {
        &self.theta_hat
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Current 1-based time index `t`; `1` means no observations yet.
    pub fn step(&self) -> u64 {
        self.step
    }

    /// The conservative bound `B`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `B̂_t`.
    pub fn b_hat(&self) -> f64 {
        self.b_hat
    }

    /// `B̃_t`.
    pub fn b_tilde(&self) -> f64 {
        self.b_tilde
    }

    /// The unclamped term entering the running minimum at the current step.
    pub fn tilde_candidate(&self) -> f64 {
        self.tilde_candidate
    }

    /// Incorporate one observation `(φ, ρ, Y)`.
    pub fn observe(&mut self, phi: &[f64], rho: f64, reward: f64) -> Result<()> {
        if phi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: phi.len(),
            });
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(invalid(format!("noise scale must be positive, got {rho}")));
        }
        if !reward.is_finite() {
            return Err(Error::Numerical(format!("non-finite reward {reward}")));
        }
        let weight = 1.0 / (rho * rho);
        self.precision.rank1_update(weight, phi)?;
        for (m, x) in self.moment.iter_mut().zip(phi) {
            *m += weight * x * reward;
        }
        self.theta_hat = mat_vec(self.precision.w_inverse(), self.dim(), &self.moment);
        self.step += 1;
        self.refresh_bounds()
    }

    /// `log det W_t − log det W_1`, clamped at zero against round-off.
    pub fn log_det_ratio(&self) -> f64 {
        let initial = self.dim() as f64 * self.gamma.ln();
        (self.precision.log_det() - initial).max(0.0)
    }

    /// Squared confidence radius `β_t(δ', B')`.
    pub fn beta(&self, confidence: f64, bound: f64) -> Result<f64> {
        check_probability(confidence, "confidence level")?;
        if !(bound >= 0.0) || !bound.is_finite() {
            return Err(invalid(format!("bound must be finite and nonnegative, got {bound}")));
        }
        let log_term = 2.0 * (1.0 / confidence).ln() + self.log_det_ratio();
        let root = log_term.max(0.0).sqrt() + self.gamma.sqrt() * bound;
        Ok(root * root)
    }

    /// `‖θ − θ̂_t‖²_{W_t}`.
    pub fn ellipsoid_distance(&self, theta: &[f64]) -> Result<f64> {
        let diff: Vec<f64> = theta.iter().zip(&self.theta_hat).map(|(a, b)| a - b).collect();
        self.precision.quad_norm(&diff)
    }

    /// `‖θ̂_t‖₂ + β_t(δ', B')^½ λ_min(W_t)^−½`: distance from the origin to the
    /// farthest point of the confidence ellipsoid, bounded via its longest semi-axis.
    pub fn norm_radius(&self, confidence: f64, bound: f64) -> Result<f64> {
        let beta = self.beta(confidence, bound)?;
        Ok(norm2(&self.theta_hat) + (beta / self.precision.min_eigenvalue()).sqrt())
    }

    fn refresh_bounds(&mut self) -> Result<()> {
        let z = zeta(self.step, self.delta);
        self.b_hat = self.bound.min(self.norm_radius(z, self.bound)?);
        self.tilde_candidate = self.norm_radius(z, self.b_hat)?;
        self.b_tilde = self.b_tilde.min(self.tilde_candidate).min(self.bound);
        Ok(())
    }

    /// `⟨φ, θ̂_t⟩`.
    pub fn predict(&self, phi: &[f64]) -> f64 {
        dot(phi, &self.theta_hat)
    }
}
