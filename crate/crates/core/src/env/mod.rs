//! Linear bandit environments.
//!
//! An environment is a finite action set with feature vectors `φ(a)`, a true
//! parameter `θ*` and known per-arm noise scales `ρ(a)`. Rewards are
//! `⟨φ(a), θ*⟩ + η` with zero-mean subgaussian `η` (Gaussian by default).

pub mod spline;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, norm2};

/// True parameter used throughout the reference simulation settings.
pub const DEFAULT_THETA_STAR: [f64; 5] = [-5.0, 1.0, 1.0, 1.5, 2.0];

/// Feature half-width `1/√5` of the reference uniform-arm settings.
pub fn default_half_width() -> f64 {
    1.0 / 5.0_f64.sqrt()
}

/// Noise scale of the spline continuum setting: `ρ(a) = exp(0.5 − 3a)`.
pub fn spline_noise_scale(a: f64) -> f64 {
    (0.5 - 3.0 * a).exp()
}

/// Zero-mean noise with subgaussian constant `scale`.
pub trait NoiseSampler {
    fn sample<R: Rng + ?Sized>(&self, scale: f64, rng: &mut R) -> f64;
}

/// `η ~ Normal(0, scale²)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianNoise;

impl NoiseSampler for GaussianNoise {
    fn sample<R: Rng + ?Sized>(&self, scale: f64, rng: &mut R) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        scale * z
    }
}

/// `η = ±scale` with equal probability.
#[derive(Debug, Clone, Copy, Default)]
pub struct RademacherNoise;

impl NoiseSampler for RademacherNoise {
    fn sample<R: Rng + ?Sized>(&self, scale: f64, rng: &mut R) -> f64 {
        if rng.random::<bool>() {
            scale
        } else {
            -scale
        }
    }
}

/// How per-arm noise scales are produced by [`gen_uniform_arms`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseSpec {
    /// One scale per arm, in arm order.
    Fixed(Vec<f64>),
    /// Each scale drawn iid from `Uniform[lo, hi]`.
    Uniform { lo: f64, hi: f64 },
}

/// Borrowed view of the features and noise scales a policy is allowed to see.
#[derive(Debug, Clone, Copy)]
pub struct ActionSet<'a> {
    dim: usize,
    features: &'a [f64],
    noise_scale: &'a [f64],
}

impl<'a> ActionSet<'a> {
    pub fn new(dim: usize, features: &'a [f64], noise_scale: &'a [f64]) -> Result<Self> {
        if dim == 0 || features.len() != dim * noise_scale.len() || noise_scale.is_empty() {
            return Err(invalid("action set shape mismatch"));
        }
        Ok(Self {
            dim,
            features,
            noise_scale,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.noise_scale.len()
    }

    pub fn is_empty(&self) -> bool {
        self.noise_scale.is_empty()
    }

    pub fn phi(&self, a: usize) -> &'a [f64] {
        &self.features[a * self.dim..(a + 1) * self.dim]
    }

    pub fn rho(&self, a: usize) -> f64 {
        self.noise_scale[a]
    }

    /// Update weight `ρ(a)⁻²`.
    pub fn weight(&self, a: usize) -> f64 {
        let r = self.noise_scale[a];
        1.0 / (r * r)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnvDescription {
    features: Vec<Vec<f64>>,
    theta_star: Vec<f64>,
    noise_scale: Vec<f64>,
}

/// A finite-action linear bandit with heteroskedastic noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnvDescription", into = "EnvDescription")]
pub struct LinearBanditEnv {
    dim: usize,
    features: Vec<f64>,
    theta_star: Vec<f64>,
    noise_scale: Vec<f64>,
    means: Vec<f64>,
    optimal_action: usize,
    feature_norm_lower: f64,
    feature_norm_upper: f64,
    rho_min: f64,
    rho_max: f64,
}

impl TryFrom<EnvDescription> for LinearBanditEnv {
    type Error = Error;

    fn try_from(d: EnvDescription) -> Result<Self> {
        LinearBanditEnv::new(d.features, d.theta_star, d.noise_scale)
    }
}

impl From<LinearBanditEnv> for EnvDescription {
    fn from(env: LinearBanditEnv) -> Self {
        EnvDescription {
            features: env.features.chunks(env.dim).map(<[f64]>::to_vec).collect(),
            theta_star: env.theta_star,
            noise_scale: env.noise_scale,
        }
    }
}

impl LinearBanditEnv {
    /// Build from one feature row per arm.
    pub fn new(features: Vec<Vec<f64>>, theta_star: Vec<f64>, noise_scale: Vec<f64>) -> Result<Self> {
        let dim = theta_star.len();
        if dim == 0 {
            return Err(invalid("θ* must have at least one coordinate"));
        }
        let mut flat = Vec::with_capacity(features.len() * dim);
        for row in &features {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(dim, flat, theta_star, noise_scale)
    }

    /// Build from a row-major `K × d` feature buffer.
    pub fn from_flat(dim: usize, features: Vec<f64>, theta_star: Vec<f64>, noise_scale: Vec<f64>) -> Result<Self> {
        let n_arms = noise_scale.len();
        if n_arms == 0 {
            return Err(invalid("environment needs at least one arm"));
        }
        if theta_star.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: theta_star.len(),
            });
        }
        if features.len() != n_arms * dim {
            return Err(Error::DimensionMismatch {
                expected: n_arms * dim,
                got: features.len(),
            });
        }
        if features.iter().chain(&theta_star).any(|x| !x.is_finite()) {
            return Err(invalid("features and θ* must be finite"));
        }
        if noise_scale.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(invalid("noise scales must be positive and finite"));
        }

        let norms: Vec<f64> = features.chunks(dim).map(norm2).collect();
        let feature_norm_lower = norms.iter().copied().fold(f64::INFINITY, f64::min);
        let feature_norm_upper = norms.iter().copied().fold(0.0, f64::max);
        if !(feature_norm_lower > 0.0) {
            return Err(Error::DegenerateFeatures(feature_norm_lower));
        }
        let rho_min = noise_scale.iter().copied().fold(f64::INFINITY, f64::min);
        let rho_max = noise_scale.iter().copied().fold(0.0, f64::max);

        let means: Vec<f64> = features.chunks(dim).map(|phi| dot(phi, &theta_star)).collect();
        let mut optimal_action = 0;
        for (k, m) in means.iter().enumerate() {
            if *m > means[optimal_action] {
                optimal_action = k;
            }
        }

        Ok(Self {
            dim,
            features,
            theta_star,
            noise_scale,
            means,
            optimal_action,
            feature_norm_lower,
            feature_norm_upper,
            rho_min,
            rho_max,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_arms(&self) -> usize {
        self.noise_scale.len()
    }

    pub fn phi(&self, a: usize) -> &[f64] {
        &self.features[a * self.dim..(a + 1) * self.dim]
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn theta_star(&self) -> &[f64] {
        &self.theta_star
    }

    pub fn noise_scale(&self) -> &[f64] {
        &self.noise_scale
    }

    /// Expected rewards `⟨φ(a), θ*⟩` in arm order.
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn optimal_action(&self) -> usize {
        self.optimal_action
    }

    /// `B* = ‖θ*‖₂`.
    pub fn b_star(&self) -> f64 {
        norm2(&self.theta_star)
    }

    pub fn feature_norm_lower(&self) -> f64 {
        self.feature_norm_lower
    }

    pub fn feature_norm_upper(&self) -> f64 {
        self.feature_norm_upper
    }

    pub fn rho_min(&self) -> f64 {
        self.rho_min
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn action_set(&self) -> ActionSet<'_> {
        ActionSet {
            dim: self.dim,
            features: &self.features,
            noise_scale: &self.noise_scale,
        }
    }

    fn check_action(&self, a: usize) -> Result<()> {
        if a >= self.n_arms() {
            return Err(Error::ActionOutOfRange {
                index: a,
                n_arms: self.n_arms(),
            });
        }
        Ok(())
    }

    /// `Δ(a) = ⟨φ(a*), θ*⟩ − ⟨φ(a), θ*⟩`.
    pub fn gap(&self, a: usize) -> Result<f64> {
        self.check_action(a)?;
        Ok((self.means[self.optimal_action] - self.means[a]).max(0.0))
    }

    pub fn max_gap(&self) -> f64 {
        let best = self.means[self.optimal_action];
        self.means.iter().map(|m| best - m).fold(0.0, f64::max)
    }

    /// `Σ_t Δ(a_t)` for a sequence of played arms.
    pub fn cumulative_regret(&self, actions: &[usize]) -> Result<f64> {
        actions.iter().map(|&a| self.gap(a)).sum()
    }

    /// Draw `⟨φ(a), θ*⟩ + η` with Gaussian noise of scale `ρ(a)`.
    pub fn sample_reward<R: Rng + ?Sized>(&self, a: usize, rng: &mut R) -> Result<f64> {
        self.sample_reward_with(a, &GaussianNoise, rng)
    }

    pub fn sample_reward_with<S: NoiseSampler, R: Rng + ?Sized>(
        &self,
        a: usize,
        sampler: &S,
        rng: &mut R,
    ) -> Result<f64> {
        self.check_action(a)?;
        Ok(self.means[a] + sampler.sample(self.noise_scale[a], rng))
    }
}

/// `K` arms with iid `Uniform[−w, w]` feature coordinates.
///
/// Features are drawn row by row before any noise scale.
pub fn gen_uniform_arms<R: Rng + ?Sized>(
    n_arms: usize,
    dim: usize,
    half_width: f64,
    noise: &NoiseSpec,
    theta_star: &[f64],
    rng: &mut R,
) -> Result<LinearBanditEnv> {
    if n_arms == 0 || dim == 0 {
        return Err(invalid("need at least one arm and one dimension"));
    }
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(invalid("feature half-width must be positive"));
    }
    if theta_star.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: theta_star.len(),
        });
    }
    let coord = Uniform::new(-half_width, half_width).map_err(|e| invalid(e.to_string()))?;
    let features: Vec<f64> = (0..n_arms * dim).map(|_| coord.sample(rng)).collect();
    let noise_scale = match noise {
        NoiseSpec::Fixed(list) => {
            if list.len() != n_arms {
                return Err(invalid(format!(
                    "fixed noise list has {} entries for {} arms",
                    list.len(),
                    n_arms
                )));
            }
            list.clone()
        }
        NoiseSpec::Uniform { lo, hi } => {
            if !(*lo > 0.0) || !(hi > lo) || !hi.is_finite() {
                return Err(invalid(format!("noise range [{lo}, {hi}] must satisfy 0 < lo < hi")));
            }
            let d = Uniform::new(*lo, *hi).map_err(|e| invalid(e.to_string()))?;
            (0..n_arms).map(|_| d.sample(rng)).collect()
        }
    };
    LinearBanditEnv::from_flat(dim, features, theta_star.to_vec(), noise_scale)
}

/// Noise list with `n_high` arms of scale `high` followed by `n_low` of scale `low`.
pub fn two_level_noise(n_high: usize, high: f64, n_low: usize, low: f64) -> NoiseSpec {
    let mut v = vec![high; n_high];
    v.extend(std::iter::repeat_n(low, n_low));
    NoiseSpec::Fixed(v)
}

const SPLINE_MIN_FEATURE_NORM: f64 = 1e-6;
const SPLINE_MAX_ATTEMPTS: usize = 64;

/// Actions on an equally spaced grid of `[0, 1]`, coordinate `k` of `φ` being
/// a clamped cubic B-spline with `n_knots` interior knots and coefficients
/// `coefficients[k]`.
pub fn spline_env_from_coefficients(
    n_points: usize,
    n_knots: usize,
    coefficients: &[Vec<f64>],
    theta_star: &[f64],
    noise_fn: impl Fn(f64) -> f64,
) -> Result<LinearBanditEnv> {
    if n_points < 2 || n_knots < 2 {
        return Err(invalid("spline continuum needs n_points >= 2 and n_knots >= 2"));
    }
    let dim = theta_star.len();
    if coefficients.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: coefficients.len(),
        });
    }
    let knots = spline::clamped_uniform_knots(n_knots, spline::CUBIC);
    let n_basis = spline::basis_len(&knots, spline::CUBIC);
    if let Some(bad) = coefficients.iter().find(|c| c.len() != n_basis) {
        return Err(Error::DimensionMismatch {
            expected: n_basis,
            got: bad.len(),
        });
    }
    let mut features = Vec::with_capacity(n_points * dim);
    let mut noise_scale = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let a = i as f64 / (n_points - 1) as f64;
        let basis = spline::basis_values(&knots, spline::CUBIC, a)?;
        features.extend(coefficients.iter().map(|c| dot(c, &basis)));
        noise_scale.push(noise_fn(a));
    }
    let env = LinearBanditEnv::from_flat(dim, features, theta_star.to_vec(), noise_scale)?;
    if env.feature_norm_lower() < SPLINE_MIN_FEATURE_NORM {
        return Err(Error::DegenerateFeatures(env.feature_norm_lower()));
    }
    Ok(env)
}

/// Random spline continuum: coefficients iid `Uniform[−1, 1]`, redrawn when the
/// smallest feature norm over the grid falls below `1e-6`.
pub fn gen_spline_continuum<R: Rng + ?Sized>(
    n_points: usize,
    n_knots: usize,
    theta_star: &[f64],
    noise_fn: impl Fn(f64) -> f64,
    rng: &mut R,
) -> Result<LinearBanditEnv> {
    if n_knots < 2 {
        return Err(invalid("n_knots must be at least 2"));
    }
    let knots = spline::clamped_uniform_knots(n_knots, spline::CUBIC);
    let n_basis = spline::basis_len(&knots, spline::CUBIC);
    let coef = Uniform::new_inclusive(-1.0, 1.0).map_err(|e| invalid(e.to_string()))?;
    for _ in 0..SPLINE_MAX_ATTEMPTS {
        let coefficients: Vec<Vec<f64>> = (0..theta_star.len())
            .map(|_| (0..n_basis).map(|_| coef.sample(rng)).collect())
            .collect();
        match spline_env_from_coefficients(n_points, n_knots, &coefficients, theta_star, &noise_fn) {
            Ok(env) => return Ok(env),
            Err(Error::DegenerateFeatures(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Numerical(format!(
        "no spline draw with feature norms >= {SPLINE_MIN_FEATURE_NORM:e} in {SPLINE_MAX_ATTEMPTS} attempts"
    )))
}
