//! Computable pieces of the regret analysis.
//!
//! These are used by the validation suites and the property tests: the
//! minimax directional constant `κ`, the eigen-direction signal `ω`, the
//! constants behind the conditions on `α` and `T_B`, and direct checks of the
//! supporting inequalities (the IDS Cauchy-Schwarz bound, the mixture lemma,
//! the eigenvalue growth lemma and the harmonic-sum lemma).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::env::LinearBanditEnv;
use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, norm2};

/// Relative tolerance applied to sums in the inequality checks.
pub const CHECK_TOLERANCE: f64 = 1e-9;

/// Controls for the sphere search behind [`kappa`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaSearch {
    /// Number of deterministic starting directions (d ≥ 3) or grid angles (d = 2).
    pub starts: usize,
    /// Pattern-search step below which a local search stops.
    pub min_step: f64,
    /// Cap on pattern-search iterations per start.
    pub max_iterations: usize,
}

impl Default for KappaSearch {
    fn default() -> Self {
        Self {
            starts: 256,
            min_step: 1e-10,
            max_iterations: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaEstimate {
    /// Best value of `max_a ρ(a)⁻² ⟨v, φ(a)⟩²` found (an upper bound on κ).
    pub value: f64,
    /// Unit vector achieving `value`.
    pub certificate: Vec<f64>,
    /// The arms fail to span the space (κ is zero up to round-off).
    pub degenerate: bool,
}

struct Arms<'a> {
    dim: usize,
    features: &'a [f64],
    weights: Vec<f64>,
}

impl Arms<'_> {
    fn objective(&self, v: &[f64]) -> f64 {
        self.features
            .chunks_exact(self.dim)
            .zip(&self.weights)
            .map(|(phi, w)| {
                let p = dot(phi, v);
                w * p * p
            })
            .fold(0.0, f64::max)
    }
}

fn normalize(v: &mut [f64]) -> bool {
    let n = norm2(v);
    if !(n > 0.0) || !n.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= n);
    true
}

fn starting_points(dim: usize, count: usize) -> Vec<Vec<f64>> {
    if dim == 1 {
        return vec![vec![1.0]];
    }
    if dim == 2 {
        // half circle suffices: the objective is even in v
        let n = count.max(8);
        return (0..n)
            .map(|k| {
                let a = std::f64::consts::PI * k as f64 / n as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
    }
    let mut out = Vec::with_capacity(count + 2 * dim);
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        out.push(e);
    }
    out.push(vec![1.0 / (dim as f64).sqrt(); dim]);
    let mut rng = ChaCha8Rng::seed_from_u64(0x006b_6170_7061);
    while out.len() < count + dim + 1 {
        let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        if normalize(&mut v) {
            out.push(v);
        }
    }
    out
}

fn pattern_search(arms: &Arms<'_>, start: Vec<f64>, search: &KappaSearch) -> (f64, Vec<f64>) {
    let d = arms.dim;
    let mut v = start;
    let mut best = arms.objective(&v);
    let mut step = 0.25;
    let mut trial = vec![0.0; d];
    for _ in 0..search.max_iterations {
        if step < search.min_step {
            break;
        }
        let mut improved = false;
        'dirs: for i in 0..d {
            for sign in [1.0, -1.0] {
                trial.copy_from_slice(&v);
                trial[i] += sign * step;
                if !normalize(&mut trial) {
                    continue;
                }
                let f = arms.objective(&trial);
                if f < best {
                    best = f;
                    v.copy_from_slice(&trial);
                    improved = true;
                    break 'dirs;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, v)
}

/// Approximate `κ = min_{‖v‖=1} max_a ρ(a)⁻² ⟨v, φ(a)⟩²`.
///
/// Multi-start pattern search on the sphere from a deterministic set of
/// starting directions. The returned value is attained by the certificate,
/// so it is always an upper bound on κ.
pub fn kappa(env: &LinearBanditEnv, search: &KappaSearch) -> Result<KappaEstimate> {
    kappa_from_features(env.dim(), env.features(), env.noise_scale(), search)
}

/// [`kappa`] on raw row-major features and noise scales.
pub fn kappa_from_features(dim: usize, features: &[f64], noise_scale: &[f64], search: &KappaSearch) -> Result<KappaEstimate> {
    if dim == 0 {
        return Err(invalid("kappa needs d ≥ 1"));
    }
    if features.is_empty() || features.len() != dim * noise_scale.len() {
        return Err(Error::DimensionMismatch {
            expected: dim * noise_scale.len(),
            got: features.len(),
        });
    }
    let arms = Arms {
        dim,
        features,
        weights: noise_scale.iter().map(|r| 1.0 / (r * r)).collect(),
    };
    let mut best = (f64::INFINITY, vec![0.0; dim]);
    for start in starting_points(dim, search.starts) {
        let (f, v) = pattern_search(&arms, start, search);
        if f < best.0 {
            best = (f, v);
        }
    }
    let scale = features
        .chunks_exact(dim)
        .zip(&arms.weights)
        .map(|(phi, w)| w * dot(phi, phi))
        .fold(0.0, f64::max);
    Ok(KappaEstimate {
        value: best.0,
        degenerate: best.0 <= 1e-10 * scale,
        certificate: best.1,
    })
}

/// `ω = ρ⁻² ⟨v_min, φ⟩²`.
pub fn omega(v_min: &[f64], phi: &[f64], rho: f64) -> Result<f64> {
    if v_min.len() != phi.len() {
        return Err(Error::DimensionMismatch {
            expected: v_min.len(),
            got: phi.len(),
        });
    }
    if (norm2(v_min) - 1.0).abs() > 1e-9 {
        return Err(invalid("v_min must be a unit vector"));
    }
    if !(rho > 0.0) {
        return Err(invalid(format!("noise scale must be positive, got {rho}")));
    }
    let p = dot(v_min, phi);
    Ok(p * p / (rho * rho))
}

/// Inputs to [`ebids_constants`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantInputs {
    /// Smallest feature norm `L`.
    pub l: f64,
    /// Largest feature norm `U`.
    pub u: f64,
    pub rho_min: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub d: usize,
    pub alpha: f64,
    /// Relative slack `g` of the norm-bound guarantee.
    pub g: f64,
    pub delta: f64,
    /// Conservative norm bound `B`.
    pub bound: f64,
}

impl ConstantInputs {
    /// Inputs read off an environment; `κ` is searched with default controls.
    pub fn from_env(env: &LinearBanditEnv, gamma: f64, alpha: f64, g: f64, delta: f64, bound: f64) -> Result<Self> {
        let k = kappa(env, &KappaSearch::default())?;
        Ok(Self {
            l: env.feature_norm_lower(),
            u: env.feature_norm_upper(),
            rho_min: env.rho_min(),
            gamma,
            kappa: k.value,
            d: env.dim(),
            alpha,
            g,
            delta,
            bound,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EbidsConstants {
    pub c0: f64,
    pub h0: f64,
    pub u0: f64,
    pub u1: f64,
    pub w0: f64,
    pub w1: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub g: f64,
    pub kappa: f64,
    pub d: usize,
}

pub fn ebids_constants(inp: &ConstantInputs) -> Result<EbidsConstants> {
    let positive = [
        ("L", inp.l),
        ("U", inp.u),
        ("rho_min", inp.rho_min),
        ("gamma", inp.gamma),
        ("kappa", inp.kappa),
        ("g", inp.g),
    ];
    for (name, x) in positive {
        if !(x > 0.0) || !x.is_finite() {
            return Err(invalid(format!("{name} must be positive and finite, got {x}")));
        }
    }
    if inp.l > inp.u {
        return Err(invalid("L must not exceed U"));
    }
    if inp.d == 0 {
        return Err(invalid("d must be positive"));
    }
    if !(inp.alpha > 0.0 && inp.alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1), got {}", inp.alpha)));
    }
    if !(inp.delta > 0.0 && inp.delta < 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1), got {}", inp.delta)));
    }
    if !(inp.bound >= 0.0) || !inp.bound.is_finite() {
        return Err(invalid(format!("B must be finite and nonnegative, got {}", inp.bound)));
    }

    let d = inp.d as f64;
    let gamma = inp.gamma;
    let s = inp.u * inp.u / (inp.rho_min * inp.rho_min); // ρ_min⁻² U²
    let c0 = inp.l * inp.l / (inp.u * inp.u * (gamma + s) * (1.0 / inp.kappa + 1.0 / gamma));
    let log_ratio = (s / gamma).ln_1p();
    let h0 = 8.0 * 1.25_f64.ln() + 4.0 * (1.0 / inp.delta).ln() + 2.0 * d * log_ratio + 2.0 * gamma * inp.bound * inp.bound;
    let gg = inp.g.powi(-2);
    let k6 = c0 / (6.0 + 16.0 * gg);
    let k12 = c0 / (12.0 + 32.0 * gg);
    let odds = (1.0 - inp.alpha) / inp.alpha;
    let u0 = k6 * 2.0_f64.ln() + odds * d * log_ratio;
    let u1 = k12 - odds * d / 2.0;
    let w0 = k6 + odds * d * log_ratio;
    let w1 = k12 - odds * d;
    let b0 = (w0 * (gamma / d * u0 - gamma + s) - gamma * u0) / d + gamma - s;
    let b1 = (gamma * u1 - gamma / d * u1 * w0 - gamma / d * u0 * w1 + gamma * w1 - s * w1) / d;
    let b2 = gamma / (d * d) * u1 * w1;
    Ok(EbidsConstants {
        c0,
        h0,
        u0,
        u1,
        w0,
        w1,
        b0,
        b1,
        b2,
        g: inp.g,
        kappa: inp.kappa,
        d: inp.d,
    })
}

/// Smallest admissible mixture weight, `d / (d + c0/(12 + 32 g⁻²))`.
pub fn min_alpha(d: usize, c0: f64, g: f64) -> f64 {
    let d = d as f64;
    d / (d + c0 / (12.0 + 32.0 * g.powi(-2)))
}

/// Guaranteed-sufficient length of the bound exploration phase.
///
/// Usually astronomically large (it may overflow to `+∞`); treat it as a
/// diagnostic rather than a practical setting.
pub fn min_exploration_horizon(c: &EbidsConstants, b_star: f64) -> Result<f64> {
    // u1, w1 > 0 is what the α condition buys; b2 > 0 alone would also
    // accept both being negative
    if !(c.u1 > 0.0 && c.w1 > 0.0 && c.b2 > 0.0) {
        return Err(invalid(format!(
            "b2 = {} (u1 = {}, w1 = {}) is not a product of positives: alpha must exceed min_alpha = {}",
            c.b2,
            c.u1,
            c.w1,
            min_alpha(c.d, c.c0, c.g)
        )));
    }
    if !(b_star > 0.0) {
        return Err(invalid(format!("B* must be positive, got {b_star}")));
    }
    let d = c.d as f64;
    let head = c.h0 + 2.0 * d + 8.0;
    let exponent = head / c.b2 * (4.0 / (c.g * c.g * b_star * b_star) + c.b1.abs() / (2.0 * d + 8.0) + c.b0.abs() / head);
    Ok(exponent.exp().max(4.0))
}

/// `γ − ρ_min⁻² U² + (1/d) Σ ω_t`, a lower bound on `λ_min(W_{T+1})`.
pub fn lemma2_lower_bound(gamma: f64, rho_min: f64, u: f64, d: usize, omegas: &[f64]) -> f64 {
    gamma - u * u / (rho_min * rho_min) + omegas.iter().sum::<f64>() / d as f64
}

/// `log T + U/c + 1`.
pub fn lemma3_upper_bound(t: usize, u: f64, c: f64) -> f64 {
    (t as f64).ln() + u / c + 1.0
}

/// `Σ_{t=1}^{T} x_{t+1} / (c + Σ_{τ≤t} x_τ)` for `x = (x_1, …, x_{T+1})`.
pub fn lemma3_sum(x: &[f64], c: f64) -> f64 {
    let mut acc = c;
    let mut total = 0.0;
    for w in x.windows(2) {
        acc += w[0];
        total += w[1] / acc;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub holds: bool,
    /// Right-hand side minus left-hand side.
    pub slack: f64,
}

/// `Σ Δ̂ ≤ √(Σ Ψ · Σ I)` with relative tolerance [`CHECK_TOLERANCE`].
pub fn theorem1_check(gaps: &[f64], ratios: &[f64], infos: &[f64]) -> Result<Check> {
    if gaps.len() != ratios.len() || gaps.len() != infos.len() {
        return Err(Error::DimensionMismatch {
            expected: gaps.len(),
            got: if ratios.len() != gaps.len() { ratios.len() } else { infos.len() },
        });
    }
    let lhs: f64 = gaps.iter().sum();
    let rhs = (ratios.iter().sum::<f64>() * infos.iter().sum::<f64>()).sqrt();
    Ok(Check {
        holds: lhs <= rhs * (1.0 + CHECK_TOLERANCE),
        slack: rhs - lhs,
    })
}

/// Mixture lemma at one step: with `chosen` the deterministic IDS arm for the
/// criterion `α I^X + (1 − α) I^Y`,
/// `I^X(chosen) ≥ Δ̂²(chosen)/Δ̂²(a*) · I^X(a*) − ((1 − α)/α) I^Y(chosen)`
/// where `a* = argmax I^X`.
pub fn lemma1_check(gaps: &[f64], info_x: &[f64], info_y: &[f64], alpha: f64, chosen: usize) -> Result<Check> {
    let n = gaps.len();
    if info_x.len() != n || info_y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if info_x.len() != n { info_x.len() } else { info_y.len() },
        });
    }
    if chosen >= n {
        return Err(Error::ActionOutOfRange { index: chosen, n_arms: n });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let a_star = (0..n).fold(0, |b, a| if info_x[a] > info_x[b] { a } else { b });
    let scale = if gaps[a_star] > 0.0 {
        (gaps[chosen] / gaps[a_star]).powi(2)
    } else if gaps[chosen] == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let rhs = scale * info_x[a_star] - (1.0 - alpha) / alpha * info_y[chosen];
    let lhs = info_x[chosen];
    let tol = CHECK_TOLERANCE * (1.0 + lhs.abs().max(rhs.abs()));
    Ok(Check {
        holds: lhs + tol >= rhs,
        slack: lhs - rhs,
    })
}
