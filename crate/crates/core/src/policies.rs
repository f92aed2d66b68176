//! Bandit policies: weighted UCB, IDS-UCB (deterministic and randomized),
//! EB-UCB and EBIDS.
//!
//! Every policy ranks arms with the same ingredients computed from a
//! [`WlsEstimator`]:
//!
//! - the UCB arm `a_ucb = argmax ⟨φ(a), θ̂⟩ + β^½ ‖φ(a)‖_{W⁻¹}`,
//! - the gap estimate `⟨φ(a_ucb) − φ(a), θ̂⟩ + β^½ (‖φ(a_ucb)‖_{W⁻¹} + ‖φ(a)‖_{W⁻¹})`,
//! - the directional information gain about `φ(a_ucb)` from playing `a`,
//! - for EBIDS, the information gain along the minimum eigenvector of `W`.
//!
//! What differs is which confidence level and norm bound feed `β`, and which
//! information criterion the IDS ratio is formed with.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::env::ActionSet;
use crate::error::{invalid, Error, Result};
use crate::estimator::{zeta, WlsEstimator};
use crate::linalg::dot;

/// Information gains are clamped to this floor before forming a ratio.
pub const INFO_FLOOR: f64 = 1e-12;

/// Ternary-search iterations per action pair in randomized IDS.
pub const TERNARY_ITERATIONS: usize = 60;

/// Above this many Pareto-optimal actions, randomized IDS only scans adjacent
/// vertices of the upper convex hull instead of every pair.
pub const PAIR_SCAN_LIMIT: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Ucb,
    EbUcb,
    IdsUcbDet,
    IdsUcbRand,
    Ebids,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [
        PolicyKind::Ucb,
        PolicyKind::EbUcb,
        PolicyKind::IdsUcbDet,
        PolicyKind::IdsUcbRand,
        PolicyKind::Ebids,
    ];

    pub fn key(self) -> &'static str {
        match self {
            PolicyKind::Ucb => "ucb",
            PolicyKind::EbUcb => "eb_ucb",
            PolicyKind::IdsUcbDet => "ids_ucb_det",
            PolicyKind::IdsUcbRand => "ids_ucb_rand",
            PolicyKind::Ebids => "ebids",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.key() == key)
    }

    /// Policies that refine the norm bound from data.
    pub fn uses_empirical_bound(self) -> bool {
        matches!(self, PolicyKind::EbUcb | PolicyKind::Ebids)
    }
}

/// Confidence level `δ_t` fed to `β` at step `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    Fixed(f64),
    /// `δ_t = 1/t²` (nudged below 1 at `t = 1`).
    InverseSquare,
    /// `ζ_t(δ) = min{δ, 1/t²}`.
    Zeta(f64),
}

impl Schedule {
    pub fn at(&self, t: u64) -> f64 {
        match *self {
            Schedule::Fixed(d) => d,
            Schedule::InverseSquare => {
                let t = t.max(1) as f64;
                (1.0 / (t * t)).min(1.0 - f64::EPSILON)
            }
            Schedule::Zeta(d) => zeta(t, d),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Schedule::Fixed(d) | Schedule::Zeta(d) if !(d > 0.0 && d < 1.0) => {
                Err(invalid(format!("schedule level must lie in (0, 1), got {d}")))
            }
            _ => Ok(()),
        }
    }
}

/// Fully resolved policy hyperparameters (oracle bounds already substituted).
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyParams {
    pub kind: PolicyKind,
    /// Conservative norm bound `B` (or `B*` for oracle variants).
    pub bound: f64,
    /// Error tolerance `δ` used for the empirical bounds.
    pub delta: f64,
    pub gamma: f64,
    pub schedule: Schedule,
    /// BAM mixture weight (EBIDS only).
    pub alpha: Option<f64>,
    /// Length of the bound exploration phase (EBIDS only).
    pub t_bound: Option<u64>,
}

impl PolicyParams {
    pub const DEFAULT_DELTA: f64 = 0.05;
    pub const DEFAULT_GAMMA: f64 = 1.0;
    pub const DEFAULT_ALPHA: f64 = 0.5;
    pub const DEFAULT_T_BOUND: u64 = 50;

    fn base(kind: PolicyKind, bound: f64, schedule: Schedule) -> Self {
        Self {
            kind,
            bound,
            delta: Self::DEFAULT_DELTA,
            gamma: Self::DEFAULT_GAMMA,
            schedule,
            alpha: None,
            t_bound: None,
        }
    }

    pub fn ucb(bound: f64) -> Self {
        Self::base(PolicyKind::Ucb, bound, Schedule::InverseSquare)
    }

    pub fn ids_ucb(bound: f64, randomized: bool) -> Self {
        let kind = if randomized {
            PolicyKind::IdsUcbRand
        } else {
            PolicyKind::IdsUcbDet
        };
        Self::base(kind, bound, Schedule::InverseSquare)
    }

    pub fn eb_ucb(bound: f64, delta: f64) -> Self {
        Self {
            delta,
            ..Self::base(PolicyKind::EbUcb, bound, Schedule::Zeta(delta))
        }
    }

    pub fn ebids(bound: f64, delta: f64, alpha: f64, t_bound: u64) -> Self {
        Self {
            delta,
            alpha: Some(alpha),
            t_bound: Some(t_bound),
            ..Self::base(PolicyKind::Ebids, bound, Schedule::Zeta(delta))
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bound >= 0.0) || !self.bound.is_finite() {
            return Err(invalid(format!("bound must be finite and nonnegative, got {}", self.bound)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(invalid(format!("gamma must be positive, got {}", self.gamma)));
        }
        self.schedule.validate()?;
        let is_ebids = self.kind == PolicyKind::Ebids;
        if is_ebids != self.alpha.is_some() || is_ebids != self.t_bound.is_some() {
            return Err(invalid("alpha and t_bound are required for ebids and only for ebids"));
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a < 1.0) {
                return Err(invalid(format!("alpha must lie in (0, 1), got {a}")));
            }
        }
        if self.kind.uses_empirical_bound() && self.schedule != Schedule::Zeta(self.delta) {
            return Err(invalid(format!(
                "{} always uses the zeta(delta) schedule",
                self.kind.key()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    /// Policies without phases.
    Single,
    /// EBIDS, `t ≤ T_B`.
    BoundExploration,
    /// EBIDS, `t > T_B`.
    BoundExploitation,
}

/// Optimal randomized IDS distribution, supported on at most two arms.
#[derive(Debug, Clone, PartialEq)]
pub struct IdsSupport {
    /// `(arm, probability)` pairs; the second is absent for a point mass.
    pub first: (usize, f64),
    pub second: Option<(usize, f64)>,
    /// Information ratio achieved by the mixture.
    pub ratio: f64,
}

impl IdsSupport {
    pub fn size(&self) -> usize {
        1 + usize::from(self.second.is_some())
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        match self.second {
            Some((j, _)) if u >= self.first.1 => j,
            _ => self.first.0,
        }
    }
}

/// Everything a policy computed when choosing an arm.
#[derive(Debug, Clone)]
pub struct StepDiagnostics {
    pub t: u64,
    pub action: usize,
    pub a_ucb: usize,
    pub phase: Phase,
    /// Confidence level `δ'` fed to `β`.
    pub confidence: f64,
    /// Norm bound `B'` fed to `β`.
    pub bound_used: f64,
    pub beta: f64,
    pub b_hat: f64,
    pub b_tilde: f64,
    /// Gap estimates for every arm.
    pub gaps: Vec<f64>,
    /// The information criterion the IDS ratio was formed with.
    pub infos: Vec<f64>,
    /// Directional information gain about `φ(a_ucb)` for every arm.
    pub info_directional: Vec<f64>,
    /// Minimum-eigenvector information gain (EBIDS exploration phase only).
    pub info_bound: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    /// Randomized IDS distribution, when one was solved for.
    pub support: Option<IdsSupport>,
}

impl StepDiagnostics {
    pub fn chosen_gap(&self) -> f64 {
        self.gaps[self.action]
    }

    /// Information of the played arm after the [`INFO_FLOOR`] clamp.
    pub fn chosen_info(&self) -> f64 {
        self.infos[self.action].max(INFO_FLOOR)
    }

    pub fn chosen_ratio(&self) -> f64 {
        information_ratio(self.chosen_gap(), self.infos[self.action])
    }
}

/// `gap² / max(info, INFO_FLOOR)`.
pub fn information_ratio(gap: f64, info: f64) -> f64 {
    gap * gap / info.max(INFO_FLOOR)
}

fn check_arms(est: &WlsEstimator, arms: &ActionSet<'_>) -> Result<()> {
    if arms.dim() != est.dim() {
        return Err(Error::DimensionMismatch {
            expected: est.dim(),
            got: arms.dim(),
        });
    }
    Ok(())
}

fn check_arm(arms: &ActionSet<'_>, a: usize) -> Result<()> {
    if a >= arms.len() {
        return Err(Error::ActionOutOfRange {
            index: a,
            n_arms: arms.len(),
        });
    }
    Ok(())
}

/// Per-arm predicted means and confidence widths `‖φ(a)‖_{W⁻¹}`.
struct ArmScores {
    means: Vec<f64>,
    widths: Vec<f64>,
}

impl ArmScores {
    fn new(est: &WlsEstimator, arms: &ActionSet<'_>) -> Self {
        let p = est.precision();
        let (means, widths) = (0..arms.len())
            .map(|a| {
                let phi = arms.phi(a);
                (est.predict(phi), p.quad_inv_unchecked(phi).sqrt())
            })
            .unzip();
        Self { means, widths }
    }

    fn ucb_arm(&self, sqrt_beta: f64) -> usize {
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (a, (m, w)) in self.means.iter().zip(&self.widths).enumerate() {
            let v = m + sqrt_beta * w;
            if v > best_val {
                best = a;
                best_val = v;
            }
        }
        best
    }

    fn gap(&self, a: usize, a_ucb: usize, sqrt_beta: f64) -> f64 {
        (self.means[a_ucb] - self.means[a]) + sqrt_beta * (self.widths[a_ucb] + self.widths[a])
    }
}

/// UCB arm for confidence `δ'` and bound `B'`, lowest index on ties.
pub fn ucb_action(est: &WlsEstimator, arms: &ActionSet<'_>, confidence: f64, bound: f64) -> Result<usize> {
    check_arms(est, arms)?;
    let sqrt_beta = est.beta(confidence, bound)?.sqrt();
    Ok(ArmScores::new(est, arms).ucb_arm(sqrt_beta))
}

/// Gap estimate of arm `a` relative to the UCB arm `a_ucb`.
pub fn gap_estimate(
    est: &WlsEstimator,
    arms: &ActionSet<'_>,
    a: usize,
    a_ucb: usize,
    confidence: f64,
    bound: f64,
) -> Result<f64> {
    check_arms(est, arms)?;
    check_arm(arms, a)?;
    check_arm(arms, a_ucb)?;
    let sqrt_beta = est.beta(confidence, bound)?.sqrt();
    let p = est.precision();
    let diff: Vec<f64> = arms.phi(a_ucb).iter().zip(arms.phi(a)).map(|(x, y)| x - y).collect();
    let width = |phi: &[f64]| p.quad_inv_unchecked(phi).sqrt();
    Ok(est.predict(&diff) + sqrt_beta * (width(arms.phi(a_ucb)) + width(arms.phi(a))))
}

/// Directional information gains `½ log(‖φ_ref‖²_{W⁻¹} / ‖φ_ref‖²_{(W + ρ(a)⁻² φ(a)φ(a)ᵀ)⁻¹})`
/// for all arms at once, via Sherman-Morrison.
fn directional_infos(est: &WlsEstimator, arms: &ActionSet<'_>, a_ref: usize) -> Vec<f64> {
    let p = est.precision();
    let phi_ref = arms.phi(a_ref);
    let u_ref = crate::linalg::mat_vec(p.w_inverse(), est.dim(), phi_ref);
    let s_ref = dot(phi_ref, &u_ref);
    (0..arms.len())
        .map(|a| {
            if !(s_ref > 0.0) {
                return 0.0;
            }
            let phi = arms.phi(a);
            let w = arms.weight(a);
            let s_a = p.quad_inv_unchecked(phi);
            let c = dot(&u_ref, phi);
            // updated norm = s_ref · (1 − r), r = w c² / ((1 + w s_a) s_ref) ∈ [0, 1)
            let r = (w * c * c / ((1.0 + w * s_a) * s_ref)).clamp(0.0, 1.0 - f64::EPSILON);
            -0.5 * (-r).ln_1p()
        })
        .collect()
}

/// Information gained about `φ(a_ref)` by playing `a`; nonnegative.
pub fn info_gain_directional(est: &WlsEstimator, arms: &ActionSet<'_>, a: usize, a_ref: usize) -> Result<f64> {
    check_arms(est, arms)?;
    check_arm(arms, a)?;
    check_arm(arms, a_ref)?;
    Ok(directional_infos(est, arms, a_ref)[a])
}

fn bound_infos(est: &WlsEstimator, arms: &ActionSet<'_>) -> Vec<f64> {
    let p = est.precision();
    let v = p.min_eigenvector();
    let lambda = p.min_eigenvalue();
    (0..arms.len())
        .map(|a| {
            let proj = dot(v, arms.phi(a));
            let omega = arms.weight(a) * proj * proj;
            0.5 * (omega / lambda).ln_1p()
        })
        .collect()
}

/// `I^B(a) = ½ log(‖v_min‖²_{W + ρ(a)⁻² φ(a)φ(a)ᵀ}) − ½ log λ_min(W) = ½ log(1 + ω(a)/λ_min)`.
pub fn info_gain_bound(est: &WlsEstimator, arms: &ActionSet<'_>, a: usize) -> Result<f64> {
    check_arms(est, arms)?;
    check_arm(arms, a)?;
    Ok(bound_infos(est, arms)[a])
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// Bound-action mixture `α I^B(a) + (1 − α) I^dir(a; a_ref)`.
pub fn info_gain_bam(est: &WlsEstimator, arms: &ActionSet<'_>, a: usize, a_ref: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let ib = info_gain_bound(est, arms, a)?;
    let id = info_gain_directional(est, arms, a, a_ref)?;
    Ok(alpha * ib + (1.0 - alpha) * id)
}

fn check_gap_info(gaps: &[f64], infos: &[f64]) -> Result<()> {
    if gaps.is_empty() {
        return Err(invalid("empty action set"));
    }
    if gaps.len() != infos.len() {
        return Err(Error::DimensionMismatch {
            expected: gaps.len(),
            got: infos.len(),
        });
    }
    Ok(())
}

/// Arm minimizing `gap² / max(info, INFO_FLOOR)`, lowest index on ties.
pub fn ids_select_deterministic(gaps: &[f64], infos: &[f64]) -> Result<usize> {
    check_gap_info(gaps, infos)?;
    let mut best = 0;
    let mut best_ratio = f64::INFINITY;
    for (a, (g, i)) in gaps.iter().zip(infos).enumerate() {
        let r = information_ratio(*g, *i);
        if r < best_ratio {
            best = a;
            best_ratio = r;
        }
    }
    Ok(best)
}

/// Ratio of the mixture putting mass `p` on `(gi, ii)` and `1 − p` on `(gj, ij)`.
fn mixture_ratio(p: f64, gi: f64, ii: f64, gj: f64, ij: f64) -> f64 {
    let g = p * gi + (1.0 - p) * gj;
    let i = p * ii + (1.0 - p) * ij;
    g * g / i
}

/// Best mixing weight on a pair by ternary search; the ratio is convex in `p`.
fn solve_pair(gi: f64, ii: f64, gj: f64, ij: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..TERNARY_ITERATIONS {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if mixture_ratio(m1, gi, ii, gj, ij) <= mixture_ratio(m2, gi, ii, gj, ij) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let p = 0.5 * (lo + hi);
    (p, mixture_ratio(p, gi, ii, gj, ij))
}

/// Arms not dominated by another arm with smaller-or-equal gap and
/// larger-or-equal information, sorted by increasing gap (and information).
fn pareto_candidates(gaps: &[f64], infos: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..gaps.len()).collect();
    order.sort_by(|&a, &b| {
        gaps[a]
            .total_cmp(&gaps[b])
            .then(infos[b].total_cmp(&infos[a]))
            .then(a.cmp(&b))
    });
    let mut out = Vec::new();
    let mut best_info = f64::NEG_INFINITY;
    for a in order {
        if infos[a] > best_info {
            out.push(a);
            best_info = infos[a];
        }
    }
    out
}

/// Vertices of the upper convex hull of the (gap, info) frontier, in order.
fn upper_hull(frontier: &[usize], gaps: &[f64], infos: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(frontier.len());
    for &c in frontier {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (gaps[b] - gaps[a]) * (infos[c] - infos[a]) - (infos[b] - infos[a]) * (gaps[c] - gaps[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(c);
    }
    hull
}

/// Solve `min_μ (E_μ gap)² / E_μ info` over distributions on the arms.
///
/// The optimum is supported on at most two arms. Only Pareto-optimal arms can
/// appear in it; for small frontiers every pair is scanned, for large ones the
/// adjacent vertices of the frontier's upper convex hull (where the convex
/// ratio attains its minimum over the hull).
pub fn randomized_ids_distribution(gaps: &[f64], infos: &[f64]) -> Result<IdsSupport> {
    check_gap_info(gaps, infos)?;
    let clamped: Vec<f64> = infos.iter().map(|i| i.max(INFO_FLOOR)).collect();
    let det = ids_select_deterministic(gaps, infos)?;
    let mut best = IdsSupport {
        first: (det, 1.0),
        second: None,
        ratio: information_ratio(gaps[det], infos[det]),
    };

    let frontier = pareto_candidates(gaps, &clamped);
    let pairs: Vec<(usize, usize)> = if frontier.len() <= PAIR_SCAN_LIMIT {
        let mut v = Vec::new();
        for (x, &i) in frontier.iter().enumerate() {
            for &j in &frontier[x + 1..] {
                v.push((i.min(j), i.max(j)));
            }
        }
        v
    } else {
        upper_hull(&frontier, gaps, &clamped)
            .windows(2)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
            .collect()
    };

    for (i, j) in pairs {
        let (p, ratio) = solve_pair(gaps[i], clamped[i], gaps[j], clamped[j]);
        if ratio < best.ratio {
            best = IdsSupport {
                first: (i, p),
                second: Some((j, 1.0 - p)),
                ratio,
            };
        }
    }
    Ok(best)
}

/// Sample an arm from the optimal randomized IDS distribution. Exactly one
/// uniform variate is consumed from `rng`.
pub fn ids_select_randomized<R: Rng + ?Sized>(gaps: &[f64], infos: &[f64], rng: &mut R) -> Result<(usize, IdsSupport)> {
    let support = randomized_ids_distribution(gaps, infos)?;
    Ok((support.sample(rng), support))
}

/// A policy together with its learning state.
#[derive(Debug, Clone)]
pub struct Policy {
    params: PolicyParams,
    estimator: WlsEstimator,
}

impl Policy {
    pub fn new(params: PolicyParams, dim: usize) -> Result<Self> {
        params.validate()?;
        let estimator = WlsEstimator::new(dim, params.gamma, params.bound, params.delta)?;
        Ok(Self { params, estimator })
    }

    pub fn params(&self) -> &PolicyParams {
        &self.params
    }

    pub fn estimator(&self) -> &WlsEstimator {
        &self.estimator
    }

    pub fn phase(&self) -> Phase {
        match (self.params.kind, self.params.t_bound) {
            (PolicyKind::Ebids, Some(tb)) if self.estimator.step() <= tb => Phase::BoundExploration,
            (PolicyKind::Ebids, _) => Phase::BoundExploitation,
            _ => Phase::Single,
        }
    }

    /// Choose the arm for the current step.
    pub fn step<R: Rng + ?Sized>(&self, arms: &ActionSet<'_>, rng: &mut R) -> Result<StepDiagnostics> {
        let est = &self.estimator;
        check_arms(est, arms)?;
        let t = est.step();
        let phase = self.phase();
        let confidence = self.params.schedule.at(t);
        let bound_used = match (self.params.kind, phase) {
            (PolicyKind::EbUcb, _) | (PolicyKind::Ebids, Phase::BoundExploration) => est.b_hat(),
            (PolicyKind::Ebids, _) => est.b_tilde(),
            _ => self.params.bound,
        };
        let beta = est.beta(confidence, bound_used)?;
        let sqrt_beta = beta.sqrt();

        let scores = ArmScores::new(est, arms);
        let a_ucb = scores.ucb_arm(sqrt_beta);
        let gaps: Vec<f64> = (0..arms.len()).map(|a| scores.gap(a, a_ucb, sqrt_beta)).collect();
        let info_directional = directional_infos(est, arms, a_ucb);

        let mut info_bound = None;
        let mut support = None;
        let (action, infos) = match (self.params.kind, phase) {
            (PolicyKind::Ucb | PolicyKind::EbUcb, _) => (a_ucb, info_directional.clone()),
            (PolicyKind::IdsUcbDet, _) | (PolicyKind::Ebids, Phase::BoundExploitation) => {
                (ids_select_deterministic(&gaps, &info_directional)?, info_directional.clone())
            }
            (PolicyKind::IdsUcbRand, _) => {
                let (a, s) = ids_select_randomized(&gaps, &info_directional, rng)?;
                support = Some(s);
                (a, info_directional.clone())
            }
            (PolicyKind::Ebids, _) => {
                let alpha = self.params.alpha.ok_or_else(|| invalid("ebids requires alpha"))?;
                let ib = bound_infos(est, arms);
                let bam: Vec<f64> = ib
                    .iter()
                    .zip(&info_directional)
                    .map(|(b, d)| alpha * b + (1.0 - alpha) * d)
                    .collect();
                info_bound = Some(ib);
                (ids_select_deterministic(&gaps, &bam)?, bam)
            }
        };

        if gaps.iter().any(|g| !g.is_finite()) || infos.iter().any(|i| !i.is_finite()) {
            return Err(Error::Numerical(format!("non-finite gap or information at t = {t}")));
        }

        Ok(StepDiagnostics {
            t,
            action,
            a_ucb,
            phase,
            confidence,
            bound_used,
            beta,
            b_hat: est.b_hat(),
            b_tilde: est.b_tilde(),
            gaps,
            infos,
            info_directional,
            info_bound,
            alpha: self.params.alpha,
            support,
        })
    }

    /// Feed back the reward observed for `action`.
    pub fn observe(&mut self, arms: &ActionSet<'_>, action: usize, reward: f64) -> Result<()> {
        check_arm(arms, action)?;
        self.estimator.observe(arms.phi(action), arms.rho(action), reward)
    }
}
