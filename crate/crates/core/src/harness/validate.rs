//! Self-checks run by `ebids validate`: the analysis inequalities along
//! simulated trajectories, ellipsoid coverage and numerical drift of the
//! incremental precision state.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::env::{LinearBanditEnv, NoiseSpec};
use crate::error::Result;
use crate::linalg::{mat_vec, norm2, spd_inverse_logdet, PrecisionState};
use crate::policies::{Phase, PolicyKind};
use crate::theory::{lemma1_check, lemma2_lower_bound, lemma3_sum, lemma3_upper_bound, omega, CHECK_TOLERANCE};

use super::config::{EnvSpec, PolicySpec};
use super::presets::reference_env;
use super::runner::{run_on_env, StepView};
use super::seeding::stream_rng;

/// Drift tolerances for the incremental precision state.
pub const INVERSE_TOLERANCE: f64 = 1e-8;
pub const LOG_DET_TOLERANCE: f64 = 1e-6;
pub const EIGEN_RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Required fraction of replications whose whole trajectory stays inside the
/// confidence ellipsoid, i.e. `1 − δ` at the default `δ`.
pub const COVERAGE_TARGET: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    pub seed: u64,
    /// Scale of each suite (trajectories, sequences, replications).
    pub cases: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self { seed: 2024, cases: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: u64,
    pub failed: u64,
    pub note: String,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("{status} {:<18} {}/{} checks", self.name, self.checked - self.failed, self.checked);
        if !self.note.is_empty() {
            s.push_str("  ");
            s.push_str(&self.note);
        }
        s
    }
}

pub fn run_all(opts: &ValidateOptions) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        theorem1_suite(opts)?,
        lemma1_suite(opts)?,
        lemma2_suite(opts)?,
        lemma3_suite(opts),
        coverage_suite(opts, &reference_env(), 500)?,
        drift_suite(opts)?,
    ])
}

/// Random environment with `d ∈ [2, 8]`, up to 12 arms, Gaussian `θ*` and
/// noise scales in `[0.1, 1]`.
pub fn random_env(rng: &mut ChaCha8Rng) -> Result<LinearBanditEnv> {
    let dim = rng.random_range(2..=8);
    let n_arms = rng.random_range(2..=12);
    let theta: Vec<f64> = (0..dim).map(|_| { let z: f64 = StandardNormal.sample(rng); 2.0 * z }).collect();
    crate::env::gen_uniform_arms(
        n_arms,
        dim,
        1.0 / (dim as f64).sqrt(),
        &NoiseSpec::Uniform { lo: 0.1, hi: 1.0 },
        &theta,
        rng,
    )
}

fn random_policy(rng: &mut ChaCha8Rng) -> PolicySpec {
    let bound = [1.0, 10.0, 100.0][rng.random_range(0..3)];
    match rng.random_range(0..5) {
        0 => PolicySpec::new("ucb", PolicyKind::Ucb, bound),
        1 => PolicySpec::new("eb_ucb", PolicyKind::EbUcb, bound),
        2 => PolicySpec::new("ids_det", PolicyKind::IdsUcbDet, bound),
        3 => PolicySpec::new("ids_rand", PolicyKind::IdsUcbRand, bound),
        _ => PolicySpec::ebids("ebids", bound, rng.random_range(0.05..0.95), rng.random_range(1..60)),
    }
}

/// Pathwise `Σ Δ̂ ≤ √(Σ Ψ · Σ I)` on random policies and environments.
pub fn theorem1_suite(opts: &ValidateOptions) -> Result<SuiteReport> {
    let mut rng = stream_rng(opts.seed, "validate/theorem1", 0);
    let mut report = SuiteReport {
        name: "theorem1",
        checked: 0,
        failed: 0,
        note: String::new(),
    };
    for case in 0..opts.cases as u64 {
        let env = random_env(&mut rng)?;
        let spec = random_policy(&mut rng);
        let out = run_on_env(&env, &spec, 80, opts.seed, case, None);
        report.checked += 1;
        let ok = out.error.is_none() && out.theorem1.is_some_and(|c| c.holds);
        if !ok {
            report.failed += 1;
        }
    }
    Ok(report)
}

/// The mixture inequality at every bound-exploration step of EBIDS.
pub fn lemma1_suite(opts: &ValidateOptions) -> Result<SuiteReport> {
    let mut rng = stream_rng(opts.seed, "validate/lemma1", 0);
    let mut report = SuiteReport {
        name: "lemma1",
        checked: 0,
        failed: 0,
        note: String::new(),
    };
    let mut worst = f64::INFINITY;
    for case in 0..opts.cases as u64 {
        let env = random_env(&mut rng)?;
        let alpha = rng.random_range(0.05..0.95);
        let spec = PolicySpec::ebids("ebids", [1.0, 100.0][case as usize % 2], alpha, 40);
        let mut observer = |v: &StepView<'_>| {
            if v.diag.phase != Phase::BoundExploration {
                return;
            }
            let ib = v.diag.info_bound.as_deref().unwrap_or(&[]);
            report.checked += 1;
            match lemma1_check(&v.diag.gaps, ib, &v.diag.info_directional, alpha, v.diag.action) {
                Ok(c) => {
                    worst = worst.min(c.slack);
                    if !c.holds {
                        report.failed += 1;
                    }
                }
                Err(_) => report.failed += 1,
            }
        };
        let out = run_on_env(&env, &spec, 40, opts.seed, case, Some(&mut observer));
        if out.error.is_some() {
            report.failed += 1;
        }
    }
    report.note = format!("min slack {worst:.3e}");
    Ok(report)
}

/// `λ_min(W_{T+1}) ≥ γ − ρ_min⁻² U² + (1/d) Σ ω_t` along random action sequences.
pub fn lemma2_suite(opts: &ValidateOptions) -> Result<SuiteReport> {
    let mut rng = stream_rng(opts.seed, "validate/lemma2", 0);
    let mut report = SuiteReport {
        name: "lemma2",
        checked: 0,
        failed: 0,
        note: String::new(),
    };
    for _ in 0..opts.cases {
        let env = random_env(&mut rng)?;
        let gamma = rng.random_range(0.5..2.0);
        let horizon = rng.random_range(1..=200);
        let arms = env.action_set();
        let mut state = PrecisionState::new(env.dim(), gamma)?;
        let mut omegas = Vec::with_capacity(horizon);
        for _ in 0..horizon {
            let a = rng.random_range(0..env.n_arms());
            omegas.push(omega(state.min_eigenvector(), arms.phi(a), arms.rho(a))?);
            state.rank1_update(arms.weight(a), arms.phi(a))?;
            let bound = lemma2_lower_bound(gamma, env.rho_min(), env.feature_norm_upper(), env.dim(), &omegas);
            report.checked += 1;
            if state.min_eigenvalue() < bound - CHECK_TOLERANCE * bound.abs().max(1.0) {
                report.failed += 1;
            }
        }
    }
    Ok(report)
}

/// The harmonic-sum bound on random sequences and the near-extremal one.
pub fn lemma3_suite(opts: &ValidateOptions) -> SuiteReport {
    let mut rng = stream_rng(opts.seed, "validate/lemma3", 0);
    let mut report = SuiteReport {
        name: "lemma3",
        checked: 0,
        failed: 0,
        note: String::new(),
    };
    let check = |x: &[f64], u: f64, c: f64, report: &mut SuiteReport| {
        let t = x.len() - 1;
        report.checked += 1;
        if lemma3_sum(x, c) > lemma3_upper_bound(t, u, c) * (1.0 + CHECK_TOLERANCE) {
            report.failed += 1;
        }
    };
    for _ in 0..opts.cases * 50 {
        let t = rng.random_range(1..=100);
        let u = rng.random_range(0.01..10.0);
        let c = rng.random_range(0.01..10.0);
        let unit = Uniform::new_inclusive(0.0, u).expect("valid range");
        let x: Vec<f64> = (0..=t).map(|_| unit.sample(&mut rng)).collect();
        check(&x, u, c, &mut report);
    }
    for t in [1, 2, 10, 100] {
        let mut x = vec![1.0; t + 1];
        x[0] = 0.0;
        check(&x, 1.0, 1.0, &mut report);
    }
    report
}

/// Fraction of replications with `θ*` inside `{θ : ‖θ − θ̂_t‖²_{W_t} ≤ β_t(δ, B*)}`
/// for every step of EBIDS, and the norm bounds on those replications.
pub fn coverage_suite(opts: &ValidateOptions, env_spec: &EnvSpec, horizon: u64) -> Result<SuiteReport> {
    let spec = PolicySpec::ebids("ebids", 100.0, 0.5, 50);
    let delta = spec.delta;
    let t_bound = spec.t_bound.unwrap_or(50);
    let mut report = SuiteReport {
        name: "ellipsoid_coverage",
        checked: 0,
        failed: 0,
        note: String::new(),
    };
    let mut covered = 0u64;
    let mut bound_failures = 0u64;
    for rep in 0..opts.cases as u64 {
        let env = env_spec.build(opts.seed, rep)?;
        let b_star = env.b_star();
        let theta = env.theta_star().to_vec();
        let mut inside = true;
        let mut bounds_ok = true;
        let mut observer = |v: &StepView<'_>| {
            let est = v.policy.estimator();
            let radius = est.beta(delta, b_star).unwrap_or(f64::NAN);
            let dist = est.ellipsoid_distance(&theta).unwrap_or(f64::INFINITY);
            if !(dist <= radius) {
                inside = false;
            }
            if est.b_hat() < b_star || (v.diag.t > t_bound && est.b_tilde() < b_star) {
                bounds_ok = false;
            }
        };
        let out = run_on_env(&env, &spec, horizon, opts.seed, rep, Some(&mut observer));
        report.checked += 1;
        if out.error.is_some() {
            report.failed += 1;
            continue;
        }
        if inside {
            covered += 1;
            if !bounds_ok {
                bound_failures += 1;
                report.failed += 1;
            }
        }
    }
    let rate = covered as f64 / opts.cases.max(1) as f64;
    if rate < COVERAGE_TARGET {
        report.failed += 1;
    }
    report.note = format!("coverage {rate:.3}, bound violations on covered runs {bound_failures}");
    Ok(report)
}

/// Worst drift of a precision state from a from-scratch recomputation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Drift {
    pub inverse: f64,
    pub log_det: f64,
    pub eigen_residual: f64,
}

impl Drift {
    pub fn within_tolerance(&self) -> bool {
        self.inverse <= INVERSE_TOLERANCE && self.log_det <= LOG_DET_TOLERANCE && self.eigen_residual <= EIGEN_RESIDUAL_TOLERANCE
    }
}

pub fn measure_drift(state: &PrecisionState) -> Result<Drift> {
    let d = state.dim();
    let (inv, log_det) = spd_inverse_logdet(state.w_matrix(), d)?;
    let inverse = inv
        .iter()
        .zip(state.w_inverse())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let v = state.min_eigenvector();
    let wv = mat_vec(state.w_matrix(), d, v);
    let residual: Vec<f64> = wv.iter().zip(v).map(|(a, b)| a - state.min_eigenvalue() * b).collect();
    Ok(Drift {
        inverse,
        log_det: (log_det - state.log_det()).abs(),
        eigen_residual: norm2(&residual),
    })
}

/// Long runs of rank-1 updates (unit weights, unit-norm features mixed with
/// repeated `e₁`) compared against direct recomputation at checkpoints.
pub fn drift_suite(opts: &ValidateOptions) -> Result<SuiteReport> {
    const UPDATES: usize = 10_000;
    const CHECK_EVERY: usize = 997;
    let mut rng = stream_rng(opts.seed, "validate/drift", 0);
    let mut report = SuiteReport {
        name: "sherman_morrison",
        checked: 0,
        failed: 0,
        note: String::new(),
    };
    let mut worst = Drift::default();
    for _ in 0..(opts.cases / 50).max(1) {
        let d = rng.random_range(2..=8);
        let mut state = PrecisionState::new(d, 1.0)?;
        for k in 1..=UPDATES {
            let phi: Vec<f64> = if rng.random_bool(0.5) {
                let mut e = vec![0.0; d];
                e[0] = 1.0;
                e
            } else {
                let mut v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                let n = norm2(&v);
                v.iter_mut().for_each(|x| *x /= n);
                v
            };
            state.rank1_update(1.0, &phi)?;
            if k % CHECK_EVERY == 0 || k == UPDATES {
                let drift = measure_drift(&state)?;
                worst.inverse = worst.inverse.max(drift.inverse);
                worst.log_det = worst.log_det.max(drift.log_det);
                worst.eigen_residual = worst.eigen_residual.max(drift.eigen_residual);
                report.checked += 1;
                if !drift.within_tolerance() {
                    report.failed += 1;
                }
            }
        }
    }
    report.note = format!(
        "max |inv err| {:.1e}, |logdet err| {:.1e}, eig residual {:.1e}",
        worst.inverse, worst.log_det, worst.eigen_residual
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let opts = ValidateOptions { seed: 3, cases: 10 };
        for r in [
            theorem1_suite(&opts).unwrap(),
            lemma1_suite(&opts).unwrap(),
            lemma2_suite(&opts).unwrap(),
            lemma3_suite(&opts),
        ] {
            assert!(r.passed(), "{}", r.line());
        }
    }

    #[test]
    fn report_line_format() {
        let r = SuiteReport {
            name: "lemma3",
            checked: 4,
            failed: 1,
            note: String::new(),
        };
        assert!(r.line().starts_with("FAIL lemma3"));
        assert!(r.line().contains("3/4 checks"));
    }
}
