//! Step-by-step agreement with a deliberately naive implementation that
//! rebuilds every matrix from scratch with nalgebra at each step.

mod common;

use common::*;
use ebids::env::{gen_uniform_arms, NoiseSpec};
use ebids::harness::seeding::stream_rng;
use ebids::{LinearBanditEnv, Policy, PolicyKind, PolicyParams};
use nalgebra::{DVector, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};

const STEPS: usize = 50;

struct Naive {
    kind: PolicyKind,
    bound: f64,
    delta: f64,
    rows: Vec<(f64, Vec<f64>)>,
    ys: Vec<f64>,
}

struct NaiveStep {
    action: usize,
    a_ucb: usize,
    gaps: Vec<f64>,
    infos: Vec<f64>,
    b_hat: f64,
}

impl Naive {
    fn step(&self, env: &LinearBanditEnv) -> NaiveStep {
        let d = env.dim();
        let t = (self.rows.len() + 1) as f64;
        let w = gram(d, 1.0, &self.rows);
        let inv = w.clone().try_inverse().unwrap();
        let mut b = DVector::zeros(d);
        for ((wt, phi), y) in self.rows.iter().zip(&self.ys) {
            b += DVector::from_column_slice(phi) * (wt * y);
        }
        let theta = &inv * b;
        let log_det: f64 = SymmetricEigen::new(w.clone()).eigenvalues.iter().map(|x| x.ln()).sum();
        let beta = |conf: f64, bound: f64| {
            let r = (2.0 * (1.0 / conf).ln() + log_det.max(0.0)).sqrt() + bound;
            r * r
        };
        let zeta = self.delta.min(1.0 / (t * t));
        let lmin = SymmetricEigen::new(w.clone()).eigenvalues.min();
        let b_hat = self.bound.min(theta.norm() + (beta(zeta, self.bound) / lmin).sqrt());

        let (conf, bound) = match self.kind {
            PolicyKind::EbUcb => (zeta, b_hat),
            _ => ((1.0 / (t * t)).min(1.0 - f64::EPSILON), self.bound),
        };
        let sb = beta(conf, bound).sqrt();
        let n = env.n_arms();
        let mean = |a: usize| DVector::from_column_slice(env.phi(a)).dot(&theta);
        let width = |a: usize| quad(&inv, env.phi(a)).sqrt();
        let mut a_ucb = 0;
        for a in 1..n {
            if mean(a) + sb * width(a) > mean(a_ucb) + sb * width(a_ucb) {
                a_ucb = a;
            }
        }
        let gaps: Vec<f64> = (0..n).map(|a| mean(a_ucb) - mean(a) + sb * (width(a_ucb) + width(a))).collect();
        let phi_ref = env.phi(a_ucb);
        let infos: Vec<f64> = (0..n)
            .map(|a| {
                let rho = env.noise_scale()[a];
                let mut more = self.rows.clone();
                more.push((1.0 / (rho * rho), env.phi(a).to_vec()));
                let inv_next = gram(d, 1.0, &more).try_inverse().unwrap();
                0.5 * (quad(&inv, phi_ref) / quad(&inv_next, phi_ref)).ln()
            })
            .collect();
        let action = match self.kind {
            PolicyKind::IdsUcbDet => {
                let ratio = |a: usize| gaps[a] * gaps[a] / infos[a].max(1e-12);
                (0..n).fold(0, |best, a| if ratio(a) < ratio(best) { a } else { best })
            }
            _ => a_ucb,
        };
        NaiveStep {
            action,
            a_ucb,
            gaps,
            infos,
            b_hat,
        }
    }
}

fn compare(kind: PolicyKind, bound: f64, seed: u64) {
    let mut rng = stream_rng(seed, "reference/env", 0);
    let theta: Vec<f64> = vec![-2.0, 1.0, 0.5, 1.5];
    let env = gen_uniform_arms(8, 4, 0.5, &NoiseSpec::Uniform { lo: 0.2, hi: 1.0 }, &theta, &mut rng).unwrap();
    let params = match kind {
        PolicyKind::Ucb => PolicyParams::ucb(bound),
        PolicyKind::IdsUcbDet => PolicyParams::ids_ucb(bound, false),
        PolicyKind::EbUcb => PolicyParams::eb_ucb(bound, 0.05),
        _ => unreachable!(),
    };
    let mut policy = Policy::new(params, env.dim()).unwrap();
    let mut naive = Naive {
        kind,
        bound,
        delta: 0.05,
        rows: Vec::new(),
        ys: Vec::new(),
    };
    let arms = env.action_set();
    let mut noise = stream_rng(seed, "reference/noise", 0);
    for step in 1..=STEPS {
        let diag = policy.step(&arms, &mut noise.clone()).unwrap();
        let want = naive.step(&env);
        assert_eq!(diag.a_ucb, want.a_ucb, "{kind:?} ucb arm at step {step}");
        assert_eq!(diag.action, want.action, "{kind:?} action at step {step}");
        for a in 0..env.n_arms() {
            assert!(rel_close(diag.gaps[a], want.gaps[a], 1e-8), "gap {a} at step {step}");
            assert!((diag.info_directional[a] - want.infos[a]).abs() <= 1e-9 * (1.0 + want.infos[a]));
        }
        assert!(rel_close(diag.b_hat, want.b_hat, 1e-9), "B_hat at step {step}");

        let rho = env.noise_scale()[diag.action];
        let z: f64 = StandardNormal.sample(&mut noise);
        let y = env.means()[diag.action] + rho * z;
        policy.observe(&arms, diag.action, y).unwrap();
        naive.rows.push((1.0 / (rho * rho), env.phi(diag.action).to_vec()));
        naive.ys.push(y);
    }
}

#[test]
fn ucb_matches_naive_reference() {
    for seed in 0..4 {
        compare(PolicyKind::Ucb, 5.0, seed);
    }
}

#[test]
fn deterministic_ids_ucb_matches_naive_reference() {
    for seed in 0..4 {
        compare(PolicyKind::IdsUcbDet, 5.0, seed);
        compare(PolicyKind::IdsUcbDet, 100.0, seed);
    }
}

#[test]
fn eb_ucb_matches_naive_reference() {
    for seed in 0..4 {
        compare(PolicyKind::EbUcb, 100.0, seed);
    }
}
