//! Seeded, parallel execution of policy × replication cells.

use std::io::Write;

use rayon::prelude::*;

use crate::env::LinearBanditEnv;
use crate::error::{Error, Result};
use crate::policies::{Policy, StepDiagnostics};
use crate::theory::{theorem1_check, Check};

use super::config::{ExperimentConfig, PolicySpec};
use super::output::{create_parent, mean_band, raw_writer, write_error_row, write_summary_file, write_trace_row, SummaryRow, TraceRow};
use super::seeding::stream_rng;

/// Environment variable overriding the number of worker threads.
pub const WORKERS_ENV: &str = "BANDIT_WORKERS";

/// What an observer sees at every step, before the policy learns the reward.
pub struct StepView<'a> {
    pub env: &'a LinearBanditEnv,
    pub policy: &'a Policy,
    pub diag: &'a StepDiagnostics,
    pub reward: f64,
    pub inst_regret: f64,
}

#[derive(Debug, Clone)]
pub struct ReplicationOutcome {
    pub policy_id: String,
    pub replication: u64,
    pub rows: Vec<TraceRow>,
    /// Set when the replication aborted; `rows` holds the completed steps.
    pub error: Option<String>,
    /// Pathwise information-ratio bound over the completed steps.
    pub theorem1: Option<Check>,
    pub b_star: f64,
}

impl ReplicationOutcome {
    fn failed(policy_id: &str, replication: u64, msg: String) -> Self {
        Self {
            policy_id: policy_id.to_string(),
            replication,
            rows: Vec::new(),
            error: Some(msg),
            theorem1: None,
            b_star: f64::NAN,
        }
    }

    pub fn final_cum_regret(&self) -> Option<f64> {
        self.rows.last().map(|r| r.cum_regret)
    }
}

/// Play one policy for `horizon` steps on `env`, drawing from the stream
/// keyed by `(master_seed, spec.id, replication)`.
pub fn run_on_env(
    env: &LinearBanditEnv,
    spec: &PolicySpec,
    horizon: u64,
    master_seed: u64,
    replication: u64,
    mut observer: Option<&mut dyn FnMut(&StepView<'_>)>,
) -> ReplicationOutcome {
    let mut outcome = ReplicationOutcome::failed(&spec.id, replication, String::new());
    outcome.error = None;
    outcome.b_star = env.b_star();

    let mut policy = match spec.resolve(env).and_then(|p| Policy::new(p, env.dim())) {
        Ok(p) => p,
        Err(e) => {
            outcome.error = Some(e.to_string());
            return outcome;
        }
    };
    let mut rng = stream_rng(master_seed, &spec.id, replication);
    let arms = env.action_set();
    let (mut sum_gap, mut sum_ratio, mut sum_info) = (0.0, 0.0, 0.0);
    let mut cum = 0.0;
    outcome.rows.reserve(horizon as usize);

    for _ in 0..horizon {
        let step = policy.step(&arms, &mut rng).and_then(|diag| {
            let reward = env.sample_reward(diag.action, &mut rng)?;
            let inst = env.gap(diag.action)?;
            Ok((diag, reward, inst))
        });
        let (diag, reward, inst) = match step {
            Ok(x) => x,
            Err(e) => {
                outcome.error = Some(e.to_string());
                break;
            }
        };
        if let Some(obs) = observer.as_mut() {
            obs(&StepView {
                env,
                policy: &policy,
                diag: &diag,
                reward,
                inst_regret: inst,
            });
        }
        sum_gap += diag.chosen_gap();
        sum_ratio += diag.chosen_ratio();
        sum_info += diag.chosen_info();
        cum += inst;
        outcome.rows.push(TraceRow {
            t: diag.t,
            action: diag.action,
            reward,
            inst_regret: inst,
            cum_regret: cum,
            cum_pseudo_regret: cum,
            b_hat: diag.b_hat,
            b_tilde: diag.b_tilde,
            beta_used: diag.beta,
        });
        if let Err(e) = policy.observe(&arms, diag.action, reward) {
            outcome.error = Some(e.to_string());
            break;
        }
    }
    outcome.theorem1 = theorem1_check(&[sum_gap], &[sum_ratio], &[sum_info]).ok();
    outcome
}

/// Build the environment of `replication` and run `spec` on it.
pub fn run_replication(cfg: &ExperimentConfig, spec: &PolicySpec, replication: u64) -> ReplicationOutcome {
    match cfg.env_spec.build(cfg.master_seed, replication) {
        Ok(env) => run_on_env(&env, spec, cfg.horizon, cfg.master_seed, replication, None),
        Err(e) => ReplicationOutcome::failed(&spec.id, replication, format!("environment: {e}")),
    }
}

/// Worker count from [`WORKERS_ENV`], defaulting to the number of logical CPUs.
pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    /// Sorted by (policy id, replication).
    pub outcomes: Vec<ReplicationOutcome>,
    pub summary: Vec<SummaryRow>,
}

impl ExperimentResult {
    pub fn failures(&self) -> impl Iterator<Item = &ReplicationOutcome> {
        self.outcomes.iter().filter(|o| o.error.is_some())
    }

    pub fn outcomes_for<'a>(&'a self, policy_id: &'a str) -> impl Iterator<Item = &'a ReplicationOutcome> + 'a {
        self.outcomes.iter().filter(move |o| o.policy_id == policy_id)
    }

    /// Summary row of `policy_id` at step `t`.
    pub fn summary_at(&self, policy_id: &str, t: u64) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.policy_id == policy_id && r.t == t)
    }

    pub fn write_raw<W: Write>(&self, out: W) -> Result<()> {
        let mut w = raw_writer(out)?;
        for o in &self.outcomes {
            for row in &o.rows {
                write_trace_row(&mut w, &o.policy_id, o.replication, row)?;
            }
            if o.error.is_some() {
                let t = o.rows.last().map_or(1, |r| r.t + 1);
                write_error_row(&mut w, &o.policy_id, o.replication, t)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Per-policy mean cumulative regret with 95% bands over the replications
/// that completed.
pub fn summarize(outcomes: &[ReplicationOutcome], horizon: u64) -> Vec<SummaryRow> {
    let mut ids: Vec<&str> = outcomes.iter().map(|o| o.policy_id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    let mut rows = Vec::with_capacity(ids.len() * horizon as usize);
    for id in ids {
        let done: Vec<&ReplicationOutcome> = outcomes
            .iter()
            .filter(|o| o.policy_id == id && o.error.is_none())
            .collect();
        for t in 1..=horizon {
            let vals: Vec<f64> = done
                .iter()
                .filter_map(|o| o.rows.get(t as usize - 1).map(|r| r.cum_regret))
                .collect();
            let (mean, lo, hi) = if vals.is_empty() {
                (f64::NAN, f64::NAN, f64::NAN)
            } else {
                mean_band(&vals)
            };
            rows.push(SummaryRow {
                policy_id: id.to_string(),
                t,
                mean_cum_regret: mean,
                ci_low: lo,
                ci_high: hi,
                n: vals.len(),
            });
        }
    }
    rows
}

/// Run every cell of `cfg` with the worker count from the environment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with_workers(cfg, worker_count()?)
}

pub fn run_experiment_with_workers(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentResult> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    let mut specs: Vec<&PolicySpec> = cfg.policies.iter().collect();
    specs.sort_by(|a, b| a.id.cmp(&b.id));
    let reps = cfg.replications;

    let outcomes = pool.install(|| {
        let env_count = if cfg.env_spec.redraws() { reps } else { 1 };
        let envs: Vec<std::result::Result<LinearBanditEnv, String>> = (0..env_count)
            .into_par_iter()
            .map(|r| cfg.env_spec.build(cfg.master_seed, r).map_err(|e| format!("environment: {e}")))
            .collect();
        let cells: Vec<(&PolicySpec, u64)> = specs.iter().flat_map(|s| (0..reps).map(move |r| (*s, r))).collect();
        cells
            .into_par_iter()
            .map(|(spec, r)| {
                let env = &envs[if cfg.env_spec.redraws() { r as usize } else { 0 }];
                match env {
                    Ok(env) => run_on_env(env, spec, cfg.horizon, cfg.master_seed, r, None),
                    Err(msg) => ReplicationOutcome::failed(&spec.id, r, msg.clone()),
                }
            })
            .collect::<Vec<_>>()
    });
    let summary = summarize(&outcomes, cfg.horizon);
    Ok(ExperimentResult { outcomes, summary })
}

/// Write the raw trace and summary CSVs named in `cfg.output`.
pub fn write_outputs(cfg: &ExperimentConfig, result: &ExperimentResult) -> Result<()> {
    create_parent(&cfg.output.raw)?;
    let raw = std::io::BufWriter::new(std::fs::File::create(&cfg.output.raw)?);
    result.write_raw(raw)?;
    write_summary_file(&cfg.output.summary, &result.summary)
}
