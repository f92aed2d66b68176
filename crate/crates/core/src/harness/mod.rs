//! Experiment orchestration: TOML configs, seeded parallel replications,
//! regret accounting, CSV output, built-in presets, validation suites and
//! the command line.
//!
//! Raw trace CSV columns:
//! `policy_id,replication,t,action,reward,inst_regret,cum_regret,cum_pseudo_regret,b_hat,b_tilde,beta_used`.
//! Summary CSV columns: `policy_id,t,mean_cum_regret,ci_low,ci_high,n`.
//! Floats are written with 17 significant digits.

pub mod cli;
pub mod config;
pub mod output;
pub mod presets;
pub mod runner;
pub mod seeding;
pub mod validate;

pub use config::{EnvSpec, ExperimentConfig, OutputSpec, PolicySpec, ScheduleKind};
pub use output::{SummaryRow, TraceRow};
pub use runner::{
    run_experiment, run_experiment_with_workers, run_on_env, run_replication, write_outputs, ExperimentResult,
    ReplicationOutcome, StepView,
};
