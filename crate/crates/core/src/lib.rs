//! Empirical-bound information-directed sampling (EBIDS) for linear stochastic
//! bandits with heteroskedastic, known-scale subgaussian noise.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: the weighted information matrix `W_t` with a Sherman-Morrison
//!   maintained inverse, cached log-determinant and minimum eigenpair.
//! - [`env`]: finite-action linear bandit environments and the generators used
//!   by the simulation presets (uniform arm features, cubic B-spline continuum).
//! - [`estimator`]: online weighted ridge regression, self-normalized
//!   confidence radii and the empirical parameter-norm bounds `B̂_t` / `B̃_t`.
//! - [`policies`]: UCB, IDS-UCB (deterministic and randomized), EB-UCB and
//!   EBIDS, together with their gap estimates and information-gain criteria.
//! - [`theory`]: computable constants and checkable inequalities from the
//!   regret analysis, used by the validation suites.
//! - [`harness`]: experiment configs, seeded parallel replication, CSV output
//!   and the `ebids` command line.
//!
//! Runnable walkthroughs of each layer live in the crate's `examples/`
//! directory (`cargo run --release --example <name>`).

// `!(x > 0.0)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod env;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod linalg;
pub mod policies;
pub mod theory;

pub use env::{ActionSet, LinearBanditEnv, NoiseSpec};
pub use error::{Error, Result};
pub use estimator::WlsEstimator;
pub use linalg::PrecisionState;
pub use policies::{Policy, PolicyKind, PolicyParams, Schedule, StepDiagnostics};
