//! Declarative experiment configuration (TOML).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::env::{
    default_half_width, gen_spline_continuum, gen_uniform_arms, spline_noise_scale, LinearBanditEnv, NoiseSpec,
    DEFAULT_THETA_STAR,
};
use crate::error::{Error, Result};
use crate::policies::{PolicyKind, PolicyParams, Schedule};

use super::seeding::stream_rng;

/// Key under which environment draws are seeded.
pub const ENV_STREAM_KEY: &str = "env";

fn default_theta_star() -> Vec<f64> {
    DEFAULT_THETA_STAR.to_vec()
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub horizon: u64,
    pub replications: u64,
    pub master_seed: u64,
    pub output: OutputSpec,
    pub env_spec: EnvSpec,
    pub policies: Vec<PolicySpec>,
}

/// Relative paths are resolved against the directory of the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub raw: PathBuf,
    pub summary: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvSpec {
    /// Arm features iid `Uniform[−w, w]`.
    UniformArms {
        n_arms: usize,
        dim: usize,
        /// Defaults to `1/√5`.
        #[serde(default)]
        feature_half_width: Option<f64>,
        noise_sd: NoiseSpec,
        #[serde(default = "default_theta_star")]
        theta_star: Vec<f64>,
        #[serde(default)]
        redraw_per_replication: bool,
    },
    /// Grid on `[0, 1]` with random cubic B-spline features and
    /// `ρ(a) = exp(0.5 − 3a)`.
    SplineContinuum {
        n_points: usize,
        n_knots: usize,
        #[serde(default = "default_theta_star")]
        theta_star: Vec<f64>,
        #[serde(default)]
        redraw_per_replication: bool,
    },
    /// Fully specified arms.
    Explicit {
        features: Vec<Vec<f64>>,
        noise_scale: Vec<f64>,
        #[serde(default = "default_theta_star")]
        theta_star: Vec<f64>,
    },
}

impl EnvSpec {
    pub fn redraws(&self) -> bool {
        match self {
            EnvSpec::UniformArms {
                redraw_per_replication, ..
            }
            | EnvSpec::SplineContinuum {
                redraw_per_replication, ..
            } => *redraw_per_replication,
            EnvSpec::Explicit { .. } => false,
        }
    }

    /// The environment used by `replication` (index 0 when it is not redrawn).
    pub fn build(&self, master_seed: u64, replication: u64) -> Result<LinearBanditEnv> {
        let index = if self.redraws() { replication } else { 0 };
        let mut rng = stream_rng(master_seed, ENV_STREAM_KEY, index);
        match self {
            EnvSpec::UniformArms {
                n_arms,
                dim,
                feature_half_width,
                noise_sd,
                theta_star,
                ..
            } => gen_uniform_arms(
                *n_arms,
                *dim,
                feature_half_width.unwrap_or_else(default_half_width),
                noise_sd,
                theta_star,
                &mut rng,
            ),
            EnvSpec::SplineContinuum {
                n_points,
                n_knots,
                theta_star,
                ..
            } => gen_spline_continuum(*n_points, *n_knots, theta_star, spline_noise_scale, &mut rng),
            EnvSpec::Explicit {
                features,
                noise_scale,
                theta_star,
            } => LinearBanditEnv::new(features.clone(), theta_star.clone(), noise_scale.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// `δ_t = 1/t²`.
    InverseSquare,
    /// `δ_t = δ`.
    Fixed,
    /// `δ_t = min{δ, 1/t²}`.
    Zeta,
}

fn default_bound() -> f64 {
    100.0
}

fn default_delta() -> f64 {
    PolicyParams::DEFAULT_DELTA
}

fn default_gamma() -> f64 {
    PolicyParams::DEFAULT_GAMMA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    /// Unique label; also keys the policy's random stream.
    pub id: String,
    pub kind: PolicyKind,
    #[serde(default = "default_bound")]
    pub bound: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_bound: Option<u64>,
    /// Replace `bound` by the environment's true `‖θ*‖₂`.
    #[serde(default)]
    pub oracle: bool,
    /// Defaults to `inverse_square` for UCB / IDS-UCB and `zeta` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleKind>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

impl PolicySpec {
    pub fn new(id: impl Into<String>, kind: PolicyKind, bound: f64) -> Self {
        Self {
            id: id.into(),
            kind,
            bound,
            delta: default_delta(),
            alpha: None,
            t_bound: None,
            oracle: false,
            schedule: None,
            gamma: default_gamma(),
        }
    }

    pub fn ebids(id: impl Into<String>, bound: f64, alpha: f64, t_bound: u64) -> Self {
        Self {
            alpha: Some(alpha),
            t_bound: Some(t_bound),
            ..Self::new(id, PolicyKind::Ebids, bound)
        }
    }

    pub fn oracle(mut self) -> Self {
        self.oracle = true;
        self
    }

    /// Concrete parameters for a given environment.
    pub fn resolve(&self, env: &LinearBanditEnv) -> Result<PolicyParams> {
        self.resolve_with_bound(if self.oracle { env.b_star() } else { self.bound })
    }

    fn resolve_with_bound(&self, bound: f64) -> Result<PolicyParams> {
        let is_ebids = self.kind == PolicyKind::Ebids;
        if !is_ebids && (self.alpha.is_some() || self.t_bound.is_some()) {
            return Err(config_err(format!(
                "policy '{}': alpha and t_bound only apply to ebids",
                self.id
            )));
        }
        let default_schedule = if self.kind.uses_empirical_bound() {
            ScheduleKind::Zeta
        } else {
            ScheduleKind::InverseSquare
        };
        let schedule = match self.schedule.unwrap_or(default_schedule) {
            ScheduleKind::InverseSquare => Schedule::InverseSquare,
            ScheduleKind::Fixed => Schedule::Fixed(self.delta),
            ScheduleKind::Zeta => Schedule::Zeta(self.delta),
        };
        let params = PolicyParams {
            kind: self.kind,
            bound,
            delta: self.delta,
            gamma: self.gamma,
            schedule,
            alpha: is_ebids.then(|| self.alpha.unwrap_or(PolicyParams::DEFAULT_ALPHA)),
            t_bound: is_ebids.then(|| self.t_bound.unwrap_or(PolicyParams::DEFAULT_T_BOUND)),
        };
        params
            .validate()
            .map_err(|e| config_err(format!("policy '{}': {e}", self.id)))?;
        Ok(params)
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parse a config file, resolving relative output paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        if let Some(dir) = path.parent() {
            cfg.output.raw = dir.join(&cfg.output.raw);
            cfg.output.summary = dir.join(&cfg.output.summary);
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_err(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(config_err("horizon must be at least 1"));
        }
        if self.replications == 0 {
            return Err(config_err("replications must be at least 1"));
        }
        if self.policies.is_empty() {
            return Err(config_err("at least one policy is required"));
        }
        let mut seen = std::collections::HashSet::new();
        for p in &self.policies {
            if p.id.is_empty() || p.id.contains([',', '"', '\n', '\r']) {
                return Err(config_err(format!("invalid policy id {:?}", p.id)));
            }
            if !seen.insert(p.id.as_str()) {
                return Err(config_err(format!("duplicate policy id '{}'", p.id)));
            }
            // oracle bounds are only known per environment; check the rest now
            p.resolve_with_bound(if p.oracle { 1.0 } else { p.bound })?;
        }
        match &self.env_spec {
            EnvSpec::UniformArms {
                n_arms, dim, theta_star, ..
            } => {
                if *n_arms == 0 || *dim == 0 {
                    return Err(config_err("n_arms and dim must be positive"));
                }
                if theta_star.len() != *dim {
                    return Err(config_err(format!(
                        "theta_star has {} entries but dim = {dim}",
                        theta_star.len()
                    )));
                }
            }
            EnvSpec::SplineContinuum { n_points, n_knots, .. } => {
                if *n_points < 2 || *n_knots < 2 {
                    return Err(config_err("spline continuum needs n_points >= 2 and n_knots >= 2"));
                }
            }
            EnvSpec::Explicit { .. } => {}
        }
        if !self.env_spec.redraws() {
            self.env_spec
                .build(self.master_seed, 0)
                .map_err(|e| config_err(format!("environment: {e}")))?;
        }
        Ok(())
    }

    pub fn policy(&self, id: &str) -> Option<&PolicySpec> {
        self.policies.iter().find(|p| p.id == id)
    }
}
