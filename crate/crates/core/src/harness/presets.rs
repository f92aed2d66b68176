//! Built-in configurations for the reference simulation settings.

use crate::env::{two_level_noise, NoiseSpec, DEFAULT_THETA_STAR};
use crate::policies::PolicyKind;

use super::config::{EnvSpec, ExperimentConfig, OutputSpec, PolicySpec};

pub const PRESET_SEED: u64 = 7;
pub const HORIZON: u64 = 500;
pub const REPLICATIONS: u64 = 200;
pub const CONSERVATIVE_B: f64 = 100.0;
pub const ANTI_CONSERVATIVE_B: f64 = 1.0;

/// `(name, description)` of every preset, in listing order.
pub const PRESETS: [(&str, &str); 8] = [
    ("fig1a", "IDS-UCB and UCB with conservative B = 100, plus oracles"),
    ("fig1b", "IDS-UCB and UCB with anti-conservative B = 1, plus oracles"),
    ("fig2", "EBIDS against EB-UCB, IDS-UCB and UCB at B = 100, plus oracles"),
    ("fig3", "EBIDS alone, for the alpha x T_B ablation sweep"),
    ("supp_a", "10 arms, noise sd ~ U[0.1, 1], redrawn per replication"),
    ("supp_b", "20 arms, noise sd ~ U[0.1, 1], redrawn per replication"),
    ("supp_c", "20 arms, ten with sd 0.2 and ten with sd 1, redrawn per replication"),
    ("supp_d", "1000-point spline continuum, sd exp(0.5 - 3a), redrawn per replication"),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

fn reference_arms(n_arms: usize, noise_sd: NoiseSpec, redraw: bool) -> EnvSpec {
    EnvSpec::UniformArms {
        n_arms,
        dim: DEFAULT_THETA_STAR.len(),
        feature_half_width: None,
        noise_sd,
        theta_star: DEFAULT_THETA_STAR.to_vec(),
        redraw_per_replication: redraw,
    }
}

/// The fixed ten-arm environment: five arms with sd 1, five with sd 0.2.
pub fn reference_env() -> EnvSpec {
    reference_arms(10, two_level_noise(5, 1.0, 5, 0.2), false)
}

fn ids_ucb(id: &str, bound: f64) -> PolicySpec {
    PolicySpec::new(id, PolicyKind::IdsUcbRand, bound)
}

fn ucb(id: &str, bound: f64) -> PolicySpec {
    PolicySpec::new(id, PolicyKind::Ucb, bound)
}

fn figure1(bound: f64, suffix: &str) -> Vec<PolicySpec> {
    vec![
        ids_ucb(&format!("ids_ucb_{suffix}"), bound),
        ucb(&format!("ucb_{suffix}"), bound),
        ids_ucb("ids_ucb_oracle", CONSERVATIVE_B).oracle(),
        ucb("ucb_oracle", CONSERVATIVE_B).oracle(),
    ]
}

/// The comparison set: everything that does not need external algorithms.
pub fn comparison_policies() -> Vec<PolicySpec> {
    vec![
        PolicySpec::ebids("ebids", CONSERVATIVE_B, 0.5, 50),
        PolicySpec::new("eb_ucb", PolicyKind::EbUcb, CONSERVATIVE_B),
        ids_ucb("ids_ucb", CONSERVATIVE_B),
        ucb("ucb", CONSERVATIVE_B),
        PolicySpec::ebids("ebids_oracle", CONSERVATIVE_B, 0.5, 50).oracle(),
        ids_ucb("ids_ucb_oracle", CONSERVATIVE_B).oracle(),
        ucb("ucb_oracle", CONSERVATIVE_B).oracle(),
    ]
}

pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let (env_spec, policies) = match name {
        "fig1a" => (reference_env(), figure1(CONSERVATIVE_B, "b100")),
        "fig1b" => (reference_env(), figure1(ANTI_CONSERVATIVE_B, "b1")),
        "fig2" => (reference_env(), comparison_policies()),
        "fig3" => (reference_env(), vec![PolicySpec::ebids("ebids", CONSERVATIVE_B, 0.5, 50)]),
        "supp_a" => (
            reference_arms(10, NoiseSpec::Uniform { lo: 0.1, hi: 1.0 }, true),
            comparison_policies(),
        ),
        "supp_b" => (
            reference_arms(20, NoiseSpec::Uniform { lo: 0.1, hi: 1.0 }, true),
            comparison_policies(),
        ),
        "supp_c" => (reference_arms(20, two_level_noise(10, 0.2, 10, 1.0), true), comparison_policies()),
        "supp_d" => (
            EnvSpec::SplineContinuum {
                n_points: 1000,
                n_knots: 10,
                theta_star: DEFAULT_THETA_STAR.to_vec(),
                redraw_per_replication: true,
            },
            comparison_policies(),
        ),
        _ => return None,
    };
    Some(ExperimentConfig {
        horizon: HORIZON,
        replications: REPLICATIONS,
        master_seed: PRESET_SEED,
        output: OutputSpec {
            raw: format!("{name}_raw.csv").into(),
            summary: format!("{name}_summary.csv").into(),
        },
        env_spec,
        policies,
    })
}
