//! The environment generators behind the simulation presets.
//!
//! cargo run --release --example environments

use ebids::env::{
    gen_spline_continuum, gen_uniform_arms, spline_noise_scale, two_level_noise, LinearBanditEnv, NoiseSpec,
    DEFAULT_THETA_STAR,
};
use ebids::theory::{kappa, KappaSearch};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn describe(name: &str, env: &LinearBanditEnv) -> ebids::Result<()> {
    let k = kappa(env, &KappaSearch::default())?;
    println!(
        "{name:<14} K={:<5} d={} B*={:.3} best arm={} max gap={:.3} L={:.3} U={:.3} rho=[{:.3}, {:.3}] kappa~{:.4}",
        env.n_arms(),
        env.dim(),
        env.b_star(),
        env.optimal_action(),
        env.max_gap(),
        env.feature_norm_lower(),
        env.feature_norm_upper(),
        env.rho_min(),
        env.rho_max(),
        k.value
    );
    Ok(())
}

fn main() -> ebids::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let theta = DEFAULT_THETA_STAR;
    let w = 1.0 / 5.0_f64.sqrt();

    let fixed = gen_uniform_arms(10, 5, w, &two_level_noise(5, 1.0, 5, 0.2), &theta, &mut rng)?;
    describe("two-level", &fixed)?;
    println!("  means: {:?}", fixed.means().iter().map(|m| (m * 1000.0).round() / 1000.0).collect::<Vec<_>>());

    let random_sd = gen_uniform_arms(20, 5, w, &NoiseSpec::Uniform { lo: 0.1, hi: 1.0 }, &theta, &mut rng)?;
    describe("uniform sd", &random_sd)?;

    let spline = gen_spline_continuum(1000, 10, &theta, spline_noise_scale, &mut rng)?;
    describe("spline", &spline)?;

    let explicit = LinearBanditEnv::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0, 0.5], vec![1.0, 1.0])?;
    describe("unit pair", &explicit)?;

    let mut total = 0.0;
    for _ in 0..1000 {
        total += explicit.sample_reward(1, &mut rng)?;
    }
    println!("unit pair: mean reward of arm 1 over 1000 draws = {:.3} (true 0.5)", total / 1000.0);
    Ok(())
}
