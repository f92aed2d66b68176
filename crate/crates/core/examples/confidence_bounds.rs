//! Weighted ridge regression, the confidence radius and the empirical norm
//! bounds B̂ and B̃ tightening from a conservative B = 100.
//!
//! cargo run --release --example confidence_bounds

use ebids::env::{gen_uniform_arms, two_level_noise, DEFAULT_THETA_STAR};
use ebids::WlsEstimator;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> ebids::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let env = gen_uniform_arms(
        10,
        5,
        1.0 / 5.0_f64.sqrt(),
        &two_level_noise(5, 1.0, 5, 0.2),
        &DEFAULT_THETA_STAR,
        &mut rng,
    )?;
    let delta = 0.05;
    let mut est = WlsEstimator::new(env.dim(), 1.0, 100.0, delta)?;
    println!("B* = {:.3}", env.b_star());
    println!("{:>5} {:>10} {:>10} {:>10} {:>12} {:>8}", "t", "|theta^|", "B_hat", "B_tilde", "beta(d,B*)", "inside");

    for t in 1..=2000u64 {
        if [1, 10, 50, 100, 250, 500, 1000, 2000].contains(&t) {
            let norm = est.theta_hat().iter().map(|x| x * x).sum::<f64>().sqrt();
            let beta = est.beta(delta, env.b_star())?;
            let inside = est.ellipsoid_distance(env.theta_star())? <= beta;
            println!(
                "{t:>5} {norm:>10.3} {:>10.3} {:>10.3} {beta:>12.2} {inside:>8}",
                est.b_hat(),
                est.b_tilde()
            );
        }
        // uniform exploration keeps every direction informed
        let a = rng.random_range(0..env.n_arms());
        let y = env.sample_reward(a, &mut rng)?;
        est.observe(env.phi(a), env.noise_scale()[a], y)?;
    }
    println!("theta_hat = {:?}", est.theta_hat().iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>());
    Ok(())
}
