//! One EBIDS trajectory: the bound exploration phase, the switch to the
//! refined bound, and the regret it accumulates.
//!
//! cargo run --release --example ebids_run

use ebids::env::{gen_uniform_arms, two_level_noise, DEFAULT_THETA_STAR};
use ebids::policies::Phase;
use ebids::{Policy, PolicyParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ebids::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let env = gen_uniform_arms(
        10,
        5,
        1.0 / 5.0_f64.sqrt(),
        &two_level_noise(5, 1.0, 5, 0.2),
        &DEFAULT_THETA_STAR,
        &mut rng,
    )?;
    let arms = env.action_set();
    let mut policy = Policy::new(PolicyParams::ebids(100.0, 0.05, 0.5, 50), env.dim())?;
    println!("B* = {:.3}, best arm {}", env.b_star(), env.optimal_action());

    let mut regret = 0.0;
    let mut plays = vec![0usize; env.n_arms()];
    for _ in 0..500 {
        let d = policy.step(&arms, &mut rng)?;
        let y = env.sample_reward(d.action, &mut rng)?;
        regret += env.gap(d.action)?;
        plays[d.action] += 1;
        if [1, 25, 50, 51, 100, 250, 500].contains(&d.t) {
            let phase = match d.phase {
                Phase::BoundExploration => "explore-bound",
                _ => "exploit-bound",
            };
            println!(
                "t={:<4} {phase:<14} arm={} B_used={:>8.3} B_hat={:>8.3} B_tilde={:>8.3} beta={:>9.1} regret={regret:.2}",
                d.t, d.action, d.bound_used, d.b_hat, d.b_tilde, d.beta
            );
        }
        policy.observe(&arms, d.action, y)?;
    }
    println!("plays per arm: {plays:?}");
    Ok(())
}
