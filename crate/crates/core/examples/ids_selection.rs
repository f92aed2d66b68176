//! Gap estimates, information gains and the deterministic and randomized
//! IDS choices on one state of the estimator.
//!
//! cargo run --release --example ids_selection

use ebids::env::{gen_uniform_arms, two_level_noise, DEFAULT_THETA_STAR};
use ebids::policies::{
    gap_estimate, ids_select_deterministic, info_gain_bound, info_gain_directional, information_ratio,
    randomized_ids_distribution, ucb_action,
};
use ebids::WlsEstimator;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> ebids::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let env = gen_uniform_arms(
        10,
        5,
        1.0 / 5.0_f64.sqrt(),
        &two_level_noise(5, 1.0, 5, 0.2),
        &DEFAULT_THETA_STAR,
        &mut rng,
    )?;
    let arms = env.action_set();
    let mut est = WlsEstimator::new(env.dim(), 1.0, 100.0, 0.05)?;
    for _ in 0..40 {
        let a = rng.random_range(0..env.n_arms());
        est.observe(env.phi(a), env.noise_scale()[a], env.sample_reward(a, &mut rng)?)?;
    }

    let conf = 1.0 / (41.0 * 41.0);
    let bound = env.b_star();
    let a_ucb = ucb_action(&est, &arms, conf, bound)?;
    let mut gaps = Vec::new();
    let mut infos = Vec::new();
    println!("UCB arm {a_ucb}; true best arm {}", env.optimal_action());
    println!("{:>3} {:>8} {:>9} {:>9} {:>9} {:>10}", "a", "true gap", "gap est", "I_dir", "I_bound", "ratio");
    for a in 0..arms.len() {
        let g = gap_estimate(&est, &arms, a, a_ucb, conf, bound)?;
        let i = info_gain_directional(&est, &arms, a, a_ucb)?;
        let ib = info_gain_bound(&est, &arms, a)?;
        println!(
            "{a:>3} {:>8.3} {g:>9.3} {i:>9.4} {ib:>9.4} {:>10.2}",
            env.gap(a)?,
            information_ratio(g, i)
        );
        gaps.push(g);
        infos.push(i);
    }
    let det = ids_select_deterministic(&gaps, &infos)?;
    let mix = randomized_ids_distribution(&gaps, &infos)?;
    println!("deterministic IDS: arm {det}, ratio {:.3}", information_ratio(gaps[det], infos[det]));
    match mix.second {
        Some((j, q)) => println!(
            "randomized IDS: arm {} w.p. {:.3}, arm {j} w.p. {q:.3}, ratio {:.3}",
            mix.first.0, mix.first.1, mix.ratio
        ),
        None => println!("randomized IDS: point mass on arm {}, ratio {:.3}", mix.first.0, mix.ratio),
    }
    Ok(())
}
