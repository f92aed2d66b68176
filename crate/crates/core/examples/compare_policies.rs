//! The policy comparison preset at reduced scale, run in memory.
//!
//! cargo run --release --example compare_policies -- [replications]

use ebids::harness::presets::preset;
use ebids::harness::run_experiment;

fn main() -> ebids::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    let mut cfg = preset("fig2").expect("built-in preset");
    cfg.replications = reps;
    let result = run_experiment(&cfg)?;

    let mut finals: Vec<_> = cfg
        .policies
        .iter()
        .filter_map(|p| result.summary_at(&p.id, cfg.horizon))
        .collect();
    finals.sort_by(|a, b| a.mean_cum_regret.total_cmp(&b.mean_cum_regret));
    println!("mean cumulative regret at T = {} over {reps} replications", cfg.horizon);
    for r in finals {
        println!("{:<16} {:>9.2}  [{:.2}, {:.2}]", r.policy_id, r.mean_cum_regret, r.ci_low, r.ci_high);
    }
    Ok(())
}
