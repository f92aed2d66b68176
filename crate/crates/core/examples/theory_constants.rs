//! The constants behind the conditions on alpha and T_B, evaluated on the
//! reference environment, and how large the guaranteed T_B gets.
//!
//! cargo run --release --example theory_constants

use ebids::harness::presets::reference_env;
use ebids::theory::{ebids_constants, min_alpha, min_exploration_horizon, ConstantInputs};

fn main() -> ebids::Result<()> {
    let env = reference_env().build(7, 0)?;
    let g = 1.0;
    let base = ConstantInputs::from_env(&env, 1.0, 0.5, g, 0.05, 100.0)?;
    let c = ebids_constants(&base)?;
    println!(
        "L={:.3} U={:.3} rho_min={:.2} kappa~{:.3e} -> c0={:.3e}, h0={:.1}",
        base.l, base.u, base.rho_min, base.kappa, c.c0, c.h0
    );
    let a_min = min_alpha(env.dim(), c.c0, g);
    println!("smallest admissible alpha for g = {g}: {a_min:.8}");

    match min_exploration_horizon(&c, env.b_star()) {
        Ok(tb) => println!("alpha = 0.5: T_B >= {tb:.3e}"),
        Err(e) => println!("alpha = 0.5: {e}"),
    }
    for alpha in [a_min + 0.5 * (1.0 - a_min), 1.0 - 1e-9] {
        let c = ebids_constants(&ConstantInputs { alpha, ..base })?;
        let tb = min_exploration_horizon(&c, env.b_star())?;
        if tb.is_finite() {
            println!("alpha = {alpha:.10}: b2={:.3e}, T_B >= {tb:.3e}", c.b2);
        } else {
            println!("alpha = {alpha:.10}: b2={:.3e}, T_B bound overflows f64", c.b2);
        }
    }
    Ok(())
}
