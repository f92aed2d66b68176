//! Rank-1 updates of the information matrix and how far the cached inverse,
//! log-determinant and minimum eigenpair drift from a fresh recomputation.
//!
//! cargo run --release --example precision_updates

use ebids::harness::validate::measure_drift;
use ebids::linalg::{PrecisionState, REFRESH_INTERVAL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> ebids::Result<()> {
    let dim = 5;
    let mut state = PrecisionState::new(dim, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);

    println!("refresh every {REFRESH_INTERVAL} updates");
    println!("{:>7} {:>12} {:>12} {:>10} {:>10} {:>10}", "updates", "lambda_min", "log_det", "inv_err", "ldet_err", "eig_res");
    for k in 1..=10_000 {
        let phi: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let weight = 1.0 / rng.random_range(0.2_f64..1.0).powi(2);
        state.rank1_update(weight, &phi)?;
        if k == 1 || k % 2000 == 0 {
            let d = measure_drift(&state)?;
            println!(
                "{k:>7} {:>12.4} {:>12.4} {:>10.1e} {:>10.1e} {:>10.1e}",
                state.min_eigenvalue(),
                state.log_det(),
                d.inverse,
                d.log_det,
                d.eigen_residual
            );
        }
    }
    println!("min eigenvector: {:?}", state.min_eigenvector());
    Ok(())
}
