//! The checks behind `ebids validate`, called as a library.
//!
//! cargo run --release --example validate_suites -- [cases]

use ebids::harness::validate::{run_all, ValidateOptions};

fn main() -> ebids::Result<()> {
    let cases = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    for report in run_all(&ValidateOptions { seed: 1, cases })? {
        println!("{}", report.line());
    }
    Ok(())
}
