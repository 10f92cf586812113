//! Weak dissipation: first-order decay rates against finite differences of
//! the exact spectrum.
//!
//! cargo run --example weak_dissipation

use mixtime::models::{presets, SystemModel};
use mixtime::perturbation::{weak_gap_estimate, weak_rate_finite_difference};

fn main() -> mixtime::Result<()> {
    let model = SystemModel::from_config(&presets::tfi_chain(2, 1.0, 0.7).with_dissipator("z", 1, 1.0))?;
    println!("{:>3} {:>3} {:>14} {:>14} {:>10}", "m", "n", "first order", "d beta/d gamma", "rel err");
    for c in weak_rate_finite_difference(&model, 1e-4)? {
        println!("{:>3} {:>3} {:>14.8} {:>14.8} {:>10.2e}", c.m, c.n, c.predicted, c.finite_difference, c.relative_error);
    }
    let g = weak_gap_estimate(&model)?;
    println!("slowest nondegenerate pair ({}, {}): rate {:.6} per unit gamma", g.m, g.n, g.rate_coefficient);
    Ok(())
}
