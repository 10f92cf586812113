//! Strong boundary dissipation: gap ~ c J^2 / gamma_loc, independent of L.
//!
//! cargo run --example strong_boundary

use mixtime::models::{ModelConfig, SystemModel};
use mixtime::perturbation::strong_gap_estimate;

fn boundary_field(l: usize, j: f64, gamma_loc: f64) -> mixtime::Result<SystemModel> {
    let cfg = ModelConfig::new(l, 2)
        .with_gamma(gamma_loc)
        .with_term("x", j, &[1])
        .with_term("x", j, &[l])
        .with_dissipator("z", 1, 1.0)
        .with_dissipator("z", l, 1.0);
    SystemModel::from_config(&cfg)
}

fn main() -> mixtime::Result<()> {
    println!("{:>3} {:>8} {:>12} {:>12} {:>8}", "L", "gamma", "predicted", "exact", "c_fit");
    for l in [2, 3, 4] {
        for g in [20.0, 100.0] {
            let r = strong_gap_estimate(&boundary_field(l, 1.0, g)?)?;
            println!("{l:>3} {g:>8} {:>12.6e} {:>12.6e} {:>8.4}", r.gap_predicted, r.gap_exact, r.c_fit);
        }
    }
    Ok(())
}
