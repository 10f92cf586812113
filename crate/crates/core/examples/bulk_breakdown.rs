//! Dissipation on every site: a d0^L-fold zero manifold, first excitation at
//! rate gamma, and a first-order estimate that grows with L.
//!
//! cargo run --example bulk_breakdown

use mixtime::models::{presets, SystemModel};
use mixtime::perturbation::bulk_zeroth_spectrum;

fn main() -> mixtime::Result<()> {
    for d0 in [2, 3] {
        for l in [2, 3] {
            let r = bulk_zeroth_spectrum(&SystemModel::from_config(&presets::bulk_ladder(l, d0, 10.0, 0.5))?)?;
            println!(
                "d0={d0} L={l}: zero modes {} (d0^L = {}), first rate {:.3}, multiplicity {} (count {}), estimate {:.4}",
                r.gs_degeneracy,
                r.expected_gs_degeneracy,
                -r.first_excited_energy.im,
                r.first_excited_multiplicity,
                r.expected_first_excited_multiplicity,
                r.first_order_gap_estimate,
            );
        }
    }
    let r = bulk_zeroth_spectrum(&SystemModel::from_config(&presets::bulk_ladder(4, 2, 10.0, 0.5))?)?;
    println!("estimate per site {:.4}, reaches the zeroth-order rate at L = {:.1}", r.estimate_per_site, r.breakdown_length.unwrap_or(f64::NAN));
    Ok(())
}
