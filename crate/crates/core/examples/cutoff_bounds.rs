//! Trace-norm bounds from splitting a perturbative mode into large and small entries.
//!
//! cargo run --example cutoff_bounds

use mixtime::models::{presets, SystemModel};
use mixtime::perturbation::{cutoff_bound, cutoff_bound_weak, strong_first_order_state, weak_gap_estimate, weak_state_correction, Regime};

fn main() -> mixtime::Result<()> {
    let l = 3;
    let strong = SystemModel::from_config(&presets::boundary_dephased_tfi(l, 1.0, 0.8, 50.0))?;
    let (sigma, _) = strong_first_order_state(&strong, 0)?;
    let weak = SystemModel::from_config(&presets::tfi_chain(l, 1.0, 0.7).with_gamma(0.01).with_dissipator("z", 1, 1.0))?;
    let pair = weak_gap_estimate(&weak)?;
    let corr = weak_state_correction(&weak, pair.m, pair.n)?;
    for c in [(-(l as f64)).exp(), (-2.0 * l as f64).exp(), 1e-3] {
        let s = cutoff_bound(&sigma, c, Regime::Strong)?;
        let w = cutoff_bound_weak(&corr, c)?;
        println!("c = {c:.3e}");
        println!("  strong: Tr|s| = {:.4} <= {:.4} + {:.4}  ({} nonzero)", s.trace_norm_exact, s.norm_a_bound, s.norm_b_bound, s.nonzero);
        println!("  weak:   Tr|s| = {:.4} <= {:.4} + {:.4}", w.trace_norm_exact, w.norm_a_bound, w.norm_b_bound);
    }
    Ok(())
}
