//! Perturbation theory around the dissipative (strong) and unitary (weak)
//! limits, plus the entry-cutoff trace-norm bounds.

pub mod bulk;
pub mod cutoff;
pub mod strong;
pub mod weak;

pub use bulk::{bulk_zeroth_spectrum, BulkZerothReport};
pub use cutoff::{cutoff_bound, cutoff_bound_weak, CutoffReport, Regime};
pub use strong::{
    joint_k_eigenbasis, overlap_with_slowest, strong_first_order_state, strong_gap_estimate, strong_state_correction,
    KEigenbasis, StrongPTReport, StrongStateCorrection,
};
pub use weak::{
    fluctuation_exponent, weak_energy_correction, weak_gap_estimate, weak_rate_finite_difference, weak_records,
    weak_state_correction, DissipatorTerm, HEigenbasis, WeakPTRecord, WeakRateCheck, WeakStateCorrection,
};

use crate::operators::{Operator, C64};

/// Relative size below which an energy denominator counts as degenerate.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-8;

/// `H_s |p q⟩` for the basis state `|p⟩⟨q|`, with `H` already written in the
/// working basis: `Σ_r H_rp |r q⟩ − Σ_r H_qr |p r⟩`.
pub(crate) fn coherent_column(h: &Operator, p: usize, q: usize) -> Vec<C64> {
    let n = h.dim();
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    for r in 0..n {
        out[r * n + q] += h[(r, p)];
        out[p * n + r] -= h[(q, r)];
    }
    out
}
