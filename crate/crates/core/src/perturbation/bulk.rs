//! Zeroth-order spectrum when every site is dissipated, and the first-order
//! estimate whose growth with `L` signals that the expansion breaks down.

use serde::Serialize;

use super::strong::ZerothOrder;
use crate::error::{Error, Result};
use crate::liouvillian::build_dissipative_part;
use crate::models::SystemModel;
use crate::operators::{hermitian_eigenvalues, C64};

#[derive(Clone, Debug, Serialize)]
pub struct BulkZerothReport {
    pub l: usize,
    pub d0: usize,
    /// Zero modes of `H_d`, counted from its eigenvalues.
    pub gs_degeneracy: usize,
    pub expected_gs_degeneracy: usize,
    pub first_excited_energy: C64,
    pub first_excited_multiplicity: usize,
    /// Pairs of basis states differing by one level step on exactly one site.
    pub expected_first_excited_multiplicity: usize,
    /// `max_k W_kk` of the second-order generator on the zero manifold.
    pub first_order_gap_estimate: f64,
    pub estimate_per_site: f64,
    /// The estimate grows without bound in `L`.
    pub diverges: bool,
    /// Length at which the estimate reaches the zeroth-order excitation rate.
    pub breakdown_length: Option<f64>,
}

/// `L · 2(d0 − 1) · d0^(L−1)`.
pub fn one_step_excitation_count(l: usize, d0: usize) -> usize {
    l * 2 * (d0 - 1) * d0.pow(l as u32 - 1)
}

pub fn bulk_zeroth_spectrum(model: &SystemModel) -> Result<BulkZerothReport> {
    if model.lattice.l < 2 || !model.covers_every_site() {
        return Err(Error::NotBulkGeometry);
    }
    if !model.has_commuting_hermitian_lindblads() {
        return Err(Error::NotCommutingKSet);
    }
    let (l, d0) = (model.lattice.l, model.lattice.d0);
    let mut rates = hermitian_eigenvalues(&build_dissipative_part(model)?)?;
    rates.sort_by(f64::total_cmp);
    let scale = rates.iter().fold(1.0f64, |a, r| a.max(r.abs()));
    let tol = 1e-9 * scale;
    let gs = rates.iter().filter(|r| r.abs() <= tol).count();
    let first = rates.iter().copied().find(|&r| r > tol).unwrap_or(0.0);
    let mult = rates.iter().filter(|&&r| r > tol && (r - first).abs() <= tol).count();

    let z = ZerothOrder::new(model)?;
    let (_, w, _, _) = z.effective_blocks();
    let estimate = (0..w.nrows()).map(|k| w[(k, k)].re).fold(0.0, f64::max);
    let per_site = estimate / l as f64;
    let diverges = per_site > 0.0;
    Ok(BulkZerothReport {
        l,
        d0,
        gs_degeneracy: gs,
        expected_gs_degeneracy: d0.pow(l as u32),
        first_excited_energy: C64::new(0.0, -first),
        first_excited_multiplicity: mult,
        expected_first_excited_multiplicity: one_step_excitation_count(l, d0),
        first_order_gap_estimate: estimate,
        estimate_per_site: per_site,
        diverges,
        breakdown_length: diverges.then(|| first / per_site),
    })
}
