//! Split a mode by entry magnitude, `σ = A + B`, and bound `Tr|σ|` through
//! the number of large entries and the size of the small ones.

use serde::Serialize;

use super::weak::WeakStateCorrection;
use crate::error::Result;
use crate::operators::{trace_norm, Operator, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Strong,
    Weak,
}

#[derive(Clone, Debug, Serialize)]
pub struct CutoffReport {
    pub regime: Regime,
    pub cutoff_c: f64,
    pub dim: usize,
    #[serde(rename = "N_large")]
    pub n_large: usize,
    pub nonzero: usize,
    #[serde(rename = "norm_A_bound")]
    pub norm_a_bound: f64,
    /// Strong: `√2·N·c`. Weak: `N^{3/2}c + N·c`.
    #[serde(rename = "norm_B_bound")]
    pub norm_b_bound: f64,
    /// Weak only: `N^{3/2}c` and `N·c`.
    pub norm_b1_bound: Option<f64>,
    pub norm_b2_bound: Option<f64>,
    #[serde(rename = "norm_A_exact")]
    pub norm_a_exact: f64,
    #[serde(rename = "norm_B_exact")]
    pub norm_b_exact: f64,
    pub norm_b1_exact: Option<f64>,
    pub norm_b2_exact: Option<f64>,
    pub trace_norm_exact: f64,
    /// `trace_norm_exact ≤ norm_A_bound + norm_B_bound`.
    pub satisfied: bool,
}

fn normalized(sigma: &Operator) -> Operator {
    let f = sigma.frobenius_norm();
    if f > 0.0 {
        sigma.scale_real(1.0 / f)
    } else {
        sigma.clone()
    }
}

/// `(A, B)` with `A` keeping entries of magnitude above `c`.
fn split(sigma: &Operator, c: f64, mut in_b: impl FnMut(usize, usize) -> bool) -> (Operator, Operator) {
    let n = sigma.dim();
    let a = Operator::from_fn(n, |p, q| if sigma[(p, q)].norm() > c { sigma[(p, q)] } else { ZERO });
    let b = Operator::from_fn(n, |p, q| {
        if sigma[(p, q)].norm() <= c && in_b(p, q) {
            sigma[(p, q)]
        } else {
            ZERO
        }
    });
    (a, b)
}

fn satisfied(exact: f64, bound: f64) -> bool {
    exact <= bound + 1e-8
}

/// Bounds on `Tr|σ|` for `σ` normalized to unit Frobenius norm.
pub fn cutoff_bound(sigma: &Operator, cutoff_c: f64, regime: Regime) -> Result<CutoffReport> {
    if !(cutoff_c >= 0.0) {
        return Err(crate::Error::InvalidArgument(format!("cutoff must be nonnegative, got {cutoff_c}")));
    }
    let s = normalized(sigma);
    let n = s.dim();
    let nf = n as f64;
    let (a, b) = split(&s, cutoff_c, |_, _| true);
    let n_large = a.count_nonzero(0.0);
    let norm_a_bound = (n_large as f64).sqrt();
    let (norm_b_bound, b1, b2) = match regime {
        Regime::Strong => (std::f64::consts::SQRT_2 * nf * cutoff_c, None, None),
        Regime::Weak => {
            let b1 = nf.powf(1.5) * cutoff_c;
            let b2 = nf * cutoff_c;
            (b1 + b2, Some(b1), Some(b2))
        }
    };
    let trace_norm_exact = trace_norm(&s)?;
    Ok(CutoffReport {
        regime,
        cutoff_c,
        dim: n,
        n_large,
        nonzero: s.count_nonzero(0.0),
        norm_a_bound,
        norm_b_bound,
        norm_b1_bound: b1,
        norm_b2_bound: b2,
        norm_a_exact: trace_norm(&a)?,
        norm_b_exact: trace_norm(&b)?,
        norm_b1_exact: None,
        norm_b2_exact: None,
        trace_norm_exact,
        satisfied: satisfied(trace_norm_exact, norm_a_bound + norm_b_bound),
    })
}

/// Weak-regime report with the small entries split by sector. Entries in
/// row `m` or column `n` count toward `B₂`, everything else toward `B₁`.
/// Computed in the eigenbasis of `H`, where the sectors are defined.
pub fn cutoff_bound_weak(correction: &WeakStateCorrection, cutoff_c: f64) -> Result<CutoffReport> {
    let s = &correction.sigma_eigenbasis;
    let mut report = cutoff_bound(s, cutoff_c, Regime::Weak)?;
    let s = normalized(s);
    let (_, b1) = split(&s, cutoff_c, |p, q| !correction.in_b2_support(p, q));
    let (_, b2) = split(&s, cutoff_c, |p, q| correction.in_b2_support(p, q));
    report.norm_b1_exact = Some(trace_norm(&b1)?);
    report.norm_b2_exact = Some(trace_norm(&b2)?);
    Ok(report)
}
