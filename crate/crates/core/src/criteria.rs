//! Finite-size diagnostics for fast and rapid mixing: sparsity counters,
//! size scans and scaling fits.

use std::ops::RangeInclusive;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liouvillian::build_generator;
use crate::models::{ModelConfig, SystemModel};
use crate::operators::{trace_norm, Operator};
use crate::perturbation::strong::STRONG_REGIME_RATIO;
use crate::perturbation::{joint_k_eigenbasis, weak_gap_estimate, HEigenbasis, Regime};
use crate::spectral::{decompose, hermitize_slowest, LindbladSpectrum};

pub const DEFAULT_ALPHA_GRID: [f64; 3] = [1.0, 2.0, 4.0];
/// Largest row count still treated as polynomially sparse: `L²`.
pub const SPARSITY_BUDGET_POWER: u32 = 2;
/// R² differences below this are ties, resolved toward the slower class.
pub const R2_TIE: f64 = 1e-3;
/// `|exponent|` below this makes a power-law fit count as constant.
pub const CONSTANT_EXPONENT: f64 = 0.05;
pub const FINITE_SIZE_CAVEAT: &str =
    "finite-size fit only: data at small L cannot certify asymptotic poly(L) or polylog(L) growth";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Basis {
    #[serde(rename = "H_eigenbasis")]
    HEigenbasis,
    #[serde(rename = "K_eigenbasis")]
    KEigenbasis,
}

#[derive(Clone, Debug, Serialize)]
pub struct SparsityProfile {
    pub alpha: f64,
    pub basis: Basis,
    #[serde(rename = "L")]
    pub l: usize,
    pub threshold: f64,
    pub counts: Vec<usize>,
    pub max_count: usize,
}

/// Largest `|(U†U − I)_ij|`.
fn orthonormality_deviation(u: &Operator) -> f64 {
    (&u.adjoint().matmul(u) - &Operator::identity(u.dim())).max_abs()
}

/// `#{p : |⟨s|M|p⟩| ≥ e^{−αL}}` for every column `|s⟩` of `basis`.
pub fn sparsity_count(m: &Operator, basis: &Operator, alpha: f64, l: usize, kind: Basis) -> Result<SparsityProfile> {
    if !(alpha >= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must be at least 1, got {alpha}")));
    }
    if m.dim() != basis.dim() {
        return Err(Error::DimMismatch {
            left: m.dim(),
            right: basis.dim(),
        });
    }
    let dev = orthonormality_deviation(basis);
    if dev > 1e-8 {
        return Err(Error::NonOrthonormalBasis(dev));
    }
    let threshold = (-alpha * l as f64).exp();
    let mb = m.conjugate_by(basis);
    let n = m.dim();
    let counts: Vec<usize> = (0..n)
        .map(|s| (0..n).filter(|&p| mb[(s, p)].norm() >= threshold).count())
        .collect();
    Ok(SparsityProfile {
        alpha,
        basis: kind,
        l,
        threshold,
        max_count: counts.iter().copied().max().unwrap_or(0),
        counts,
    })
}

/// `N(α, K, |E_s⟩)` (row-wise maximum over the dissipators) or `N(α, H, |ε_s⟩)`.
pub fn model_sparsity(model: &SystemModel, kind: Basis, alpha: f64) -> Result<SparsityProfile> {
    let l = model.lattice.l;
    match kind {
        Basis::HEigenbasis => {
            let basis = HEigenbasis::new(model)?;
            let mut out: Option<SparsityProfile> = None;
            for d in &model.dissipators {
                let p = sparsity_count(&d.op, &basis.unitary, alpha, l, kind)?;
                out = Some(match out {
                    None => p,
                    Some(mut acc) => {
                        for (a, b) in acc.counts.iter_mut().zip(&p.counts) {
                            *a = (*a).max(*b);
                        }
                        acc.max_count = acc.max_count.max(p.max_count);
                        acc
                    }
                });
            }
            out.ok_or_else(|| Error::InvalidArgument("model has no dissipators".into()))
        }
        Basis::KEigenbasis => {
            let basis = joint_k_eigenbasis(model)?;
            sparsity_count(&model.hamiltonian, &basis.unitary, alpha, l, kind)
        }
    }
}

/// Strong when the Lindblad operators commute and the largest rate exceeds
/// the largest Hamiltonian matrix element by the strong-regime ratio.
pub fn infer_regime(model: &SystemModel) -> Regime {
    let rate = (0..model.dissipators.len()).map(|k| model.rate(k)).fold(0.0, f64::max);
    let j = model.hamiltonian.max_abs();
    if model.has_commuting_hermitian_lindblads() && rate >= STRONG_REGIME_RATIO * j {
        Regime::Strong
    } else {
        Regime::Weak
    }
}

pub fn regime_basis(regime: Regime) -> Basis {
    match regime {
        Regime::Strong => Basis::KEigenbasis,
        Regime::Weak => Basis::HEigenbasis,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingRecord {
    #[serde(rename = "L")]
    pub l: usize,
    pub inverse_gap: f64,
    pub trace_norm_sigma1: f64,
    pub max_sparsity_count: usize,
    pub wall_time_s: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub alpha: f64,
    /// `None` picks the basis matching [`infer_regime`].
    pub basis: Option<Basis>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            basis: None,
        }
    }
}

fn scan_point(template: &ModelConfig, l: usize, opts: &ScanOptions) -> Result<(f64, f64, usize)> {
    let cfg = if template.lattice.l == l {
        template.clone()
    } else {
        template.resized(l)?
    };
    let model = SystemModel::from_config(&cfg)?;
    let spec = decompose(&build_generator(&model)?)?;
    if !spec.gap.is_finite() {
        return Err(Error::NoDecayingMode);
    }
    let tn = trace_norm(&hermitize_slowest(&spec)?)?;
    let basis = opts.basis.unwrap_or_else(|| regime_basis(infer_regime(&model)));
    let count = model_sparsity(&model, basis, opts.alpha)?.max_count;
    Ok((1.0 / spec.gap, tn, count))
}

/// One record per `L`, sorted by `L`. Failures are kept as records with an
/// error message and NaN values.
pub fn scan_sizes(template: &ModelConfig, l_range: RangeInclusive<usize>, opts: &ScanOptions) -> Vec<ScalingRecord> {
    let ls: Vec<usize> = l_range.collect();
    let mut out: Vec<ScalingRecord> = ls
        .par_iter()
        .map(|&l| {
            let start = Instant::now();
            let res = scan_point(template, l, opts);
            let wall_time_s = start.elapsed().as_secs_f64();
            match res {
                Ok((inverse_gap, trace_norm_sigma1, max_sparsity_count)) => ScalingRecord {
                    l,
                    inverse_gap,
                    trace_norm_sigma1,
                    max_sparsity_count,
                    wall_time_s,
                    error: None,
                },
                Err(e) => ScalingRecord {
                    l,
                    inverse_gap: f64::NAN,
                    trace_norm_sigma1: f64::NAN,
                    max_sparsity_count: 0,
                    wall_time_s,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    out.sort_by_key(|r| r.l);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    InverseGap,
    TraceNorm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthClass {
    Constant,
    Polylog,
    PowerLaw,
    Exponential,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Fit {
    /// Exponent, polylog degree or exponential rate.
    pub parameter: f64,
    pub r2: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Fits {
    pub power_law: Fit,
    pub polylog: Fit,
    pub exponential: Fit,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingVerdict {
    pub quantity: Quantity,
    pub sizes: Vec<usize>,
    pub fits: Fits,
    pub best: GrowthClass,
    pub verdict: String,
    pub caveat: String,
}

/// Least squares `y = c + p x`, returning `(p, R²)` with `R² = 1` for constant `y`.
fn linear_fit(x: &[f64], y: &[f64]) -> Fit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let p = sxy / sxx;
    let r2 = if syy <= 1e-24 * (1.0 + my * my) {
        1.0
    } else {
        (1.0 - (syy - p * sxy) / syy).clamp(0.0, 1.0)
    };
    Fit { parameter: p, r2 }
}

/// Fits `log y` against `log L`, `log log L` and `L`.
pub fn classify_scaling(quantity: Quantity, sizes: &[usize], values: &[f64]) -> Result<ScalingVerdict> {
    let pts: Vec<(usize, f64)> = sizes
        .iter()
        .zip(values)
        .filter(|(&l, &v)| l >= 2 && v.is_finite() && v > 0.0)
        .map(|(&l, &v)| (l, v))
        .collect();
    let mut distinct: Vec<usize> = pts.iter().map(|p| p.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InsufficientPoints(distinct.len()));
    }
    let ly: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let x_pow: Vec<f64> = pts.iter().map(|p| (p.0 as f64).ln()).collect();
    let x_poly: Vec<f64> = x_pow.iter().map(|x| x.ln()).collect();
    let x_exp: Vec<f64> = pts.iter().map(|p| p.0 as f64).collect();
    let fits = Fits {
        power_law: linear_fit(&x_pow, &ly),
        polylog: linear_fit(&x_poly, &ly),
        exponential: linear_fit(&x_exp, &ly),
    };
    let best = if fits.power_law.parameter.abs() <= CONSTANT_EXPONENT {
        GrowthClass::Constant
    } else {
        let cands = [
            (GrowthClass::Polylog, fits.polylog.r2),
            (GrowthClass::PowerLaw, fits.power_law.r2),
            (GrowthClass::Exponential, fits.exponential.r2),
        ];
        let top = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        cands.iter().find(|c| c.1 >= top - R2_TIE).map(|c| c.0).unwrap_or(GrowthClass::Exponential)
    };
    let verdict = match best {
        GrowthClass::Constant | GrowthClass::Polylog => "rapid-compatible",
        GrowthClass::PowerLaw => "fast-compatible",
        GrowthClass::Exponential => "not-fast",
    };
    Ok(ScalingVerdict {
        quantity,
        sizes: distinct,
        fits,
        best,
        verdict: verdict.to_string(),
        caveat: FINITE_SIZE_CAVEAT.to_string(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionResult {
    pub status: Status,
    pub value: f64,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RapidConditionsReport {
    #[serde(rename = "L")]
    pub l: usize,
    pub dim: usize,
    pub regime: Regime,
    pub gap: ConditionResult,
    /// Weak regime only: smallest first-order rate.
    pub first_order_gap: Option<f64>,
    /// Value is `Tr|σ₁ʰ| / √N`.
    pub trace_norm: ConditionResult,
    pub sparsity: ConditionResult,
    pub profiles: Vec<SparsityProfile>,
    pub caveat: String,
}

/// Gap, trace-norm and sparsity conditions at a single size.
pub fn rapid_conditions_check(
    model: &SystemModel,
    spectrum: &LindbladSpectrum,
    alpha_grid: &[f64],
) -> Result<RapidConditionsReport> {
    let l = model.lattice.l;
    let n = model.dim();
    let regime = infer_regime(model);
    let gap = if !spectrum.gap.is_finite() {
        ConditionResult {
            status: Status::Indeterminate,
            value: spectrum.gap,
            note: "no decaying mode".into(),
        }
    } else if spectrum.gap > spectrum.zero_tol {
        ConditionResult {
            status: Status::Pass,
            value: 1.0 / spectrum.gap,
            note: "inverse gap finite at this size".into(),
        }
    } else {
        ConditionResult {
            status: Status::Fail,
            value: f64::INFINITY,
            note: "undamped non-steady mode".into(),
        }
    };
    let first_order_gap = match regime {
        Regime::Weak => weak_gap_estimate(model).ok().map(|r| r.first_order_rate),
        Regime::Strong => None,
    };
    let trace_norm = match spectrum.slowest {
        Some(_) => {
            let tn = crate::operators::trace_norm(&hermitize_slowest(spectrum)?)?;
            ConditionResult {
                status: Status::Indeterminate,
                value: tn / (n as f64).sqrt(),
                note: "polynomial growth of Tr|σ1| needs a size scan".into(),
            }
        }
        None => ConditionResult {
            status: Status::Indeterminate,
            value: f64::NAN,
            note: "no slowest mode".into(),
        },
    };
    let kind = regime_basis(regime);
    let budget = (l.max(1) as f64).powi(SPARSITY_BUDGET_POWER as i32);
    let mut profiles = Vec::new();
    let mut note = String::new();
    for &alpha in alpha_grid {
        match model_sparsity(model, kind, alpha) {
            Ok(p) => profiles.push(p),
            Err(e) => {
                note = e.to_string();
                break;
            }
        }
    }
    let sparsity = if profiles.is_empty() {
        ConditionResult {
            status: Status::Indeterminate,
            value: f64::NAN,
            note,
        }
    } else {
        let min_count = profiles.iter().map(|p| p.max_count).min().unwrap_or(n);
        let status = if (min_count as f64) <= budget {
            Status::Pass
        } else if profiles.iter().all(|p| p.max_count == n) {
            Status::Fail
        } else {
            Status::Indeterminate
        };
        ConditionResult {
            status,
            value: min_count as f64,
            note: format!("smallest max row count over the alpha grid; budget L^{SPARSITY_BUDGET_POWER} = {budget}"),
        }
    };
    Ok(RapidConditionsReport {
        l,
        dim: n,
        regime,
        gap,
        first_order_gap,
        trace_norm,
        sparsity,
        profiles,
        caveat: FINITE_SIZE_CAVEAT.into(),
    })
}
