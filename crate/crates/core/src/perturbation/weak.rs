//! Weak dissipation: the dissipative part perturbs the coherent generator.
//!
//! In the eigenbasis `{|E_m⟩}` of `H` the zeroth-order generator `H_s` is
//! diagonal with eigenvalues `ε_mn = E_m − E_n` on `|E_m⟩⟨E_n|`. For a
//! nondegenerate `ε_mn` the first-order shift is `−i ⟨mn|H_d|mn⟩`.

use serde::Serialize;

use super::DEGENERATE_DENOMINATOR;
use crate::error::{Error, Result};
use crate::liouvillian::build_generator;
use crate::models::SystemModel;
use crate::operators::{hermitian_eigen, trace_norm, Operator, C64, ZERO};
use crate::spectral::decompose;

/// Energies (ascending) and eigenvectors (columns) of `H`.
#[derive(Clone, Debug)]
pub struct HEigenbasis {
    pub energies: Vec<f64>,
    pub unitary: Operator,
}

impl HEigenbasis {
    /// A diagonal `H` keeps the computational basis, sorted by energy, so
    /// degenerate levels are not mixed.
    pub fn new(model: &SystemModel) -> Result<Self> {
        let h = &model.hamiltonian;
        if h.is_diagonal(1e-14 * h.max_abs().max(1.0)) {
            let n = h.dim();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| h[(a, a)].re.total_cmp(&h[(b, b)].re));
            let energies = order.iter().map(|&k| h[(k, k)].re).collect();
            let unitary = Operator::from_fn(n, |r, c| if r == order[c] { C64::new(1.0, 0.0) } else { ZERO });
            return Ok(Self { energies, unitary });
        }
        let (energies, unitary) = hermitian_eigen(h)?;
        Ok(Self { energies, unitary })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `U† X U`.
    pub fn to_basis(&self, x: &Operator) -> Operator {
        x.conjugate_by(&self.unitary)
    }

    /// `U X U†`.
    pub fn from_basis(&self, x: &Operator) -> Operator {
        self.unitary.matmul(x).matmul(&self.unitary.adjoint())
    }

    fn energy_scale(&self) -> f64 {
        self.energies.iter().fold(0.0f64, |a, e| a.max(e.abs())).max(1.0)
    }

    fn tolerance(&self) -> f64 {
        DEGENERATE_DENOMINATOR * self.energy_scale()
    }

    /// `ε_mn` is not shared by any other ordered pair.
    pub fn is_nondegenerate(&self, m: usize, n: usize) -> bool {
        let n_dim = self.dim();
        let e = self.energies[m] - self.energies[n];
        let tol = self.tolerance();
        (0..n_dim)
            .flat_map(|p| (0..n_dim).map(move |q| (p, q)))
            .filter(|&pq| pq != (m, n))
            .all(|(p, q)| (self.energies[p] - self.energies[q] - e).abs() > tol)
    }

    /// All ordered pairs with `m ≠ n` and a nondegenerate `ε_mn`.
    pub fn nondegenerate_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        (0..n)
            .flat_map(|m| (0..n).map(move |k| (m, k)))
            .filter(|&(m, k)| m != k && self.is_nondegenerate(m, k))
            .collect()
    }
}

/// Contribution of one Lindblad operator to the first-order shift.
#[derive(Clone, Debug, Serialize)]
pub struct DissipatorTerm {
    pub label: String,
    pub gamma: f64,
    pub kbar_m: C64,
    pub kbar_n: C64,
    /// `(K†K)_mm − |K_mm|²`.
    pub delta_k2_m: f64,
    pub delta_k2_n: f64,
    /// `γ[δK_m² + δK_n² + |K̄_m − K̄_n|²]`.
    pub rate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakPTRecord {
    pub m: usize,
    pub n: usize,
    pub epsilon0: f64,
    pub nondegenerate: bool,
    pub terms: Vec<DissipatorTerm>,
    pub first_order_rate: f64,
    /// Rate per unit overall `γ`.
    pub rate_coefficient: f64,
    /// Full first-order eigenvalue shift; its real part comes from complex `K̄`.
    pub first_order_shift: C64,
    pub fluctuation_exponent_a: Option<f64>,
}

impl WeakPTRecord {
    /// Summed `K̄_m` over the dissipators, only meaningful for a single `K`.
    pub fn kbar_m(&self) -> C64 {
        self.terms.iter().map(|t| t.kbar_m).sum()
    }

    pub fn delta_k2_m(&self) -> f64 {
        self.terms.iter().map(|t| t.delta_k2_m).sum()
    }

    pub fn delta_k2_n(&self) -> f64 {
        self.terms.iter().map(|t| t.delta_k2_n).sum()
    }
}

fn lindblads_in_basis(model: &SystemModel, basis: &HEigenbasis) -> Vec<(Operator, Operator)> {
    model
        .dissipators
        .iter()
        .map(|d| {
            let k = basis.to_basis(&d.op);
            let ktk = k.adjoint().matmul(&k);
            (k, ktk)
        })
        .collect()
}

fn record_in(model: &SystemModel, basis: &HEigenbasis, ks: &[(Operator, Operator)], m: usize, n: usize) -> WeakPTRecord {
    let mut terms = Vec::with_capacity(ks.len());
    let mut shift = ZERO;
    for (a, (k, ktk)) in ks.iter().enumerate() {
        let g = model.rate(a);
        let (km, kn) = (k[(m, m)], k[(n, n)]);
        let dm = (ktk[(m, m)].re - km.norm_sqr()).max(0.0);
        let dn = (ktk[(n, n)].re - kn.norm_sqr()).max(0.0);
        let rate = g * (dm + dn + (km - kn).norm_sqr());
        shift += C64::new(0.0, -g) * (ktk[(m, m)] + ktk[(n, n)] - km * kn.conj() * 2.0);
        terms.push(DissipatorTerm {
            label: model.dissipators[a].label.clone(),
            gamma: g,
            kbar_m: km,
            kbar_n: kn,
            delta_k2_m: dm,
            delta_k2_n: dn,
            rate,
        });
    }
    let first_order_rate: f64 = terms.iter().map(|t| t.rate).sum();
    WeakPTRecord {
        m,
        n,
        epsilon0: basis.energies[m] - basis.energies[n],
        nondegenerate: m != n && basis.is_nondegenerate(m, n),
        terms,
        first_order_rate,
        rate_coefficient: if model.gamma != 0.0 { first_order_rate / model.gamma } else { 0.0 },
        first_order_shift: shift,
        fluctuation_exponent_a: None,
    }
}

fn check_pair(basis: &HEigenbasis, m: usize, n: usize) -> Result<()> {
    let dim = basis.dim();
    if m >= dim || n >= dim {
        return Err(Error::InvalidArgument(format!("pair ({m}, {n}) outside 0..{dim}")));
    }
    Ok(())
}

/// First-order correction to `ε_mn`. Indices refer to the ascending energies of `H`.
pub fn weak_energy_correction(model: &SystemModel, m: usize, n: usize) -> Result<WeakPTRecord> {
    let basis = HEigenbasis::new(model)?;
    check_pair(&basis, m, n)?;
    let ks = lindblads_in_basis(model, &basis);
    Ok(record_in(model, &basis, &ks, m, n))
}

/// Records for every ordered pair.
pub fn weak_records(model: &SystemModel) -> Result<Vec<WeakPTRecord>> {
    let basis = HEigenbasis::new(model)?;
    let ks = lindblads_in_basis(model, &basis);
    let n = basis.dim();
    Ok((0..n)
        .flat_map(|m| (0..n).map(move |k| (m, k)))
        .map(|(m, k)| record_in(model, &basis, &ks, m, k))
        .collect())
}

/// Smallest first-order rate over nondegenerate off-diagonal pairs.
pub fn weak_gap_estimate(model: &SystemModel) -> Result<WeakPTRecord> {
    weak_records(model)?
        .into_iter()
        .filter(|r| r.nondegenerate)
        .min_by(|a, b| a.first_order_rate.total_cmp(&b.first_order_rate))
        .ok_or_else(|| Error::InvalidArgument("no nondegenerate pair (m, n) with m ≠ n".into()))
}

/// First-order rate compared with the slope of the exact rate at small `γ`.
#[derive(Clone, Debug, Serialize)]
pub struct WeakRateCheck {
    pub m: usize,
    pub n: usize,
    /// First-order rate per unit `γ`.
    pub predicted: f64,
    /// Richardson estimate `2β(γ)/γ − β(2γ)/(2γ)` of `dβ/dγ` at zero.
    pub finite_difference: f64,
    pub relative_error: f64,
}

fn nearest_eigenvalue(values: &[C64], target: C64) -> C64 {
    values
        .iter()
        .copied()
        .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
        .unwrap_or(ZERO)
}

/// Checks every nondegenerate pair against exact spectra at `γ` and `2γ`.
pub fn weak_rate_finite_difference(model: &SystemModel, gamma: f64) -> Result<Vec<WeakRateCheck>> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    let spectrum_at = |g: f64| -> Result<Vec<C64>> {
        let mut scaled = model.clone();
        scaled.gamma = g;
        Ok(decompose(&build_generator(&scaled)?)?.records.iter().map(|r| r.epsilon).collect())
    };
    let s1 = spectrum_at(gamma)?;
    let s2 = spectrum_at(2.0 * gamma)?;
    let mut unit = model.clone();
    unit.gamma = 1.0;
    let basis = HEigenbasis::new(&unit)?;
    let ks = lindblads_in_basis(&unit, &basis);
    let mut out = Vec::new();
    for (m, n) in basis.nondegenerate_pairs() {
        let rec = record_in(&unit, &basis, &ks, m, n);
        let e0 = C64::new(rec.epsilon0, 0.0);
        let b1 = -nearest_eigenvalue(&s1, e0 + rec.first_order_shift * gamma).im;
        let b2 = -nearest_eigenvalue(&s2, e0 + rec.first_order_shift * (2.0 * gamma)).im;
        let fd = 2.0 * b1 / gamma - b2 / (2.0 * gamma);
        let predicted = rec.first_order_rate;
        let relative_error = (fd - predicted).abs() / predicted.abs().max(f64::MIN_POSITIVE);
        out.push(WeakRateCheck {
            m,
            n,
            predicted,
            finite_difference: fd,
            relative_error,
        });
    }
    Ok(out)
}

/// Log-log slope of `δK²` against `L`: the fluctuation exponent `a`.
pub fn fluctuation_exponent(sizes: &[usize], delta_k2: &[f64]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = sizes
        .iter()
        .zip(delta_k2)
        .filter(|(_, &d)| d > 0.0)
        .map(|(&l, &d)| ((l as f64).ln(), d.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientPoints(pts.len()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// First-order correction to the mode `|E_m⟩⟨E_n|`, split into its two sectors.
#[derive(Clone, Debug)]
pub struct WeakStateCorrection {
    pub m: usize,
    pub n: usize,
    /// `K|E_m⟩⟨E_n|K†` terms, populating up to `N²` entries (H eigenbasis).
    pub b1: Operator,
    /// `K†K` terms, confined to row `m` and column `n` (H eigenbasis).
    pub b2: Operator,
    pub b1_nonzero: usize,
    pub b2_nonzero: usize,
    pub skipped_denominators: usize,
    /// Zeroth order plus both sectors, unit Frobenius norm, H eigenbasis.
    pub sigma_eigenbasis: Operator,
    /// Same operator in the computational basis.
    pub sigma: Operator,
    pub trace_norm: f64,
}

impl WeakStateCorrection {
    /// Whether entry `(p, q)` belongs to the single-sum sector.
    pub fn in_b2_support(&self, p: usize, q: usize) -> bool {
        p == self.m || q == self.n
    }
}

/// First-order state correction for the pair `(m, n)`.
pub fn weak_state_correction(model: &SystemModel, m: usize, n: usize) -> Result<WeakStateCorrection> {
    let basis = HEigenbasis::new(model)?;
    check_pair(&basis, m, n)?;
    let dim = basis.dim();
    let ks = lindblads_in_basis(model, &basis);
    let e = &basis.energies;
    let target = e[m] - e[n];
    let tol = basis.tolerance();
    let mut b1 = Operator::zeros(dim);
    let mut b2 = Operator::zeros(dim);
    let mut skipped = 0;
    // c_pq = −i ⟨pq|H_d|mn⟩ / (ε_mn − ε_pq)
    let mut add = |sector: &mut Operator, p: usize, q: usize, element: C64| {
        if (p, q) == (m, n) || element == ZERO {
            return;
        }
        let denom = target - (e[p] - e[q]);
        if denom.abs() <= tol {
            skipped += 1;
            return;
        }
        sector[(p, q)] += C64::new(0.0, -1.0) * element / denom;
    };
    for (a, (k, ktk)) in ks.iter().enumerate() {
        let g = model.rate(a);
        if g == 0.0 {
            continue;
        }
        for p in 0..dim {
            add(&mut b2, p, n, ktk[(p, m)] * g);
            add(&mut b2, m, p, ktk[(n, p)] * g);
        }
        for p in 0..dim {
            for q in 0..dim {
                add(&mut b1, p, q, k[(p, m)] * k[(q, n)].conj() * (-2.0 * g));
            }
        }
    }
    let mut total = &b1 + &b2;
    total[(m, n)] += C64::new(1.0, 0.0);
    let norm = total.frobenius_norm();
    let sigma_eigenbasis = total.scale_real(1.0 / norm);
    let sigma = basis.from_basis(&sigma_eigenbasis);
    Ok(WeakStateCorrection {
        m,
        n,
        b1_nonzero: b1.count_nonzero(0.0),
        b2_nonzero: b2.count_nonzero(0.0),
        b1,
        b2,
        skipped_denominators: skipped,
        trace_norm: trace_norm(&sigma)?,
        sigma_eigenbasis,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{presets, random, ModelConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model(cfg: &ModelConfig) -> SystemModel {
        SystemModel::from_config(cfg).unwrap()
    }

    fn tfi_z1(l: usize, gamma: f64) -> SystemModel {
        model(&presets::tfi_chain(l, 1.0, 0.7).with_gamma(gamma).with_dissipator("z", 1, 1.0))
    }

    #[test]
    fn commuting_k_leaves_only_mean_difference() {
        // H and K both diagonal
        let cfg = ModelConfig::new(2, 2)
            .with_gamma(0.3)
            .with_term("zz", 1.0, &[1, 2])
            .with_term("z", 0.37, &[1])
            .with_term("z", 0.11, &[2])
            .with_dissipator("z", 1, 1.0);
        let m = model(&cfg);
        for r in weak_records(&m).unwrap() {
            assert!(r.delta_k2_m() < 1e-12 && r.delta_k2_n() < 1e-12);
            let kd = r.terms[0].kbar_m - r.terms[0].kbar_n;
            assert!((r.first_order_rate - 0.3 * kd.norm_sqr()).abs() < 1e-12);
        }
        let c = weak_state_correction(&m, 0, 1).unwrap();
        assert_eq!(c.b2_nonzero, 0);
        for p in 0..4 {
            for q in 0..4 {
                if p != q && (p, q) != (0, 1) {
                    assert!(c.sigma_eigenbasis[(p, q)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn diagonal_pair_rate_is_twice_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random::random_model(&mut rng, 4, 1, 1.0, 0.5);
        for s in 0..4 {
            let r = weak_energy_correction(&m, s, s).unwrap();
            assert!(r.first_order_rate >= 0.0);
            assert!((r.first_order_rate - 2.0 * 0.5 * r.delta_k2_m()).abs() < 1e-12);
        }
    }

    #[test]
    fn general_form_matches_hermitian_form() {
        let m = tfi_z1(2, 0.2);
        let basis = HEigenbasis::new(&m).unwrap();
        let k = basis.to_basis(&m.dissipators[0].op);
        let k2 = k.matmul(&k);
        for r in weak_records(&m).unwrap() {
            let (a, b) = (r.m, r.n);
            let dk = |s: usize| k2[(s, s)].re - k[(s, s)].re.powi(2);
            let expected = 0.2 * (dk(a) + dk(b) + (k[(a, a)].re - k[(b, b)].re).powi(2));
            assert!((r.first_order_rate - expected).abs() < 1e-12);
            assert!(r.first_order_shift.re.abs() < 1e-12);
            assert!((r.first_order_shift.im + r.first_order_rate).abs() < 1e-12);
        }
    }

    #[test]
    fn finite_difference_matches_first_order() {
        let checks = weak_rate_finite_difference(&tfi_z1(2, 1.0), 1e-4).unwrap();
        assert!(!checks.is_empty());
        for c in checks {
            assert!(c.relative_error < 1e-3, "{c:?}");
        }
    }

    #[test]
    fn state_correction_overlaps_exact_mode() {
        let m0 = tfi_z1(2, 1.0);
        let hnorm = m0.hamiltonian.frobenius_norm();
        let mut m = m0.clone();
        m.gamma = 1e-3 * hnorm;
        let basis = HEigenbasis::new(&m).unwrap();
        let exact = decompose(&build_generator(&m).unwrap()).unwrap();
        for (a, b) in basis.nondegenerate_pairs() {
            let rec = weak_energy_correction(&m, a, b).unwrap();
            let target = C64::new(rec.epsilon0, 0.0) + rec.first_order_shift;
            let mode = &exact
                .records
                .iter()
                .min_by(|x, y| (x.epsilon - target).norm().total_cmp(&(y.epsilon - target).norm()))
                .unwrap()
                .mode;
            let c = weak_state_correction(&m, a, b).unwrap();
            let overlap = mode.inner(&c.sigma).norm() / mode.frobenius_norm();
            assert!(overlap >= 0.99, "({a},{b}) {overlap}");
        }
    }

    #[test]
    fn sector_counts() {
        let m = tfi_z1(3, 0.01);
        let n = m.dim();
        for a in 0..n {
            for b in 0..n {
                let c = weak_state_correction(&m, a, b).unwrap();
                assert!(c.b1_nonzero <= n * n);
                assert!(c.b2_nonzero <= 2 * n);
                for p in 0..n {
                    for q in 0..n {
                        if !c.in_b2_support(p, q) {
                            assert_eq!(c.b2[(p, q)], ZERO);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fluctuation_exponent_of_power_law() {
        let sizes = [2, 4, 8];
        let d: Vec<f64> = sizes.iter().map(|&l| 0.3 * (l as f64).powf(1.5)).collect();
        assert!((fluctuation_exponent(&sizes, &d).unwrap() - 1.5).abs() < 1e-12);
        assert!(matches!(fluctuation_exponent(&[2], &[1.0]), Err(Error::InsufficientPoints(1))));
    }

    #[test]
    fn out_of_range_pair() {
        assert!(weak_energy_correction(&tfi_z1(2, 1.0), 4, 0).is_err());
    }
}
