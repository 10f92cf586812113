//! Mixing times: measured from the evolution, predicted from the slowest
//! mode, and bounded through `Tr|σ₁| ≤ √N`.

use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::models::{random::haar_ket, Lattice};
use crate::operators::{
    hermitian_trace_norm, min_eigenvalue, trace_norm, DensityMatrix, Operator, C64, I,
};
use crate::spectral::{hermitize_slowest, LindbladSpectrum};

pub const DEFAULT_ETA: f64 = 0.01;
/// `t_max = T_MAX_FACTOR / Δ`.
pub const T_MAX_FACTOR: f64 = 20.0;
pub const GRID_POINTS: usize = 400;
pub const BISECTION_RTOL: f64 = 1e-4;
pub const DEFAULT_RANDOM_PROBES: usize = 20;
pub const DEFAULT_PROBE_SEED: u64 = 0x5eed;
/// Smallest `c₁` tried for the probe `σ₀ + c₁σ₁ʰ`.
pub const PROBE_C1_FLOOR: f64 = 1e-4;
const PROBE_C1_TOL: f64 = 1e-6;
const PSD_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    DominantProbe,
    BasisPure,
    RandomPure,
}

/// An initial state together with its overlap `c₁` on the slowest mode.
#[derive(Clone, Debug)]
pub struct ProbeState {
    pub rho0: DensityMatrix,
    pub c1: f64,
    pub kind: ProbeKind,
    pub label: String,
}

/// Largest `c ∈ (0, 1]` with `σ₀ + c σ₁ʰ ⪰ 0`, found by bisection.
pub fn dominant_probe(spec: &LindbladSpectrum) -> Result<ProbeState> {
    let sigma0 = spec
        .sigma0
        .as_ref()
        .ok_or(Error::DegenerateSteadyManifold(spec.steady_dim))?;
    let s1 = hermitize_slowest(spec)?;
    let candidate = |c: f64| sigma0.op() + &s1.scale_real(c);
    let feasible = |c: f64| -> Result<bool> { Ok(min_eigenvalue(&candidate(c))? >= -PSD_TOL) };

    let c = if feasible(1.0)? {
        1.0
    } else if !feasible(PROBE_C1_FLOOR)? {
        return Err(Error::ProbeInfeasible(PROBE_C1_FLOOR));
    } else {
        // PSD matrices form a convex set, so feasible c form an interval.
        let (mut lo, mut hi) = (PROBE_C1_FLOOR, 1.0);
        while hi - lo > PROBE_C1_TOL {
            let mid = 0.5 * (lo + hi);
            if feasible(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    let op = candidate(c);
    let tr = op.trace().re;
    Ok(ProbeState {
        rho0: DensityMatrix::from_operator_unchecked(op.hermitian_part().scale_real(1.0 / tr)),
        c1: c,
        kind: ProbeKind::DominantProbe,
        label: "dominant_probe".into(),
    })
}

/// Component of `rho0` on the slowest-decaying eigenspace (Hermitian for
/// Hermitian `rho0`, since the cluster is closed under conjugation).
pub fn slowest_component(spec: &LindbladSpectrum, rho0: &Operator) -> Result<Operator> {
    let coeffs = spec.expansion_coefficients(rho0)?;
    let tol = spec.cluster_tol();
    let mut q = Operator::zeros(spec.dim);
    for (r, c) in spec.records.iter().zip(&coeffs) {
        if !r.is_steady && (r.beta - spec.gap).abs() <= tol {
            q = &q + &r.mode.scale(*c);
        }
    }
    Ok(q.hermitian_part())
}

/// Overlap `c₁ = ‖Q‖_F` and normalized trace norm `‖Q‖₁/‖Q‖_F` of the
/// slowest component `Q` of `rho0`.
pub fn slowest_overlap(spec: &LindbladSpectrum, rho0: &Operator) -> Result<(f64, f64)> {
    let q = slowest_component(spec, rho0)?;
    let c1 = q.frobenius_norm();
    if c1 < 1e-12 {
        return Ok((0.0, 0.0));
    }
    Ok((c1, hermitian_trace_norm(&q)? / c1))
}

fn probe_from_state(spec: &LindbladSpectrum, rho0: DensityMatrix, kind: ProbeKind, label: String) -> Result<ProbeState> {
    let (c1, _) = slowest_overlap(spec, rho0.op())?;
    Ok(ProbeState { rho0, c1, kind, label })
}

/// Dominant-mode probe (when it exists), every computational basis state and
/// `n_random` Haar-random pure states drawn from `seed`.
pub fn default_probes(spec: &LindbladSpectrum, n_random: usize, seed: u64) -> Result<Vec<ProbeState>> {
    let n = spec.dim;
    let mut probes = Vec::new();
    match dominant_probe(spec) {
        Ok(p) => probes.push(p),
        Err(Error::ProbeInfeasible(_) | Error::DegenerateSteadyManifold(_)) => {}
        Err(e) => return Err(e),
    }
    for k in 0..n {
        probes.push(probe_from_state(spec, DensityMatrix::basis(n, k), ProbeKind::BasisPure, format!("basis_{k}"))?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..n_random {
        let rho = DensityMatrix::pure(&haar_ket(&mut rng, n))?;
        probes.push(probe_from_state(spec, rho, ProbeKind::RandomPure, format!("haar_{k}"))?);
    }
    Ok(probes)
}

/// Evolution of one initial state, precomputed for repeated queries.
pub struct Trajectory<'a> {
    spec: &'a LindbladSpectrum,
    rho0: Operator,
    target: Operator,
    coeffs: Vec<C64>,
    decaying: Vec<usize>,
}

impl<'a> Trajectory<'a> {
    pub fn new(spec: &'a LindbladSpectrum, rho0: &DensityMatrix) -> Result<Self> {
        let target = spec.steady_projection(rho0.op())?.into_operator();
        let coeffs = spec.expansion_coefficients(rho0.op())?;
        let decaying = spec
            .records
            .iter()
            .enumerate()
            .filter(|(k, r)| !r.is_steady && coeffs[*k].norm() > 0.0)
            .map(|(k, _)| k)
            .collect();
        Ok(Self {
            spec,
            rho0: rho0.op().clone(),
            target,
            coeffs,
            decaying,
        })
    }

    /// `ρ(t) − σ_target`, not yet Hermitized.
    pub fn deviation(&self, t: f64) -> Result<Operator> {
        if self.spec.defective {
            let n_sq = self.spec.generator().dim();
            let a = Mat::from_fn(n_sq, n_sq, |i, j| -I * self.spec.generator()[(i, j)] * t);
            let e = expm(&a);
            let v = self.rho0.as_slice();
            let out: Vec<C64> = (0..n_sq).map(|i| (0..n_sq).map(|j| e[(i, j)] * v[j]).sum()).collect();
            let rho_t = Operator::new(self.spec.dim, out)?;
            return Ok(&rho_t - &self.target);
        }
        let vecs = self.spec.eigenvectors();
        let n_sq = vecs.nrows();
        let mut out = vec![C64::new(0.0, 0.0); n_sq];
        for &k in &self.decaying {
            let w = self.coeffs[k] * (-I * self.spec.records[k].epsilon * t).exp();
            let col = vecs.col(k);
            for (i, o) in out.iter_mut().enumerate() {
                *o += w * col[i];
            }
        }
        Operator::new(self.spec.dim, out)
    }

    /// `ρ(t)`, Hermitized and renormalized to unit trace.
    pub fn state(&self, t: f64) -> Result<DensityMatrix> {
        let op = (&self.target + &self.deviation(t)?).hermitian_part();
        let tr = op.trace().re;
        Ok(DensityMatrix::from_operator_unchecked(op.scale_real(1.0 / tr)))
    }

    /// Trace distance to the asymptotic state.
    pub fn distance(&self, t: f64) -> Result<f64> {
        Ok(0.5 * hermitian_trace_norm(&self.deviation(t)?.hermitian_part())?)
    }
}

/// `ρ(t)` from the spectral expansion (matrix exponential for near-defective generators).
pub fn evolve(spec: &LindbladSpectrum, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("negative time {t}")));
    }
    Trajectory::new(spec, rho0)?.state(t)
}

/// `t = 0` followed by `GRID_POINTS` geometric points in `[10⁻⁴ t_max, t_max]`.
pub fn time_grid(t_max: f64) -> Vec<f64> {
    let t0 = 1e-4 * t_max;
    let ratio = (t_max / t0).powf(1.0 / (GRID_POINTS - 1) as f64);
    std::iter::once(0.0)
        .chain((0..GRID_POINTS).map(|k| if k + 1 == GRID_POINTS { t_max } else { t0 * ratio.powi(k as i32) }))
        .collect()
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("eta = {eta} must lie in (0, 1)")))
    }
}

fn check_gap(spec: &LindbladSpectrum) -> Result<f64> {
    if spec.slowest.is_none() {
        return Err(Error::NoDecayingMode);
    }
    if !(spec.gap > spec.zero_tol) {
        return Err(Error::NonpositiveGap(spec.gap));
    }
    Ok(spec.gap)
}

/// Earliest `t` after which the trace distance stays within `eta` on the grid.
pub fn measure_probe(spec: &LindbladSpectrum, probe: &ProbeState, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    let gap = check_gap(spec)?;
    let t_max = T_MAX_FACTOR / gap;
    let traj = Trajectory::new(spec, &probe.rho0)?;
    let grid = time_grid(t_max);
    let d: Vec<f64> = grid.iter().map(|&t| traj.distance(t)).collect::<Result<_>>()?;
    let d_at_tmax = *d.last().expect("grid is nonempty");
    if d_at_tmax > eta {
        return Err(Error::NotConverged { d_at_tmax, t_max });
    }
    let Some(last) = d.iter().rposition(|&x| x > eta) else {
        return Ok(0.0);
    };
    let (mut lo, mut hi) = (grid[last], grid[last + 1]);
    while hi - lo > BISECTION_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        if traj.distance(mid)? > eta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Largest measured mixing time over `probes`.
pub fn measure_mixing_time(spec: &LindbladSpectrum, probes: &[ProbeState], eta: f64) -> Result<f64> {
    probes
        .iter()
        .map(|p| measure_probe(spec, p, eta))
        .try_fold(0.0, |acc, t| Ok(f64::max(acc, t?)))
}

/// `Δ⁻¹ [ln Tr|σ₁| − ln(2η/|c₁|)]`, clamped at zero.
pub fn predict_mixing_time(gap: f64, trace_norm_sigma1: f64, c1: f64, eta: f64) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::NonpositiveGap(gap));
    }
    let tau = (trace_norm_sigma1.ln() - (2.0 * eta / c1.abs()).ln()) / gap;
    Ok(tau.max(0.0))
}

/// `½ Δ⁻¹ [ln N − 2 ln(2η/|c₁|)]`.
pub fn mixing_upper_bound(n: usize, c1: f64, eta: f64, gap: f64) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::NonpositiveGap(gap));
    }
    Ok(0.5 * ((n as f64).ln() - 2.0 * (2.0 * eta / c1.abs()).ln()) / gap)
}

/// Same bound written as `½ Δ⁻¹ [L ln d0 − 2 ln(2η/|c₁|)]`.
pub fn mixing_upper_bound_lattice(lattice: Lattice, c1: f64, eta: f64, gap: f64) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::NonpositiveGap(gap));
    }
    Ok(0.5 * (lattice.l as f64 * (lattice.d0 as f64).ln() - 2.0 * (2.0 * eta / c1.abs()).ln()) / gap)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeResult {
    pub label: String,
    pub kind: ProbeKind,
    pub c1: f64,
    /// `‖Q‖₁/‖Q‖_F` for the slowest component `Q` of the probe.
    pub trace_norm: f64,
    pub tau_measured: f64,
    /// Absent when the probe has no weight on the slowest mode.
    pub tau_predicted: Option<f64>,
    pub tau_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    pub eta: f64,
    pub gap: f64,
    pub dim: usize,
    /// Worst case over the probe family.
    pub tau_measured: f64,
    pub tau_predicted: Option<f64>,
    /// Bound evaluated with `c1_used`.
    pub tau_bound: f64,
    /// Bound with `|c₁| = 1`, the purity limit.
    pub tau_bound_max: f64,
    pub tau_bound_lattice: Option<f64>,
    pub c1_used: f64,
    /// `Tr|σ₁ʰ|` of the Hermitized slowest mode.
    pub trace_norm_sigma1: f64,
    /// `Tr|σ₁|` of the raw eigenvector.
    pub trace_norm_sigma1_raw: f64,
    pub slowest_alpha: f64,
    pub probe: ProbeResult,
    pub dominant_probe: Option<ProbeResult>,
    pub probes: Vec<ProbeResult>,
    pub t_max: f64,
    pub grid_points: usize,
    pub defective: bool,
}

pub fn evaluate_probe(spec: &LindbladSpectrum, probe: &ProbeState, eta: f64) -> Result<ProbeResult> {
    let tau_measured = measure_probe(spec, probe, eta)?;
    let (c1, tn) = match probe.kind {
        ProbeKind::DominantProbe => (probe.c1, trace_norm(&hermitize_slowest(spec)?)?),
        _ => slowest_overlap(spec, probe.rho0.op())?,
    };
    let tau_predicted = if c1 > 1e-12 {
        Some(predict_mixing_time(spec.gap, tn, c1, eta)?)
    } else {
        None
    };
    let tau_bound = if c1 > 1e-12 {
        mixing_upper_bound(spec.dim, c1, eta, spec.gap)?
    } else {
        0.0
    };
    Ok(ProbeResult {
        label: probe.label.clone(),
        kind: probe.kind,
        c1,
        trace_norm: tn,
        tau_measured,
        tau_predicted,
        tau_bound,
    })
}

/// Full report over the default probe family.
pub fn mixing_report(spec: &LindbladSpectrum, lattice: Option<Lattice>, eta: f64) -> Result<MixingReport> {
    let probes = default_probes(spec, DEFAULT_RANDOM_PROBES, DEFAULT_PROBE_SEED)?;
    mixing_report_with(spec, lattice, eta, &probes)
}

pub fn mixing_report_with(
    spec: &LindbladSpectrum,
    lattice: Option<Lattice>,
    eta: f64,
    probes: &[ProbeState],
) -> Result<MixingReport> {
    check_eta(eta)?;
    let gap = check_gap(spec)?;
    if probes.is_empty() {
        return Err(Error::InvalidArgument("empty probe family".into()));
    }
    let results: Vec<ProbeResult> = probes.iter().map(|p| evaluate_probe(spec, p, eta)).collect::<Result<_>>()?;
    let worst = results
        .iter()
        .max_by(|a, b| a.tau_measured.total_cmp(&b.tau_measured))
        .expect("nonempty")
        .clone();
    let slowest = spec.slowest_record()?;
    let c1_used = if worst.c1 > 1e-12 { worst.c1 } else { 1.0 };
    Ok(MixingReport {
        eta,
        gap,
        dim: spec.dim,
        tau_measured: worst.tau_measured,
        tau_predicted: worst.tau_predicted,
        tau_bound: mixing_upper_bound(spec.dim, c1_used, eta, gap)?,
        tau_bound_max: mixing_upper_bound(spec.dim, 1.0, eta, gap)?,
        tau_bound_lattice: lattice.map(|l| mixing_upper_bound_lattice(l, c1_used, eta, gap)).transpose()?,
        c1_used,
        trace_norm_sigma1: trace_norm(&hermitize_slowest(spec)?)?,
        trace_norm_sigma1_raw: slowest.mode_trace_norm,
        slowest_alpha: slowest.alpha,
        dominant_probe: results.iter().find(|r| r.kind == ProbeKind::DominantProbe).cloned(),
        probe: worst,
        probes: results,
        t_max: T_MAX_FACTOR / gap,
        grid_points: GRID_POINTS,
        defective: spec.defective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouvillian::build_generator;
    use crate::models::{presets, random, ModelConfig, SystemModel};
    use crate::spectral::decompose;

    fn spectrum(cfg: &ModelConfig) -> LindbladSpectrum {
        decompose(&build_generator(&SystemModel::from_config(cfg).unwrap()).unwrap()).unwrap()
    }

    fn plus_state() -> DensityMatrix {
        DensityMatrix::new(Operator::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])).unwrap()
    }

    #[test]
    fn evolution_at_zero_is_identity() {
        let s = spectrum(&presets::tfi_chain(2, 1.0, 0.4).with_gamma(0.5).with_dissipator("sigma_minus", 1, 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = DensityMatrix::pure(&haar_ket(&mut rng, 4)).unwrap();
        let out = evolve(&s, &rho, 0.0).unwrap();
        assert!((out.op() - rho.op()).max_abs() < 1e-10);
    }

    #[test]
    fn amplitude_damping_population() {
        let s = spectrum(&presets::amplitude_damping(1.0));
        for t in [0.1, 0.5, 2.0] {
            let rho = evolve(&s, &DensityMatrix::basis(2, 1), t).unwrap();
            assert!((rho.op()[(1, 1)].re - (-2.0 * t).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn evolution_matches_expm() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [2, 3, 4] {
            let m = random::random_model(&mut rng, n, 2, 1.0, 0.6);
            let g = build_generator(&m).unwrap();
            let s = decompose(&g).unwrap();
            let rho = DensityMatrix::pure(&haar_ket(&mut rng, n)).unwrap();
            let t = 0.7;
            let a = Mat::from_fn(n * n, n * n, |i, j| -I * g.generator[(i, j)] * t);
            let e = expm(&a);
            let v = rho.op().as_slice();
            let expected: Vec<C64> = (0..n * n).map(|i| (0..n * n).map(|j| e[(i, j)] * v[j]).sum()).collect();
            let got = evolve(&s, &rho, t).unwrap();
            let err = got.op().as_slice().iter().zip(&expected).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-8, "n = {n}: {err}");
        }
    }

    #[test]
    fn amplitude_damping_probe_is_infeasible() {
        // |0⟩⟨0| + c(|0⟩⟨1| + |1⟩⟨0|)/√2 has determinant −c²/2.
        let s = spectrum(&presets::amplitude_damping(1.0));
        assert!(matches!(dominant_probe(&s), Err(Error::ProbeInfeasible(_))));
    }

    #[test]
    fn probe_from_maximally_mixed_steady_state() {
        // unital qubit: σ₀ = I/2; with σ₁ʰ = σˣ/√2, λ_min = −1/√2 so c₁ = min(1, (1/2)·√2)
        let cfg = ModelConfig::new(1, 2).with_dissipator("x", 1, 1.0).with_dissipator("z", 1, 0.3);
        let s = spectrum(&cfg);
        let p = dominant_probe(&s).unwrap();
        let s1 = hermitize_slowest(&s).unwrap();
        let lmin = min_eigenvalue(&s1).unwrap();
        let expected = (0.5 / lmin.abs()).min(1.0);
        assert!((p.c1 - expected).abs() < 2e-6, "{} vs {expected}", p.c1);
        assert!(min_eigenvalue(p.rho0.op()).unwrap() >= -1e-12);
    }

    #[test]
    fn dephasing_has_no_probe() {
        let s = spectrum(&presets::dephasing(1.0));
        assert!(matches!(dominant_probe(&s), Err(Error::DegenerateSteadyManifold(2))));
    }

    #[test]
    fn amplitude_damping_mixing_time() {
        let s = spectrum(&presets::amplitude_damping(1.0));
        let probe = probe_from_state(&s, plus_state(), ProbeKind::RandomPure, "plus".into()).unwrap();
        assert!((probe.c1 - 0.5f64.sqrt()).abs() < 1e-12);
        let r = evaluate_probe(&s, &probe, 0.01).unwrap();
        let expected = (1.0f64 / 0.02).ln();
        assert!((r.tau_predicted.unwrap() - expected).abs() < 1e-12);
        assert!((r.tau_measured - expected).abs() / expected < 1e-3, "{}", r.tau_measured);
        // steady state and loose accuracy
        let steady = probe_from_state(&s, DensityMatrix::basis(2, 0), ProbeKind::BasisPure, "b0".into()).unwrap();
        assert_eq!(measure_probe(&s, &steady, 0.01).unwrap(), 0.0);
        assert_eq!(measure_probe(&s, &probe, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn mixing_time_is_monotone_in_eta() {
        let s = spectrum(&presets::tfi_chain(2, 1.0, 0.7).with_gamma(0.3).with_dissipator("sigma_minus", 1, 1.0));
        let probes = default_probes(&s, 3, 4).unwrap();
        for p in &probes {
            let taus: Vec<f64> = [0.005, 0.01, 0.05, 0.2]
                .iter()
                .map(|&eta| measure_probe(&s, p, eta).unwrap())
                .collect();
            assert!(taus.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-3)), "{taus:?}");
        }
    }

    #[test]
    fn evolution_stays_physical() {
        let s = spectrum(&presets::tfi_chain(2, 1.0, 0.7).with_gamma(0.3).with_dissipator("sigma_minus", 2, 1.0));
        let rho = DensityMatrix::basis(4, 3);
        let traj = Trajectory::new(&s, &rho).unwrap();
        for &t in time_grid(T_MAX_FACTOR / s.gap).iter().step_by(20) {
            let st = traj.state(t).unwrap();
            let raw = &traj.deviation(t).unwrap() + s.sigma0.as_ref().unwrap().op();
            assert!((raw.trace().re - 1.0).abs() < 1e-8);
            assert!(min_eigenvalue(st.op()).unwrap() >= -1e-7);
        }
    }

    #[test]
    fn prediction_and_bound_formulas() {
        assert_eq!(predict_mixing_time(1.0, 1.0, 1.0, 0.5).unwrap(), 0.0);
        let n = 8usize;
        let eta = 0.01;
        let tau = predict_mixing_time(1.0, (n as f64).sqrt(), 1.0, eta).unwrap();
        let sat = 0.5 * ((n as f64).ln() - 2.0 * (2.0 * eta).ln());
        assert!((tau - sat).abs() < 1e-12);
        assert!((mixing_upper_bound(n, 1.0, eta, 1.0).unwrap() - sat).abs() < 1e-12);
        let lat = Lattice { l: 3, d0: 2 };
        let a = mixing_upper_bound(8, 0.3, eta, 0.7).unwrap();
        let b = mixing_upper_bound_lattice(lat, 0.3, eta, 0.7).unwrap();
        assert!((a - b).abs() < 1e-12);
        let amp = mixing_upper_bound(2, 0.5f64.sqrt(), 0.01, 1.0).unwrap();
        assert!((amp - 0.5 * (2f64.ln() - 2.0 * (0.02 * 2f64.sqrt()).ln())).abs() < 1e-12);
        assert!((amp - 3.9120).abs() < 1e-3);
        assert!(matches!(predict_mixing_time(0.0, 1.0, 1.0, 0.1), Err(Error::NonpositiveGap(_))));
        assert!(matches!(mixing_upper_bound(2, 1.0, 0.1, -1.0), Err(Error::NonpositiveGap(_))));
    }
}
