//! The Lindbladian as a non-Hermitian operator `H^D = H_s − i H_d` on the
//! doubled (vectorized) space, so that `d|ρ⟩⟩/dt = −i H^D |ρ⟩⟩`.

use crate::error::{Error, Result};
use crate::models::SystemModel;
use crate::operators::{kron_with_limit, unvectorize, vectorize, DensityMatrix, Operator, SuperVector, C64, I};

/// Default cap on `N²`; override with the `MIXTIME_MAX_DIM` environment variable.
pub const DEFAULT_MAX_DOUBLED_DIM: usize = 1 << 14;

pub fn max_doubled_dim() -> usize {
    std::env::var("MIXTIME_MAX_DIM")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DOUBLED_DIM)
}

fn check_size(model: &SystemModel) -> Result<usize> {
    let n = model.dim();
    let n_sq = n.checked_mul(n).ok_or(Error::DimOverflow { dim: usize::MAX, max: max_doubled_dim() })?;
    let max = max_doubled_dim();
    if n_sq > max {
        return Err(Error::DimOverflow { dim: n_sq, max });
    }
    Ok(max)
}

/// `H ⊗ I − I ⊗ Hᵀ`.
pub fn build_coherent_part(model: &SystemModel) -> Result<Operator> {
    let max = check_size(model)?;
    let h = &model.hamiltonian;
    let id = Operator::identity(h.dim());
    Ok(&kron_with_limit(h, &id, max)? - &kron_with_limit(&id, &h.transpose(), max)?)
}

/// `Σ_α γ_α [−2 K ⊗ K* + (K†K) ⊗ I + I ⊗ (K†K)*]` with `γ_α = γ · strength_α`.
pub fn build_dissipative_part(model: &SystemModel) -> Result<Operator> {
    let max = check_size(model)?;
    let n = model.dim();
    let id = Operator::identity(n);
    let mut hd = Operator::zeros(n * n);
    for (k, d) in model.dissipators.iter().enumerate() {
        let rate = model.rate(k);
        if rate == 0.0 {
            continue;
        }
        let kk = &d.op;
        let ktk = kk.adjoint().matmul(kk);
        let term = &(&kron_with_limit(&ktk, &id, max)? + &kron_with_limit(&id, &ktk.conj(), max)?)
            - &kron_with_limit(kk, &kk.conj(), max)?.scale_real(2.0);
        hd = &hd + &term.scale_real(rate);
    }
    Ok(hd)
}

/// `H^D` together with its two parts and the model it came from.
#[derive(Clone, Debug)]
pub struct DoubledGenerator {
    pub n_sq: usize,
    pub hs: Operator,
    pub hd: Operator,
    pub generator: Operator,
    pub model: SystemModel,
}

/// Assemble `H^D` and check trace preservation: `⟨⟨I| H^D = 0`.
pub fn build_generator(model: &SystemModel) -> Result<DoubledGenerator> {
    let hs = build_coherent_part(model)?;
    let hd = build_dissipative_part(model)?;
    let generator = &hs - &hd.scale(I);
    let gen = DoubledGenerator {
        n_sq: generator.dim(),
        hs,
        hd,
        generator,
        model: model.clone(),
    };
    let leak = gen.trace_leak();
    let scale = gen.generator.max_abs().max(1.0);
    if leak > 1e-9 * scale {
        return Err(Error::InvalidArgument(format!(
            "generator is not trace preserving (⟨⟨I|H^D| = {leak:.3e})"
        )));
    }
    Ok(gen)
}

impl DoubledGenerator {
    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    /// Largest entry of `⟨⟨I| H^D`.
    pub fn trace_leak(&self) -> f64 {
        let n = self.dim();
        (0..self.n_sq)
            .map(|col| (0..n).map(|k| self.generator[(k * n + k, col)]).sum::<C64>().norm())
            .fold(0.0, f64::max)
    }

    /// `−i H^D` acting on a vectorized operator.
    pub fn apply_vectorized(&self, v: &SuperVector) -> Result<SuperVector> {
        if v.len() != self.n_sq {
            return Err(Error::DimMismatch {
                left: v.len(),
                right: self.n_sq,
            });
        }
        let out = self.generator.apply(v.as_slice());
        Ok(SuperVector::new(out.into_iter().map(|z| -I * z).collect()))
    }

    /// `L(X)` for an arbitrary (not necessarily physical) operator `X`.
    pub fn apply_to_operator(&self, x: &Operator) -> Result<Operator> {
        unvectorize(&self.apply_vectorized(&vectorize(x))?)
    }
}

/// `L(ρ) = unvec(−i H^D vec ρ)`.
pub fn apply_lindbladian(gen: &DoubledGenerator, rho: &DensityMatrix) -> Result<Operator> {
    gen.apply_to_operator(rho.op())
}

/// Right-hand side of the master equation evaluated directly with matrix
/// products; an independent path to [`apply_lindbladian`].
pub fn lindblad_rhs(model: &SystemModel, x: &Operator) -> Result<Operator> {
    if x.dim() != model.dim() {
        return Err(Error::DimMismatch {
            left: x.dim(),
            right: model.dim(),
        });
    }
    let h = &model.hamiltonian;
    let mut out = h.commutator(x).scale(-I);
    for (k, d) in model.dissipators.iter().enumerate() {
        let rate = model.rate(k);
        let kk = &d.op;
        let kd = kk.adjoint();
        let jump = kk.matmul(x).matmul(&kd).scale_real(2.0 * rate);
        let anti = kd.matmul(kk).anticommutator(x).scale_real(rate);
        out = &(&out + &jump) - &anti;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{presets, random, ModelConfig};
    use crate::operators::{hermitian_eigenvalues, kron};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model(cfg: &ModelConfig) -> SystemModel {
        SystemModel::from_config(cfg).unwrap()
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn coherent_part_examples() {
        let m = model(&ModelConfig::new(1, 2).with_term("z", 1.0, &[1]));
        assert_eq!(build_coherent_part(&m).unwrap(), Operator::diag(&[0.0, 2.0, -2.0, 0.0]));
        let id = SystemModel::from_operators(Operator::identity(3), vec![], 1.0).unwrap();
        assert_eq!(build_coherent_part(&id).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn coherent_part_acts_on_basis_matrices() {
        let m = model(&presets::tfi_chain(2, 1.0, 0.7));
        let hs = build_coherent_part(&m).unwrap();
        let n = m.dim();
        for a in 0..n {
            for b in 0..n {
                let e = Operator::matrix_unit(n, a, b);
                let direct = m.hamiltonian.commutator(&e);
                let via = unvectorize(&SuperVector::new(hs.apply(vectorize(&e).as_slice()))).unwrap();
                assert!((&direct - &via).max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn dissipative_part_examples() {
        let id = SystemModel::from_operators(Operator::zeros(2), vec![Operator::identity(2)], 1.0).unwrap();
        assert!(build_dissipative_part(&id).unwrap().max_abs() < 1e-15);

        let z = model(&presets::dephasing(1.0));
        let hd = build_dissipative_part(&z).unwrap();
        let zz = kron(&Operator::diag(&[1.0, -1.0]), &Operator::diag(&[1.0, -1.0])).unwrap();
        let expected = (&Operator::identity(4) - &zz).scale_real(2.0);
        assert_eq!(hd, expected);
        assert_eq!(sorted(hermitian_eigenvalues(&hd).unwrap()), vec![0.0, 0.0, 4.0, 4.0]);
    }

    #[test]
    fn amplitude_damping_rates() {
        // H = 0 so H^D = −i H_d; H_d is upper triangular in this basis and its
        // diagonal carries the rates.
        let hd = build_dissipative_part(&model(&presets::amplitude_damping(1.0))).unwrap();
        let diag = sorted((0..4).map(|k| hd[(k, k)].re).collect());
        assert_eq!(diag, vec![0.0, 1.0, 1.0, 2.0]);
        for r in 0..4 {
            for c in 0..r {
                assert_eq!(hd[(r, c)].norm(), 0.0);
            }
        }
    }

    #[test]
    fn generator_is_sum_of_parts() {
        let m = model(&presets::amplitude_damping(1.0));
        let g = build_generator(&m).unwrap();
        assert_eq!(g.generator, g.hd.scale(-I));
        let driven = model(&presets::amplitude_damping(0.8).with_term("x", 0.35, &[1]));
        let g = build_generator(&driven).unwrap();
        assert!((&g.generator - &(&g.hs - &g.hd.scale(I))).max_abs() == 0.0);
    }

    #[test]
    fn trace_preservation_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3, 5] {
            let m = random::random_model(&mut rng, n, 2, 1.0, 0.7);
            assert!(build_generator(&m).unwrap().trace_leak() < 1e-9);
        }
    }

    #[test]
    fn lindbladian_examples() {
        let g = build_generator(&model(&presets::amplitude_damping(1.0))).unwrap();
        let out = apply_lindbladian(&g, &DensityMatrix::basis(2, 0)).unwrap();
        assert!(out.max_abs() < 1e-15);
        let out = apply_lindbladian(&g, &DensityMatrix::basis(2, 1)).unwrap();
        assert!((&out - &Operator::diag(&[2.0, -2.0])).max_abs() < 1e-15);
    }

    #[test]
    fn vectorized_path_matches_matrix_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..50 {
            let n = 2 + trial % 4;
            let m = random::random_model(&mut rng, n, 1 + trial % 3, 1.3, 0.4 + 0.02 * trial as f64);
            let g = build_generator(&m).unwrap();
            let rho = DensityMatrix::pure(&random::haar_ket(&mut rng, n)).unwrap();
            let a = apply_lindbladian(&g, &rho).unwrap();
            let b = lindblad_rhs(&m, rho.op()).unwrap();
            assert!((&a - &b).max_abs() < 1e-10, "trial {trial}");
            assert!(a.trace().norm() < 1e-10);
            assert!(a.hermiticity_deviation() < 1e-10);
        }
    }

    #[test]
    fn size_cap() {
        let m = model(&presets::tfi_chain(8, 1.0, 1.0));
        assert!(matches!(build_generator(&m), Err(Error::DimOverflow { .. })));
    }
}
