//! Dense eigendecomposition of `H^D`: steady manifold, gap, slowest mode.

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::Mat;

use crate::error::{Error, Result};
use crate::liouvillian::DoubledGenerator;
use crate::operators::{trace_norm, unvectorize, DensityMatrix, Operator, SuperVector, C64, ZERO};

/// Condition number of the eigenvector matrix above which a generator is
/// treated as near-defective.
pub const DEFECTIVE_CONDITION: f64 = 1e12;

/// One eigenpair `H^D v = ε v` with `ε = α − iβ`.
#[derive(Clone, Debug)]
pub struct SpectrumRecord {
    pub index: usize,
    pub epsilon: C64,
    pub alpha: f64,
    pub beta: f64,
    /// Unvectorized right eigenvector, unit Frobenius norm.
    pub mode: Operator,
    pub mode_trace_norm: f64,
    pub is_steady: bool,
}

#[derive(Clone, Debug)]
pub struct LindbladSpectrum {
    /// Sorted by `(β, α)`.
    pub records: Vec<SpectrumRecord>,
    pub steady_dim: usize,
    /// `min β` over non-steady modes; infinite when every mode is steady.
    pub gap: f64,
    /// Position in `records` of the first mode attaining the gap.
    pub slowest: Option<usize>,
    /// Present only when the steady state is unique.
    pub sigma0: Option<DensityMatrix>,
    /// Orthonormal basis of the steady manifold.
    pub steady_basis: Vec<Operator>,
    pub zero_tol: f64,
    pub generator_norm: f64,
    pub condition_number: f64,
    pub defective: bool,
    pub dim: usize,
    generator: Operator,
    vectors: Mat<C64>,
    lu: PartialPivLu<C64>,
}

/// Full right-eigendecomposition of the doubled generator.
pub fn decompose(gen: &DoubledGenerator) -> Result<LindbladSpectrum> {
    let hd = &gen.generator;
    let n_sq = gen.n_sq;
    let n = gen.dim();
    let evd = hd
        .to_faer()
        .eigen()
        .map_err(|e| Error::EigFailure(format!("{e:?}")))?;
    let values = evd.S().column_vector();
    let u = evd.U();

    let norm = hd.frobenius_norm();
    let zero_tol = 1e-9 * norm.max(1.0);

    let mut order: Vec<usize> = (0..n_sq).collect();
    order.sort_by(|&a, &b| (-values[a].im).total_cmp(&-values[b].im));
    // within runs of decay rates equal up to tolerance, order by α so
    // conjugate partners sit next to each other
    let mut start = 0;
    while start < n_sq {
        let b0 = -values[order[start]].im;
        let mut end = start + 1;
        while end < n_sq && -values[order[end]].im - b0 <= zero_tol {
            end += 1;
        }
        order[start..end].sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re));
        start = end;
    }

    let mut vectors = Mat::<C64>::zeros(n_sq, n_sq);
    let mut records = Vec::with_capacity(n_sq);
    for (pos, &k) in order.iter().enumerate() {
        let col = u.col(k);
        let vnorm = (0..n_sq).map(|i| col[i].norm_sqr()).sum::<f64>().sqrt();
        if !(vnorm > 0.0) {
            return Err(Error::EigFailure("zero eigenvector".into()));
        }
        let v: Vec<C64> = (0..n_sq).map(|i| col[i] / vnorm).collect();
        let eps = values[k];
        let hv = hd.apply(&v);
        let residual = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - eps * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual > 1e-8 * norm.max(1.0) {
            return Err(Error::EigFailure(format!(
                "residual {residual:.3e} for eigenvalue {eps}"
            )));
        }
        for (i, x) in v.iter().enumerate() {
            vectors[(i, pos)] = *x;
        }
        let mode = unvectorize(&SuperVector::new(v))?;
        let alpha = eps.re;
        let beta = -eps.im;
        records.push(SpectrumRecord {
            index: pos,
            epsilon: eps,
            alpha,
            beta,
            mode_trace_norm: trace_norm(&mode)?,
            mode,
            is_steady: beta.abs() <= zero_tol && alpha.abs() <= zero_tol,
        });
    }

    let singular = vectors.singular_values().map_err(|_| Error::SvdFailure)?;
    let smax = singular.first().copied().unwrap_or(0.0);
    let smin = singular.last().copied().unwrap_or(0.0);
    let condition_number = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let defective = condition_number > DEFECTIVE_CONDITION;

    let steady: Vec<&SpectrumRecord> = records.iter().filter(|r| r.is_steady).collect();
    let steady_dim = steady.len();
    let steady_basis = orthonormalize(steady.iter().map(|r| r.mode.clone()).collect());
    let sigma0 = if steady_dim == 1 {
        let m = &steady[0].mode;
        let tr = m.trace();
        if tr.norm() < 1e-12 {
            return Err(Error::InvalidState("steady mode has zero trace".into()));
        }
        let op = m.scale(C64::new(1.0, 0.0) / tr).hermitian_part();
        Some(DensityMatrix::with_tolerance(op, 1e-7)?)
    } else {
        None
    };

    let slowest = records.iter().position(|r| !r.is_steady);
    let gap = slowest.map_or(f64::INFINITY, |k| records[k].beta);
    let lu = vectors.partial_piv_lu();

    Ok(LindbladSpectrum {
        records,
        steady_dim,
        gap,
        slowest,
        sigma0,
        steady_basis,
        zero_tol,
        generator_norm: norm,
        condition_number,
        defective,
        dim: n,
        generator: hd.clone(),
        vectors,
        lu,
    })
}

/// Gram-Schmidt on the Frobenius inner product; drops dependent inputs.
pub fn orthonormalize(ops: Vec<Operator>) -> Vec<Operator> {
    let mut out: Vec<Operator> = Vec::new();
    for mut op in ops {
        for _ in 0..2 {
            for q in &out {
                let c = q.inner(&op);
                op = &op - &q.scale(c);
            }
        }
        let norm = op.frobenius_norm();
        if norm > 1e-10 {
            out.push(op.scale_real(1.0 / norm));
        }
    }
    out
}

impl LindbladSpectrum {
    pub fn generator(&self) -> &Operator {
        &self.generator
    }

    /// Eigenvector matrix, columns in `records` order.
    pub fn eigenvectors(&self) -> &Mat<C64> {
        &self.vectors
    }

    pub fn slowest_record(&self) -> Result<&SpectrumRecord> {
        self.slowest.map(|k| &self.records[k]).ok_or(Error::NoDecayingMode)
    }

    /// Records whose decay rate equals the gap within tolerance.
    pub fn slowest_cluster(&self) -> Vec<&SpectrumRecord> {
        let tol = self.cluster_tol();
        self.records
            .iter()
            .filter(|r| !r.is_steady && (r.beta - self.gap).abs() <= tol)
            .collect()
    }

    pub fn cluster_tol(&self) -> f64 {
        1e-7 * self.generator_norm.max(1.0)
    }

    /// Coefficients `c` with `vec(X) = Σ_j c_j v_j`.
    pub fn expansion_coefficients(&self, x: &Operator) -> Result<Vec<C64>> {
        let n_sq = self.vectors.nrows();
        if x.dim() * x.dim() != n_sq {
            return Err(Error::DimMismatch {
                left: x.dim() * x.dim(),
                right: n_sq,
            });
        }
        let rhs = Mat::from_fn(n_sq, 1, |i, _| x.as_slice()[i]);
        let sol = self.lu.solve(&rhs);
        Ok((0..n_sq).map(|i| sol[(i, 0)]).collect())
    }

    /// Asymptotic state reached from `rho0`: its component on the steady manifold.
    pub fn steady_projection(&self, rho0: &Operator) -> Result<DensityMatrix> {
        if let Some(s) = &self.sigma0 {
            return Ok(s.clone());
        }
        let c = self.expansion_coefficients(rho0)?;
        let mut acc = Operator::zeros(self.dim);
        for (r, ck) in self.records.iter().zip(&c) {
            if r.is_steady {
                acc = &acc + &r.mode.scale(*ck);
            }
        }
        let acc = acc.hermitian_part();
        let tr = acc.trace().re;
        Ok(DensityMatrix::from_operator_unchecked(acc.scale_real(1.0 / tr)))
    }

    /// Per-mode `Tr|σ_j|`, in `records` order.
    pub fn mode_trace_norms(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.mode_trace_norm).collect()
    }

    /// `Σ_j ε_j`.
    pub fn eigenvalue_sum(&self) -> C64 {
        self.records.iter().map(|r| r.epsilon).sum()
    }

    /// `V diag(ε) V⁻¹`.
    pub fn reconstruct(&self) -> Operator {
        let n_sq = self.vectors.nrows();
        let scaled = Mat::from_fn(n_sq, n_sq, |i, j| self.vectors[(i, j)] * self.records[j].epsilon);
        // X V = V diag(ε) V with X = V D V⁻¹, so solve Vᵀ Xᵀ = (V D)ᵀ.
        let vt = self.vectors.transpose().to_owned();
        let xt = vt.partial_piv_lu().solve(scaled.transpose().to_owned());
        Operator::from_faer(xt.transpose())
    }
}

/// Hermitian representative of the slowest mode, unit Frobenius norm.
///
/// For a real slowest eigenvalue the eigenspace is closed under `X ↦ X†`,
/// so the larger of the Hermitian and anti-Hermitian parts of `σ₁` is
/// itself a mode; otherwise `σ₁ + σ₁†` pairs it with its conjugate partner.
pub fn hermitize_slowest(spec: &LindbladSpectrum) -> Result<Operator> {
    let rec = spec.slowest_record()?;
    let sigma = &rec.mode;
    let h = if rec.alpha.abs() <= spec.zero_tol {
        let a = sigma.hermitian_part();
        let b = sigma.antihermitian_part();
        if a.frobenius_norm() >= b.frobenius_norm() {
            a
        } else {
            b
        }
    } else {
        sigma + &sigma.adjoint()
    };
    let norm = h.frobenius_norm();
    if norm == 0.0 {
        return Err(Error::InvalidState("slowest mode has no Hermitian part".into()));
    }
    Ok(fix_sign(h.hermitian_part().scale_real(1.0 / norm)))
}

/// Flip the overall sign so the largest-magnitude diagonal entry (or, for a
/// zero diagonal, the largest entry) has positive real part.
fn fix_sign(op: Operator) -> Operator {
    let n = op.dim();
    let dmax = (0..n).map(|k| op[(k, k)]).max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(ZERO);
    let pivot = if dmax.norm() > 1e-12 {
        dmax
    } else {
        op.as_slice()
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(ZERO)
    };
    let positive = if pivot.re.abs() > 1e-12 { pivot.re > 0.0 } else { pivot.im >= 0.0 };
    if positive {
        op
    } else {
        op.scale_real(-1.0)
    }
}
