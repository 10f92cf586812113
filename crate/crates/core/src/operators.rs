//! Dense complex matrices and the vectorization map.
//!
//! Operators are stored row-major, entry `(m, n)` holding the coefficient of
//! `|m⟩⟨n|`. Vectorization sends `(m, n)` to index `m·N + n`, which makes
//! `A ρ B` correspond to `(A ⊗ Bᵀ)·vec(ρ)`.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use faer::linalg::solvers::DenseSolveCore;
use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Relative tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Absolute tolerance on trace and negative eigenvalues of density matrices.
pub const STATE_TOL: f64 = 1e-10;
/// Default ceiling on the dimension produced by [`kron`].
pub const DEFAULT_MAX_KRON_DIM: usize = 1 << 16;

/// Dimension above which products are handed to faer.
const DENSE_KERNEL_DIM: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<C64>,
}

impl Operator {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("operator dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimMismatch {
                left: data.len(),
                right: dim * dim,
            });
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |m, n| if m == n { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        let mut data = Vec::with_capacity(dim * dim);
        for m in 0..dim {
            for n in 0..dim {
                data.push(f(m, n));
            }
        }
        Self { dim, data }
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |m, n| {
            if m == n {
                C64::new(values[m], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Build from real row slices; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        for r in rows {
            assert_eq!(r.len(), dim, "rows must form a square matrix");
        }
        Self::from_fn(dim, |m, n| C64::new(rows[m][n], 0.0))
    }

    /// `|m⟩⟨n|` in dimension `dim`.
    pub fn matrix_unit(dim: usize, m: usize, n: usize) -> Self {
        let mut op = Self::zeros(dim);
        op[(m, n)] = ONE;
        op
    }

    /// `|ψ⟩⟨φ|`.
    pub fn outer(ket: &[C64], bra: &[C64]) -> Self {
        assert_eq!(ket.len(), bra.len());
        Self::from_fn(ket.len(), |m, n| ket[m] * bra[n].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |m, n| self[(n, m)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |m, n| self[(n, m)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        if n >= DENSE_KERNEL_DIM {
            return Self::from_faer((self.to_faer() * rhs.to_faer()).as_ref());
        }
        let mut out = vec![ZERO; n * n];
        for m in 0..n {
            for k in 0..n {
                let a = self.data[m * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out[m * n..(m + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// `A·v` for a column vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    pub fn anticommutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) + &rhs.matmul(self)
    }

    /// Frobenius inner product `Tr(A†B)`.
    pub fn inner(&self, rhs: &Self) -> C64 {
        assert_eq!(self.dim, rhs.dim);
        self.data.iter().zip(&rhs.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Number of entries with magnitude above `tol`.
    pub fn count_nonzero(&self, tol: f64) -> usize {
        self.data.iter().filter(|z| z.norm() > tol).count()
    }

    /// `max|A[m,n] − conj(A[n,m])| / max|A|`, zero for the zero matrix.
    pub fn hermiticity_deviation(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut dev: f64 = 0.0;
        for m in 0..self.dim {
            for n in m..self.dim {
                dev = dev.max((self[(m, n)] - self[(n, m)].conj()).norm());
            }
        }
        dev / scale
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= HERMITIAN_TOL
    }

    /// Errors unless the operator passes the Hermiticity check.
    pub fn ensure_hermitian(&self) -> Result<()> {
        let dev = self.hermiticity_deviation();
        if dev <= HERMITIAN_TOL {
            Ok(())
        } else {
            Err(Error::NotHermitian(dev))
        }
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |m, n| (self[(m, n)] + self[(n, m)].conj()) * 0.5)
    }

    /// `(A − A†)/(2i)`, the Hermitian operator `Y` with `A = X + iY`.
    pub fn antihermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |m, n| {
            (self[(m, n)] - self[(n, m)].conj()) * C64::new(0.0, -0.5)
        })
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.dim).all(|m| (0..self.dim).all(|n| m == n || self[(m, n)].norm() <= tol))
    }

    /// `U† A U`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.adjoint().matmul(self).matmul(u)
    }

    pub fn to_faer(&self) -> Mat<C64> {
        Mat::from_fn(self.dim, self.dim, |i, j| self.data[i * self.dim + j])
    }

    pub fn from_faer(m: MatRef<'_, C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn inverse(&self) -> Self {
        Self::from_faer(self.to_faer().partial_piv_lu().inverse().as_ref())
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = C64;
    fn index(&self, (m, n): (usize, usize)) -> &C64 {
        &self.data[m * self.dim + n]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    fn index_mut(&mut self, (m, n): (usize, usize)) -> &mut C64 {
        &mut self.data[m * self.dim + n]
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "addition dimension mismatch");
        Operator {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "subtraction dimension mismatch");
        Operator {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_real(-1.0)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.matmul(rhs)
    }
}

impl Mul<&Operator> for C64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale(self)
    }
}

impl Mul<&Operator> for f64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale_real(self)
    }
}

/// Density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        Self::with_tolerance(op, STATE_TOL)
    }

    /// Like [`DensityMatrix::new`] with a caller-chosen tolerance on trace
    /// and negative eigenvalues.
    pub fn with_tolerance(op: Operator, tol: f64) -> Result<Self> {
        op.ensure_hermitian()?;
        let tr = op.trace();
        if (tr - ONE).norm() > tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = min_eigenvalue(&op)?;
        if min < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self(op))
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) nonzero ket.
    pub fn pure(ket: &[C64]) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero ket".into()));
        }
        let psi: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Ok(Self(Operator::outer(&psi, &psi)))
    }

    /// Computational basis state `|k⟩⟨k|`.
    pub fn basis(dim: usize, k: usize) -> Self {
        Self(Operator::matrix_unit(dim, k, k))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(Operator::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub(crate) fn from_operator_unchecked(op: Operator) -> Self {
        Self(op)
    }

    pub fn op(&self) -> &Operator {
        &self.0
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn purity(&self) -> f64 {
        self.0.inner(&self.0).re
    }
}

/// Vectorized operator in the doubled space.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperVector(Vec<C64>);

impl SuperVector {
    pub fn new(data: Vec<C64>) -> Self {
        Self(data)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `ρ ↦ |ψ_ρ⟩` with amplitude `(m, n)` at index `m·N + n`.
pub fn vectorize(rho: &Operator) -> SuperVector {
    SuperVector(rho.as_slice().to_vec())
}

pub fn unvectorize(v: &SuperVector) -> Result<Operator> {
    let len = v.len();
    let dim = (len as f64).sqrt().round() as usize;
    if dim == 0 || dim * dim != len {
        return Err(Error::NonSquareDim(len));
    }
    Operator::new(dim, v.0.clone())
}

pub fn kron(a: &Operator, b: &Operator) -> Result<Operator> {
    kron_with_limit(a, b, DEFAULT_MAX_KRON_DIM)
}

/// `a ⊗ b` with entry `(m·dim(b)+p, n·dim(b)+q) = a[m,n]·b[p,q]`.
pub fn kron_with_limit(a: &Operator, b: &Operator, max_dim: usize) -> Result<Operator> {
    let (da, db) = (a.dim(), b.dim());
    let dim = da
        .checked_mul(db)
        .filter(|&d| d <= max_dim)
        .ok_or(Error::DimOverflow {
            dim: da.saturating_mul(db),
            max: max_dim,
        })?;
    let mut data = vec![ZERO; dim * dim];
    for m in 0..da {
        for n in 0..da {
            let x = a[(m, n)];
            if x == ZERO {
                continue;
            }
            for p in 0..db {
                let row = (m * db + p) * dim + n * db;
                for q in 0..db {
                    data[row + q] = x * b[(p, q)];
                }
            }
        }
    }
    Ok(Operator { dim, data })
}

/// Singular values in nonincreasing order.
pub fn singular_values(a: &Operator) -> Result<Vec<f64>> {
    a.to_faer().singular_values().map_err(|_| Error::SvdFailure)
}

/// `‖A‖₁`, the sum of singular values.
pub fn trace_norm(a: &Operator) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    Ok(0.5 * hermitian_trace_norm(&(rho.op() - sigma.op()))?)
}

/// Trace norm of a Hermitian operator via its eigenvalues.
pub fn hermitian_trace_norm(a: &Operator) -> Result<f64> {
    Ok(hermitian_eigenvalues(a)?.iter().map(|x| x.abs()).sum())
}

/// Eigenvalues of a Hermitian operator in nondecreasing order.
pub fn hermitian_eigenvalues(a: &Operator) -> Result<Vec<f64>> {
    a.to_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::EigFailure(format!("{e:?}")))
}

/// Eigenvalues (nondecreasing) and eigenvectors (columns) of a Hermitian operator.
pub fn hermitian_eigen(a: &Operator) -> Result<(Vec<f64>, Operator)> {
    let evd = a
        .to_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::EigFailure(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let values = (0..a.dim()).map(|k| s[k].re).collect();
    Ok((values, Operator::from_faer(evd.U())))
}

pub fn min_eigenvalue(a: &Operator) -> Result<f64> {
    Ok(hermitian_eigenvalues(a)?.first().copied().unwrap_or(0.0))
}
