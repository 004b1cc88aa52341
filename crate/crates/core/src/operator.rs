//! Dense operators on a finite-dimensional Hilbert space.
//!
//! Vectorization is column-stacking throughout the crate:
//! `vec(A)[i + N*j] = A[i, j]`.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use faer::{c64, Col, ColRef, Mat, MatRef, Side};

use crate::error::{DensityViolation, Error, Result};
use crate::fmath::{cabs, sqrt};
use crate::tolerance::ToleranceSet;

/// Dimension of a Hilbert space, optionally split into tensor factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertDim {
    n: usize,
    factors: Option<Vec<usize>>,
}

impl HilbertDim {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("dimension must be at least 1"));
        }
        Ok(Self { n, factors: None })
    }

    pub fn with_factors(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::InvalidDimension("factors must be nonempty and positive"));
        }
        let n = factors
            .iter()
            .try_fold(1usize, |acc, &f| acc.checked_mul(f))
            .ok_or(Error::InvalidDimension("factor product overflows"))?;
        Ok(Self {
            n,
            factors: Some(factors),
        })
    }

    /// A chain of `sites` qubits.
    pub fn qubits(sites: usize) -> Result<Self> {
        Self::with_factors(alloc::vec![2; sites])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> Option<&[usize]> {
        self.factors.as_deref()
    }

    fn tensor(&self, other: &Self) -> Self {
        let factors = match (&self.factors, &other.factors) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            (Some(a), None) => Some(a.iter().copied().chain([other.n]).collect()),
            (None, Some(b)) => Some([self.n].into_iter().chain(b.iter().copied()).collect()),
            (None, None) => Some(alloc::vec![self.n, other.n]),
        };
        Self {
            n: self.n * other.n,
            factors,
        }
    }
}

/// A linear operator on `C^N`, stored as a dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: HilbertDim,
    mat: Mat<c64>,
}

impl Operator {
    pub fn from_mat(mat: Mat<c64>) -> Result<Self> {
        let dim = HilbertDim::new(mat.nrows())?;
        Self::with_dim(dim, mat)
    }

    pub fn with_dim(dim: HilbertDim, mat: Mat<c64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.nrows() != dim.n() {
            return Err(Error::DimensionMismatch {
                expected: dim.n(),
                found: mat.nrows(),
            });
        }
        for j in 0..mat.ncols() {
            for i in 0..mat.nrows() {
                let z = mat[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite);
                }
            }
        }
        Ok(Self { dim, mat })
    }

    /// Build from row-major nested slices.
    pub fn from_rows(rows: &[&[c64]]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::from_mat(Mat::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_fn(dim: HilbertDim, f: impl FnMut(usize, usize) -> c64) -> Result<Self> {
        let n = dim.n();
        Self::with_dim(dim, Mat::from_fn(n, n, f))
    }

    pub fn zeros(dim: HilbertDim) -> Self {
        let n = dim.n();
        Self {
            dim,
            mat: Mat::zeros(n, n),
        }
    }

    pub fn identity(dim: HilbertDim) -> Self {
        let n = dim.n();
        Self {
            dim,
            mat: Mat::identity(n, n),
        }
    }

    pub fn diagonal(values: &[c64]) -> Result<Self> {
        let n = values.len();
        Self::from_mat(Mat::from_fn(n, n, |i, j| {
            if i == j {
                values[i]
            } else {
                c64::new(0.0, 0.0)
            }
        }))
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn ket_bra(a: &[c64], b: &[c64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        let n = a.len();
        Self::from_mat(Mat::from_fn(n, n, |i, j| a[i] * b[j].conj()))
    }

    /// Projector `|ψ⟩⟨ψ|` (no normalization).
    pub fn projector(psi: &[c64]) -> Result<Self> {
        Self::ket_bra(psi, psi)
    }

    #[inline]
    pub fn dim(&self) -> &HilbertDim {
        &self.dim
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.dim.n()
    }

    #[inline]
    pub fn mat(&self) -> MatRef<'_, c64> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.mat
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> c64 {
        self.mat[(i, j)]
    }

    /// Replace the dimension metadata (the sizes must agree).
    pub fn with_factors(mut self, dim: HilbertDim) -> Result<Self> {
        if dim.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: dim.n(),
            });
        }
        self.dim = dim;
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim.clone(),
            mat: self.mat.adjoint().to_owned(),
        }
    }

    pub fn trace(&self) -> c64 {
        (0..self.n()).map(|i| self.mat[(i, i)]).sum()
    }

    pub fn scale(&self, s: c64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, mut f: impl FnMut(c64) -> c64) -> Self {
        let n = self.n();
        Self {
            dim: self.dim.clone(),
            mat: Mat::from_fn(n, n, |i, j| f(self.mat[(i, j)])),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn try_matmul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            dim: self.dim.clone(),
            mat: &self.mat * &other.mat,
        })
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.try_matmul(other)? - &other.try_matmul(self)?)
    }

    /// Largest entrywise `|A - A†|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                worst = worst.max(cabs(self.mat[(i, j)] - self.mat[(j, i)].conj()));
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.n();
        Self {
            dim: self.dim.clone(),
            mat: Mat::from_fn(n, n, |i, j| (self.mat[(i, j)] + self.mat[(j, i)].conj()) * 0.5),
        }
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.hermitian_part()
            .mat
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::Decomposition("self-adjoint eigen"))
    }

    pub fn max_abs(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max(cabs(self.mat[(i, j)]));
            }
        }
        worst
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    fn zip(&self, other: &Self, mut f: impl FnMut(c64, c64) -> c64) -> Self {
        let n = self.n();
        Self {
            dim: self.dim.clone(),
            mat: Mat::from_fn(n, n, |i, j| f(self.mat[(i, j)], other.mat[(i, j)])),
        }
    }
}

// The operator impls panic on dimension mismatch; use the `try_*` methods
// when the shapes are not known to agree.
impl Add<&Operator> for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("operator dimensions must agree")
    }
}

impl Sub<&Operator> for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.try_sub(rhs).expect("operator dimensions must agree")
    }
}

impl Sub<&Operator> for Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        &self - rhs
    }
}

impl Add<&Operator> for Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        &self + rhs
    }
}

impl Mul<&Operator> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.try_matmul(rhs).expect("operator dimensions must agree")
    }
}

impl Mul<c64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: c64) -> Operator {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale(c64::new(rhs, 0.0))
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.map(|z| -z)
    }
}

/// Hilbert–Schmidt inner product `tr(a† b)`.
pub fn hs_inner(a: &Operator, b: &Operator) -> Result<c64> {
    a.check_same(b)?;
    let n = a.n();
    let mut acc = c64::new(0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            acc += a.mat[(i, j)].conj() * b.mat[(i, j)];
        }
    }
    Ok(acc)
}

/// Hilbert–Schmidt (Frobenius) norm.
pub fn hs_norm(a: &Operator) -> f64 {
    let n = a.n();
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            acc += a.mat[(i, j)].norm_sqr();
        }
    }
    sqrt(acc)
}

/// Kronecker product `a ⊗ b`; tensor factors are concatenated.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    Operator {
        dim: a.dim.tensor(&b.dim),
        mat: kron_mat(a.mat(), b.mat()),
    }
}

pub(crate) fn kron_mat(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> Mat<c64> {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    let mut out = Mat::zeros(ar * br, ac * bc);
    for ja in 0..ac {
        for ia in 0..ar {
            let s = a[(ia, ja)];
            if s == c64::new(0.0, 0.0) {
                continue;
            }
            for jb in 0..bc {
                for ib in 0..br {
                    out[(ia * br + ib, ja * bc + jb)] = s * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on tensor factor `site` (0-based).
pub fn embed_site(op: &Operator, site: usize, chain: &HilbertDim) -> Result<Operator> {
    let factors = chain
        .factors()
        .ok_or(Error::InvalidDimension("chain has no tensor factors"))?;
    if site >= factors.len() {
        return Err(Error::SiteOutOfRange {
            site,
            sites: factors.len(),
        });
    }
    if factors[site] != op.n() {
        return Err(Error::DimensionMismatch {
            expected: factors[site],
            found: op.n(),
        });
    }
    let left: usize = factors[..site].iter().product();
    let right: usize = factors[site + 1..].iter().product();
    let mat = kron_mat(
        kron_mat(Mat::<c64>::identity(left, left).as_ref(), op.mat()).as_ref(),
        Mat::<c64>::identity(right, right).as_ref(),
    );
    Operator::with_dim(chain.clone(), mat)
}

/// Column-stacking vectorization.
pub fn vectorize(a: &Operator) -> Col<c64> {
    let n = a.n();
    Col::from_fn(n * n, |k| a.mat[(k % n, k / n)])
}

/// Inverse of [`vectorize`]; the result carries a plain (unfactored) dimension.
pub fn devectorize(v: ColRef<'_, c64>) -> Result<Operator> {
    let len = v.nrows();
    let n = isqrt(len).ok_or(Error::NotSquareLength(len))?;
    Operator::from_mat(Mat::from_fn(n, n, |i, j| v[i + n * j]))
}

/// Like [`devectorize`] but keeps the given dimension metadata.
pub(crate) fn devectorize_as(v: ColRef<'_, c64>, dim: &HilbertDim) -> Result<Operator> {
    let n = dim.n();
    if v.nrows() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: v.nrows(),
        });
    }
    Operator::with_dim(dim.clone(), Mat::from_fn(n, n, |i, j| v[i + n * j]))
}

fn isqrt(len: usize) -> Option<usize> {
    if len == 0 {
        return None;
    }
    let mut n = sqrt(len as f64) as usize;
    while n * n > len {
        n -= 1;
    }
    while (n + 1) * (n + 1) <= len {
        n += 1;
    }
    (n * n == len).then_some(n)
}

/// An operator that has passed [`validate_density`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    pub fn op(&self) -> &Operator {
        &self.0
    }

    pub fn into_op(self) -> Operator {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    /// `I / N`.
    pub fn maximally_mixed(dim: HilbertDim) -> Self {
        let n = dim.n() as f64;
        Self(Operator::identity(dim).scale(c64::new(1.0 / n, 0.0)))
    }

    /// `|i⟩⟨i|` in the computational basis.
    pub fn basis_state(dim: HilbertDim, i: usize) -> Result<Self> {
        if i >= dim.n() {
            return Err(Error::IndexOutOfRange {
                index: i,
                lo: 0,
                hi: dim.n() - 1,
            });
        }
        let op = Operator::from_fn(dim, |a, b| {
            if a == i && b == i {
                c64::new(1.0, 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        })?;
        Ok(Self(op))
    }

    /// Normalized pure state `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn pure(psi: &[c64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !(norm2 > 0.0) {
            return Err(Error::InvalidDimension("zero state vector"));
        }
        Ok(Self(Operator::projector(psi)?.scale(c64::new(1.0 / norm2, 0.0))))
    }

    /// Wrap without checks; callers guarantee the invariants.
    pub(crate) fn new_unchecked(op: Operator) -> Self {
        Self(op)
    }
}

impl AsRef<Operator> for DensityMatrix {
    fn as_ref(&self) -> &Operator {
        &self.0
    }
}

/// Check Hermiticity, unit trace and positivity, in that order.
pub fn validate_density(op: Operator, tol: &ToleranceSet) -> Result<DensityMatrix, DensityViolation> {
    let deviation = op.hermitian_deviation();
    if deviation > tol.herm {
        return Err(DensityViolation::NotHermitian {
            deviation,
            tol: tol.herm,
        });
    }
    let trace = op.trace();
    let tr_dev = cabs(trace - c64::new(1.0, 0.0));
    if tr_dev > tol.trace {
        return Err(DensityViolation::Trace {
            trace,
            deviation: tr_dev,
            tol: tol.trace,
        });
    }
    let min_eigenvalue = min_eigenvalue(&op);
    if min_eigenvalue < -tol.psd {
        return Err(DensityViolation::NotPositive {
            min_eigenvalue,
            violation: -min_eigenvalue,
            tol: tol.psd,
        });
    }
    Ok(DensityMatrix(op))
}

/// Smallest eigenvalue of the Hermitian part; `-inf` if the solver fails.
pub fn min_eigenvalue(op: &Operator) -> f64 {
    op.hermitian_eigenvalues()
        .ok()
        .and_then(|v| v.first().copied())
        .unwrap_or(f64::NEG_INFINITY)
}
