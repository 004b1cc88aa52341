//! Lindblad generator and its adjoint as explicit `N² × N²` matrices.
//!
//! With column-stacking, `vec(A X B) = (Bᵀ ⊗ A) vec(X)`, so
//!
//! ```text
//! G = -i (I⊗H - Hᵀ⊗I) + Σ_k [ conj(L_k)⊗L_k - ½ I⊗(L_k†L_k) - ½ (L_k†L_k)ᵀ⊗I ]
//! A =  i (I⊗H - Hᵀ⊗I) + Σ_k [ L_kᵀ⊗L_k†    - ½ I⊗(L_k†L_k) - ½ (L_k†L_k)ᵀ⊗I ]
//! ```
//!
//! `A` is assembled from its own formula and then compared against `G†`.

use alloc::vec::Vec;

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::fmath::cabs;
use crate::operator::{devectorize_as, hs_norm, kron_mat, vectorize, DensityMatrix, HilbertDim, Operator};

/// Hamiltonian plus coupling (jump) operators, all on the same space.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladSystem {
    hamiltonian: Operator,
    couplings: Vec<Operator>,
}

impl LindbladSystem {
    pub fn new(hamiltonian: Operator, couplings: Vec<Operator>, tol_herm: f64) -> Result<Self> {
        let deviation = hamiltonian.hermitian_deviation();
        if deviation > tol_herm {
            return Err(Error::HamiltonianNotHermitian { deviation });
        }
        for l in &couplings {
            if l.n() != hamiltonian.n() {
                return Err(Error::DimensionMismatch {
                    expected: hamiltonian.n(),
                    found: l.n(),
                });
            }
        }
        Ok(Self {
            hamiltonian,
            couplings,
        })
    }

    pub fn dim(&self) -> &HilbertDim {
        self.hamiltonian.dim()
    }

    pub fn n(&self) -> usize {
        self.hamiltonian.n()
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn couplings(&self) -> &[Operator] {
        &self.couplings
    }

    /// Evaluate the right-hand side of the master equation directly by
    /// matrix products, without going through the superoperator.
    pub fn rhs(&self, rho: &Operator) -> Result<Operator> {
        let minus_i = c64::new(0.0, -1.0);
        let mut out = self.hamiltonian.commutator(rho)?.scale(minus_i);
        for l in &self.couplings {
            let ld = l.adjoint();
            let ldl = &ld * l;
            let jump = &(l * rho) * &ld;
            let anti = &(&ldl * rho) + &(rho * &ldl);
            out = out + &jump - &anti.scale(c64::new(0.5, 0.0));
        }
        Ok(out)
    }

    /// Heisenberg-picture right-hand side `L†(X)`, evaluated directly.
    pub fn adjoint_rhs(&self, x: &Operator) -> Result<Operator> {
        let plus_i = c64::new(0.0, 1.0);
        let mut out = self.hamiltonian.commutator(x)?.scale(plus_i);
        for l in &self.couplings {
            let ld = l.adjoint();
            let ldl = &ld * l;
            let jump = &(&ld * x) * l;
            let anti = &(&ldl * x) + &(x * &ldl);
            out = out + &jump - &anti.scale(c64::new(0.5, 0.0));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuperKind {
    Generator,
    AdjointGenerator,
}

/// A dense superoperator acting on column-stacked operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: HilbertDim,
    matrix: Mat<c64>,
    kind: SuperKind,
}

impl Superoperator {
    /// Wrap an explicit `N² × N²` matrix.
    pub fn from_matrix(dim: HilbertDim, matrix: Mat<c64>, kind: SuperKind) -> Result<Self> {
        let n2 = dim.n() * dim.n();
        if matrix.nrows() != n2 || matrix.ncols() != n2 {
            return Err(Error::DimensionMismatch {
                expected: n2,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        for j in 0..n2 {
            for i in 0..n2 {
                let z = matrix[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite);
                }
            }
        }
        Ok(Self { dim, matrix, kind })
    }

    pub fn dim(&self) -> &HilbertDim {
        &self.dim
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn kind(&self) -> SuperKind {
        self.kind
    }

    /// The conjugate-transpose superoperator, with the kind flipped.
    pub fn adjoint(&self) -> Self {
        let kind = match self.kind {
            SuperKind::Generator => SuperKind::AdjointGenerator,
            SuperKind::AdjointGenerator => SuperKind::Generator,
        };
        Self {
            dim: self.dim.clone(),
            matrix: self.matrix.adjoint().to_owned(),
            kind,
        }
    }

    /// `‖S(x)‖` in the Hilbert–Schmidt norm.
    pub fn residual(&self, x: &Operator) -> Result<f64> {
        Ok(hs_norm(&apply(self, x)?))
    }
}

fn hamiltonian_part(h: MatRef<'_, c64>, sign: c64) -> Mat<c64> {
    let n = h.nrows();
    let id = Mat::<c64>::identity(n, n);
    let left = kron_mat(id.as_ref(), h);
    let right = kron_mat(h.transpose(), id.as_ref());
    Mat::from_fn(n * n, n * n, |i, j| sign * (left[(i, j)] - right[(i, j)]))
}

fn dissipator_part(l: MatRef<'_, c64>, adjoint: bool, out: &mut Mat<c64>) {
    let n = l.nrows();
    let id = Mat::<c64>::identity(n, n);
    let ldl = l.adjoint() * l;
    let jump = if adjoint {
        kron_mat(l.transpose(), l.adjoint().to_owned().as_ref())
    } else {
        kron_mat(l.conjugate().to_owned().as_ref(), l)
    };
    let left = kron_mat(id.as_ref(), ldl.as_ref());
    let right = kron_mat(ldl.transpose(), id.as_ref());
    let half = c64::new(0.5, 0.0);
    for j in 0..n * n {
        for i in 0..n * n {
            out[(i, j)] += jump[(i, j)] - half * (left[(i, j)] + right[(i, j)]);
        }
    }
}

fn assemble(sys: &LindbladSystem, adjoint: bool) -> Mat<c64> {
    let sign = if adjoint {
        c64::new(0.0, 1.0)
    } else {
        c64::new(0.0, -1.0)
    };
    let mut g = hamiltonian_part(sys.hamiltonian.mat(), sign);
    // k ascending; the summation order is fixed.
    for l in &sys.couplings {
        dissipator_part(l.mat(), adjoint, &mut g);
    }
    g
}

/// The generator `L` of the master equation.
pub fn build_generator(sys: &LindbladSystem) -> Superoperator {
    Superoperator {
        dim: sys.dim().clone(),
        matrix: assemble(sys, false),
        kind: SuperKind::Generator,
    }
}

/// The Heisenberg-picture generator `L†`, cross-checked against `G†`.
pub fn build_adjoint(sys: &LindbladSystem) -> Result<Superoperator> {
    let a = assemble(sys, true);
    let g = assemble(sys, false);
    let n2 = a.nrows();
    let mut deviation = 0.0f64;
    let mut scale = 1.0f64;
    for j in 0..n2 {
        for i in 0..n2 {
            deviation = deviation.max(cabs(a[(i, j)] - g[(j, i)].conj()));
            scale = scale.max(cabs(a[(i, j)]));
        }
    }
    if deviation > 1e-10 * scale {
        return Err(Error::AdjointMismatch { deviation });
    }
    Ok(Superoperator {
        dim: sys.dim().clone(),
        matrix: a,
        kind: SuperKind::AdjointGenerator,
    })
}

/// `devectorize(S · vec(x))`.
pub fn apply(superop: &Superoperator, x: &Operator) -> Result<Operator> {
    if x.n() != superop.dim.n() {
        return Err(Error::DimensionMismatch {
            expected: superop.dim.n(),
            found: x.n(),
        });
    }
    let v = vectorize(x);
    let out = &superop.matrix * &v;
    devectorize_as(out.as_ref(), x.dim())
}

/// Outcome of a steady-state check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyCheck {
    pub steady: bool,
    /// `‖L(ρ)‖` in the Hilbert–Schmidt norm.
    pub residual: f64,
}

pub fn is_steady_state(sys: &LindbladSystem, rho: &DensityMatrix, tol: f64) -> Result<SteadyCheck> {
    let residual = hs_norm(&sys.rhs(rho.op())?);
    Ok(SteadyCheck {
        steady: residual <= tol,
        residual,
    })
}

/// HS-orthonormal basis of the numerical null space.
///
/// Singular values `<= tol_rank * σ_max` count as zero; a zero matrix has
/// every direction in its kernel.
pub fn kernel_basis(superop: &Superoperator, tol_rank: f64) -> Result<Vec<Operator>> {
    let svd = superop
        .matrix
        .svd()
        .map_err(|_| Error::Decomposition("singular value"))?;
    let s = svd.S().column_vector();
    let v = svd.V();
    let n2 = s.nrows();
    let smax = if n2 > 0 { s[0].re } else { 0.0 };
    let cut = tol_rank * smax;
    (0..n2)
        .filter(|&k| s[k].re <= cut)
        .map(|k| devectorize_as(v.col(k), &superop.dim))
        .collect()
}
