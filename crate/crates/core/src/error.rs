use faer::c64;
use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Why an operator was rejected as a density matrix.
///
/// Each variant carries the size of the violation alongside the tolerance it
/// was compared against. Validation never repairs its input.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DensityViolation {
    #[error("not Hermitian: max |A - A†| = {deviation:.3e} exceeds {tol:.1e}")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("trace {trace} differs from 1 by {deviation:.3e} (tolerance {tol:.1e})")]
    Trace { trace: c64, deviation: f64, tol: f64 },
    #[error("not positive semidefinite: minimum eigenvalue {min_eigenvalue:.3e} (violation {violation:.3e}, tolerance {tol:.1e})")]
    NotPositive {
        min_eigenvalue: f64,
        violation: f64,
        tol: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("vector length {0} is not a perfect square")]
    NotSquareLength(usize),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("invalid Hilbert dimension: {0}")]
    InvalidDimension(&'static str),
    #[error("site {site} out of range for a chain of {sites} factors")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("Hamiltonian is not Hermitian (max deviation {deviation:.3e})")]
    HamiltonianNotHermitian { deviation: f64 },
    #[error("invalid density matrix: {0}")]
    Density(#[from] DensityViolation),
    #[error("adjoint generator disagrees with conjugate transpose of generator by {deviation:.3e}")]
    AdjointMismatch { deviation: f64 },
    #[error("superoperator has the wrong kind for this operation")]
    WrongKind,
    #[error("{0} decomposition failed to converge")]
    Decomposition(&'static str),
    #[error("eigenvalue with positive real part {max_real:.3e} beyond tolerance")]
    UnstableSpectrum { max_real: f64 },
    #[error("peripheral eigenvalue {eigenvalue} is defective (algebraic {algebraic}, geometric {geometric})")]
    DefectivePeripheral {
        eigenvalue: c64,
        algebraic: usize,
        geometric: usize,
    },
    #[error("peripheral left/right bases are not bi-orthogonal (error {error:.3e})")]
    Biorthogonality { error: f64 },
    #[error("conserved observables are rank deficient: expected {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("state is not steady: ‖L(ρ)‖ = {residual:.3e} exceeds {tol:.1e}")]
    NotSteady { residual: f64, tol: f64 },
    #[error("asymptotic limit is not a valid density matrix: {0}")]
    LimitNotDensity(DensityViolation),
    #[error("time grid must be sorted, finite and nonnegative")]
    InvalidTimes,
    #[error("matrix exponential overflowed")]
    ExpOverflow,
    #[error("decay gap must be positive and finite, got {0}")]
    InvalidGap(f64),
    #[error("invalid Pauli string: {0}")]
    InvalidPauli(&'static str),
    #[error("index {index} out of range (valid {lo}..={hi})")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("tolerance `{name}` must be positive and finite, got {value}")]
    InvalidTolerance { name: &'static str, value: f64 },
    #[error("reference state check failed: {0}")]
    ReferenceMismatch(&'static str),
}
