//! Attraction-domain analysis for steady states of finite-dimensional
//! Lindblad master equations.
//!
//! The crate builds the Lindblad generator `L` and its Heisenberg-picture
//! adjoint `L†` as dense superoperator matrices, extracts the peripheral
//! (zero-real-part) spectrum, and decides whether an initial density matrix
//! flows to a chosen steady state by comparing the expectation values of the
//! non-decaying observables. Time propagation by dense matrix exponential
//! provides an independent check of every verdict.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and
//! the command-line front end live in the `doa` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod attraction;
pub mod error;
pub mod evolution;
pub mod expm;
pub mod liouvillian;
pub mod models;
pub mod operator;
pub mod random;
pub mod spectral;
pub mod tolerance;

mod fmath;

pub use faer::c64;

pub use attraction::{
    affine_doa, asymptotic_state, membership, steady_report, time_averaged_state,
    AffineDoA, AsymptoticOutcome, AttractionCertificate, SteadyStateReport, Verdict,
};
pub use error::{DensityViolation, Error, Result};
pub use evolution::{converged_limit, distance_curve, propagate, LimitOutcome, Trajectory};
pub use liouvillian::{
    apply, build_adjoint, build_generator, is_steady_state, kernel_basis, LindbladSystem,
    SteadyCheck, SuperKind, Superoperator,
};
pub use operator::{
    embed_site, hs_inner, hs_norm, kron, validate_density, vectorize, devectorize, DensityMatrix,
    HilbertDim, Operator,
};
pub use spectral::{
    full_spectrum, identification_vector, peripheral_observables, ConservedSet, OscillatingPair,
    PeripheralMode, SpectralData,
};
pub use tolerance::ToleranceSet;
