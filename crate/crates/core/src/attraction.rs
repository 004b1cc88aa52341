//! Attraction-domain membership, its affine description, asymptotic limits,
//! and steady-state sampling.
//!
//! A density matrix `ρ₀` flows to the steady state `ρ_ss` exactly when every
//! non-decaying observable has the same expectation value in both states.
//! Equivalently, `ρ₀ - ρ_ss` lies in the span of the decaying modes, so the
//! attraction domain is the intersection of the state space with the affine
//! space `ρ_ss + span{decaying σ_k}`.

use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::fmath::cabs;
use crate::liouvillian::{is_steady_state, kernel_basis, LindbladSystem, Superoperator};
use crate::operator::{hs_inner, hs_norm, validate_density, DensityMatrix, Operator};
use crate::spectral::{identification_vector, ConservedSet, SpectralData};
use crate::tolerance::ToleranceSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Member,
    NonMember,
}

/// Result of the membership test, with every per-observable margin.
#[derive(Debug, Clone)]
pub struct AttractionCertificate {
    pub steady_state: DensityMatrix,
    pub candidate: DensityMatrix,
    /// `|tr(ω̃_l (ρ₀ - ρ_ss))|` for each observable.
    pub deltas: Vec<f64>,
    pub verdict: Verdict,
    pub tol_used: f64,
    pub max_delta: f64,
    /// `max_delta` lies within a decade of the tolerance on either side.
    pub marginal: bool,
    pub steady_residual: f64,
}

impl AttractionCertificate {
    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }
}

fn require_steady(sys: &LindbladSystem, rho_ss: &DensityMatrix, tol: &ToleranceSet) -> Result<f64> {
    let check = is_steady_state(sys, rho_ss, tol.steady)?;
    if !check.steady {
        return Err(Error::NotSteady {
            residual: check.residual,
            tol: tol.steady,
        });
    }
    Ok(check.residual)
}

fn check_dims(sd: &SpectralData, states: &[&DensityMatrix]) -> Result<()> {
    let n = sd.dim().n();
    for s in states {
        if s.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.n(),
            });
        }
    }
    Ok(())
}

/// Decide whether `rho0` lies in the attraction domain of `rho_ss`.
pub fn membership(
    sys: &LindbladSystem,
    sd: &SpectralData,
    cs: &ConservedSet,
    rho_ss: &DensityMatrix,
    rho0: &DensityMatrix,
    tol: &ToleranceSet,
) -> Result<AttractionCertificate> {
    sd.require_regular()?;
    check_dims(sd, &[rho_ss, rho0])?;
    let steady_residual = require_steady(sys, rho_ss, tol)?;

    let id_ss = identification_vector(cs, rho_ss)?;
    let id_0 = identification_vector(cs, rho0)?;
    let deltas: Vec<f64> = id_0.iter().zip(&id_ss).map(|(a, b)| (a - b).abs()).collect();
    let max_delta = deltas.iter().copied().fold(0.0, f64::max);
    let tol_used = tol.member;
    let verdict = if max_delta <= tol_used {
        Verdict::Member
    } else {
        Verdict::NonMember
    };
    Ok(AttractionCertificate {
        steady_state: rho_ss.clone(),
        candidate: rho0.clone(),
        deltas,
        verdict,
        tol_used,
        max_delta,
        marginal: max_delta >= tol_used / 10.0 && max_delta <= tol_used * 10.0,
        steady_residual,
    })
}

/// The affine space `ρ_ss + span{decaying modes}` whose intersection with
/// the state space is the attraction domain of `ρ_ss`.
#[derive(Debug, Clone)]
pub struct AffineDoA {
    pub base: DensityMatrix,
    /// Hermitian observables fixed on the affine space.
    pub constraints: Vec<Operator>,
    /// `tr(ω̃ ρ_ss)` for each constraint.
    pub targets: Vec<f64>,
    /// `N² - J`: dimension of the free directions.
    pub decaying_span_dim: usize,
    /// Bi-orthogonal peripheral pairs `(ω, σ)`.
    peripheral: Vec<(Operator, Operator)>,
}

impl AffineDoA {
    /// `|tr(ω̃_l ρ) - target_l|` for every constraint.
    pub fn constraint_residuals(&self, rho: &Operator) -> Result<Vec<f64>> {
        self.constraints
            .iter()
            .zip(&self.targets)
            .map(|(w, t)| hs_inner(w, rho).map(|z| (z.re - t).abs()))
            .collect()
    }

    /// Component of `x - ρ_ss` along the peripheral modes,
    /// `Σ_l tr(ω_l†(x - ρ_ss)) σ_l`.
    pub fn peripheral_offset(&self, x: &Operator) -> Result<Operator> {
        let diff = x.try_sub(self.base.op())?;
        let mut acc = Operator::zeros(self.base.op().dim().clone());
        for (w, s) in &self.peripheral {
            let c = hs_inner(w, &diff)?;
            acc = acc + &s.scale(c);
        }
        Ok(acc)
    }

    /// Whether `x` lies on the affine space, judged by the size of its
    /// peripheral offset.
    pub fn contains(&self, x: &Operator, tol: f64) -> Result<bool> {
        Ok(hs_norm(&self.peripheral_offset(x)?) <= tol)
    }

    /// Oblique projection of `x` onto the affine space along the peripheral
    /// modes.
    pub fn project(&self, x: &Operator) -> Result<Operator> {
        Ok(x.try_sub(&self.peripheral_offset(x)?)?)
    }
}

pub fn affine_doa(
    sd: &SpectralData,
    cs: &ConservedSet,
    rho_ss: &DensityMatrix,
    tol: &ToleranceSet,
) -> Result<AffineDoA> {
    sd.require_regular()?;
    check_dims(sd, &[rho_ss])?;
    let residual = sd.generator().residual(rho_ss.op())?;
    if residual > tol.steady {
        return Err(Error::NotSteady {
            residual,
            tol: tol.steady,
        });
    }
    let targets = identification_vector(cs, rho_ss)?;
    let n = sd.dim().n();
    Ok(AffineDoA {
        base: rho_ss.clone(),
        constraints: cs.hermitian_obs.clone(),
        targets,
        decaying_span_dim: n * n - sd.j,
        peripheral: sd
            .modes
            .iter()
            .map(|m| (m.left.clone(), m.right.clone()))
            .collect(),
    })
}

/// Long-time behaviour of `e^{Lt} ρ₀`.
#[derive(Debug, Clone)]
pub enum AsymptoticOutcome {
    Limit(DensityMatrix),
    /// No limit: active oscillation frequencies `β` with the magnitude of
    /// their coefficients `|tr(ω†ρ₀)|`.
    Oscillatory(Vec<(f64, f64)>),
}

impl AsymptoticOutcome {
    pub fn limit(&self) -> Option<&DensityMatrix> {
        match self {
            Self::Limit(rho) => Some(rho),
            Self::Oscillatory(_) => None,
        }
    }
}

fn stationary_projection(sd: &SpectralData, rho0: &Operator) -> Result<Operator> {
    let mut acc = Operator::zeros(rho0.dim().clone());
    for m in sd.zero_modes() {
        let c = hs_inner(&m.left, rho0)?;
        acc = acc + &m.right.scale(c);
    }
    Ok(acc)
}

fn validate_limit(sd: &SpectralData, op: Operator, tol: &ToleranceSet) -> Result<DensityMatrix> {
    let rho = validate_density(op, tol).map_err(Error::LimitNotDensity)?;
    let residual = sd.generator().residual(rho.op())?;
    if residual > tol.steady {
        return Err(Error::NotSteady {
            residual,
            tol: tol.steady,
        });
    }
    Ok(rho)
}

/// Time average of the trajectory from `rho0`: its projection onto the
/// stationary modes. Always a steady state.
pub fn time_averaged_state(sd: &SpectralData, rho0: &DensityMatrix, tol: &ToleranceSet) -> Result<DensityMatrix> {
    sd.require_regular()?;
    check_dims(sd, &[rho0])?;
    validate_limit(sd, stationary_projection(sd, rho0.op())?, tol)
}

/// `lim_{t→∞} e^{Lt} ρ₀` when it exists.
///
/// Oscillating coefficients with magnitude above `tol.member` rule out a
/// limit.
pub fn asymptotic_state(sd: &SpectralData, rho0: &DensityMatrix, tol: &ToleranceSet) -> Result<AsymptoticOutcome> {
    sd.require_regular()?;
    check_dims(sd, &[rho0])?;
    let mut active: Vec<(f64, f64)> = Vec::new();
    for m in sd.oscillating_modes() {
        let mag = cabs(hs_inner(&m.left, rho0.op())?);
        if mag > tol.member {
            active.push((m.eigenvalue.im, mag));
        }
    }
    if !active.is_empty() {
        return Ok(AsymptoticOutcome::Oscillatory(active));
    }
    let limit = validate_limit(sd, stationary_projection(sd, rho0.op())?, tol)?;
    Ok(AsymptoticOutcome::Limit(limit))
}

/// Summary of the steady states of a system.
#[derive(Debug, Clone)]
pub struct SteadyStateReport {
    /// Dimension of the numerical kernel of the generator.
    pub kernel_dim: usize,
    pub j0: usize,
    /// Distinct dynamical limits reached from `I/N` and the basis states.
    pub representatives: Vec<DensityMatrix>,
    pub unique: bool,
}

impl SteadyStateReport {
    /// Non-unique steady states have attraction domains of measure zero
    /// under translation-invariant, locally finite measures on the
    /// trace-one Hermitian operators.
    pub fn doa_measure_zero(&self) -> bool {
        !self.unique
    }
}

/// Distance below which two representatives are considered the same.
pub const DEDUP_DISTANCE: f64 = 1e-8;

pub fn steady_report(
    sys: &LindbladSystem,
    g: &Superoperator,
    sd: &SpectralData,
    tol: &ToleranceSet,
) -> Result<SteadyStateReport> {
    sd.require_regular()?;
    let kernel_dim = kernel_basis(g, tol.rank)?.len();
    let dim = sys.dim().clone();

    let mixed = DensityMatrix::maximally_mixed(dim.clone());
    let first = match asymptotic_state(sd, &mixed, tol)? {
        AsymptoticOutcome::Limit(rho) => rho,
        AsymptoticOutcome::Oscillatory(_) => time_averaged_state(sd, &mixed, tol)?,
    };
    let mut representatives = alloc::vec![first];
    for i in 0..dim.n() {
        let basis = DensityMatrix::basis_state(dim.clone(), i)?;
        if let AsymptoticOutcome::Limit(rho) = asymptotic_state(sd, &basis, tol)? {
            let seen = representatives
                .iter()
                .any(|r| hs_norm(&(r.op() - rho.op())) <= DEDUP_DISTANCE);
            if !seen {
                representatives.push(rho);
            }
        }
    }
    Ok(SteadyStateReport {
        kernel_dim,
        j0: sd.j0,
        representatives,
        unique: sd.j0 == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use faer::c64;
    use crate::liouvillian::build_generator;
    use crate::operator::HilbertDim;
    use crate::spectral::{full_spectrum, peripheral_observables};
    use alloc::vec;

    fn c(re: f64, im: f64) -> c64 {
        c64::new(re, im)
    }

    fn qubit() -> HilbertDim {
        HilbertDim::new(2).unwrap()
    }

    fn dephasing() -> LindbladSystem {
        let sz = Operator::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        LindbladSystem::new(Operator::zeros(qubit()), vec![sz], 1e-12).unwrap()
    }

    fn plus_state() -> DensityMatrix {
        DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn dephasing_membership_and_limit() {
        let tol = ToleranceSet::default();
        let sys = dephasing();
        let g = build_generator(&sys);
        let sd = full_spectrum(&g, &tol).unwrap();
        let cs = peripheral_observables(&sd).unwrap();
        let mixed = DensityMatrix::maximally_mixed(qubit());

        let cert = membership(&sys, &sd, &cs, &mixed, &plus_state(), &tol).unwrap();
        assert!(cert.is_member(), "{:?}", cert.deltas);
        assert!(!cert.marginal);

        let own = membership(&sys, &sd, &cs, &mixed, &mixed, &tol).unwrap();
        assert!(own.is_member());
        assert!(own.max_delta < 1e-15);

        match asymptotic_state(&sd, &plus_state(), &tol).unwrap() {
            AsymptoticOutcome::Limit(rho) => {
                assert!((rho.op() - mixed.op()).max_abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }

        let excited = DensityMatrix::basis_state(qubit(), 0).unwrap();
        let cert = membership(&sys, &sd, &cs, &mixed, &excited, &tol).unwrap();
        assert!(!cert.is_member());
    }

    #[test]
    fn non_steady_target_is_rejected() {
        let tol = ToleranceSet::default();
        let sm = Operator::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let sys = LindbladSystem::new(Operator::zeros(qubit()), vec![sm], 1e-12).unwrap();
        let sd = full_spectrum(&build_generator(&sys), &tol).unwrap();
        let cs = peripheral_observables(&sd).unwrap();
        let mixed = DensityMatrix::maximally_mixed(qubit());
        assert!(matches!(
            membership(&sys, &sd, &cs, &mixed, &mixed, &tol),
            Err(Error::NotSteady { .. })
        ));
    }

    #[test]
    fn precession_has_no_limit() {
        let tol = ToleranceSet::default();
        let sz = Operator::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let sys = LindbladSystem::new(sz, vec![], 1e-12).unwrap();
        let sd = full_spectrum(&build_generator(&sys), &tol).unwrap();
        match asymptotic_state(&sd, &plus_state(), &tol).unwrap() {
            AsymptoticOutcome::Oscillatory(freqs) => {
                let mut betas: Vec<f64> = freqs.iter().map(|f| f.0).collect();
                betas.sort_by(f64::total_cmp);
                assert_eq!(betas.len(), 2);
                assert!((betas[0] + 2.0).abs() < 1e-9 && (betas[1] - 2.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
        // The time average is the dephased state.
        let avg = time_averaged_state(&sd, &plus_state(), &tol).unwrap();
        let mixed = DensityMatrix::maximally_mixed(qubit());
        assert!((avg.op() - mixed.op()).max_abs() < 1e-12);
    }

    #[test]
    fn reports() {
        let tol = ToleranceSet::default();
        let sys = dephasing();
        let g = build_generator(&sys);
        let sd = full_spectrum(&g, &tol).unwrap();
        let rep = steady_report(&sys, &g, &sd, &tol).unwrap();
        assert_eq!(rep.kernel_dim, 2);
        assert!(!rep.unique);
        assert!(rep.doa_measure_zero());
        // I/2, |1⟩⟨1|, |0⟩⟨0|
        assert_eq!(rep.representatives.len(), 3);

        let sm = Operator::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let damp = LindbladSystem::new(Operator::zeros(qubit()), vec![sm], 1e-12).unwrap();
        let g = build_generator(&damp);
        let sd = full_spectrum(&g, &tol).unwrap();
        let rep = steady_report(&damp, &g, &sd, &tol).unwrap();
        assert!(rep.unique);
        assert_eq!(rep.kernel_dim, 1);
        assert_eq!(rep.representatives.len(), 1);
        // L = |1⟩⟨0| drives everything into |1⟩⟨1| (index 0).
        assert!(crate::fmath::cabs(rep.representatives[0].op().get(0, 0) - c(1.0, 0.0)) < 1e-10);
    }
}
