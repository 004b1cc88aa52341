//! Time propagation `ρ(t) = e^{Lt} ρ₀` by dense matrix exponential.

use alloc::vec::Vec;

use faer::{c64, Col, Mat};

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::fmath::{abs, cabs, sqrt};
use crate::liouvillian::{SuperKind, Superoperator};
use crate::operator::{devectorize_as, hs_norm, min_eigenvalue, validate_density, vectorize, DensityMatrix};
use crate::tolerance::ToleranceSet;

/// Sampled trajectory of density matrices.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// `‖ρ(t) - ρ_ref‖` once a reference has been attached.
    pub distances: Option<Vec<f64>>,
}

/// One diagnostic row per sample: the data behind distance-versus-time plots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub distance: f64,
    pub trace_error: f64,
    pub min_eig: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn with_reference(mut self, reference: &DensityMatrix) -> Result<Self> {
        self.distances = Some(distance_curve(&self, reference)?);
        Ok(self)
    }

    /// Rows `t, distance, trace_error, min_eig`; distance is `NaN` when no
    /// reference is attached.
    pub fn rows(&self) -> Vec<TrajectoryRow> {
        self.times
            .iter()
            .zip(&self.states)
            .enumerate()
            .map(|(k, (&t, rho))| TrajectoryRow {
                t,
                distance: self.distances.as_ref().map_or(f64::NAN, |d| d[k]),
                trace_error: cabs(rho.op().trace() - c64::new(1.0, 0.0)),
                min_eig: min_eigenvalue(rho.op()),
            })
            .collect()
    }
}

fn scaled(g: &Superoperator, t: f64) -> Mat<c64> {
    let m = g.matrix();
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * t)
}

fn is_uniform(times: &[f64]) -> Option<f64> {
    if times.len() < 3 {
        return None;
    }
    let dt = times[1] - times[0];
    let uniform = times
        .iter()
        .enumerate()
        .all(|(k, &t)| abs(t - (times[0] + k as f64 * dt)) <= 1e-12 * t.max(1.0));
    uniform.then_some(dt)
}

fn to_state(v: &Col<c64>, rho0: &DensityMatrix, tol: &ToleranceSet) -> Result<DensityMatrix> {
    let op = devectorize_as(v.as_ref(), rho0.op().dim())?;
    Ok(validate_density(op, tol)?)
}

/// `e^{Gt} ρ₀` at each of the (sorted, nonnegative) `times`.
///
/// Uniform grids reuse a single step propagator. Every state is validated
/// with the trajectory tolerances (`psd` relaxed to at least `1e-7`).
pub fn propagate(g: &Superoperator, rho0: &DensityMatrix, times: &[f64], tol: &ToleranceSet) -> Result<Trajectory> {
    if g.kind() != SuperKind::Generator {
        return Err(Error::WrongKind);
    }
    if rho0.n() != g.dim().n() {
        return Err(Error::DimensionMismatch {
            expected: g.dim().n(),
            found: rho0.n(),
        });
    }
    let sorted = times.windows(2).all(|w| w[0] <= w[1]);
    if !sorted || times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidTimes);
    }
    let tol = tol.relaxed_for_trajectories();
    let v0 = vectorize(rho0.op());
    let mut states = Vec::with_capacity(times.len());

    if let Some(dt) = is_uniform(times) {
        let step = expm(scaled(g, dt).as_ref())?;
        let mut v = if times[0] == 0.0 {
            v0
        } else {
            expm(scaled(g, times[0]).as_ref())? * &v0
        };
        states.push(if times[0] == 0.0 { rho0.clone() } else { to_state(&v, rho0, &tol)? });
        for _ in 1..times.len() {
            v = &step * &v;
            states.push(to_state(&v, rho0, &tol)?);
        }
    } else {
        for &t in times {
            if t == 0.0 {
                states.push(rho0.clone());
                continue;
            }
            let v = expm(scaled(g, t).as_ref())? * &v0;
            states.push(to_state(&v, rho0, &tol)?);
        }
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        distances: None,
    })
}

/// HS distances `‖ρ(t_i) - reference‖`.
pub fn distance_curve(traj: &Trajectory, reference: &DensityMatrix) -> Result<Vec<f64>> {
    traj.states
        .iter()
        .map(|s| s.op().try_sub(reference.op()).map(|d| hs_norm(&d)))
        .collect()
}

#[derive(Debug, Clone)]
pub enum LimitOutcome {
    Limit(DensityMatrix),
    NoLimit,
}

impl LimitOutcome {
    pub fn limit(&self) -> Option<&DensityMatrix> {
        match self {
            Self::Limit(rho) => Some(rho),
            Self::NoLimit => None,
        }
    }
}

const MAX_DOUBLINGS: usize = 64;

/// Propagate to `t = 40 / gap`, then keep doubling `t` until two successive
/// probes agree to `tol` twice in a row. Three doublings without a new
/// (halved) minimum of the successive-probe distance mean there is no limit.
pub fn converged_limit(g: &Superoperator, rho0: &DensityMatrix, gap: f64, tol: f64) -> Result<LimitOutcome> {
    if !(gap.is_finite() && gap > 0.0) {
        return Err(Error::InvalidGap(gap));
    }
    if g.kind() != SuperKind::Generator {
        return Err(Error::WrongKind);
    }
    let tols = ToleranceSet::default().relaxed_for_trajectories();
    let v0 = vectorize(rho0.op());
    let mut prop = expm(scaled(g, 40.0 / gap).as_ref())?;
    let mut prev = &prop * &v0;
    let mut best = f64::INFINITY;
    let mut stale = 0usize;
    let mut hits = 0usize;
    for _ in 0..MAX_DOUBLINGS {
        prop = &prop * &prop;
        let next = &prop * &v0;
        let d = sqrt(
            (0..next.nrows())
                .map(|i| (next[i] - prev[i]).norm_sqr())
                .sum::<f64>(),
        );
        if !d.is_finite() {
            return Err(Error::ExpOverflow);
        }
        prev = next;
        if d < tol {
            hits += 1;
            if hits >= 2 {
                return Ok(LimitOutcome::Limit(to_state(&prev, rho0, &tols)?));
            }
            continue;
        }
        hits = 0;
        if d < 0.5 * best {
            best = d;
            stale = 0;
        } else {
            stale += 1;
            if stale >= 3 {
                return Ok(LimitOutcome::NoLimit);
            }
        }
    }
    Ok(LimitOutcome::NoLimit)
}
