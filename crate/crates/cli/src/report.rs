//! Serializable reports and trajectory CSV.

use std::io::Write;

use serde::Serialize;

use doa_core::spectral::Defect;
use doa_core::{AttractionCertificate, ConservedSet, SpectralData, SteadyStateReport, Trajectory};

use crate::error::Result;
use crate::format::{complex_json, dense_json, ComplexJson, DenseJson};

#[derive(Debug, Serialize)]
pub struct DefectJson {
    pub eigenvalue: ComplexJson,
    pub algebraic: usize,
    pub geometric: usize,
}

impl From<&Defect> for DefectJson {
    fn from(d: &Defect) -> Self {
        Self {
            eigenvalue: complex_json(d.eigenvalue),
            algebraic: d.algebraic,
            geometric: d.geometric,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ObservableJson {
    /// `0` for conserved quantities, `β` for oscillating ones.
    pub frequency: f64,
    pub matrix: DenseJson,
}

#[derive(Debug, Serialize)]
pub struct SpectrumReport {
    pub dim: usize,
    pub eigenvalues: Vec<ComplexJson>,
    #[serde(rename = "J")]
    pub j: usize,
    #[serde(rename = "J0")]
    pub j0: usize,
    pub kernel_dim: usize,
    pub defect_flag: bool,
    pub defects: Vec<DefectJson>,
    /// Smallest decay rate; `null` when nothing decays.
    pub gap: Option<f64>,
    pub biorth_error: f64,
    pub tol_perif: f64,
    /// Hermitian non-decaying observables; `null` when the peripheral block
    /// is defective.
    pub observables: Option<Vec<ObservableJson>>,
}

impl SpectrumReport {
    pub fn new(sd: &SpectralData, kernel_dim: usize, cs: Option<&ConservedSet>) -> Self {
        Self {
            dim: sd.dim().n(),
            eigenvalues: sd.eigenvalues.iter().map(|&z| complex_json(z)).collect(),
            j: sd.j,
            j0: sd.j0,
            kernel_dim,
            defect_flag: sd.defect_flag,
            defects: sd.defects.iter().map(DefectJson::from).collect(),
            gap: sd.gap,
            biorth_error: sd.biorth_error,
            tol_perif: sd.tol_perif,
            observables: cs.map(|cs| {
                cs.hermitian_obs
                    .iter()
                    .zip(&cs.frequencies)
                    .map(|(w, &frequency)| ObservableJson {
                        frequency,
                        matrix: dense_json(w),
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CertificateReport {
    pub verdict: &'static str,
    pub member: bool,
    pub max_delta: f64,
    pub tol_used: f64,
    pub marginal: bool,
    pub steady_residual: f64,
    /// `|tr(ω̃_l (ρ₀ - ρ_ss))|` per observable.
    pub deltas: Vec<f64>,
    /// Frequency of the observable behind each delta.
    pub frequencies: Vec<f64>,
}

impl CertificateReport {
    pub fn new(cert: &AttractionCertificate, cs: &ConservedSet) -> Self {
        Self {
            verdict: if cert.is_member() { "member" } else { "non-member" },
            member: cert.is_member(),
            max_delta: cert.max_delta,
            tol_used: cert.tol_used,
            marginal: cert.marginal,
            steady_residual: cert.steady_residual,
            deltas: cert.deltas.clone(),
            frequencies: cs.frequencies.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SteadyReportJson {
    pub kernel_dim: usize,
    #[serde(rename = "J0")]
    pub j0: usize,
    pub unique: bool,
    /// Non-unique steady states have attraction domains of measure zero.
    pub doa_measure_zero: bool,
    pub representatives: Vec<DenseJson>,
}

impl From<&SteadyStateReport> for SteadyReportJson {
    fn from(r: &SteadyStateReport) -> Self {
        Self {
            kernel_dim: r.kernel_dim,
            j0: r.j0,
            unique: r.unique,
            doa_measure_zero: r.doa_measure_zero(),
            representatives: r.representatives.iter().map(|s| dense_json(s.op())).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
struct CsvRow {
    t: f64,
    distance: Option<f64>,
    trace_error: f64,
    min_eig: f64,
}

/// Columns `t, distance, trace_error, min_eig`; `distance` is empty without
/// a reference state.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in traj.rows() {
        w.serialize(CsvRow {
            t: row.t,
            distance: traj.distances.as_ref().map(|_| row.distance),
            trace_error: row.trace_error,
            min_eig: row.min_eig,
        })?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports hold finite numbers or null")
}
