//! Subcommand implementations. Each returns the text to print and the exit
//! code; file outputs are written as a side effect.

use std::path::{Path, PathBuf};

use doa_core::models::{reference_states_with, s2_initial_states, s2_uniform_mixture, XxzSpec};
use doa_core::{
    build_generator, full_spectrum, is_steady_state, kernel_basis, membership, peripheral_observables,
    propagate, steady_report, DensityMatrix, HilbertDim, LindbladSystem, SpectralData, ToleranceSet,
};

use crate::error::{exit, CliError, Result};
use crate::format::{self, ModelFile};
use crate::report::{to_json, write_trajectory_csv, CertificateReport, SpectrumReport, SteadyReportJson};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: exit::SUCCESS,
            stdout,
        }
    }
}

fn emit(text: String, json_out: Option<&Path>) -> Result<String> {
    match json_out {
        Some(path) => {
            format::write(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn analyse(sys: &LindbladSystem, tol: &ToleranceSet) -> Result<SpectralData> {
    Ok(full_spectrum(&build_generator(sys), tol)?)
}

pub fn spectrum(model: &Path, json_out: Option<&Path>, tol: &ToleranceSet) -> Result<Outcome> {
    let sys = format::load_system(model, tol)?;
    let g = build_generator(&sys);
    let sd = full_spectrum(&g, tol)?;
    let kernel_dim = kernel_basis(&g, tol.rank)?.len();
    if sd.defect_flag {
        let report = SpectrumReport::new(&sd, kernel_dim, None);
        let text = emit(to_json(&report), json_out)?;
        let d = &sd.defects[0];
        eprintln!(
            "warning: peripheral eigenvalue {} has algebraic multiplicity {} but only {} eigenvectors; no conserved set emitted",
            d.eigenvalue, d.algebraic, d.geometric
        );
        return Ok(Outcome {
            code: exit::DEFECTIVE,
            stdout: text,
        });
    }
    let cs = peripheral_observables(&sd)?;
    let report = SpectrumReport::new(&sd, kernel_dim, Some(&cs));
    Ok(Outcome::ok(emit(to_json(&report), json_out)?))
}

pub struct MembershipArgs<'a> {
    pub model: &'a Path,
    pub steady: &'a Path,
    pub initial: &'a Path,
    pub json_out: Option<&'a Path>,
}

pub fn membership_cmd(args: &MembershipArgs<'_>, tol: &ToleranceSet) -> Result<Outcome> {
    let sys = format::load_system(args.model, tol)?;
    let rho_ss = format::load_state(args.steady, sys.dim(), tol)?;
    let rho0 = format::load_state(args.initial, sys.dim(), tol)?;
    let check = is_steady_state(&sys, &rho_ss, tol.steady)?;
    if !check.steady {
        return Err(CliError::NotSteady {
            residual: check.residual,
            tol: tol.steady,
        });
    }
    let sd = analyse(&sys, tol)?;
    let cs = peripheral_observables(&sd)?;
    let cert = membership(&sys, &sd, &cs, &rho_ss, &rho0, tol)?;
    let text = emit(to_json(&CertificateReport::new(&cert, &cs)), args.json_out)?;
    Ok(Outcome {
        code: if cert.is_member() {
            exit::SUCCESS
        } else {
            exit::NON_MEMBER
        },
        stdout: text,
    })
}

pub struct EvolveArgs<'a> {
    pub model: &'a Path,
    pub initial: &'a Path,
    pub reference: Option<&'a Path>,
    pub tmax: f64,
    pub steps: usize,
    pub csv_out: Option<&'a Path>,
}

/// `steps` equally spaced samples on `[0, tmax]`.
pub fn time_grid(tmax: f64, steps: usize) -> Result<Vec<f64>> {
    if !(tmax.is_finite() && tmax > 0.0) {
        return Err(CliError::Usage(format!("--tmax must be positive, got {tmax}")));
    }
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
    }
    let dt = tmax / (steps - 1) as f64;
    Ok((0..steps).map(|k| k as f64 * dt).collect())
}

pub fn evolve(args: &EvolveArgs<'_>, tol: &ToleranceSet) -> Result<Outcome> {
    let times = time_grid(args.tmax, args.steps)?;
    let sys = format::load_system(args.model, tol)?;
    let rho0 = format::load_state(args.initial, sys.dim(), tol)?;
    let reference = args
        .reference
        .map(|p| format::load_state(p, sys.dim(), tol))
        .transpose()?;
    let mut traj = propagate(&build_generator(&sys), &rho0, &times, tol)?;
    if let Some(r) = &reference {
        traj = traj.with_reference(r)?;
    }
    let mut buf = Vec::new();
    write_trajectory_csv(&traj, &mut buf)?;
    let text = String::from_utf8(buf).expect("csv output is utf-8");
    Ok(Outcome::ok(match args.csv_out {
        Some(path) => {
            format::write(path, &text)?;
            String::new()
        }
        None => text,
    }))
}

pub fn report(model: &Path, json_out: Option<&Path>, tol: &ToleranceSet) -> Result<Outcome> {
    let sys = format::load_system(model, tol)?;
    let g = build_generator(&sys);
    let sd = full_spectrum(&g, tol)?;
    let r = steady_report(&sys, &g, &sd, tol)?;
    Ok(Outcome::ok(emit(to_json(&SteadyReportJson::from(&r)), json_out)?))
}

/// Re-emit any model file in dense form.
pub fn export(model: &Path, out: Option<&Path>, tol: &ToleranceSet) -> Result<Outcome> {
    let sys = format::load_system(model, tol)?;
    let text = serde_json::to_string(&ModelFile::dense(&sys)).expect("finite model");
    Ok(Outcome::ok(emit(text, out)?))
}

/// Named states of the four-site chain.
pub const PRESET_STATES: [&str; 7] = ["dark", "conducting", "s2-uniform", "rho01", "rho02", "rho03", "mixed"];

pub fn preset_state(name: &str, out: Option<&Path>, tol: &ToleranceSet) -> Result<Outcome> {
    let chain = HilbertDim::qubits(4)?;
    let rho: DensityMatrix = match name {
        "dark" | "conducting" => {
            let sys = doa_core::models::build_xxz(&XxzSpec::default())?;
            let refs = reference_states_with(&analyse(&sys, tol)?, tol)?;
            if name == "dark" {
                refs.insulating
            } else {
                refs.conducting
            }
        }
        "s2-uniform" => s2_uniform_mixture(),
        "rho01" | "rho02" | "rho03" => {
            let k = name[4..].parse::<usize>().expect("literal") - 1;
            s2_initial_states()[k].clone()
        }
        "mixed" => DensityMatrix::maximally_mixed(chain),
        other => {
            return Err(CliError::Usage(format!(
                "unknown state \"{other}\"; expected one of {}",
                PRESET_STATES.join(", ")
            )))
        }
    };
    Ok(Outcome::ok(emit(format::state_json(rho.op()), out)?))
}

/// Convenience for callers holding `PathBuf`s.
pub fn opt(p: &Option<PathBuf>) -> Option<&Path> {
    p.as_deref()
}
