//! JSON model and state files.
//!
//! Complex numbers are `[re, im]` pairs. Operators are either dense
//! row-major matrices `[[[re, im], ...], ...]` or lists of Pauli terms
//! `{"coeff": [re, im], "string": "Z+-I"}`. Floats are written in their
//! shortest round-trip form, so emitted files re-parse bit-identically.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use doa_core::models::{build_xxz, PauliTerm, XxzSpec};
use doa_core::{c64, DensityMatrix, HilbertDim, LindbladSystem, Operator, ToleranceSet};

use crate::error::{CliError, Result};

pub type ComplexJson = [f64; 2];
pub type DenseJson = Vec<Vec<ComplexJson>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliTermJson {
    pub coeff: ComplexJson,
    pub string: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorJson {
    Dense(DenseJson),
    Pauli(Vec<PauliTermJson>),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sites: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<OperatorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lindblad_ops: Option<Vec<OperatorJson>>,
    /// Named model; `"xxz"` is the only preset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Alias of `preset`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_sites: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_minus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_plus: Option<f64>,
}

pub fn complex_json(z: c64) -> ComplexJson {
    [z.re, z.im]
}

pub fn dense_json(op: &Operator) -> DenseJson {
    (0..op.n())
        .map(|i| (0..op.n()).map(|j| complex_json(op.get(i, j))).collect())
        .collect()
}

fn dense_operator(rows: &DenseJson, dim: &HilbertDim, what: &str) -> Result<Operator> {
    let n = dim.n();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Format(format!("{what}: expected a {n}x{n} matrix")));
    }
    Ok(Operator::from_fn(dim.clone(), |i, j| {
        let [re, im] = rows[i][j];
        c64::new(re, im)
    })?)
}

fn pauli_operator(terms: &[PauliTermJson], sites: Option<usize>, what: &str) -> Result<Operator> {
    let sites = sites.ok_or_else(|| CliError::Format(format!("{what}: Pauli form needs \"sites\"")))?;
    let parsed = terms
        .iter()
        .map(|t| {
            let term = PauliTerm::parse(c64::new(t.coeff[0], t.coeff[1]), &t.string)?;
            if term.sites() != sites {
                return Err(CliError::Format(format!(
                    "{what}: Pauli string \"{}\" has length {}, expected {sites}",
                    t.string,
                    term.sites()
                )));
            }
            Ok(term)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(doa_core::models::pauli_sum(&parsed)?)
}

fn operator(spec: &OperatorJson, dim: &HilbertDim, sites: Option<usize>, what: &str) -> Result<Operator> {
    match spec {
        OperatorJson::Dense(rows) if rows.is_empty() => {
            Err(CliError::Format(format!("{what}: empty operator")))
        }
        OperatorJson::Dense(rows) => dense_operator(rows, dim, what),
        OperatorJson::Pauli(terms) => pauli_operator(terms, sites, what),
    }
}

impl ModelFile {
    fn preset_name(&self) -> Result<Option<&str>> {
        match (&self.preset, &self.model) {
            (Some(a), Some(b)) if a != b => Err(CliError::Format("\"preset\" and \"model\" disagree".into())),
            (Some(a), _) | (None, Some(a)) => Ok(Some(a.as_str())),
            (None, None) => Ok(None),
        }
    }

    fn dimension(&self) -> Result<(HilbertDim, Option<usize>)> {
        match (self.dim, self.sites) {
            (_, Some(s)) => {
                if s == 0 || s >= usize::BITS as usize / 2 {
                    return Err(CliError::Format(format!("\"sites\" out of range: {s}")));
                }
                if let Some(d) = self.dim {
                    if d != 1 << s {
                        return Err(CliError::Format(format!("\"dim\" {d} does not match {s} sites")));
                    }
                }
                Ok((HilbertDim::qubits(s)?, Some(s)))
            }
            (Some(d), None) => Ok((HilbertDim::new(d)?, None)),
            (None, None) => Err(CliError::Format("model needs \"dim\" or \"sites\"".into())),
        }
    }

    /// Build and validate the system described by this file.
    pub fn to_system(&self, tol: &ToleranceSet) -> Result<LindbladSystem> {
        if let Some(name) = self.preset_name()? {
            if name != "xxz" {
                return Err(CliError::Format(format!("unknown preset \"{name}\"")));
            }
            if self.hamiltonian.is_some() || self.lindblad_ops.is_some() || self.dim.is_some() {
                return Err(CliError::Format("a preset takes no operators or \"dim\"".into()));
            }
            let mut spec = XxzSpec::new(self.n_sites.or(self.sites).unwrap_or(4));
            if let Some(g) = self.g_minus {
                spec.g_minus = g;
            }
            if let Some(g) = self.g_plus {
                spec.g_plus = g;
            }
            return Ok(build_xxz(&spec)?);
        }
        if self.n_sites.is_some() || self.g_minus.is_some() || self.g_plus.is_some() {
            return Err(CliError::Format("preset parameters given without a preset".into()));
        }
        let (dim, sites) = self.dimension()?;
        let h = match &self.hamiltonian {
            Some(spec) => operator(spec, &dim, sites, "hamiltonian")?,
            None => Operator::zeros(dim.clone()),
        };
        let ls = self
            .lindblad_ops
            .iter()
            .flatten()
            .enumerate()
            .map(|(k, spec)| operator(spec, &dim, sites, &format!("lindblad_ops[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(LindbladSystem::new(h, ls, tol.herm)?)
    }

    /// Dense description of `sys`.
    pub fn dense(sys: &LindbladSystem) -> Self {
        let sites = sys
            .dim()
            .factors()
            .filter(|f| f.iter().all(|&d| d == 2))
            .map(<[usize]>::len);
        Self {
            dim: if sites.is_some() { None } else { Some(sys.n()) },
            sites,
            hamiltonian: Some(OperatorJson::Dense(dense_json(sys.hamiltonian()))),
            lindblad_ops: Some(sys.couplings().iter().map(|l| OperatorJson::Dense(dense_json(l))).collect()),
            ..Self::default()
        }
    }
}

pub fn parse_model(text: &str, path: &Path) -> Result<ModelFile> {
    serde_json::from_str(text).map_err(|e| CliError::json(path, &e))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_system(path: &Path, tol: &ToleranceSet) -> Result<LindbladSystem> {
    parse_model(&read(path)?, path)?.to_system(tol)
}

/// Dense state matrix for a system of dimension `dim`, validated as a
/// density matrix.
pub fn parse_state(text: &str, path: &Path, dim: &HilbertDim, tol: &ToleranceSet) -> Result<DensityMatrix> {
    let rows: DenseJson = serde_json::from_str(text).map_err(|e| CliError::json(path, &e))?;
    let op = dense_operator(&rows, dim, &path.display().to_string())?;
    Ok(doa_core::validate_density(op, tol).map_err(doa_core::Error::from)?)
}

pub fn load_state(path: &Path, dim: &HilbertDim, tol: &ToleranceSet) -> Result<DensityMatrix> {
    parse_state(&read(path)?, path, dim, tol)
}

pub fn state_json(rho: &Operator) -> String {
    serde_json::to_string(&dense_json(rho)).expect("finite matrix")
}
