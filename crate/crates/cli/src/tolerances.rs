//! Tolerance overrides from the environment.

use serde::Deserialize;

use doa_core::ToleranceSet;

use crate::error::{CliError, Result};

/// Environment variable holding a JSON object of tolerance overrides, e.g.
/// `{"member": 1e-6, "psd": 1e-8}`.
pub const TOLERANCE_ENV: &str = "DOA_TOLERANCES";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub herm: Option<f64>,
    pub trace: Option<f64>,
    pub psd: Option<f64>,
    pub perif: Option<f64>,
    pub member: Option<f64>,
    pub rank: Option<f64>,
    pub steady: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, mut tol: ToleranceSet) -> ToleranceSet {
        let slots = [
            (self.herm, &mut tol.herm),
            (self.trace, &mut tol.trace),
            (self.psd, &mut tol.psd),
            (self.perif, &mut tol.perif),
            (self.member, &mut tol.member),
            (self.rank, &mut tol.rank),
            (self.steady, &mut tol.steady),
        ];
        for (value, slot) in slots {
            if let Some(v) = value {
                *slot = v;
            }
        }
        tol
    }
}

/// Defaults, overridden by the JSON in `raw` if present.
pub fn tolerances_from(raw: Option<&str>) -> Result<ToleranceSet> {
    let tol = match raw {
        None => ToleranceSet::default(),
        Some(text) => {
            let o: ToleranceOverrides = serde_json::from_str(text)
                .map_err(|e| CliError::Format(format!("{TOLERANCE_ENV}: {e}")))?;
            o.apply(ToleranceSet::default())
        }
    };
    tol.validate()?;
    Ok(tol)
}

/// Tolerances from the process environment.
pub fn tolerances_from_env() -> Result<ToleranceSet> {
    let raw = std::env::var(TOLERANCE_ENV).ok();
    tolerances_from(raw.as_deref())
}
