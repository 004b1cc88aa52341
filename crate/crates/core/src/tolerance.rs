use crate::error::{Error, Result};

/// Numerical thresholds shared by every analysis stage.
///
/// `perif` is relative: an eigenvalue counts as peripheral when
/// `|Re λ| <= perif * max(1, spectral radius)`. `rank` is relative to the
/// largest singular value. Everything else is absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSet {
    pub herm: f64,
    pub trace: f64,
    pub psd: f64,
    pub perif: f64,
    pub member: f64,
    pub rank: f64,
    /// Bound on `‖L(ρ)‖` for accepting `ρ` as a steady state.
    pub steady: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            trace: 1e-10,
            psd: 1e-9,
            perif: 1e-9,
            member: 1e-7,
            rank: 1e-10,
            steady: 1e-8,
        }
    }
}

impl ToleranceSet {
    /// Tolerances for propagated states, which may pick up slightly more
    /// negative eigenvalue drift than inputs.
    pub fn relaxed_for_trajectories(&self) -> Self {
        Self {
            psd: self.psd.max(1e-7),
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("herm", self.herm),
            ("trace", self.trace),
            ("psd", self.psd),
            ("perif", self.perif),
            ("member", self.member),
            ("rank", self.rank),
            ("steady", self.steady),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }
}
