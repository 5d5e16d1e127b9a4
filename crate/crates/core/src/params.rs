//! Soft-potential exponents shared by every module.

use crate::error::{invalid, Result};

/// Kinetic exponent γ and angular singularity order s, with derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftPotentialParams {
    gamma: f64,
    s: f64,
}

impl SoftPotentialParams {
    /// Requires −3 < γ < 0, 0 < s < 1 and γ + 2s > −1.
    pub fn new(gamma: f64, s: f64) -> Result<Self> {
        if !(gamma > -3.0 && gamma < 0.0) {
            return Err(invalid("gamma", format!("{gamma} not in (-3, 0)")));
        }
        Self::new_diagnostic(gamma, s).and_then(|p| {
            if gamma + 2.0 * s > -1.0 {
                Ok(p)
            } else {
                Err(invalid("gamma+2s", format!("{} must exceed -1", gamma + 2.0 * s)))
            }
        })
    }

    /// Like [`new`](Self::new) but also admits the boundary γ = 0, which some
    /// diagnostics use as a heat-type reference.
    pub fn new_diagnostic(gamma: f64, s: f64) -> Result<Self> {
        if !(gamma > -3.0 && gamma <= 0.0) {
            return Err(invalid("gamma", format!("{gamma} not in (-3, 0]")));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(invalid("s", format!("{s} not in (0, 1)")));
        }
        Ok(Self { gamma, s })
    }

    /// Inverse power law with exponent p > 2, using γ = (p−5)/(p−1), s = 1/(p−1).
    pub fn inverse_power_law(p: f64) -> Result<Self> {
        if !(p > 2.0) {
            return Err(invalid("p", format!("{p} must exceed 2")));
        }
        Self::new((p - 5.0) / (p - 1.0), 1.0 / (p - 1.0))
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// τ = 2s/(2−γ).
    pub fn tau(&self) -> f64 {
        2.0 * self.s / (2.0 - self.gamma)
    }

    /// Hölder exponent 2/(2−γ) in the interpolation inequality.
    pub fn theta(&self) -> f64 {
        2.0 / (2.0 - self.gamma)
    }

    /// max{1/(2τ), 1}.
    pub fn gevrey_exponent(&self) -> f64 {
        self.raw_index().max(1.0)
    }

    /// (2−γ)/(4s) without the clamp at 1.
    pub fn raw_index(&self) -> f64 {
        (2.0 - self.gamma) / (4.0 * self.s)
    }

    /// True when γ/2 + 2s ≥ 1, selecting the single-field norm regime.
    pub fn strong_dissipation(&self) -> bool {
        self.gamma / 2.0 + 2.0 * self.s >= 1.0
    }
}
