use super::field::SpectralField;
use super::grid::norm3;
use crate::error::{invalid, Result};
use num_complex::Complex64;

/// Pointwise velocity weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightFunction {
    /// `⟨v⟩^exponent`.
    Polynomial { exponent: f64 },
    /// `e^{coefficient·⟨v⟩²}`.
    Exponential { coefficient: f64 },
    /// `e^{(a0 − t)⟨v⟩²}` with `a0 > 0` and `0 ≤ t ≤ a0/2`.
    Time { a0: f64, t: f64 },
}

impl WeightFunction {
    pub fn time(a0: f64, t: f64) -> Result<Self> {
        let w = Self::Time { a0, t };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Polynomial { exponent } if !exponent.is_finite() => {
                Err(invalid("exponent", "must be finite"))
            }
            Self::Exponential { coefficient } if !coefficient.is_finite() => {
                Err(invalid("coefficient", "must be finite"))
            }
            Self::Time { a0, .. } if !(a0 > 0.0 && a0.is_finite()) => {
                Err(invalid("a0", format!("{a0} must be positive")))
            }
            Self::Time { a0, t } if !(t >= 0.0 && t <= a0 / 2.0) => {
                Err(invalid("t", format!("{t} outside [0, a0/2] = [0, {}]", a0 / 2.0)))
            }
            _ => Ok(()),
        }
    }

    /// Weight at speed `|v|`.
    pub fn value(&self, speed: f64) -> f64 {
        let b2 = 1.0 + speed * speed;
        match *self {
            Self::Polynomial { exponent } => b2.powf(exponent / 2.0),
            Self::Exponential { coefficient } => (coefficient * b2).exp(),
            Self::Time { a0, t } => ((a0 - t) * b2).exp(),
        }
    }

    /// `∂_t` of the time weight; zero for the static kinds.
    pub fn time_derivative(&self, speed: f64) -> f64 {
        match *self {
            Self::Time { .. } => -(1.0 + speed * speed) * self.value(speed),
            _ => 0.0,
        }
    }

    /// Magnitude of the radial derivative `|∂_r w|` at speed `|v|`.
    pub fn radial_derivative(&self, speed: f64) -> f64 {
        let b2 = 1.0 + speed * speed;
        let c = match *self {
            Self::Polynomial { exponent } => exponent / b2,
            Self::Exponential { coefficient } => 2.0 * coefficient,
            Self::Time { a0, t } => 2.0 * (a0 - t),
        };
        (c * speed * self.value(speed)).abs()
    }
}

pub fn apply_weight(f: &SpectralField, w: WeightFunction) -> Result<SpectralField> {
    w.validate()?;
    let g = *f.grid();
    f.map_samples(|i| Complex64::new(w.value(norm3(g.point(i))), 0.0))
}
