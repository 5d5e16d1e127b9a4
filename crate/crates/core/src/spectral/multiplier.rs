use super::field::SpectralField;
use super::grid::norm3;
use crate::error::{invalid, Result};
use num_complex::Complex64;

/// Radial Fourier multipliers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplierSpec {
    /// Symbol `⟨η⟩^order`.
    JapaneseBracket { order: f64 },
    /// Symbol `|η|^{2s}` with `0 < s < 1`.
    FractionalPower { s: f64 },
}

/// `⟨x⟩ = (1 + x²)^{1/2}`.
pub fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

impl MultiplierSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::JapaneseBracket { order } if !order.is_finite() => {
                Err(invalid("order", "must be finite"))
            }
            Self::FractionalPower { s } if !(s > 0.0 && s < 1.0) => {
                Err(invalid("s", format!("{s} not in (0, 1)")))
            }
            _ => Ok(()),
        }
    }

    /// Symbol value at frequency magnitude `|η|`.
    pub fn symbol(&self, eta: f64) -> f64 {
        match *self {
            Self::JapaneseBracket { order } => (1.0 + eta * eta).powf(order / 2.0),
            Self::FractionalPower { s } => eta.abs().powf(2.0 * s),
        }
    }
}

pub fn apply_multiplier(f: &SpectralField, m: MultiplierSpec) -> Result<SpectralField> {
    m.validate()?;
    apply_radial_symbol(f, |eta| m.symbol(eta))
}

/// Multiplies coefficients by a real function of `|η|`.
pub fn apply_radial_symbol(f: &SpectralField, symbol: impl Fn(f64) -> f64) -> Result<SpectralField> {
    let g = *f.grid();
    f.map_coefficients(|i| Complex64::new(symbol(norm3(g.frequency(i))), 0.0))
}
