//! Periodic velocity grids and the spectral operations built on them.
//!
//! Transforms are unitary along every axis, so the quadrature norm of the
//! samples equals `h^{d/2}` times the ℓ² norm of the coefficients.

mod container;
pub(crate) mod fft;
mod field;
mod grid;
mod multiplier;
mod regularizer;
mod weight;

pub use container::{read_field, read_field_file, write_field, write_field_file};
pub use fft::{transform_axes, Direction};
pub use field::{SpectralField, CONSISTENCY_TOL};
pub use grid::VelocityGrid;
pub use multiplier::{apply_multiplier, apply_radial_symbol, bracket, MultiplierSpec};
pub use regularizer::{apply_regularizer, RegularizerSpec};
pub use weight::{apply_weight, WeightFunction};

use crate::error::Result;

/// `‖⟨v⟩^p ⟨D⟩^m f‖`: multiplier first, weight second.
pub fn weighted_sobolev_norm(f: &SpectralField, p: f64, m: f64) -> Result<f64> {
    let g = if m == 0.0 {
        f.clone()
    } else {
        apply_multiplier(f, MultiplierSpec::JapaneseBracket { order: m })?
    };
    if p == 0.0 {
        return Ok(g.l2_norm());
    }
    apply_weight(&g, WeightFunction::Polynomial { exponent: p }).map(|h| h.l2_norm())
}

/// `‖⟨D⟩^m ⟨v⟩^p f‖`: weight first, multiplier second.
pub fn weighted_sobolev_norm_reversed(f: &SpectralField, p: f64, m: f64) -> Result<f64> {
    let g = if p == 0.0 {
        f.clone()
    } else {
        apply_weight(f, WeightFunction::Polynomial { exponent: p })?
    };
    if m == 0.0 {
        return Ok(g.l2_norm());
    }
    apply_multiplier(&g, MultiplierSpec::JapaneseBracket { order: m }).map(|h| h.l2_norm())
}
