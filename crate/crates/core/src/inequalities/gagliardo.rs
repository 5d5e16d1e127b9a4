//! Double-integral form of the `H^s` norm in one dimension.

use crate::error::{invalid, Result};
use crate::exec::pairwise_sum;
use crate::spectral::SpectralField;
use num_complex::Complex64;

/// Quadrature of `∫∫ |g(x+y) − g(x)|² / |y|^{1+2s} dx dy`.
///
/// Shifts run over `0 < |y| ≤ L/2` on the grid. The cell `|y| < h/2` uses the
/// quadratic behaviour `‖g'‖²y²`, and `|y| > L/2` uses the bound `2‖g‖²`
/// for the translated difference.
pub fn gagliardo_seminorm_sq(g: &SpectralField, s: f64) -> Result<f64> {
    let grid = g.grid();
    if grid.dim() != 1 {
        return Err(invalid("dimension", "double-integral form is one-dimensional"));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid("s", format!("{s} not in (0, 1)")));
    }
    let n = grid.n();
    let h = grid.spacing();
    let half = grid.half_width() / 2.0;
    let shifts = (half / h).round() as usize;
    let x = g.samples();
    let mut terms = Vec::with_capacity(shifts);
    for m in 1..=shifts {
        let diff: Vec<f64> = (0..n).map(|i| (x[(i + m) % n] - x[i]).norm_sqr()).collect();
        let y = m as f64 * h;
        terms.push(h * pairwise_sum(&diff) / y.powf(1.0 + 2.0 * s) * h);
    }
    let bulk = 2.0 * pairwise_sum(&terms);
    let deriv = g.map_coefficients(|i| Complex64::new(0.0, grid.wavenumber(i)))?;
    let d2 = deriv.l2_norm().powi(2);
    let near = 2.0 * d2 * (h / 2.0).powf(2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    let edge = shifts as f64 * h + h / 2.0;
    let far = 2.0 * g.l2_norm().powi(2) * edge.powf(-2.0 * s) / s;
    Ok(bulk + near + far)
}

/// `(‖g‖² + seminorm²)^{1/2}`.
pub fn gagliardo_norm(g: &SpectralField, s: f64) -> Result<f64> {
    Ok((g.l2_norm().powi(2) + gagliardo_seminorm_sq(g, s)?).sqrt())
}
