use super::field::SpectralField;
use super::grid::norm3;
use crate::error::{invalid, Result};
use num_complex::Complex64;

/// Strength θ of the elliptic regularizer `Λ_θ = 1 − θΔ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizerSpec {
    theta: f64,
}

impl RegularizerSpec {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(invalid("theta", format!("{theta} not in (0, 1]")));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Symbol of `θ^{k/2} Λ_θ⁻¹ ∂^k` along an axis with component `eta_axis`.
    pub fn symbol(&self, order: u8, eta_axis: f64, eta_norm: f64) -> Complex64 {
        let base = 1.0 / (1.0 + self.theta * eta_norm * eta_norm);
        let d = Complex64::new(0.0, self.theta.sqrt() * eta_axis).powu(order as u32);
        d * base
    }
}

/// Applies `θ^{k/2} Λ_θ⁻¹ ∂^k_axis` for `k ∈ {0, 1, 2}`.
pub fn apply_regularizer(
    f: &SpectralField,
    r: RegularizerSpec,
    derivative_order: u8,
    axis: usize,
) -> Result<SpectralField> {
    if derivative_order > 2 {
        return Err(invalid("derivative_order", format!("{derivative_order} not in 0..=2")));
    }
    let g = *f.grid();
    if axis >= g.dim() {
        return Err(invalid("axis", format!("{axis} ≥ dimension {}", g.dim())));
    }
    f.map_coefficients(|i| {
        let e = g.frequency(i);
        r.symbol(derivative_order, e[axis], norm3(e))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::VelocityGrid;
    use std::f64::consts::PI;

    #[test]
    fn order_one_gain_on_critical_mode() {
        // |η| = θ^{-1/2} maximizes √θ|η|/(1+θ|η|²) at 1/2.
        let theta = 0.25;
        let g = VelocityGrid::new(1, 32, PI).unwrap();
        let f = SpectralField::from_fn(g, |v| (2.0 * v[0]).sin()).unwrap();
        let r = RegularizerSpec::new(theta).unwrap();
        let h = apply_regularizer(&f, r, 1, 0).unwrap();
        assert!((h.l2_norm() / f.l2_norm() - 0.5).abs() < 1e-13);
    }

    #[test]
    fn validation() {
        assert!(RegularizerSpec::new(0.0).is_err());
        assert!(RegularizerSpec::new(1.5).is_err());
        let g = VelocityGrid::new(1, 8, 1.0).unwrap();
        let f = SpectralField::zeros(g);
        let r = RegularizerSpec::new(1.0).unwrap();
        assert!(apply_regularizer(&f, r, 3, 0).is_err());
        assert!(apply_regularizer(&f, r, 1, 1).is_err());
    }
}
