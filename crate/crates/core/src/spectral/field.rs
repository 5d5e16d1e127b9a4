use super::fft;
use super::grid::VelocityGrid;
use crate::error::{Error, Result};
use crate::exec::pairwise_sum;
use num_complex::Complex64;

/// Relative tolerance for the sample/coefficient round trip.
pub const CONSISTENCY_TOL: f64 = 1e-12;

/// Grid samples together with their unitary DFT coefficients.
///
/// Both arrays are owned privately and only ever produced from one another, so
/// every value of this type is consistent by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: VelocityGrid,
    samples: Vec<Complex64>,
    coefficients: Vec<Complex64>,
}

fn check_len(grid: &VelocityGrid, len: usize) -> Result<()> {
    if len != grid.len() {
        return Err(Error::InvalidGrid(format!(
            "expected {} values, got {len}",
            grid.len()
        )));
    }
    Ok(())
}

fn check_finite(values: &[Complex64], what: &str) -> Result<()> {
    if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite(what.to_string()));
    }
    Ok(())
}

fn rel_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let diff = pairwise_sum(&a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).collect::<Vec<_>>());
    let scale = pairwise_sum(&a.iter().map(|x| x.norm_sqr()).collect::<Vec<_>>())
        .max(pairwise_sum(&b.iter().map(|x| x.norm_sqr()).collect::<Vec<_>>()));
    if scale == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (diff / scale).sqrt()
    }
}

impl SpectralField {
    pub fn from_samples(grid: VelocityGrid, samples: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, samples.len())?;
        check_finite(&samples, "samples")?;
        let mut coefficients = samples.clone();
        fft::forward(&mut coefficients, grid.dim(), grid.n());
        Ok(Self { grid, samples, coefficients })
    }

    pub fn from_real(grid: VelocityGrid, values: &[f64]) -> Result<Self> {
        Self::from_samples(grid, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Samples a real function of the velocity vector (slice of length d).
    pub fn from_fn(grid: VelocityGrid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let d = grid.dim();
        let values: Vec<f64> = (0..grid.len()).map(|i| f(&grid.point(i)[..d])).collect();
        Self::from_real(grid, &values)
    }

    pub fn from_coefficients(grid: VelocityGrid, coefficients: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, coefficients.len())?;
        check_finite(&coefficients, "coefficients")?;
        let mut samples = coefficients.clone();
        fft::inverse(&mut samples, grid.dim(), grid.n());
        Ok(Self { grid, samples, coefficients })
    }

    /// Accepts externally produced pairs after checking the round trip.
    pub fn from_parts(
        grid: VelocityGrid,
        samples: Vec<Complex64>,
        coefficients: Vec<Complex64>,
    ) -> Result<Self> {
        check_len(&grid, samples.len())?;
        check_len(&grid, coefficients.len())?;
        let f = Self::from_samples(grid, samples)?;
        let err = rel_diff(&f.coefficients, &coefficients);
        if !(err <= CONSISTENCY_TOL) {
            return Err(Error::InconsistentField(err));
        }
        Ok(f)
    }

    pub fn zeros(grid: VelocityGrid) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, samples: z.clone(), coefficients: z }
    }

    pub fn grid(&self) -> &VelocityGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn real_samples(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    /// Relative error of `inverse(forward(samples))` against the samples.
    pub fn round_trip_error(&self) -> f64 {
        let mut back = self.coefficients.clone();
        fft::inverse(&mut back, self.grid.dim(), self.grid.n());
        rel_diff(&back, &self.samples)
    }

    /// Quadrature L² norm `(h^d Σ|f|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.cell_volume() * sum_sq(&self.samples)).sqrt()
    }

    /// `h^{d/2}` times the ℓ² norm of the coefficients.
    pub fn coefficient_norm(&self) -> f64 {
        (self.grid.cell_volume() * sum_sq(&self.coefficients)).sqrt()
    }

    /// Quadrature inner product `h^d Σ f·conj(g)`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_grid(other)?;
        let re: Vec<f64> = self.samples.iter().zip(&other.samples).map(|(a, b)| (a * b.conj()).re).collect();
        let im: Vec<f64> = self.samples.iter().zip(&other.samples).map(|(a, b)| (a * b.conj()).im).collect();
        Ok(Complex64::new(pairwise_sum(&re), pairwise_sum(&im)) * self.grid.cell_volume())
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_real(&self) -> f64 {
        self.samples.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    /// Multiplies coefficient `i` by `symbol(i)` and resynthesizes samples.
    pub fn map_coefficients(&self, symbol: impl Fn(usize) -> Complex64) -> Result<Self> {
        let c = self.coefficients.iter().enumerate().map(|(i, z)| z * symbol(i)).collect();
        Self::from_coefficients(self.grid, c)
    }

    /// Multiplies sample `i` by `factor(i)` and recomputes coefficients.
    pub fn map_samples(&self, factor: impl Fn(usize) -> Complex64) -> Result<Self> {
        let s = self.samples.iter().enumerate().map(|(i, z)| z * factor(i)).collect();
        Self::from_samples(self.grid, s)
    }

    /// Applies `g` to each sample value.
    pub fn map_values(&self, g: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::from_samples(self.grid, self.samples.iter().map(|&z| g(z)).collect())
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|z| z * a).collect(),
            coefficients: self.coefficients.iter().map(|z| z * a).collect(),
        }
    }

    /// `self + a·other`, combining both representations linearly.
    pub fn axpy(&self, a: f64, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            samples: self.samples.iter().zip(&other.samples).map(|(x, y)| x + y * a).collect(),
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(x, y)| x + y * a)
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub(crate) fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

fn sum_sq(v: &[Complex64]) -> f64 {
    pairwise_sum(&v.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>())
}
