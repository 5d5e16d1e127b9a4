use crate::error::{invalid, Error, Result};
use crate::exec::pairwise_sum;
use crate::spectral::{bracket, fft, VelocityGrid};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Samples on `𝕋_x × [−L, L)_v`, row-major with velocity fastest.
///
/// The periodic axis `[0, 2π)` carries `x_points` nodes; a single node means
/// spatially homogeneous data. Norms and moments use the normalized measure on
/// the torus, so homogeneous and inhomogeneous runs are directly comparable.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    x_points: usize,
    grid: VelocityGrid,
    samples: Vec<Complex64>,
}

/// Validates a spatial resolution. Even counts are rejected so every
/// spatial mode has a conjugate partner and real data stays real.
pub fn check_x_points(m: usize) -> Result<()> {
    if m == 0 || m.is_multiple_of(2) {
        return Err(invalid("x_points", format!("{m} must be odd (1 disables the x-axis)")));
    }
    Ok(())
}

impl PhaseField {
    pub fn new(x_points: usize, grid: VelocityGrid, samples: Vec<Complex64>) -> Result<Self> {
        check_x_points(x_points)?;
        if grid.dim() != 1 {
            return Err(Error::InvalidGrid("the phase-space solver uses one velocity dimension".into()));
        }
        if samples.len() != x_points * grid.n() {
            return Err(Error::InvalidGrid(format!("expected {} samples, got {}", x_points * grid.n(), samples.len())));
        }
        if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("phase field samples".into()));
        }
        Ok(Self { x_points, grid, samples })
    }

    pub fn from_fn(x_points: usize, grid: VelocityGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let n = grid.n();
        let samples = (0..x_points * n)
            .map(|idx| Complex64::new(f(x_coordinate(x_points, idx / n), grid.coordinate(idx % n)), 0.0))
            .collect();
        Self::new(x_points, grid, samples)
    }

    pub fn zeros(x_points: usize, grid: VelocityGrid) -> Result<Self> {
        Self::new(x_points, grid, vec![Complex64::new(0.0, 0.0); x_points * grid.n()])
    }

    pub fn x_points(&self) -> usize {
        self.x_points
    }

    pub fn grid(&self) -> VelocityGrid {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn shape(&self) -> [usize; 2] {
        [self.x_points, self.grid.n()]
    }

    /// Velocity of flat index `idx`.
    pub fn velocity(&self, idx: usize) -> f64 {
        self.grid.coordinate(idx % self.grid.n())
    }

    /// Measure of one node: velocity spacing times the normalized torus cell.
    pub fn cell(&self) -> f64 {
        self.grid.spacing() / self.x_points as f64
    }

    pub fn same_layout(&self, other: &Self) -> Result<()> {
        if self.x_points != other.x_points || self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// `(∫|f|²)^{1/2}` with the pointwise factor `weight(v)` applied.
    pub fn weighted_l2(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> =
            self.samples.iter().enumerate().map(|(i, z)| z.norm_sqr() * weight(self.velocity(i)).powi(2)).collect();
        (pairwise_sum(&terms) * self.cell()).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.weighted_l2(|_| 1.0)
    }

    /// `‖e^{(a₀−t)⟨v⟩²} f‖`.
    pub fn omega_norm(&self, a0: f64, t: f64) -> f64 {
        self.weighted_l2(|v| omega(a0, t, v))
    }

    pub fn min_real(&self) -> f64 {
        self.samples.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_layout(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect();
        Ok(Self { samples, ..self.clone() })
    }

    /// `self + c · other`.
    pub fn axpy(&self, c: f64, other: &Self) -> Result<Self> {
        self.same_layout(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b * c).collect();
        Ok(Self { samples, ..self.clone() })
    }

    /// Applies a velocity multiplier `m(η)` to every spatial line.
    pub fn velocity_multiplier(&self, symbol: impl Fn(f64) -> f64) -> Self {
        let mut data = self.samples.clone();
        let shape = self.shape();
        fft::transform_axes(&mut data, &shape, &[1], fft::Direction::Forward);
        let n = self.grid.n();
        for (i, z) in data.iter_mut().enumerate() {
            *z *= symbol(self.grid.wavenumber(i % n));
        }
        fft::transform_axes(&mut data, &shape, &[1], fft::Direction::Inverse);
        Self { samples: data, ..self.clone() }
    }

    /// Pointwise multiplication by `w(v)`.
    pub fn velocity_weight(&self, w: impl Fn(f64) -> f64) -> Self {
        let samples = self.samples.iter().enumerate().map(|(i, z)| z * w(self.velocity(i))).collect();
        Self { samples, ..self.clone() }
    }

    /// `‖∂_x f‖² + ‖∂_v f‖²`, computed spectrally.
    pub fn gradient_norm_sq(&self) -> f64 {
        let mut data = self.samples.clone();
        let shape = self.shape();
        fft::transform_axes(&mut data, &shape, &[0, 1], fft::Direction::Forward);
        let n = self.grid.n();
        let terms: Vec<f64> = data
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let xi = x_wavenumber(self.x_points, i / n);
                let eta = self.grid.wavenumber(i % n);
                z.norm_sqr() * (xi * xi + eta * eta)
            })
            .collect();
        // Unitary transforms: the coefficient sum carries the sample measure
        // without the cell factor.
        pairwise_sum(&terms) * self.cell()
    }
}

/// `e^{(a₀−t)⟨v⟩²}`.
pub fn omega(a0: f64, t: f64, v: f64) -> f64 {
    ((a0 - t) * bracket(v).powi(2)).exp()
}

pub fn x_coordinate(x_points: usize, i: usize) -> f64 {
    2.0 * PI * i as f64 / x_points as f64
}

/// Integer wavenumber of spatial storage index `i`.
pub fn x_wavenumber(x_points: usize, i: usize) -> f64 {
    if i <= x_points / 2 {
        i as f64
    } else {
        i as f64 - x_points as f64
    }
}
