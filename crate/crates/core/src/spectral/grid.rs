use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Uniform periodic grid on `[-L, L)^d`.
///
/// Flat indices are row-major with the last axis fastest. Along each axis the
/// index `i` carries the dual frequency `(π/L)·m` with `m = i` for `i < N/2`
/// and `m = i − N` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityGrid {
    dim: usize,
    n: usize,
    half_width: f64,
}

impl VelocityGrid {
    pub fn new(dim: usize, n: usize, half_width: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("N={n} must be a power of two ≥ 8")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidGrid(format!("half-width {half_width} must be positive")));
        }
        Ok(Self { dim, n, half_width })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.n; self.dim]
    }

    /// Same box with twice the points per axis.
    pub fn refined(&self) -> Self {
        Self { n: 2 * self.n, ..*self }
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Signed mode number of storage index `i`.
    pub fn mode(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    pub fn wavenumber(&self, i: usize) -> f64 {
        PI / self.half_width * self.mode(i) as f64
    }

    /// Storage index of the signed mode `m` (taken modulo N).
    pub fn index_of_mode(&self, m: i64) -> usize {
        m.rem_euclid(self.n as i64) as usize
    }

    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut rem = flat;
        for a in (0..self.dim).rev() {
            out[a] = rem % self.n;
            rem /= self.n;
        }
        out
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().take(self.dim).fold(0, |acc, &i| acc * self.n + i)
    }

    /// Position of a flat index; unused axes are zero.
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let idx = self.multi_index(flat);
        let mut p = [0.0; 3];
        for a in 0..self.dim {
            p[a] = self.coordinate(idx[a]);
        }
        p
    }

    /// Dual frequency vector of a flat index; unused axes are zero.
    pub fn frequency(&self, flat: usize) -> [f64; 3] {
        let idx = self.multi_index(flat);
        let mut e = [0.0; 3];
        for a in 0..self.dim {
            e[a] = self.wavenumber(idx[a]);
        }
        e
    }

    /// `|v|` at every grid point.
    pub fn radii(&self) -> Vec<f64> {
        (0..self.len()).map(|i| norm3(self.point(i))).collect()
    }

    /// `|η|` at every storage index.
    pub fn frequency_norms(&self) -> Vec<f64> {
        (0..self.len()).map(|i| norm3(self.frequency(i))).collect()
    }

    /// Largest per-axis frequency magnitude, `(π/L)·N/2`.
    pub fn nyquist(&self) -> f64 {
        PI / self.half_width * (self.n / 2) as f64
    }

    /// Largest `|η|` present on the grid.
    pub fn max_frequency(&self) -> f64 {
        (self.dim as f64).sqrt() * self.nyquist()
    }

    /// Largest `|v|` present on the grid.
    pub fn max_radius(&self) -> f64 {
        (self.dim as f64).sqrt() * self.half_width
    }
}

pub(crate) fn norm3(p: [f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}
