//! Seeded families of smooth, rapidly decaying test functions in one velocity
//! dimension.
//!
//! Members are continuous functions, so the same member can be sampled on a
//! grid and on its refinement. The default box `[-16, 16)` keeps every member
//! below `1e-14` of its peak at the boundary.

use crate::error::Result;
use crate::spectral::{SpectralField, VelocityGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Half-width of the box the corpus is designed for.
pub const CORPUS_HALF_WIDTH: f64 = 16.0;
/// Default points per axis.
pub const CORPUS_POINTS: usize = 512;
/// Largest carrier frequency of a wave packet.
pub const MAX_BAND: f64 = 24.0;

#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// `e^{−c(v−v0)²}`.
    Gaussian { c: f64, center: f64 },
    /// Normalized Hermite function `h_n(a(v−b))`.
    Hermite { degree: usize, scale: f64, shift: f64 },
    /// Gaussian envelope times a cosine sum with weights `⟨ω⟩^{−2}`.
    Packet { center: f64, width: f64, modes: Vec<(f64, f64)> },
    /// Pointwise square of another member, which is nonnegative.
    Squared(Box<TestFunction>),
}

/// `h_n(x)` by the three-term recurrence.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-x * x / 2.0).exp();
    for k in 0..n {
        let next = (2.0 / (k as f64 + 1.0)).sqrt() * x * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

impl TestFunction {
    pub fn eval(&self, v: f64) -> f64 {
        match self {
            Self::Gaussian { c, center } => (-c * (v - center).powi(2)).exp(),
            Self::Hermite { degree, scale, shift } => hermite_function(*degree, scale * (v - shift)),
            Self::Packet { center, width, modes } => {
                let env = (-(v - center).powi(2) / (2.0 * width * width)).exp();
                let osc: f64 = modes
                    .iter()
                    .map(|&(w, phase)| (w * (v - center) + phase).cos() / (1.0 + w * w))
                    .sum();
                env * osc
            }
            Self::Squared(inner) => inner.eval(v).powi(2),
        }
    }

    /// Short family label.
    pub fn family(&self) -> &'static str {
        match self {
            Self::Gaussian { .. } => "gaussian",
            Self::Hermite { .. } => "hermite",
            Self::Packet { .. } => "packet",
            Self::Squared(_) => "squared",
        }
    }

    /// Largest carrier frequency present, zero for non-oscillatory members.
    pub fn band(&self) -> f64 {
        match self {
            Self::Packet { modes, .. } => modes.iter().map(|m| m.0).fold(0.0, f64::max),
            Self::Squared(inner) => 2.0 * inner.band(),
            _ => 0.0,
        }
    }

    pub fn sample(&self, grid: VelocityGrid) -> Result<SpectralField> {
        SpectralField::from_fn(grid, |v| self.eval(v[0]))
    }

    /// Boundary value relative to the peak on the grid.
    pub fn boundary_ratio(&self, grid: &VelocityGrid) -> f64 {
        let vals: Vec<f64> = (0..grid.n()).map(|i| self.eval(grid.coordinate(i)).abs()).collect();
        let peak = vals.iter().cloned().fold(0.0, f64::max);
        let edge = vals[0].max(self.eval(grid.half_width()).abs());
        if peak == 0.0 {
            0.0
        } else {
            edge / peak
        }
    }
}

/// A member with a stable identifier.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusMember {
    pub id: String,
    pub function: TestFunction,
}

fn gaussian(rng: &mut ChaCha8Rng) -> TestFunction {
    TestFunction::Gaussian {
        c: rng.random_range(0.25..=4.0),
        center: rng.random_range(-CORPUS_HALF_WIDTH / 4.0..=CORPUS_HALF_WIDTH / 4.0),
    }
}

fn hermite(rng: &mut ChaCha8Rng) -> TestFunction {
    TestFunction::Hermite {
        degree: rng.random_range(0..=12),
        scale: rng.random_range(0.75..=1.25),
        shift: rng.random_range(-2.0..=2.0),
    }
}

fn packet(rng: &mut ChaCha8Rng, max_band: f64) -> TestFunction {
    let band = rng.random_range(1.0..=max_band);
    let count = rng.random_range(1..=6);
    let modes = (0..count)
        .map(|_| (rng.random_range(0.0..=band), rng.random_range(0.0..2.0 * PI)))
        .collect();
    TestFunction::Packet {
        center: rng.random_range(-4.0..=4.0),
        width: rng.random_range(0.5..=1.4),
        modes,
    }
}

/// Mixed corpus: about 40% Gaussians, 20% Hermite functions, 40% packets.
pub fn standard(seed: u64, size: usize) -> Vec<CorpusMember> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size)
        .map(|i| {
            let roll: f64 = rng.random();
            let function = if roll < 0.4 {
                gaussian(&mut rng)
            } else if roll < 0.6 {
                hermite(&mut rng)
            } else {
                packet(&mut rng, MAX_BAND)
            };
            CorpusMember { id: format!("{}-{seed}-{i}", function.family()), function }
        })
        .collect()
}

/// Nonnegative corpus: Gaussians and squares of Hermite functions and packets.
/// Squared packets use half the band so the square stays well resolved.
pub fn nonnegative(seed: u64, size: usize) -> Vec<CorpusMember> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..size)
        .map(|i| {
            let roll: f64 = rng.random();
            let function = if roll < 0.4 {
                gaussian(&mut rng)
            } else if roll < 0.6 {
                TestFunction::Squared(Box::new(hermite(&mut rng)))
            } else {
                TestFunction::Squared(Box::new(packet(&mut rng, MAX_BAND / 2.0)))
            };
            CorpusMember { id: format!("{}-{seed}-{i}", function.family()), function }
        })
        .collect()
}

/// Packets only, with carriers spread over `[0, max_band]`.
pub fn packets(seed: u64, size: usize) -> Vec<CorpusMember> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5851_f42d_4c95_7f2d);
    (0..size)
        .map(|i| CorpusMember { id: format!("packet-{seed}-{i}"), function: packet(&mut rng, MAX_BAND) })
        .collect()
}

/// The default corpus grid `[-16, 16)` with 512 points.
pub fn default_grid() -> VelocityGrid {
    VelocityGrid::new(1, CORPUS_POINTS, CORPUS_HALF_WIDTH).expect("valid constants")
}
