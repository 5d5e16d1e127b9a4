use super::krylov::expv;
use super::ToyParams;
use crate::error::{Error, Result};
use crate::spectral::{bracket, fft, SpectralField, VelocityGrid};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Relative per-step growth of the L² norm that aborts an evolution.
pub const GROWTH_TOLERANCE: f64 = 1e-10;
/// Absolute Krylov error target relative to the current norm.
const KRYLOV_TOL: f64 = 1e-13;

/// Snapshots of an evolution at uniformly spaced times.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<SpectralField>,
}

impl Trajectory {
    pub fn last(&self) -> &SpectralField {
        self.snapshots.last().expect("trajectory holds the initial state")
    }

    pub fn norms(&self) -> Vec<f64> {
        self.snapshots.iter().map(|f| f.l2_norm()).collect()
    }
}

/// The generator `A = ⟨v⟩^γ ⟨D⟩^{2s}` in symmetrized form.
///
/// With `W = ⟨v⟩^γ` and `B = ⟨D⟩^{2s}`, `u = W^{−1/2} f` obeys `u' = −Su` with
/// `S = W^{1/2} B W^{1/2}` Hermitian positive definite.
pub struct ToyOperator {
    grid: VelocityGrid,
    sqrt_weight: Vec<f64>,
    symbol: Vec<f64>,
}

impl ToyOperator {
    pub fn new(grid: VelocityGrid, gamma: f64, s: f64) -> Self {
        Self {
            grid,
            sqrt_weight: grid.radii().iter().map(|&r| bracket(r).powf(gamma / 2.0)).collect(),
            symbol: grid.frequency_norms().iter().map(|&e| bracket(e).powf(2.0 * s)).collect(),
        }
    }

    fn weightless(&self) -> bool {
        self.sqrt_weight.iter().all(|&w| w == 1.0)
    }

    fn apply_b(&self, x: &mut [Complex64]) {
        fft::forward(x, self.grid.dim(), self.grid.n());
        for (z, m) in x.iter_mut().zip(&self.symbol) {
            *z *= m;
        }
        fft::inverse(x, self.grid.dim(), self.grid.n());
    }

    fn apply_symmetric(&self, u: &[Complex64]) -> Vec<Complex64> {
        let mut x: Vec<Complex64> = u.iter().zip(&self.sqrt_weight).map(|(z, w)| z * w).collect();
        self.apply_b(&mut x);
        for (z, w) in x.iter_mut().zip(&self.sqrt_weight) {
            *z *= w;
        }
        x
    }

    /// `A f` on samples.
    pub fn apply(&self, f: &SpectralField) -> Result<SpectralField> {
        let mut x = f.samples().to_vec();
        self.apply_b(&mut x);
        for (z, w) in x.iter_mut().zip(&self.sqrt_weight) {
            *z *= w * w;
        }
        SpectralField::from_samples(self.grid, x)
    }

    /// `e^{−τA} f`.
    pub fn propagate(&self, f: &SpectralField, tau: f64) -> Result<SpectralField> {
        if self.weightless() {
            let sym = &self.symbol;
            return f.map_coefficients(|i| Complex64::new((-tau * sym[i]).exp(), 0.0));
        }
        let u: Vec<Complex64> = f.samples().iter().zip(&self.sqrt_weight).map(|(z, w)| z / w).collect();
        let scale = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let out = expv(&|x: &[Complex64]| self.apply_symmetric(x), &u, tau, KRYLOV_TOL * scale.max(f64::MIN_POSITIVE))
            .ok_or_else(|| Error::SchemeViolation { step: 0, detail: "Krylov iteration did not converge".into() })?;
        let back = out.iter().zip(&self.sqrt_weight).map(|(z, w)| z * w).collect();
        SpectralField::from_samples(self.grid, back)
    }
}

/// Evolves `∂_t f + ⟨v⟩^γ⟨D⟩^{2s} f = 0` from `f0` over `[0, T]` in
/// `p.steps` exponential steps, keeping every step.
pub fn evolve_toy(f0: &SpectralField, p: &ToyParams) -> Result<Trajectory> {
    if f0.grid() != &p.grid {
        return Err(Error::GridMismatch);
    }
    let op = ToyOperator::new(p.grid, p.prm.gamma(), p.prm.s());
    let dt = p.t_final / p.steps as f64;
    let mut times = vec![0.0];
    let mut snapshots = vec![f0.clone()];
    for step in 1..=p.steps {
        let prev = snapshots.last().expect("nonempty");
        let next = op.propagate(prev, dt).map_err(|e| match e {
            Error::SchemeViolation { detail, .. } => Error::SchemeViolation { step, detail },
            other => other,
        })?;
        let (a, b) = (prev.l2_norm(), next.l2_norm());
        if b > a * (1.0 + GROWTH_TOLERANCE) {
            return Err(Error::SchemeViolation {
                step,
                detail: format!("L² norm grew from {a:e} to {b:e}"),
            });
        }
        times.push(step as f64 * dt);
        snapshots.push(next);
    }
    Ok(Trajectory { times, snapshots })
}

/// `e^{−a0⟨v⟩²} F` with `F` broadband noise of equal energy per frequency shell,
/// tapered by a wide Gaussian so the product is smooth and decaying.
pub fn broadband_initial_data(grid: VelocityGrid, a0: f64, seed: u64) -> Result<SpectralField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norms = grid.frequency_norms();
    let shell = |e: f64| if e < 1.0 { -1 } else { e.log2().floor() as i32 };
    let mut counts = std::collections::HashMap::new();
    for &e in &norms {
        *counts.entry(shell(e)).or_insert(0usize) += 1;
    }
    let coefs: Vec<Complex64> = norms
        .iter()
        .map(|&e| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im) / (counts[&shell(e)] as f64).sqrt()
        })
        .collect();
    let noise = SpectralField::from_coefficients(grid, coefs)?;
    let taper = grid.half_width() * 3.0 / 8.0;
    let d = grid.dim();
    noise.map_samples(|i| {
        let p = grid.point(i);
        let r2: f64 = p[..d].iter().map(|x| x * x).sum();
        let w = (-a0 * (1.0 + r2)).exp() * (-r2 / (2.0 * taper * taper)).exp();
        Complex64::new(w, 0.0)
    })?
    .map_values(|z| Complex64::new(z.re, 0.0))
}
