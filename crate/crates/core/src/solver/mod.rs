//! Regularized linear kinetic problem
//! `∂_t g + v ∂_x g + ε(⟨v⟩^{2/(1−s)} − Δ_{x,v}) g = S`
//! on a periodic spatial axis times a truncated velocity line, with a Picard
//! iteration whose source is the toy dissipative operator applied to the
//! previous iterate.
//!
//! The collision operator is replaced throughout by the surrogate
//! `−⟨v⟩^γ⟨D_v⟩^{2s}`; every contraction finding refers to that surrogate.

mod field;
mod monitor;
mod picard;

pub use field::*;
pub use monitor::*;
pub use picard::*;

use crate::error::{invalid, Error, Result};
use crate::params::SoftPotentialParams;
use crate::spectral::{bracket, fft, VelocityGrid};
use num_complex::Complex64;

/// Parameters of one regularized solve on `[0, T]` with `steps` uniform steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedProblem {
    pub eps: f64,
    pub prm: SoftPotentialParams,
    pub a0: f64,
    pub grid: VelocityGrid,
    pub x_points: usize,
    pub t_final: f64,
    pub steps: usize,
}

impl RegularizedProblem {
    /// Requires `0 < ε ≤ 1`.
    pub fn new(
        eps: f64,
        prm: SoftPotentialParams,
        a0: f64,
        grid: VelocityGrid,
        x_points: usize,
        t_final: f64,
        steps: usize,
    ) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(invalid("eps", format!("{eps} must be positive")));
        }
        Self::new_diagnostic(eps, prm, a0, grid, x_points, t_final, steps)
    }

    /// Also admits `ε = 0`, leaving pure transport plus source.
    pub fn new_diagnostic(
        eps: f64,
        prm: SoftPotentialParams,
        a0: f64,
        grid: VelocityGrid,
        x_points: usize,
        t_final: f64,
        steps: usize,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(invalid("eps", format!("{eps} not in [0, 1]")));
        }
        if !(a0 > 0.0 && a0.is_finite()) {
            return Err(invalid("a0", format!("{a0} must be positive")));
        }
        if !(t_final > 0.0 && t_final <= a0 / 2.0) {
            return Err(invalid("t_final", format!("{t_final} not in (0, a0/2]")));
        }
        if steps == 0 {
            return Err(invalid("steps", "must be positive"));
        }
        if grid.dim() != 1 {
            return Err(Error::InvalidGrid("the phase-space solver uses one velocity dimension".into()));
        }
        check_x_points(x_points)?;
        Ok(Self { eps, prm, a0, grid, x_points, t_final, steps })
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|n| n as f64 * self.dt()).collect()
    }

    /// `2/(1−s)`.
    pub fn weight_exponent(&self) -> f64 {
        2.0 / (1.0 - self.prm.s())
    }

    /// Same problem on a shorter horizon with the same number of steps.
    pub fn with_horizon(&self, t_final: f64) -> Result<Self> {
        Self::new_diagnostic(self.eps, self.prm, self.a0, self.grid, self.x_points, t_final, self.steps)
    }
}

/// Precomputed split factors for a fixed step size.
pub struct StepOperator {
    shape: [usize; 2],
    dt: f64,
    /// `e^{−(i v ξ + ε⟨v⟩^q) dt/2}` on the `(ξ, v)` layout.
    half: Vec<Complex64>,
    /// `e^{−ε(ξ² + η²) dt}` on the `(ξ, η)` layout.
    diffusion: Vec<f64>,
}

impl StepOperator {
    pub fn new(problem: &RegularizedProblem) -> Self {
        let m = problem.x_points;
        let grid = problem.grid;
        let n = grid.n();
        let dt = problem.dt();
        let eps = problem.eps;
        let q = problem.weight_exponent();
        let mut half = Vec::with_capacity(m * n);
        let mut diffusion = Vec::with_capacity(m * n);
        for i in 0..m {
            let xi = x_wavenumber(m, i);
            for j in 0..n {
                let v = grid.coordinate(j);
                let eta = grid.wavenumber(j);
                let phase = Complex64::new(-eps * bracket(v).powf(q), -v * xi) * (dt / 2.0);
                half.push(phase.exp());
                diffusion.push((-eps * (xi * xi + eta * eta) * dt).exp());
            }
        }
        Self { shape: [m, n], dt, half, diffusion }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Homogeneous Strang step `e^{A dt/2} e^{B dt} e^{A dt/2}` in place, with
    /// `A` the transport and velocity-weight part and `B` the Laplacian.
    pub fn propagate(&self, data: &mut [Complex64]) {
        let spatial = self.shape[0] > 1;
        if spatial {
            fft::transform_axes(data, &self.shape, &[0], fft::Direction::Forward);
        }
        self.apply_half(data);
        fft::transform_axes(data, &self.shape, &[1], fft::Direction::Forward);
        for (z, d) in data.iter_mut().zip(&self.diffusion) {
            *z *= d;
        }
        fft::transform_axes(data, &self.shape, &[1], fft::Direction::Inverse);
        self.apply_half(data);
        if spatial {
            fft::transform_axes(data, &self.shape, &[0], fft::Direction::Inverse);
        }
    }

    fn apply_half(&self, data: &mut [Complex64]) {
        for (z, h) in data.iter_mut().zip(&self.half) {
            *z *= h;
        }
    }
}

/// `g_{n+1} = Φ(g_n + dt/2·S_n) + dt/2·S_{n+1}`, with `Φ` the homogeneous step.
pub fn step_regularized(
    op: &StepOperator,
    g: &PhaseField,
    source_now: Option<&PhaseField>,
    source_next: Option<&PhaseField>,
    step_index: usize,
) -> Result<PhaseField> {
    let half_dt = op.dt / 2.0;
    let mut next = match source_now {
        Some(s) => g.axpy(half_dt, s)?,
        None => g.clone(),
    };
    op.propagate(next.samples_mut());
    if let Some(s) = source_next {
        next = next.axpy(half_dt, s)?;
    }
    if let Some(bad) = next.samples().iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::SchemeViolation {
            step: step_index,
            detail: format!("non-finite sample at flat index {bad} (t = {})", (step_index + 1) as f64 * op.dt),
        });
    }
    Ok(next)
}

/// Snapshots at the uniform time nodes of a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<PhaseField>,
}

impl PhaseTrajectory {
    pub fn last(&self) -> &PhaseField {
        self.snapshots.last().expect("trajectory holds the initial state")
    }

    /// `sup_n ‖ω(t_n)(self − other)(t_n)‖`.
    pub fn sup_omega_distance(&self, other: &Self, a0: f64) -> Result<f64> {
        let mut sup = 0.0f64;
        for ((t, a), b) in self.times.iter().zip(&self.snapshots).zip(&other.snapshots) {
            sup = sup.max(a.sub(b)?.omega_norm(a0, *t));
        }
        Ok(sup)
    }
}

/// Solves on `[0, T]` from `f_in`, with an optional source sampled at every
/// time node.
pub fn solve(problem: &RegularizedProblem, f_in: &PhaseField, sources: Option<&[PhaseField]>) -> Result<PhaseTrajectory> {
    if f_in.x_points() != problem.x_points || f_in.grid() != problem.grid {
        return Err(Error::GridMismatch);
    }
    if let Some(s) = sources {
        if s.len() != problem.steps + 1 {
            return Err(invalid("sources", format!("expected {} time nodes, got {}", problem.steps + 1, s.len())));
        }
    }
    let op = StepOperator::new(problem);
    let mut snapshots = Vec::with_capacity(problem.steps + 1);
    snapshots.push(f_in.clone());
    for n in 0..problem.steps {
        let (now, next) = match sources {
            Some(s) => (Some(&s[n]), Some(&s[n + 1])),
            None => (None, None),
        };
        let g = step_regularized(&op, &snapshots[n], now, next, n)?;
        snapshots.push(g);
    }
    Ok(PhaseTrajectory { times: problem.times(), snapshots })
}

/// `−⟨v⟩^γ ⟨D_v⟩^{2s} h`, line by line in `x`.
pub fn surrogate_collision(h: &PhaseField, prm: &SoftPotentialParams) -> PhaseField {
    let (gamma, s) = (prm.gamma(), prm.s());
    h.velocity_multiplier(|eta| bracket(eta).powf(2.0 * s)).velocity_weight(|v| -bracket(v).powf(gamma))
}

/// One step of the scalar reduction `g' = −a g + S(t)` with the same
/// trapezoidal source treatment as [`step_regularized`].
pub fn scalar_step(g: f64, rate: f64, dt: f64, source_now: f64, source_next: f64) -> f64 {
    (-rate * dt).exp() * (g + 0.5 * dt * source_now) + 0.5 * dt * source_next
}

/// Integrates the scalar reduction over `[0, T]`.
pub fn scalar_solve(g0: f64, rate: f64, source: impl Fn(f64) -> f64, t_final: f64, steps: usize) -> f64 {
    let dt = t_final / steps as f64;
    (0..steps).fold(g0, |g, n| scalar_step(g, rate, dt, source(n as f64 * dt), source((n + 1) as f64 * dt)))
}

/// Observed order from errors at `steps`, `2·steps`, `4·steps` against the
/// closed form of `g' = −a g + cos t`, `g(0) = 1`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RichardsonReport {
    pub errors: Vec<f64>,
    pub slopes: Vec<f64>,
    pub order: f64,
}

pub fn richardson_order(rate: f64, t_final: f64, base_steps: usize) -> RichardsonReport {
    let a = rate;
    let exact = (-a * t_final).exp() * (1.0 - a / (1.0 + a * a)) + (a * t_final.cos() + t_final.sin()) / (1.0 + a * a);
    let errors: Vec<f64> = (0..4)
        .map(|r| (scalar_solve(1.0, a, f64::cos, t_final, base_steps << r) - exact).abs())
        .collect();
    let slopes: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let order = slopes.iter().sum::<f64>() / slopes.len() as f64;
    RichardsonReport { errors, slopes, order }
}
