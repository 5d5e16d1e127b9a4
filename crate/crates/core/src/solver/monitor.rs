use super::{omega, PhaseField, PhaseTrajectory, RegularizedProblem};
use crate::error::{invalid, Result};
use crate::exec::pairwise_sum;
use crate::spectral::bracket;
use serde::Serialize;

/// Relative slack on the discrete Grönwall bound, covering rounding only.
pub const GRONWALL_SLACK: f64 = 1e-12;

/// One time node of the energy monitor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySample {
    pub t: f64,
    /// `‖ω g(t)‖`.
    pub weighted_norm: f64,
    /// `‖⟨v⟩ωg‖² + ε‖∇(ωg)‖² + ε‖⟨v⟩^{1/(1−s)}ωg‖²` at this node.
    pub dissipation_rate: f64,
    /// Trapezoidal integral of the rate up to `t`.
    pub dissipation_integral: f64,
    /// Initial weighted norm plus the accumulated source contribution.
    pub bound: f64,
    /// `bound − weighted_norm`; negative values are violations.
    pub gronwall_residual: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub samples: Vec<EnergySample>,
    pub sup_weighted_norm: f64,
    pub dissipation_integral: f64,
    pub flagged_times: Vec<f64>,
}

impl EnergyReport {
    pub fn passed(&self) -> bool {
        self.flagged_times.is_empty()
    }
}

/// Dissipation rate of `g` at time `t`.
pub fn dissipation_rate(g: &PhaseField, problem: &RegularizedProblem, t: f64) -> f64 {
    let a0 = problem.a0;
    let wg = g.velocity_weight(|v| omega(a0, t, v));
    let moment = wg.weighted_l2(bracket).powi(2);
    if problem.eps == 0.0 {
        return moment;
    }
    let p = 1.0 / (1.0 - problem.prm.s());
    let gradient = wg.gradient_norm_sq();
    let confinement = wg.weighted_l2(|v| bracket(v).powf(p)).powi(2);
    moment + problem.eps * (gradient + confinement)
}

/// Sup-in-time weighted norm, time-integrated dissipation, and the discrete
/// Grönwall bound `‖ωg_n‖ ≤ ‖ωg_0‖ + Σ_m dt/2 (‖ω_m S_m‖ + ‖ω_m S_{m+1}‖)`.
pub fn energy_monitor(
    traj: &PhaseTrajectory,
    problem: &RegularizedProblem,
    sources: Option<&[PhaseField]>,
) -> Result<EnergyReport> {
    if let Some(s) = sources {
        if s.len() != traj.snapshots.len() {
            return Err(invalid("sources", "one source per time node is required"));
        }
    }
    let a0 = problem.a0;
    let mut samples: Vec<EnergySample> = Vec::with_capacity(traj.snapshots.len());
    let mut bound = 0.0;
    let mut integral = 0.0;
    for (n, (&t, g)) in traj.times.iter().zip(&traj.snapshots).enumerate() {
        let weighted_norm = g.omega_norm(a0, t);
        let rate = dissipation_rate(g, problem, t);
        if n == 0 {
            bound = weighted_norm;
        } else {
            let prev = &samples[n - 1];
            let dt = t - prev.t;
            integral += 0.5 * dt * (prev.dissipation_rate + rate);
            if let Some(s) = sources {
                let t_prev = prev.t;
                bound += 0.5 * dt * (s[n - 1].omega_norm(a0, t_prev) + s[n].omega_norm(a0, t_prev));
            }
        }
        let residual = bound - weighted_norm;
        samples.push(EnergySample {
            t,
            weighted_norm,
            dissipation_rate: rate,
            dissipation_integral: integral,
            bound,
            gronwall_residual: residual,
            flagged: residual < -GRONWALL_SLACK * bound,
        });
    }
    let sup_weighted_norm = samples.iter().map(|s| s.weighted_norm).fold(0.0, f64::max);
    let flagged_times = samples.iter().filter(|s| s.flagged).map(|s| s.t).collect();
    Ok(EnergyReport { samples, sup_weighted_norm, dissipation_integral: integral, flagged_times })
}

/// Reference constants `m₀ ≤ mass ≤ M₀`, energy `≤ E₀`, entropy `≤ H₀` of the
/// admissible class. Flags fire outside the doubled envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentBounds {
    pub mass_lower: f64,
    pub mass_upper: f64,
    pub energy: f64,
    pub entropy: f64,
}

/// Velocity moments per spatial node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KineticMoments {
    pub mass: Vec<f64>,
    pub energy: Vec<f64>,
    /// `∫ f₊ log(1 + f₊) dv`; the negative part of a spectral solution is
    /// excluded so the logarithm stays defined.
    pub entropy: Vec<f64>,
}

fn mean(v: &[f64]) -> f64 {
    pairwise_sum(v) / v.len() as f64
}

impl KineticMoments {
    pub fn mean_mass(&self) -> f64 {
        mean(&self.mass)
    }

    pub fn mean_energy(&self) -> f64 {
        mean(&self.energy)
    }

    pub fn mean_entropy(&self) -> f64 {
        mean(&self.entropy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdmissibilityFlags {
    /// Some node has mass below `m₀/2`.
    pub vacuum: bool,
    pub excess_mass: bool,
    pub excess_energy: bool,
    pub excess_entropy: bool,
}

impl AdmissibilityFlags {
    pub fn admissible(&self) -> bool {
        !(self.vacuum || self.excess_mass || self.excess_energy || self.excess_entropy)
    }
}

/// Rectangle-rule moments of the real part of `f`, exact to spectral accuracy
/// for smooth periodic or rapidly decaying data.
pub fn moments(f: &PhaseField) -> KineticMoments {
    let n = f.grid().n();
    let h = f.grid().spacing();
    let mut out = KineticMoments { mass: Vec::new(), energy: Vec::new(), entropy: Vec::new() };
    for line in f.samples().chunks(n) {
        let mut mass = Vec::with_capacity(n);
        let mut energy = Vec::with_capacity(n);
        let mut entropy = Vec::with_capacity(n);
        for (j, z) in line.iter().enumerate() {
            let v = f.grid().coordinate(j);
            let plus = z.re.max(0.0);
            mass.push(z.re);
            energy.push(z.re * v * v);
            entropy.push(plus * plus.ln_1p());
        }
        out.mass.push(pairwise_sum(&mass) * h);
        out.energy.push(pairwise_sum(&energy) * h);
        out.entropy.push(pairwise_sum(&entropy) * h);
    }
    out
}

pub fn admissibility(m: &KineticMoments, bounds: &MomentBounds) -> AdmissibilityFlags {
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    AdmissibilityFlags {
        vacuum: min(&m.mass) < bounds.mass_lower / 2.0,
        excess_mass: max(&m.mass) > 2.0 * bounds.mass_upper,
        excess_energy: max(&m.energy) > 2.0 * bounds.energy,
        excess_entropy: max(&m.entropy) > 2.0 * bounds.entropy,
    }
}

/// `(t, min_x,v Re g(t))` for every snapshot. Measurement only.
pub fn positivity_check(traj: &PhaseTrajectory) -> Vec<(f64, f64)> {
    traj.times.iter().zip(&traj.snapshots).map(|(&t, g)| (t, g.min_real())).collect()
}

/// Taylor coefficients `u_j = f^{(j)}(v)/j!` of `f = (1+v²)^a` for `j ≤ order`,
/// from `(1+v²)(j+1)u_{j+1} = 2(a−j) v u_j + (2a−j+1) u_{j−1}`.
pub fn bracket_power_taylor(a: f64, v: f64, order: usize) -> Vec<f64> {
    let w = 1.0 + v * v;
    let mut u = vec![w.powf(a)];
    if order >= 1 {
        u.push(2.0 * a * v * w.powf(a - 1.0));
    }
    for j in 1..order {
        let jf = j as f64;
        let next = (2.0 * (a - jf) * v * u[j] + (2.0 * a - jf + 1.0) * u[j - 1]) / (w * (jf + 1.0));
        u.push(next);
    }
    u
}

/// Smallest `R` with `|∂_v^j ⟨v⟩^{2/(1−s)}| ≤ ⟨v⟩^{2/(1−s)−1} R^j j!` over the
/// sampled speeds and `1 ≤ j ≤ order`.
pub fn confinement_derivative_constant(s: f64, v_max: f64, samples: usize, order: usize) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid("s", format!("{s} not in (0, 1)")));
    }
    if samples < 2 || order == 0 || !(v_max > 0.0) {
        return Err(invalid("samples", "need at least two speeds, one order and v_max > 0"));
    }
    let a = 1.0 / (1.0 - s);
    let mut r = 0.0f64;
    for i in 0..samples {
        let v = v_max * i as f64 / (samples - 1) as f64;
        let denom = bracket(v).powf(2.0 * a - 1.0);
        for (j, u) in bracket_power_taylor(a, v, order).iter().enumerate().skip(1) {
            r = r.max((u.abs() / denom).powf(1.0 / j as f64));
        }
    }
    Ok(r)
}
