use super::{solve, surrogate_collision, PhaseField, PhaseTrajectory, RegularizedProblem};
use crate::error::{invalid, Result};
use serde::Serialize;

/// Envelope the eventual difference ratios must stay under.
pub const RATIO_ENVELOPE: f64 = 0.6;
/// Number of trailing ratios that decide contraction.
pub const EVENTUAL_WINDOW: usize = 3;
/// Differences below this fraction of `‖ω f_in‖` are at rounding level and end
/// the iteration.
pub const DIFFERENCE_FLOOR: f64 = 1e-11;
/// Largest number of horizon halvings after the first attempt.
pub const MAX_RETRIES: usize = 4;

/// Result of one Picard run on a fixed horizon.
#[derive(Debug, Clone)]
pub struct PicardState {
    pub t_final: f64,
    /// Number of iterates computed after `g⁰ = 0`.
    pub iterations: usize,
    /// `sup_t ‖ω(gⁿ − gⁿ⁻¹)‖` for `n = 1, 2, …`.
    pub diff_norms: Vec<f64>,
    /// `diff_norms[n] / diff_norms[n−1]`, defined from the second difference on.
    pub ratios: Vec<f64>,
    pub contracted: bool,
    /// `‖Ψ(g) − g‖ / ‖ω f_in‖` for the final iterate `g` and Picard map `Ψ`.
    pub fixed_point_residual: f64,
    pub reference_norm: f64,
    pub limit: PhaseTrajectory,
}

impl PicardState {
    /// `‖φⁿ‖ ≤ ‖φ¹‖ · 0.6^{n−1}` over every recorded difference.
    pub fn envelope_holds(&self) -> bool {
        let first = match self.diff_norms.first() {
            Some(&d) => d,
            None => return true,
        };
        self.diff_norms
            .iter()
            .enumerate()
            .all(|(n, &d)| d <= first * RATIO_ENVELOPE.powi(n as i32) * (1.0 + 1e-12))
    }

    /// `(n, diff_norm, ratio)` rows; the ratio is absent for `n = 1`.
    pub fn ratio_rows(&self) -> Vec<(usize, f64, Option<f64>)> {
        self.diff_norms
            .iter()
            .enumerate()
            .map(|(i, &d)| (i + 1, d, if i == 0 { None } else { self.ratios.get(i - 1).copied() }))
            .collect()
    }
}

/// One application of the Picard map: the solve with source built from `prev`.
pub fn picard_map(problem: &RegularizedProblem, f_in: &PhaseField, prev: &PhaseTrajectory) -> Result<PhaseTrajectory> {
    let sources: Vec<PhaseField> = prev.snapshots.iter().map(|g| surrogate_collision(g, &problem.prm)).collect();
    solve(problem, f_in, Some(&sources))
}

fn zero_trajectory(problem: &RegularizedProblem) -> Result<PhaseTrajectory> {
    let zero = PhaseField::zeros(problem.x_points, problem.grid)?;
    Ok(PhaseTrajectory { times: problem.times(), snapshots: vec![zero; problem.steps + 1] })
}

/// Iterates from `g⁰ = 0` on the horizon of `problem`.
pub fn picard_iterate(f_in: &PhaseField, problem: &RegularizedProblem, n_max: usize) -> Result<PicardState> {
    if n_max < 3 {
        return Err(invalid("n_max", format!("{n_max} must be at least 3")));
    }
    let a0 = problem.a0;
    let reference_norm = f_in.omega_norm(a0, 0.0);
    if !reference_norm.is_finite() {
        return Err(invalid("f_in", "weighted norm is not finite"));
    }
    let mut current = zero_trajectory(problem)?;
    let mut diff_norms = Vec::new();
    let floor = DIFFERENCE_FLOOR * reference_norm;
    for _ in 0..n_max {
        let next = picard_map(problem, f_in, &current)?;
        let d = next.sup_omega_distance(&current, a0)?;
        diff_norms.push(d);
        current = next;
        if d <= floor {
            break;
        }
    }
    // Ratios stop before differences reach the rounding floor.
    let ratios: Vec<f64> = diff_norms
        .windows(2)
        .take_while(|w| w[1] > floor)
        .map(|w| w[1] / w[0])
        .collect();
    let residual_abs = picard_map(problem, f_in, &current)?.sup_omega_distance(&current, a0)?;
    let fixed_point_residual = if reference_norm > 0.0 { residual_abs / reference_norm } else { residual_abs };
    let converged_early = diff_norms.last().is_some_and(|&d| d <= floor);
    let tail = &ratios[ratios.len().saturating_sub(EVENTUAL_WINDOW)..];
    let contracted = (converged_early || ratios.len() >= EVENTUAL_WINDOW) && tail.iter().all(|&r| r <= RATIO_ENVELOPE);
    Ok(PicardState {
        t_final: problem.t_final,
        iterations: diff_norms.len(),
        diff_norms,
        ratios,
        contracted,
        fixed_point_residual,
        reference_norm,
        limit: current,
    })
}

/// Picard runs on successively halved horizons until one contracts.
#[derive(Debug, Clone)]
pub struct PicardOutcome {
    pub attempts: Vec<PicardState>,
}

impl PicardOutcome {
    pub fn accepted(&self) -> Option<&PicardState> {
        self.attempts.last().filter(|s| s.contracted)
    }

    pub fn final_attempt(&self) -> &PicardState {
        self.attempts.last().expect("at least one attempt is made")
    }
}

/// Runs [`picard_iterate`] and halves `T` (keeping the step count) up to
/// [`MAX_RETRIES`] times while the iteration fails to contract. A final
/// non-contracting attempt is a finding, not an error.
pub fn picard_with_retry(f_in: &PhaseField, problem: &RegularizedProblem, n_max: usize) -> Result<PicardOutcome> {
    let mut attempts = Vec::new();
    let mut p = *problem;
    for attempt in 0..=MAX_RETRIES {
        let state = picard_iterate(f_in, &p, n_max)?;
        let done = state.contracted;
        attempts.push(state);
        if done || attempt == MAX_RETRIES {
            break;
        }
        p = p.with_horizon(p.t_final / 2.0)?;
    }
    Ok(PicardOutcome { attempts })
}

/// Compact, serializable view of a Picard run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PicardSummary {
    pub t_final: f64,
    pub iterations: usize,
    pub diff_norms: Vec<f64>,
    pub ratios: Vec<f64>,
    pub contracted: bool,
    pub envelope_holds: bool,
    pub fixed_point_residual: f64,
}

impl From<&PicardState> for PicardSummary {
    fn from(s: &PicardState) -> Self {
        Self {
            t_final: s.t_final,
            iterations: s.iterations,
            diff_norms: s.diff_norms.clone(),
            ratios: s.ratios.clone(),
            contracted: s.contracted,
            envelope_holds: s.envelope_holds(),
            fixed_point_residual: s.fixed_point_residual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SoftPotentialParams;
    use crate::spectral::VelocityGrid;

    fn setup(t: f64) -> (RegularizedProblem, PhaseField) {
        let prm = SoftPotentialParams::new(-1.0, 0.5).unwrap();
        let grid = VelocityGrid::new(1, 128, 6.0).unwrap();
        let p = RegularizedProblem::new(0.1, prm, 0.25, grid, 1, t, 32).unwrap();
        let f = PhaseField::from_fn(1, grid, |_, v| (-v * v).exp()).unwrap();
        (p, f)
    }

    #[test]
    fn zero_data_stays_zero() {
        let (p, f) = setup(0.1);
        let zero = PhaseField::zeros(1, f.grid()).unwrap();
        let s = picard_iterate(&zero, &p, 5).unwrap();
        assert!(s.diff_norms.iter().all(|&d| d == 0.0));
        assert_eq!(s.fixed_point_residual, 0.0);
        assert!(picard_iterate(&f, &p, 2).is_err());
    }

    #[test]
    fn first_difference_is_first_iterate() {
        let (p, f) = setup(0.05);
        let s = picard_iterate(&f, &p, 3).unwrap();
        let g1 = picard_map(&p, &f, &zero_trajectory(&p).unwrap()).unwrap();
        let sup = g1.times.iter().zip(&g1.snapshots).map(|(&t, g)| g.omega_norm(p.a0, t)).fold(0.0, f64::max);
        assert_eq!(s.diff_norms[0], sup);
    }

    #[test]
    fn gaussian_data_contracts() {
        let (p, f) = setup(0.1);
        let out = picard_with_retry(&f, &p, 15).unwrap();
        let s = out.accepted().expect("contraction");
        assert!(s.envelope_holds(), "{:?}", s.diff_norms);
        assert!(s.fixed_point_residual <= 1e-6, "{}", s.fixed_point_residual);
    }
}
