//! Picard iteration of the regularized linear problem with its monitors.

use crate::config::PicardParams;
use crate::report::{cell, Outcome, Table};
use crate::Context;
use anyhow::Result;
use kgl_core::solver::{
    energy_monitor, moments, picard_map, picard_with_retry, richardson_order, surrogate_collision, PhaseField,
    PicardSummary, RegularizedProblem,
};
use kgl_core::spectral::VelocityGrid;
use kgl_core::SoftPotentialParams;

/// Fixed-point residual allowed for the accepted limit, relative to `‖ω f_in‖`.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-6;
/// Admissible observed order of the time integrator.
pub const ORDER_BAND: (f64, f64) = (1.8, 2.2);
/// Negative excursions below this fraction of `‖f‖∞` are reported.
pub const POSITIVITY_ENVELOPE: f64 = 1e-8;

/// `e^{−v²}`, modulated in `x` when a spatial axis is present.
fn initial_data(x_points: usize, grid: VelocityGrid) -> Result<PhaseField> {
    let modulate = x_points > 1;
    Ok(PhaseField::from_fn(x_points, grid, |x, v| {
        let profile = (-v * v).exp();
        if modulate {
            profile * (1.0 + 0.5 * x.cos())
        } else {
            profile
        }
    })?)
}

pub fn run(p: &PicardParams, _ctx: &Context) -> Result<Outcome> {
    let prm = SoftPotentialParams::new(p.gamma, p.s)?;
    let grid = VelocityGrid::new(1, p.grid_n, p.grid_l)?;
    let x_points = if p.x_axis { p.x_points } else { 1 };
    let problem = RegularizedProblem::new(p.eps, prm, p.a0, grid, x_points, p.t, p.steps)?;
    let f_in = initial_data(x_points, grid)?;
    let outcome = picard_with_retry(&f_in, &problem, p.nmax)?;
    let state = outcome.final_attempt();
    let mut out = Outcome::default();

    out.check(
        "picard-contraction",
        outcome.accepted().is_some(),
        format!(
            "{} attempt(s), final T = {}, {} iterations, ratios {:?}",
            outcome.attempts.len(),
            state.t_final,
            state.iterations,
            state.ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>()
        ),
    );
    out.check("picard-envelope", state.envelope_holds(), "difference norms under the geometric envelope");
    out.check(
        "picard-fixed-point",
        state.fixed_point_residual <= FIXED_POINT_TOLERANCE,
        format!("residual {:.3e} (bound {FIXED_POINT_TOLERANCE:e})", state.fixed_point_residual),
    );
    out.metric("fixed_point_residual", state.fixed_point_residual);
    out.metric("t_final", state.t_final);
    out.metric("iterations", state.iterations as f64);
    out.detail("picard", PicardSummary::from(state))?;

    // One more application of the map, so the monitored trajectory and its
    // sources match exactly.
    let accepted = problem.with_horizon(state.t_final)?;
    let sources: Vec<PhaseField> = state.limit.snapshots.iter().map(|g| surrogate_collision(g, &prm)).collect();
    let traj = picard_map(&accepted, &f_in, &state.limit)?;
    let energy = energy_monitor(&traj, &accepted, Some(&sources))?;
    out.check(
        "energy-bound",
        energy.passed(),
        format!("sup weighted norm {:.6e}, {} flagged times", energy.sup_weighted_norm, energy.flagged_times.len()),
    );
    out.metric("sup_weighted_norm", energy.sup_weighted_norm);
    out.metric("dissipation_integral", energy.dissipation_integral);

    let scale = f_in.max_abs();
    let mut worst_min = f64::INFINITY;
    let mut series = Table::new("timeseries", &["t", "weighted_norm", "dissipation", "mass", "energy", "entropy", "min_value"]);
    for (sample, g) in energy.samples.iter().zip(&traj.snapshots) {
        let m = moments(g);
        let min = g.min_real();
        worst_min = worst_min.min(min);
        series.push(vec![
            cell(sample.t),
            cell(sample.weighted_norm),
            cell(sample.dissipation_integral),
            cell(m.mean_mass()),
            cell(m.mean_energy()),
            cell(m.mean_entropy()),
            cell(min),
        ]);
    }
    out.check(
        "positivity-envelope",
        worst_min >= -POSITIVITY_ENVELOPE * scale,
        format!("min value {worst_min:.3e} against -{POSITIVITY_ENVELOPE:e} * {scale:.3}"),
    );
    out.metric("min_value", worst_min);
    out.tables.push(series);

    let rate = p.eps + 1.0;
    let rich = richardson_order(rate, state.t_final, p.steps);
    out.check(
        "time-order",
        rich.order >= ORDER_BAND.0 && rich.order <= ORDER_BAND.1,
        format!("observed order {:.4} (band {:?})", rich.order, ORDER_BAND),
    );
    out.metric("time_order", rich.order);
    out.detail("richardson", &rich)?;

    let mut ratios = Table::new("ratios", &["n", "diff_norm", "ratio"]);
    for (n, d, r) in state.ratio_rows() {
        ratios.push(vec![n.to_string(), cell(d), r.map_or(String::new(), cell)]);
    }
    out.tables.push(ratios);
    Ok(out)
}
