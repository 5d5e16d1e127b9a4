//! Sharpness infimum against the predicted growth, plus the Gevrey fit of the
//! closed-form block law.

use super::relative_error;
use crate::config::SharpnessParams;
use crate::report::{cell, Outcome, Table};
use crate::Context;
use anyhow::Result;
use kgl_core::inequalities::regression_slope;
use kgl_core::toy::{estimate_gevrey_index, predicted_index, sharpness_sweep, BlockLawState, GevreySource};
use kgl_core::SoftPotentialParams;

/// Allowed relative error of the law-fit slope and index.
pub const FIT_TOLERANCE: f64 = 0.01;
/// Allowed relative error of the sharpness regression slope.
pub const SLOPE_TOLERANCE: f64 = 0.05;
/// Band for `value / predicted`.
pub const RATIO_BAND: (f64, f64) = (0.125, 8.0);

pub fn run(p: &SharpnessParams, ctx: &Context) -> Result<Outcome> {
    let prm = SoftPotentialParams::new(p.gamma, p.s)?;
    let expected_slope = 2.0 * prm.tau();
    let mut out = Outcome::default();

    let sweep = sharpness_sweep(1..=p.j_max, &prm, p.a0, p.k_max, ctx.exec)?;
    let log_values: Vec<f64> = sweep.iter().map(|r| r.value.log2()).collect();
    let js: Vec<f64> = sweep.iter().map(|r| r.j as f64).collect();
    let mut table = Table::new("sharpness", &["j", "k_star", "value", "predicted", "ratio", "slope"]);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for (i, r) in sweep.iter().enumerate() {
        let predicted = r.predicted(&prm);
        let ratio = r.value / predicted;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        let slope = if i == 0 { String::new() } else { cell(regression_slope(&js[..=i], &log_values[..=i])) };
        table.push(vec![r.j.to_string(), r.k_star.to_string(), cell(r.value), cell(predicted), cell(ratio), slope]);
    }
    out.check(
        "sharpness-band",
        lo >= RATIO_BAND.0 && hi <= RATIO_BAND.1,
        format!("value/predicted in [{lo:.4}, {hi:.4}] over j = 1..{}", p.j_max),
    );
    let from = sweep.iter().position(|r| r.j >= p.slope_j_min).unwrap_or(0);
    let slope = regression_slope(&js[from..], &log_values[from..]);
    out.check(
        "sharpness-slope",
        relative_error(slope, expected_slope) <= SLOPE_TOLERANCE,
        format!("slope {slope:.5} vs {expected_slope:.5} over j = {}..{}", p.slope_j_min, p.j_max),
    );
    out.metric("sharpness_slope", slope);
    out.metric("ratio_min", lo);
    out.metric("ratio_max", hi);
    out.tables.push(table);

    let law = BlockLawState::flat(prm, p.a0, p.law_time, p.j_max, p.law_k_max)?;
    let fit = estimate_gevrey_index(GevreySource::Law(&law), (p.fit_j_min, p.j_max))?;
    let index = predicted_index(&prm);
    out.check(
        "law-fit-slope",
        relative_error(fit.slope, expected_slope) <= FIT_TOLERANCE,
        format!("fitted slope {:.5} vs {expected_slope:.5}", fit.slope),
    );
    let index_ok = if index == 1.0 {
        fit.clamped_index == 1.0
    } else {
        relative_error(fit.clamped_index, index) <= FIT_TOLERANCE
    };
    out.check(
        "gevrey-index",
        index_ok,
        format!("clamped index {:.5} vs predicted {index:.5}", fit.clamped_index),
    );
    out.metric("fit_slope", fit.slope);
    out.metric("fit_residual", fit.residual);
    out.metric("clamped_index", fit.clamped_index);
    out.metric("predicted_index", index);

    let mut gevrey = Table::new("gevrey", &["j", "E_j", "fitted_line"]);
    for &(j, e) in &fit.exponents {
        gevrey.push(vec![j.to_string(), cell(e), cell(fit.fitted(j))]);
    }
    out.tables.push(gevrey);
    let mut blocks = Table::new("blocks", &["j", "k", "log_magnitude"]);
    for (j, k, lm) in law.entries() {
        blocks.push(vec![j.to_string(), k.to_string(), cell(lm)]);
    }
    out.tables.push(blocks);
    Ok(out)
}
