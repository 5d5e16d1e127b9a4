//! Toy evolution: measured blocks against the closed-form law and the Gevrey
//! slope read off the evolved field.

use super::relative_error;
use crate::config::EvolveParams;
use crate::report::{cell, Outcome, Table};
use crate::Context;
use anyhow::Result;
use kgl_core::dyadic::BumpPair;
use kgl_core::spectral::VelocityGrid;
use kgl_core::toy::{pde_consistency, ToyParams};
use kgl_core::SoftPotentialParams;

pub fn run(p: &EvolveParams, ctx: &Context) -> Result<Outcome> {
    let prm = SoftPotentialParams::new(p.gamma, p.s)?;
    let grid = VelocityGrid::new(1, p.grid_n, p.grid_l)?;
    let toy = ToyParams::new(prm, p.a0, p.t, grid, p.steps)?;
    let bump = BumpPair::new(4096)?;
    let pc = pde_consistency(&toy, ctx.seed, &bump, ctx.exec)?;
    let mut out = Outcome::default();

    let worst = pc.comparison.worst_discrepancy();
    let where_ = pc.comparison.worst.map_or(String::from("no comparable block"), |w| {
        format!("at (j={}, k={}): initial {:.3e}, measured {:.3e}, predicted {:.3e}", w.j, w.k, w.initial, w.measured, w.predicted)
    });
    out.check(
        "block-law-agreement",
        worst <= p.block_factor,
        format!("worst factor {worst:.3e} (bound {}) {where_}", p.block_factor),
    );
    out.metric("worst_block_factor", worst);
    out.metric("reference_norm", pc.reference_norm);

    let expected = 2.0 * prm.tau();
    match &pc.fit {
        Ok(fit) => {
            let err = relative_error(fit.slope, expected);
            out.check(
                "evolved-gevrey-slope",
                err <= p.slope_tolerance,
                format!("slope {:.4} vs {expected:.4} over j = {}..{}", fit.slope, fit.j_range.0, fit.j_range.1),
            );
            out.metric("evolved_slope", fit.slope);
            let mut g = Table::new("gevrey", &["j", "E_j", "fitted_line"]);
            for &(j, e) in &fit.exponents {
                g.push(vec![j.to_string(), cell(e), cell(fit.fitted(j))]);
            }
            out.tables.push(g);
        }
        Err(e) => out.check("evolved-gevrey-slope", false, format!("no fit: {e}")),
    }

    let mut cmp = Table::new("comparison", &["j", "k", "initial", "measured", "predicted", "discrepancy"]);
    for r in &pc.comparison.rows {
        cmp.push(vec![r.j.to_string(), r.k.to_string(), cell(r.initial), cell(r.measured), cell(r.predicted), cell(r.discrepancy)]);
    }
    out.tables.push(cmp);
    let mut blocks = Table::new("blocks", &["j", "k", "initial", "final"]);
    for ((j, k, a), (_, _, b)) in pc.initial_blocks.entries().into_iter().zip(pc.final_blocks.entries()) {
        blocks.push(vec![j.to_string(), k.to_string(), cell(a), cell(b)]);
    }
    out.tables.push(blocks);
    Ok(out)
}
