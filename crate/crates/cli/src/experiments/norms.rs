//! Block-sum characterization against the multiplier definition of the
//! weighted Sobolev norms.

use crate::config::NormParams;
use crate::report::{cell, Outcome, Table};
use crate::Context;
use anyhow::Result;
use kgl_core::corpus;
use kgl_core::dyadic::{characterize, measure_blocks, norm_equivalence_suite, BlockNormReport, BumpPair};
use kgl_core::exec::Exec;
use kgl_core::SoftPotentialParams;

pub fn run(p: &NormParams, ctx: &Context) -> Result<Outcome> {
    let prm = SoftPotentialParams::new(p.gamma, p.s)?;
    let pairs = [(0.0, 0.0), (1.0, 0.0), (0.0, prm.tau()), (p.gamma / 2.0, p.s)];
    let members = corpus::standard(ctx.seed, p.corpus_size);
    let grid = corpus::default_grid();
    let bump = BumpPair::new(4096)?;
    let reports = norm_equivalence_suite(&members, grid, &bump, &pairs, ctx.exec)?;
    let mut out = Outcome::default();
    let mut table = Table::new("norm_ratios", &["p", "m", "min_ratio", "max_ratio", "max_refinement_change", "tail_flags"]);
    for r in &reports {
        let id = format!("norm-equivalence[p={},m={}]", r.p, r.m);
        out.check(
            id.clone(),
            r.passed(),
            format!(
                "ratio in [{:.4}, {:.4}], refinement change {:.2e}, {} failures",
                r.min_ratio,
                r.max_ratio,
                r.max_refinement_change,
                r.failures.len()
            ),
        );
        out.metric(format!("{id}.min_ratio"), r.min_ratio);
        out.metric(format!("{id}.max_ratio"), r.max_ratio);
        table.push(vec![cell(r.p), cell(r.m), cell(r.min_ratio), cell(r.max_ratio), cell(r.max_refinement_change), r.tail_flags.to_string()]);
    }
    out.tables.push(table);

    // Per-block breakdown of the first corpus member at the last pair.
    if let Some(first) = members.first() {
        let f = first.function.sample(grid)?;
        let blocks = measure_blocks(&f, &bump, Exec::Sequential)?;
        let (bp, bm) = pairs[pairs.len() - 1];
        let report = characterize(&blocks, bp, bm);
        let mut t = Table::new("blocks", &BlockNormReport::CSV_HEADER);
        for r in &report.rows {
            t.push(vec![r.j.to_string(), r.k.to_string(), cell(r.block_l2), cell(r.weight_2kp), cell(r.weight_2mj), cell(r.contribution)]);
        }
        out.tables.push(t);
    }
    Ok(out)
}
