//! Inequality witnesses over the seeded corpora.

use crate::config::InequalityParams;
use crate::report::{cell, Outcome, Table};
use crate::Context;
use anyhow::Result;
use kgl_core::inequalities::{standard_suite, SuiteSettings};

pub fn run(p: &InequalityParams, ctx: &Context) -> Result<Outcome> {
    let settings = SuiteSettings {
        seed: ctx.seed,
        corpus_size: p.corpus_size,
        gamma: p.gamma,
        s: p.s,
        eps_values: p.eps_values.clone(),
        thetas: p.thetas.clone(),
    };
    let reports = standard_suite(&settings, ctx.exec)?;
    let mut out = Outcome::default();
    let mut table = Table::new("inequalities", &["inequality_id", "corpus_size", "min_margin", "fitted_constant", "refinement_ratio", "failures"]);
    for r in &reports {
        let refinement = r.refinement_ratio.map_or(String::new(), cell);
        out.check(
            r.inequality_id.clone(),
            r.passed(),
            format!(
                "{} members, constant {:.4e}, min margin {:.3e}, {} failures",
                r.corpus_size,
                r.fitted_constant,
                r.min_margin,
                r.failures.len()
            ),
        );
        out.metric(format!("{}.fitted_constant", r.inequality_id), r.fitted_constant);
        out.metric(format!("{}.min_margin", r.inequality_id), r.min_margin);
        if let Some(x) = r.refinement_ratio {
            out.metric(format!("{}.refinement_ratio", r.inequality_id), x);
        }
        for (k, v) in &r.metrics {
            out.metric(format!("{}.{k}", r.inequality_id), *v);
        }
        table.push(vec![
            r.inequality_id.clone(),
            r.corpus_size.to_string(),
            cell(r.min_margin),
            cell(r.fitted_constant),
            refinement,
            r.failures.len().to_string(),
        ]);
    }
    out.tables.push(table);
    out.detail("reports", &reports)?;
    Ok(out)
}
