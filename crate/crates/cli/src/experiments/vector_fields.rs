//! Exact identities of the kinetic vector fields, the factorial ledger and the
//! convolution bound.

use crate::config::VectorFieldParams;
use crate::report::{cell, Outcome, Table};
use crate::Context;
use anyhow::{anyhow, Result};
use kgl_core::vector_fields::{
    commutator_sweep, convolution_bound, delta_ordering_sweep, leibniz_sweep, ledger_round_trip, ledger_table,
    ledger_value, log_ledger_value, mixed_commutator_sweep, polynomial_corpus, reconstruction_sweep,
    reference_parameters, IdentityReport, DIRECT_LIMIT,
};
use kgl_core::SoftPotentialParams;
use num_rational::Rational64;

/// Round-trip residual allowed per unit of `|ln L|`.
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-12;
/// Relative change of the convolution supremum between half and full range.
pub const STABILIZATION_TOLERANCE: f64 = 1e-6;

fn parse_deltas(raw: &[String]) -> Result<Vec<Rational64>> {
    raw.iter()
        .map(|s| s.trim().parse::<Rational64>().map_err(|e| anyhow!("delta {s:?}: {e}")))
        .collect()
}

fn record(out: &mut Outcome, r: &IdentityReport) {
    let first = r.failures.first().map_or(String::new(), |f| format!(", first: {f}"));
    out.check(
        r.identity_id.clone(),
        r.passed(),
        format!("{} inputs, {} failures{first}", r.corpus_size, r.failures.len()),
    );
    out.metric(format!("{}.failures", r.identity_id), r.failures.len() as f64);
}

pub fn run(p: &VectorFieldParams, ctx: &Context) -> Result<Outcome> {
    let deltas = parse_deltas(&p.deltas)?;
    let corpus = polynomial_corpus(ctx.seed, p.corpus_size, p.max_degree);
    let refs = reference_parameters();
    let mut out = Outcome::default();
    let mut reports = vec![
        commutator_sweep(&corpus, &deltas, p.k_max, ctx.exec)?,
        reconstruction_sweep(&corpus, &refs, ctx.exec)?,
        mixed_commutator_sweep(&corpus, (refs[0].delta1, refs[0].delta2), p.mixed_order, ctx.exec)?,
        delta_ordering_sweep(ctx.seed, p.parameter_sweep),
    ];
    if let Some(&d) = deltas.first() {
        reports.push(leibniz_sweep(&corpus, d, ctx.exec)?);
    }
    for r in &reports {
        record(&mut out, r);
    }
    out.detail("identities", &reports)?;

    let r = Rational64::new;
    let worked = &refs[0];
    let coefficients = (worked.spatial_coefficients(), worked.velocity_coefficients());
    out.check(
        "worked-coefficients",
        coefficients == ((r(-24, 1), r(24, 1)), (r(9, 1), r(-8, 1))),
        format!(
            "spatial ({}, {}), velocity ({}, {})",
            coefficients.0 .0, coefficients.0 .1, coefficients.1 .0, coefficients.1 .1
        ),
    );

    let e = SoftPotentialParams::new(p.gamma, p.s)?.gevrey_exponent();
    let rows = ledger_table(p.rho, e, p.ledger_k_max)?;
    let mut worst_round_trip = 0.0f64;
    let mut worst_direct = 0.0f64;
    for row in &rows {
        let rt = ledger_round_trip(p.rho, row.k, e)?;
        worst_round_trip = worst_round_trip.max(rt.abs() / (1.0 + row.log_value.abs()));
        if row.k <= DIRECT_LIMIT {
            let direct = ledger_value(p.rho, row.k, e)?;
            let via_log = log_ledger_value(p.rho, row.k, e)?.exp();
            worst_direct = worst_direct.max((direct / via_log - 1.0).abs());
        }
    }
    out.check(
        "ledger-round-trip",
        worst_round_trip <= ROUND_TRIP_TOLERANCE && worst_direct <= ROUND_TRIP_TOLERANCE,
        format!(
            "k <= {}: log round trip {worst_round_trip:.2e}, direct vs log {worst_direct:.2e} (bound {ROUND_TRIP_TOLERANCE:e})",
            p.ledger_k_max
        ),
    );
    out.metric("ledger_round_trip", worst_round_trip);
    out.metric("ledger_exponent", e);
    let mut ledger = Table::new("ledger", &["k", "L_value", "log_L"]);
    for row in &rows {
        ledger.push(vec![row.k.to_string(), cell(row.value), cell(row.log_value)]);
    }
    out.tables.push(ledger);

    let conv = convolution_bound(p.convolution_k_max, ctx.exec)?;
    let gap = conv.stabilization_gap() / conv.sup;
    out.check(
        "convolution-stabilization",
        gap <= STABILIZATION_TOLERANCE,
        format!(
            "sup {:.10} at k = {} (half range {:.10}), relative gap {gap:.2e}",
            conv.sup, conv.argmax, conv.half_range_sup
        ),
    );
    out.metric("convolution_sup", conv.sup);
    out.metric("convolution_tail", conv.tail_value);
    Ok(out)
}
