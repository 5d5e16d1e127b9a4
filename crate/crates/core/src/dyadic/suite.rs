use super::{characterize, measure_blocks, BumpPair};
use crate::corpus::CorpusMember;
use crate::error::Result;
use crate::exec::Exec;
use crate::spectral::{weighted_sobolev_norm, VelocityGrid};
use serde::Serialize;

/// Accepted range of block-sum norm over direct norm.
pub const EQUIVALENCE_BAND: (f64, f64) = (0.125, 8.0);
/// Accepted relative change of that ratio under `N → 2N`.
pub const REFINEMENT_TOLERANCE: f64 = 0.1;

/// Block-sum against direct weighted norm for one `(p, m)` over a corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEquivalenceReport {
    pub p: f64,
    pub m: f64,
    pub corpus_size: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Largest `|ratio(2N)/ratio(N) − 1|`.
    pub max_refinement_change: f64,
    /// Members whose outermost shells carry a visible share of the block sum.
    pub tail_flags: usize,
    pub failures: Vec<String>,
}

impl NormEquivalenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct MemberRatios {
    base: Vec<f64>,
    refined: Vec<f64>,
    tail: Vec<bool>,
}

fn ratios_on(member: &CorpusMember, grid: VelocityGrid, bump: &BumpPair, pairs: &[(f64, f64)]) -> Result<(Vec<f64>, Vec<bool>)> {
    let f = member.function.sample(grid)?;
    let table = measure_blocks(&f, bump, Exec::Sequential)?;
    let mut ratios = Vec::with_capacity(pairs.len());
    let mut tails = Vec::with_capacity(pairs.len());
    for &(p, m) in pairs {
        let report = characterize(&table, p, m);
        ratios.push(report.value / weighted_sobolev_norm(&f, p, m)?);
        tails.push(report.tail_flag);
    }
    Ok((ratios, tails))
}

/// Runs every `(p, m)` pair on `grid` and its refinement.
pub fn norm_equivalence_suite(
    corpus: &[CorpusMember],
    grid: VelocityGrid,
    bump: &BumpPair,
    pairs: &[(f64, f64)],
    exec: Exec,
) -> Result<Vec<NormEquivalenceReport>> {
    let per_member: Vec<Result<MemberRatios>> = exec.map(corpus, |member| {
        let (base, tail) = ratios_on(member, grid, bump, pairs)?;
        let (refined, _) = ratios_on(member, grid.refined(), bump, pairs)?;
        Ok(MemberRatios { base, refined, tail })
    });
    let per_member: Vec<MemberRatios> = per_member.into_iter().collect::<Result<_>>()?;
    let reports = pairs
        .iter()
        .enumerate()
        .map(|(i, &(p, m))| {
            let mut report = NormEquivalenceReport {
                p,
                m,
                corpus_size: corpus.len(),
                min_ratio: f64::INFINITY,
                max_ratio: 0.0,
                max_refinement_change: 0.0,
                tail_flags: 0,
                failures: Vec::new(),
            };
            for (member, r) in corpus.iter().zip(&per_member) {
                let (base, refined) = (r.base[i], r.refined[i]);
                let change = (refined / base - 1.0).abs();
                report.min_ratio = report.min_ratio.min(base);
                report.max_ratio = report.max_ratio.max(base);
                report.max_refinement_change = report.max_refinement_change.max(change);
                report.tail_flags += usize::from(r.tail[i]);
                if !(EQUIVALENCE_BAND.0..=EQUIVALENCE_BAND.1).contains(&base) {
                    report.failures.push(format!("{}: ratio {base:.4}", member.id));
                }
                if !(change <= REFINEMENT_TOLERANCE) {
                    report.failures.push(format!("{}: refinement change {change:.4}", member.id));
                }
            }
            report
        })
        .collect();
    Ok(reports)
}
