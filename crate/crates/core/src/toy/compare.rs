use super::{block_decay_exact, broadband_initial_data, estimate_gevrey_index, evolve_toy};
use super::{GevreyFit, GevreySource, ToyParams};
use crate::dyadic::{measure_blocks, BlockTable, BumpPair};
use crate::error::Result;
use crate::exec::Exec;
use crate::params::SoftPotentialParams;
use serde::Serialize;

/// Blocks below this fraction of `‖f_in‖` are not compared.
pub const COMPARISON_FLOOR: f64 = 1e-12;

/// One compared block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockComparison {
    pub j: i32,
    pub k: i32,
    pub initial: f64,
    pub measured: f64,
    pub predicted: f64,
    /// `max(measured/predicted, predicted/measured)`.
    pub discrepancy: f64,
}

/// Measured blocks at time `t` against `‖Δ_jP_k f_0‖ · e^{−t 2^{2sj}2^{γk}}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawComparison {
    pub rows: Vec<BlockComparison>,
    pub worst: Option<BlockComparison>,
}

impl LawComparison {
    pub fn worst_discrepancy(&self) -> f64 {
        self.worst.map_or(1.0, |w| w.discrepancy)
    }
}

/// Compares every block whose measured or predicted magnitude is at least
/// `floor · reference`.
pub fn compare_with_law(
    initial: &BlockTable,
    evolved: &BlockTable,
    t: f64,
    prm: &SoftPotentialParams,
    reference: f64,
    floor: f64,
) -> LawComparison {
    let threshold = floor * reference;
    let mut rows = Vec::new();
    for (j, k, b0) in initial.entries() {
        let measured = evolved.get(j, k);
        let predicted = b0 * block_decay_exact(j, k, t, prm);
        if measured.max(predicted) < threshold {
            continue;
        }
        let discrepancy = if measured == 0.0 || predicted == 0.0 {
            f64::INFINITY
        } else {
            (measured / predicted).max(predicted / measured)
        };
        rows.push(BlockComparison { j, k, initial: b0, measured, predicted, discrepancy });
    }
    let worst = rows.iter().copied().max_by(|a, b| a.discrepancy.total_cmp(&b.discrepancy));
    LawComparison { rows, worst }
}

/// Evolution of broadband data compared with the block law and fitted for a
/// Gevrey index on the measured side.
#[derive(Debug, Clone, PartialEq)]
pub struct PdeConsistency {
    pub comparison: LawComparison,
    pub initial_blocks: BlockTable,
    pub final_blocks: BlockTable,
    pub reference_norm: f64,
    pub fit: Result<GevreyFit>,
}

pub fn pde_consistency(params: &ToyParams, seed: u64, bump: &BumpPair, exec: Exec) -> Result<PdeConsistency> {
    let f0 = broadband_initial_data(params.grid, params.a0, seed)?;
    let traj = evolve_toy(&f0, params)?;
    let initial_blocks = measure_blocks(&f0, bump, exec)?;
    let final_blocks = measure_blocks(traj.last(), bump, exec)?;
    let reference_norm = f0.l2_norm();
    let comparison = compare_with_law(
        &initial_blocks,
        &final_blocks,
        params.t_final,
        &params.prm,
        reference_norm,
        COMPARISON_FLOOR,
    );
    let source = GevreySource::Measured { blocks: &final_blocks, reference: reference_norm };
    let fit = estimate_gevrey_index(source, (-1, final_blocks.last_j()));
    Ok(PdeConsistency { comparison, initial_blocks, final_blocks, reference_norm, fit })
}
