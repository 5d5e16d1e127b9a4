//! Littlewood–Paley blocks in velocity (`P_k`) and frequency (`Δ_j`).
//!
//! Shell index −1 is the ball cutoff ψ; shell `j ≥ 0` is the ring
//! `φ(2^{−j}·)`. Because `φ(r) = ψ(r/2) − ψ(r)`, partial sums telescope to
//! `ψ(2^{−J−1}·)`, so summing every shell that meets the grid reproduces the
//! input exactly.

mod bump;
mod suite;

pub use bump::BumpPair;
pub use suite::{norm_equivalence_suite, NormEquivalenceReport, EQUIVALENCE_BAND, REFINEMENT_TOLERANCE};

use crate::error::{Error, Result};
use crate::exec::{pairwise_sum, Exec};
use crate::spectral::{SpectralField, VelocityGrid};
use num_complex::Complex64;

/// Contribution threshold above which the outermost shells flag truncation.
pub const TAIL_TOLERANCE: f64 = 1e-8;

/// Largest phase shell meeting the grid.
pub fn last_phase_shell(grid: &VelocityGrid) -> i32 {
    BumpPair::last_shell(grid.max_radius())
}

/// Largest frequency shell with at least part of its ring on the grid.
pub fn last_frequency_shell(grid: &VelocityGrid) -> i32 {
    BumpPair::last_shell(grid.max_frequency())
}

/// `P_k f`: pointwise multiplication by the shell-`k` cutoff of `|v|`.
pub fn project_phase(f: &SpectralField, bump: &BumpPair, k: i32) -> Result<SpectralField> {
    let g = *f.grid();
    let radii = g.radii();
    f.map_samples(|i| Complex64::new(bump.shell(k, radii[i]), 0.0))
}

/// `Δ_j f`: Fourier multiplication by the shell-`j` cutoff of `|η|`.
pub fn project_frequency(f: &SpectralField, bump: &BumpPair, j: i32) -> Result<SpectralField> {
    let g = *f.grid();
    if j > last_frequency_shell(&g) {
        return Err(Error::BlockNotRepresentable(j));
    }
    let norms = g.frequency_norms();
    f.map_coefficients(|i| Complex64::new(bump.shell(j, norms[i]), 0.0))
}

/// `‖Δ_j P_k f‖` for every representable `(j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTable {
    /// Row `k + 1`, column `j + 1`.
    norms: Vec<Vec<f64>>,
}

impl BlockTable {
    pub fn last_j(&self) -> i32 {
        self.norms.first().map_or(-1, |r| r.len() as i32 - 2)
    }

    pub fn last_k(&self) -> i32 {
        self.norms.len() as i32 - 2
    }

    pub fn get(&self, j: i32, k: i32) -> f64 {
        self.norms[(k + 1) as usize][(j + 1) as usize]
    }

    /// `(j, k, norm)` in row-major order over `k` then `j`.
    pub fn entries(&self) -> Vec<(i32, i32, f64)> {
        let mut out = Vec::new();
        for (kk, row) in self.norms.iter().enumerate() {
            for (jj, &v) in row.iter().enumerate() {
                out.push((jj as i32 - 1, kk as i32 - 1, v));
            }
        }
        out
    }

    /// `Σ_{j,k} ‖Δ_j P_k f‖²`.
    pub fn energy(&self) -> f64 {
        let sq: Vec<f64> = self.norms.iter().flatten().map(|v| v * v).collect();
        pairwise_sum(&sq)
    }
}

/// Measures every block with one FFT per phase shell.
pub fn measure_blocks(f: &SpectralField, bump: &BumpPair, exec: Exec) -> Result<BlockTable> {
    let g = *f.grid();
    let kmax = last_phase_shell(&g);
    let jmax = last_frequency_shell(&g);
    let freq = g.frequency_norms();
    let cutoffs: Vec<Vec<f64>> = (-1..=jmax)
        .map(|j| freq.iter().map(|&e| bump.shell(j, e)).collect())
        .collect();
    let vol = g.cell_volume();
    let rows = exec.map_range((kmax + 2) as usize, |kk| -> Result<Vec<f64>> {
        let pk = project_phase(f, bump, kk as i32 - 1)?;
        let c = pk.coefficients();
        Ok(cutoffs
            .iter()
            .map(|cut| {
                let sq: Vec<f64> = c.iter().zip(cut).map(|(z, w)| (z * w).norm_sqr()).collect();
                (vol * pairwise_sum(&sq)).sqrt()
            })
            .collect())
    });
    Ok(BlockTable {
        norms: rows.into_iter().collect::<Result<_>>()?,
    })
}

/// One row of a block-norm report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockRow {
    pub j: i32,
    pub k: i32,
    pub block_l2: f64,
    pub weight_2kp: f64,
    pub weight_2mj: f64,
    pub contribution: f64,
}

/// Result of the block-sum characterization.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockNormReport {
    pub value: f64,
    /// Largest share of the squared total carried by the outermost `j` or `k` shell.
    pub tail_fraction: f64,
    pub tail_flag: bool,
    pub rows: Vec<BlockRow>,
}

impl BlockNormReport {
    pub const CSV_HEADER: [&'static str; 6] =
        ["j", "k", "block_l2", "weight_2kp", "weight_2mj", "contribution"];
}

/// `(Σ_{j,k} 2^{2kp} 2^{2mj} ‖Δ_j P_k f‖²)^{1/2}`.
pub fn block_norm_characterization(
    f: &SpectralField,
    bump: &BumpPair,
    p: f64,
    m: f64,
    exec: Exec,
) -> Result<BlockNormReport> {
    let table = measure_blocks(f, bump, exec)?;
    Ok(characterize(&table, p, m))
}

/// Block-sum norm of an already measured table.
pub fn characterize(table: &BlockTable, p: f64, m: f64) -> BlockNormReport {
    let rows: Vec<BlockRow> = table
        .entries()
        .into_iter()
        .map(|(j, k, b)| {
            let wk = 2f64.powf(2.0 * k as f64 * p);
            let wj = 2f64.powf(2.0 * m * j as f64);
            BlockRow { j, k, block_l2: b, weight_2kp: wk, weight_2mj: wj, contribution: wk * wj * b * b }
        })
        .collect();
    let total = pairwise_sum(&rows.iter().map(|r| r.contribution).collect::<Vec<_>>());
    let (lj, lk) = (table.last_j(), table.last_k());
    let edge = |pick: &dyn Fn(&BlockRow) -> bool| -> f64 {
        pairwise_sum(&rows.iter().filter(|r| pick(r)).map(|r| r.contribution).collect::<Vec<_>>())
    };
    let tail = edge(&|r| r.j == lj).max(edge(&|r| r.k == lk));
    let tail_fraction = if total > 0.0 { tail / total } else { 0.0 };
    BlockNormReport {
        value: total.sqrt(),
        tail_fraction,
        tail_flag: tail_fraction > TAIL_TOLERANCE,
        rows,
    }
}
