//! The fractional-diffusion toy model `∂_t f + ⟨v⟩^γ⟨D⟩^{2s} f = 0`.
//!
//! Blockwise, `Δ_j P_k` sees the coefficient `⟨v⟩^γ ≈ 2^{γk}` and the symbol
//! `⟨η⟩^{2s} ≈ 2^{2sj}`, which gives the closed-form block law. Against an
//! initial weight `e^{a0⟨v⟩²}` the surviving amplitude in shell `j` is governed
//! by `min_k (t 2^{2sj} 2^{γk} + a0 2^{2k})`, whose growth rate in `j` is the
//! Gevrey index.

mod compare;
mod evolve;
mod gevrey;
mod krylov;

pub use compare::{compare_with_law, pde_consistency, BlockComparison, LawComparison, PdeConsistency, COMPARISON_FLOOR};
pub use evolve::{broadband_initial_data, evolve_toy, ToyOperator, Trajectory, GROWTH_TOLERANCE};
pub use gevrey::{estimate_gevrey_index, GevreyFit, GevreySource, MIN_SHELLS, NOISE_FLOOR};

use crate::error::{invalid, Result};
use crate::exec::Exec;
use crate::params::SoftPotentialParams;
use crate::spectral::VelocityGrid;

/// Parameters of a toy evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyParams {
    pub prm: SoftPotentialParams,
    pub a0: f64,
    pub t_final: f64,
    pub grid: VelocityGrid,
    pub steps: usize,
}

impl ToyParams {
    pub const MIN_STEPS: usize = 16;

    pub fn new(prm: SoftPotentialParams, a0: f64, t_final: f64, grid: VelocityGrid, steps: usize) -> Result<Self> {
        if !(a0 > 0.0) {
            return Err(invalid("a0", format!("{a0} must be positive")));
        }
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(invalid("t_final", format!("{t_final} must be positive")));
        }
        if steps < Self::MIN_STEPS {
            return Err(invalid("steps", format!("{steps} < {}", Self::MIN_STEPS)));
        }
        Ok(Self { prm, a0, t_final, grid, steps })
    }

    /// Additionally requires `T ≤ a0/2`, the range where the time weight applies.
    pub fn with_weight_monitoring(self) -> Result<Self> {
        if self.t_final > self.a0 / 2.0 {
            return Err(invalid("t_final", format!("{} > a0/2 = {}", self.t_final, self.a0 / 2.0)));
        }
        Ok(self)
    }
}

/// `e^{−t 2^{2sj} 2^{γk}}`.
pub fn block_decay_exact(j: i32, k: i32, t: f64, prm: &SoftPotentialParams) -> f64 {
    (-block_rate(j, k, prm) * t).exp()
}

/// `2^{2sj} 2^{γk}`.
pub fn block_rate(j: i32, k: i32, prm: &SoftPotentialParams) -> f64 {
    2f64.powf(2.0 * prm.s() * j as f64 + prm.gamma() * k as f64)
}

/// Block magnitudes `M(j, k, t)` in log form, so shells far below the
/// floating-point range stay representable.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockLawState {
    pub prm: SoftPotentialParams,
    pub a0: f64,
    pub t: f64,
    pub j_max: i32,
    pub k_max: i32,
    /// `ln M(j, k, t)`, row `j + 1`, column `k + 1`.
    log_magnitude: Vec<Vec<f64>>,
}

impl BlockLawState {
    /// `ln M(j,k,t) = −t 2^{2sj}2^{γk} − a0 2^{2k} + ln g0(j,k)` for
    /// `j ∈ [−1, j_max]`, `k ∈ [0, k_max]` (phase shells of a positive weight
    /// start at `k = 0`).
    pub fn new(
        prm: SoftPotentialParams,
        a0: f64,
        t: f64,
        j_max: i32,
        k_max: i32,
        log_envelope: impl Fn(i32, i32) -> f64,
    ) -> Result<Self> {
        if !(a0 > 0.0) {
            return Err(invalid("a0", format!("{a0} must be positive")));
        }
        if !(t >= 0.0) {
            return Err(invalid("t", format!("{t} must be nonnegative")));
        }
        if j_max < -1 || k_max < 0 {
            return Err(invalid("range", "need j_max ≥ −1 and k_max ≥ 0"));
        }
        let log_magnitude = (-1..=j_max)
            .map(|j| {
                (0..=k_max)
                    .map(|k| -t * block_rate(j, k, &prm) - a0 * 4f64.powi(k) + log_envelope(j, k))
                    .collect()
            })
            .collect();
        Ok(Self { prm, a0, t, j_max, k_max, log_magnitude })
    }

    /// Flat envelope `g0 ≡ 1`.
    pub fn flat(prm: SoftPotentialParams, a0: f64, t: f64, j_max: i32, k_max: i32) -> Result<Self> {
        Self::new(prm, a0, t, j_max, k_max, |_, _| 0.0)
    }

    pub fn log_magnitude(&self, j: i32, k: i32) -> f64 {
        self.log_magnitude[(j + 1) as usize][k as usize]
    }

    /// `(j, k, ln M)` rows.
    pub fn entries(&self) -> Vec<(i32, i32, f64)> {
        let mut out = Vec::new();
        for j in -1..=self.j_max {
            for k in 0..=self.k_max {
                out.push((j, k, self.log_magnitude(j, k)));
            }
        }
        out
    }

    /// `max_k ln M(j, k, t)`.
    pub fn shell_log_sup(&self, j: i32) -> f64 {
        self.log_magnitude[(j + 1) as usize].iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Minimizer of the sharpness cost over phase shells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sharpness {
    pub j: i32,
    pub k_star: i32,
    pub value: f64,
    /// `k_max` actually searched.
    pub k_max: i32,
    /// True when the initial range had its minimum on the boundary.
    pub widened: bool,
}

impl Sharpness {
    /// `2^{(4s/(2−γ)) j}`.
    pub fn predicted(&self, prm: &SoftPotentialParams) -> f64 {
        2f64.powf(2.0 * prm.tau() * self.j as f64)
    }
}

/// `G(k) = 2^{2sj}2^{γk} + a0 2^{2k}`.
pub fn sharpness_cost(j: i32, k: i32, prm: &SoftPotentialParams, a0: f64) -> f64 {
    block_rate(j, k, prm) + a0 * 4f64.powi(k)
}

/// Brute-force `min_{0 ≤ k ≤ k_max} G(k)`, ties broken toward smaller `k`.
/// A minimum on the boundary doubles the range (up to 1024) and sets `widened`.
pub fn sharpness_infimum(j: i32, prm: &SoftPotentialParams, a0: f64, k_max: i32) -> Result<Sharpness> {
    if k_max < 64 {
        return Err(invalid("k_max", format!("{k_max} < 64")));
    }
    if !(a0 > 0.0) {
        return Err(invalid("a0", format!("{a0} must be positive")));
    }
    let mut range = k_max;
    let mut widened = false;
    loop {
        let (mut best_k, mut best) = (0, sharpness_cost(j, 0, prm, a0));
        for k in 1..=range {
            let g = sharpness_cost(j, k, prm, a0);
            if g < best {
                best = g;
                best_k = k;
            }
        }
        if best_k < range || range >= 1024 {
            return Ok(Sharpness { j, k_star: best_k, value: best, k_max: range, widened });
        }
        widened = true;
        range *= 2;
    }
}

/// Sharpness over a range of shells.
pub fn sharpness_sweep(
    js: std::ops::RangeInclusive<i32>,
    prm: &SoftPotentialParams,
    a0: f64,
    k_max: i32,
    exec: Exec,
) -> Result<Vec<Sharpness>> {
    let js: Vec<i32> = js.collect();
    exec.map(&js, |&j| sharpness_infimum(j, prm, a0, k_max)).into_iter().collect()
}

/// `max{(2−γ)/(4s), 1}`.
pub fn predicted_index(prm: &SoftPotentialParams) -> f64 {
    prm.gevrey_exponent()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prm(g: f64, s: f64) -> SoftPotentialParams {
        SoftPotentialParams::new(g, s).unwrap()
    }

    #[test]
    fn block_decay_values() {
        let p = prm(-1.0, 0.5);
        assert_eq!(block_decay_exact(4, 2, 0.0, &p), 1.0);
        assert!((block_decay_exact(4, 2, 1.0, &p) - (-4.0f64).exp()).abs() < 1e-16);
        let (t, j, k) = (0.7, 5, 3);
        let ratio = block_decay_exact(j + 1, k, t, &p) / block_decay_exact(j, k, t, &p);
        let expect = (-(2f64.powf(2.0 * p.s()) - 1.0) * block_rate(j, k, &p) * t).exp();
        assert!((ratio / expect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sharpness_examples() {
        for (g, s) in [(-1.0, 0.5), (-2.0, 0.75), (-0.5, 0.3)] {
            let r = sharpness_infimum(0, &prm(g, s), 1.0, 64).unwrap();
            assert_eq!((r.k_star, r.value), (0, 2.0));
        }
        let r = sharpness_infimum(10, &prm(-1.0, 0.5), 1.0, 64).unwrap();
        assert_eq!((r.k_star, r.value), (3, 192.0));
        assert!(!r.widened);
        assert!(sharpness_infimum(10, &prm(-1.0, 0.5), 1.0, 10).is_err());
    }

    #[test]
    fn sharpness_ties_prefer_smaller_k() {
        // j = 2, γ = −1, s = 1/2: G(0) = 4 + 1 = 5, G(1) = 2 + 4 = 6.
        let r = sharpness_infimum(2, &prm(-1.0, 0.5), 1.0, 64).unwrap();
        assert_eq!(r.k_star, 0);
        // γ = −2, j = 0, a0 = 1/4: G(0) = G(1) = 5/4 exactly.
        let p = prm(-2.0, 0.75);
        assert_eq!(sharpness_cost(0, 0, &p, 0.25), sharpness_cost(0, 1, &p, 0.25));
        let r = sharpness_infimum(0, &p, 0.25, 64).unwrap();
        assert_eq!(r.k_star, 0);
    }

    #[test]
    fn predicted_index_examples() {
        assert_eq!(predicted_index(&prm(-1.0, 0.5)), 1.5);
        assert!((predicted_index(&prm(-2.0, 0.75)) - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(predicted_index(&prm(-0.5, 0.75)), 1.0);
    }

    #[test]
    fn law_state_matches_closed_form() {
        let p = prm(-1.0, 0.5);
        let st = BlockLawState::flat(p, 1.0, 0.3, 6, 5).unwrap();
        let m0 = BlockLawState::flat(p, 1.0, 0.0, 6, 5).unwrap();
        for (j, k, lm) in st.entries() {
            let expect = m0.log_magnitude(j, k) + block_decay_exact(j, k, 0.3, &p).ln();
            assert!((lm - expect).abs() < 1e-12 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn params_validation() {
        let g = VelocityGrid::new(1, 64, 8.0).unwrap();
        let p = prm(-1.0, 0.5);
        assert!(ToyParams::new(p, 1.0, 1.0, g, 15).is_err());
        let ok = ToyParams::new(p, 1.0, 1.0, g, 16).unwrap();
        assert!(ok.with_weight_monitoring().is_err());
        assert!(ToyParams::new(p, 1.0, 0.5, g, 16).unwrap().with_weight_monitoring().is_ok());
    }
}
