//! Numerical witnesses for the standalone inequalities of the theory.
//!
//! Every check works in two stages: per-function terms are computed without a
//! constant, then a corpus-level suite fits the smallest constant that makes
//! the whole corpus pass and reports its stability under grid refinement.

mod checks;
mod gagliardo;

pub use checks::*;
pub use gagliardo::{gagliardo_norm, gagliardo_seminorm_sq};

use serde::Serialize;
use std::collections::BTreeMap;

/// Relative slack applied on top of a fitted constant so the extremal member
/// passes despite rounding.
pub const FIT_SLACK: f64 = 1e-12;

/// One inequality instance `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityWitness {
    pub test_function_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant_used: f64,
    pub margin: f64,
}

impl InequalityWitness {
    /// Builds the witness `lhs ≤ constant · rhs_without_constant`.
    pub fn new(id: impl Into<String>, lhs: f64, rhs_without_constant: f64, constant: f64) -> Self {
        let rhs = constant * rhs_without_constant;
        Self {
            test_function_id: id.into(),
            lhs,
            rhs,
            constant_used: constant,
            margin: rhs - lhs,
        }
    }

    pub fn passed(&self) -> bool {
        self.margin >= 0.0
    }
}

/// Corpus-level summary of one inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub inequality_id: String,
    pub params: BTreeMap<String, f64>,
    pub corpus_size: usize,
    pub min_margin: f64,
    pub fitted_constant: f64,
    /// Fitted constant on the refined grid divided by the base value.
    pub refinement_ratio: Option<f64>,
    pub failures: Vec<String>,
    /// Check-specific diagnostics.
    pub metrics: BTreeMap<String, f64>,
}

impl InequalityReport {
    pub(crate) fn from_witnesses(
        id: &str,
        params: &[(&str, f64)],
        witnesses: &[InequalityWitness],
        fitted_constant: f64,
    ) -> Self {
        Self {
            inequality_id: id.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            corpus_size: witnesses.len(),
            min_margin: witnesses.iter().map(|w| w.margin).fold(f64::INFINITY, f64::min),
            fitted_constant,
            refinement_ratio: None,
            failures: witnesses
                .iter()
                .filter(|w| !w.passed())
                .map(|w| w.test_function_id.clone())
                .collect(),
            metrics: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Largest finite ratio, zero for an empty or all-zero list.
pub fn empirical_constant(ratios: &[f64]) -> f64 {
    ratios.iter().cloned().filter(|r| r.is_finite()).fold(0.0, f64::max)
}

/// `lhs / rhs` with `0/0 = 0`.
pub(crate) fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

/// Settings for [`standard_suite`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSettings {
    pub seed: u64,
    pub corpus_size: usize,
    pub gamma: f64,
    pub s: f64,
    pub eps_values: Vec<f64>,
    pub thetas: Vec<f64>,
}

impl Default for SuiteSettings {
    fn default() -> Self {
        Self {
            seed: 1,
            corpus_size: 500,
            gamma: -1.0,
            s: 0.5,
            eps_values: vec![1.0, 0.5, 0.25, 0.125],
            thetas: vec![1.0, 0.5, 0.1, 0.01],
        }
    }
}

/// Interpolation (sum and product), weighted-ε, both compositions and the
/// regularizer bound on seeded corpora over the default grid. The composition
/// checks use the nonnegative corpus of the same size and seed.
pub fn standard_suite(settings: &SuiteSettings, exec: crate::exec::Exec) -> crate::Result<Vec<InequalityReport>> {
    let grid = crate::corpus::default_grid();
    let prm = crate::SoftPotentialParams::new(settings.gamma, settings.s)?;
    let mixed = crate::corpus::standard(settings.seed, settings.corpus_size);
    let positive = crate::corpus::nonnegative(settings.seed, settings.corpus_size);
    let (sum, product) = interpolation_suite(&mixed, grid, &prm, exec)?;
    Ok(vec![
        sum,
        product,
        weighted_eps_suite(&mixed, grid, settings.s, &settings.eps_values, exec)?,
        composition_suite(&positive, grid, settings.s, Composition::Log1p, exec)?,
        composition_suite(&positive, grid, settings.s, Composition::Saturation, exec)?,
        regularizer_suite(&mixed, grid, &settings.thetas, exec)?,
    ])
}
