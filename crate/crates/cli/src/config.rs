//! Experiment configuration: a TOML file with one optional table per
//! experiment, overlaid by command-line flags. Unknown keys are rejected.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub sharpness: Option<SharpnessParams>,
    #[serde(rename = "evolve-toy")]
    pub evolve_toy: Option<EvolveParams>,
    #[serde(rename = "verify-inequalities")]
    pub verify_inequalities: Option<InequalityParams>,
    #[serde(rename = "vector-fields")]
    pub vector_fields: Option<VectorFieldParams>,
    pub picard: Option<PicardParams>,
    pub norms: Option<NormParams>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SharpnessParams {
    pub gamma: f64,
    pub s: f64,
    pub a0: f64,
    pub j_max: i32,
    pub k_max: i32,
    /// Time at which the closed-form block law is fitted.
    pub law_time: f64,
    pub law_k_max: i32,
    pub fit_j_min: i32,
    pub slope_j_min: i32,
}

impl Default for SharpnessParams {
    fn default() -> Self {
        Self { gamma: -1.0, s: 0.5, a0: 1.0, j_max: 40, k_max: 64, law_time: 1.0, law_k_max: 128, fit_j_min: 16, slope_j_min: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveParams {
    pub gamma: f64,
    pub s: f64,
    pub a0: f64,
    pub t: f64,
    pub steps: usize,
    pub grid_n: usize,
    pub grid_l: f64,
    pub block_factor: f64,
    pub slope_tolerance: f64,
}

impl Default for EvolveParams {
    fn default() -> Self {
        Self { gamma: -1.0, s: 0.5, a0: 1.0, t: 1.0, steps: 16, grid_n: 4096, grid_l: 32.0, block_factor: 4.0, slope_tolerance: 0.15 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InequalityParams {
    pub corpus_size: usize,
    pub gamma: f64,
    pub s: f64,
    pub eps_values: Vec<f64>,
    pub thetas: Vec<f64>,
}

impl Default for InequalityParams {
    fn default() -> Self {
        let d = kgl_core::inequalities::SuiteSettings::default();
        Self { corpus_size: d.corpus_size, gamma: d.gamma, s: d.s, eps_values: d.eps_values, thetas: d.thetas }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VectorFieldParams {
    pub corpus_size: usize,
    pub max_degree: u32,
    pub k_max: u32,
    /// Exponents as exact rationals, e.g. `"5/3"`.
    pub deltas: Vec<String>,
    pub mixed_order: u32,
    pub parameter_sweep: usize,
    pub gamma: f64,
    pub s: f64,
    pub rho: f64,
    pub ledger_k_max: u32,
    pub convolution_k_max: u32,
}

impl Default for VectorFieldParams {
    fn default() -> Self {
        Self {
            corpus_size: 50,
            max_degree: 6,
            k_max: 5,
            deltas: ["1", "3/2", "2", "5/3"].map(String::from).to_vec(),
            mixed_order: 4,
            parameter_sweep: 100,
            gamma: -1.0,
            s: 0.5,
            rho: 2.0,
            ledger_k_max: 200,
            convolution_k_max: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PicardParams {
    pub gamma: f64,
    pub s: f64,
    pub eps: f64,
    pub a0: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub steps: usize,
    pub nmax: usize,
    pub grid_n: usize,
    pub grid_l: f64,
    pub x_axis: bool,
    /// Spatial nodes when the x-axis is on (odd).
    pub x_points: usize,
}

impl Default for PicardParams {
    fn default() -> Self {
        Self {
            gamma: -1.0,
            s: 0.5,
            eps: 0.1,
            a0: 0.25,
            t: 0.1,
            steps: 32,
            nmax: 15,
            grid_n: 128,
            grid_l: 6.0,
            x_axis: false,
            x_points: 9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormParams {
    pub corpus_size: usize,
    pub gamma: f64,
    pub s: f64,
}

impl Default for NormParams {
    fn default() -> Self {
        Self { corpus_size: 200, gamma: -1.0, s: 0.5 }
    }
}

/// Copies every `Some` flag value over the corresponding config field.
#[macro_export]
macro_rules! overlay {
    ($cfg:expr, $args:expr; $($field:ident),* $(,)?) => {
        $( if let Some(v) = $args.$field.clone() { $cfg.$field = v; } )*
    };
}
