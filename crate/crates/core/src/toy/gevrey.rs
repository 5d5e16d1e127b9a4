use super::BlockLawState;
use crate::dyadic::BlockTable;
use crate::error::{invalid, Error, Result};
use crate::inequalities::regression_slope;

/// Smallest number of consecutive shells a fit may use.
pub const MIN_SHELLS: usize = 8;
/// Measured shells whose largest block is below this fraction of the
/// reference norm are treated as noise.
pub const NOISE_FLOOR: f64 = 1e-12;

/// Where per-shell decay exponents come from.
#[derive(Debug, Clone, Copy)]
pub enum GevreySource<'a> {
    /// Closed-form law, evaluated in log form without a floor.
    Law(&'a BlockLawState),
    /// Measured block norms, normalized by `reference` (typically `‖f_in‖`).
    Measured { blocks: &'a BlockTable, reference: f64 },
}

/// Regression `log₂ E_j ≈ log₂ ĉ + j / r̂`.
#[derive(Debug, Clone, PartialEq)]
pub struct GevreyFit {
    /// `1 / r̂`.
    pub slope: f64,
    pub r_hat: f64,
    pub c_hat: f64,
    /// `(j, E_j)` for the shells used.
    pub exponents: Vec<(i32, f64)>,
    /// Root-mean-square residual in `log₂ E_j`.
    pub residual: f64,
    pub j_range: (i32, i32),
    /// False when `E_j` fails to increase somewhere in the range.
    pub monotone: bool,
    /// `max{r̂, 1}`; below 1 the fit cannot distinguish sub-analytic classes.
    pub clamped_index: f64,
}

impl GevreyFit {
    /// Value of the fitted line at `j`, as `E_j`.
    pub fn fitted(&self, j: i32) -> f64 {
        self.c_hat * 2f64.powf(self.slope * j as f64)
    }
}

fn exponent(source: &GevreySource, j: i32) -> Option<f64> {
    match source {
        GevreySource::Law(st) => {
            if j < -1 || j > st.j_max {
                return None;
            }
            let e = -st.shell_log_sup(j);
            (e > 0.0 && e.is_finite()).then_some(e)
        }
        GevreySource::Measured { blocks, reference } => {
            if j < -1 || j > blocks.last_j() {
                return None;
            }
            let sup = (-1..=blocks.last_k()).map(|k| blocks.get(j, k)).fold(0.0, f64::max) / reference;
            if !(sup >= NOISE_FLOOR) {
                return None;
            }
            let e = -sup.ln();
            (e > 0.0).then_some(e)
        }
    }
}

/// Fits the longest run of consecutive usable shells inside `j_range`.
pub fn estimate_gevrey_index(source: GevreySource, j_range: (i32, i32)) -> Result<GevreyFit> {
    match source {
        GevreySource::Law(st) if !(st.t > 0.0) => return Err(invalid("t", "law must be evaluated at t > 0")),
        GevreySource::Measured { reference, .. } if !(reference > 0.0) => {
            return Err(invalid("reference", "must be positive"))
        }
        _ => {}
    }
    let mut best: Vec<(i32, f64)> = Vec::new();
    let mut run: Vec<(i32, f64)> = Vec::new();
    for j in j_range.0..=j_range.1 {
        match exponent(&source, j) {
            Some(e) => run.push((j, e)),
            None => {
                if run.len() > best.len() {
                    best = std::mem::take(&mut run);
                }
                run.clear();
            }
        }
    }
    if run.len() > best.len() {
        best = run;
    }
    if best.len() < MIN_SHELLS {
        return Err(Error::TooFewShells { found: best.len(), required: MIN_SHELLS });
    }
    let x: Vec<f64> = best.iter().map(|(j, _)| *j as f64).collect();
    let y: Vec<f64> = best.iter().map(|(_, e)| e.log2()).collect();
    let slope = regression_slope(&x, &y);
    let n = x.len() as f64;
    let intercept = (y.iter().sum::<f64>() - slope * x.iter().sum::<f64>()) / n;
    let residual = (x.iter().zip(&y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum::<f64>() / n).sqrt();
    let monotone = best.windows(2).all(|w| w[1].1 > w[0].1);
    let r_hat = 1.0 / slope;
    Ok(GevreyFit {
        slope,
        r_hat,
        c_hat: 2f64.powf(intercept),
        j_range: (best[0].0, best[best.len() - 1].0),
        exponents: best,
        residual,
        monotone,
        clamped_index: r_hat.max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SoftPotentialParams;

    #[test]
    fn heat_type_reference_has_unit_slope() {
        // γ = 0, s = 1/2: E_j = t 2^j + a0 at k = 0.
        let p = SoftPotentialParams::new_diagnostic(0.0, 0.5).unwrap();
        let st = BlockLawState::flat(p, 1.0, 1.0, 40, 64).unwrap();
        let fit = estimate_gevrey_index(GevreySource::Law(&st), (16, 40)).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-6, "{}", fit.slope);
        assert!(fit.monotone);
    }

    #[test]
    fn sharp_index_for_moderate_singularity() {
        let p = SoftPotentialParams::new(-1.0, 0.5).unwrap();
        let st = BlockLawState::flat(p, 1.0, 1.0, 40, 128).unwrap();
        let fit = estimate_gevrey_index(GevreySource::Law(&st), (16, 40)).unwrap();
        assert!((fit.slope / (2.0 / 3.0) - 1.0).abs() < 0.01, "{}", fit.slope);
        assert!((fit.clamped_index - 1.5).abs() < 0.015);
    }

    #[test]
    fn too_few_shells() {
        let p = SoftPotentialParams::new(-1.0, 0.5).unwrap();
        let st = BlockLawState::flat(p, 1.0, 1.0, 10, 64).unwrap();
        assert!(matches!(
            estimate_gevrey_index(GevreySource::Law(&st), (5, 10)),
            Err(Error::TooFewShells { found: 6, .. })
        ));
        let st0 = BlockLawState::flat(p, 1.0, 0.0, 40, 64).unwrap();
        assert!(estimate_gevrey_index(GevreySource::Law(&st0), (16, 40)).is_err());
    }
}
