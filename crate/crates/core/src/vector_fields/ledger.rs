use crate::error::{invalid, Result};
use crate::exec::Exec;
use serde::Serialize;

/// Orders up to which the ledger is evaluated directly in floating point.
pub const DIRECT_LIMIT: u32 = 20;

/// `ln k!`, summed term by term.
pub fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

fn validate(rho: f64, e: f64) -> Result<()> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(invalid("rho", format!("{rho} must be positive")));
    }
    if !(e.is_finite() && e >= 1.0) {
        return Err(invalid("exponent", format!("{e} must be at least 1")));
    }
    Ok(())
}

/// `ln L_{ρ,k}` with `L_{ρ,0} = 1` and `L_{ρ,k} = (k+1)³ / (ρ^{k−1} (k!)^e)`.
pub fn log_ledger_value(rho: f64, k: u32, e: f64) -> Result<f64> {
    validate(rho, e)?;
    if k == 0 {
        return Ok(0.0);
    }
    let k_f = k as f64;
    Ok(3.0 * (k_f + 1.0).ln() - (k_f - 1.0) * rho.ln() - e * ln_factorial(k))
}

/// `L_{ρ,k}`; direct evaluation up to [`DIRECT_LIMIT`], log domain beyond.
pub fn ledger_value(rho: f64, k: u32, e: f64) -> Result<f64> {
    validate(rho, e)?;
    if k == 0 {
        return Ok(1.0);
    }
    if k <= DIRECT_LIMIT {
        let fact: f64 = (2..=k).map(f64::from).product();
        let k_f = k as f64;
        return Ok((k_f + 1.0).powi(3) / (rho.powf(k_f - 1.0) * fact.powf(e)));
    }
    Ok(log_ledger_value(rho, k, e)?.exp())
}

/// `ln L_{ρ,k} + (k−1) ln ρ + e ln k! − 3 ln(k+1)`, which vanishes for `k ≥ 1`.
pub fn ledger_round_trip(rho: f64, k: u32, e: f64) -> Result<f64> {
    let log_l = log_ledger_value(rho, k, e)?;
    if k == 0 {
        return Ok(log_l);
    }
    let k_f = k as f64;
    Ok(log_l + (k_f - 1.0) * rho.ln() + e * ln_factorial(k) - 3.0 * (k_f + 1.0).ln())
}

/// One row of a ledger table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LedgerRow {
    pub k: u32,
    #[serde(rename = "L_value")]
    pub value: f64,
    #[serde(rename = "log_L")]
    pub log_value: f64,
}

/// Ledger rows for `k = 0..=k_max`. Deep entries underflow to 0 in `value` but
/// stay exact in `log_value`.
pub fn ledger_table(rho: f64, e: f64, k_max: u32) -> Result<Vec<LedgerRow>> {
    (0..=k_max)
        .map(|k| Ok(LedgerRow { k, value: ledger_value(rho, k, e)?, log_value: log_ledger_value(rho, k, e)? }))
        .collect()
}

/// `Σ_{1≤j≤k−1} (k+1)³ / ((j+1)³ (k−j+1)³)`.
pub fn convolution_sum(k: u32) -> f64 {
    let kp = (k as f64 + 1.0).powi(3);
    (1..k)
        .map(|j| {
            let a = (j as f64 + 1.0).powi(3);
            let b = ((k - j) as f64 + 1.0).powi(3);
            kp / (a * b)
        })
        .sum()
}

/// Sup of [`convolution_sum`] over `k ≤ k_max`, with the same sup over
/// `k ≤ k_max/2` to expose stabilization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvolutionBound {
    pub k_max: u32,
    pub sup: f64,
    pub argmax: u32,
    pub half_range_sup: f64,
    /// Value at `k_max`, which approaches `2(ζ(3) − 1)`.
    pub tail_value: f64,
}

impl ConvolutionBound {
    pub fn stabilization_gap(&self) -> f64 {
        (self.sup - self.half_range_sup).abs()
    }
}

pub fn convolution_bound(k_max: u32, exec: Exec) -> Result<ConvolutionBound> {
    if k_max < 4 {
        return Err(invalid("k_max", format!("{k_max} must be at least 4")));
    }
    let sums = exec.map_range(k_max as usize + 1, |k| convolution_sum(k as u32));
    let sup_upto = |limit: usize| {
        sums[..=limit]
            .iter()
            .enumerate()
            .fold((0.0f64, 0u32), |(best, at), (k, &v)| if v > best { (v, k as u32) } else { (best, at) })
    };
    let (sup, argmax) = sup_upto(k_max as usize);
    let (half_range_sup, _) = sup_upto(k_max as usize / 2);
    Ok(ConvolutionBound { k_max, sup, argmax, half_range_sup, tail_value: sums[k_max as usize] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ledger_examples() {
        assert_eq!(ledger_value(2.0, 0, 1.0).unwrap(), 1.0);
        assert!((ledger_value(2.0, 2, 1.0).unwrap() - 6.75).abs() < 1e-14);
        let v = ledger_value(2.0, 3, 1.5).unwrap();
        assert!((v - 64.0 / (4.0 * 6f64.powf(1.5))).abs() < 1e-14);
        assert!((v - 1.0887).abs() < 1e-4);
        assert!((log_ledger_value(2.0, 3, 1.5).unwrap().exp() - v).abs() < 1e-14);
    }

    #[test]
    fn direct_and_log_paths_agree_at_the_switch() {
        for k in 1..=DIRECT_LIMIT {
            let d = ledger_value(0.7, k, 1.5).unwrap();
            let l = log_ledger_value(0.7, k, 1.5).unwrap().exp();
            assert!((d - l).abs() <= 1e-12 * d, "k={k}");
        }
    }

    #[test]
    fn deep_orders_stay_finite_in_log_domain() {
        let log_l = log_ledger_value(1.0, 200, 1.5).unwrap();
        assert!(log_l.is_finite() && log_l < -1000.0);
        assert!(ledger_round_trip(1.0, 200, 1.5).unwrap().abs() < 1e-9);
        assert!(ledger_value(-1.0, 2, 1.0).is_err());
        assert!(ledger_value(1.0, 2, 0.5).is_err());
    }

    #[test]
    fn convolution_small_cases() {
        assert!((convolution_sum(2) - 27.0 / 64.0).abs() < 1e-15);
        assert!((convolution_sum(3) - 2.0 * 64.0 / (8.0 * 27.0)).abs() < 1e-15);
        assert_eq!(convolution_sum(1), 0.0);
    }

    #[test]
    fn convolution_sup_stabilizes() {
        let b = convolution_bound(10_000, Exec::Sequential).unwrap();
        assert!(b.sup.is_finite() && b.sup < 1.0);
        assert!(b.stabilization_gap() <= 1e-6);
        // Large k: the sum approaches 2(ζ(3) − 1).
        let zeta3 = 1.202_056_903_159_594_3;
        assert!((b.tail_value - 2.0 * (zeta3 - 1.0)).abs() < 1e-3);
    }
}
