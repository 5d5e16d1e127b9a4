use super::ledger::log_ledger_value;
use crate::error::{invalid, Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Index of one sampled quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NormKey {
    /// `H_{δ_field, direction}^k`, `field ∈ {1, 2}`.
    Directional { field: u8, direction: u8, k: u32 },
    /// `H_{δ1, direction}^{a1} H_{δ2, direction}^{a2}`.
    Mixed { direction: u8, a1: u32, a2: u32 },
}

impl std::fmt::Display for NormKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormKey::Directional { field, direction, k } => write!(f, "H{field}[{direction}]^{k}"),
            NormKey::Mixed { direction, a1, a2 } => write!(f, "H1[{direction}]^{a1} H2[{direction}]^{a2}"),
        }
    }
}

/// Sampled values for one key. The time discretization behind both numbers is
/// the caller's responsibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormSample {
    /// Sup over sampled times of the weighted norm.
    pub sup_norm: f64,
    /// Time integral of the squared dissipation and moment norms (not yet rooted).
    pub dissipation_integral: f64,
}

pub type NormTable = BTreeMap<NormKey, NormSample>;

/// The two ledger-weighted norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XyNorms {
    pub x: f64,
    pub y: f64,
}

/// Keys required to evaluate both norms up to total order `k_max`.
pub fn required_keys(strong_regime: bool, dim: u8, k_max: u32) -> Vec<NormKey> {
    let mut keys = Vec::new();
    for direction in 1..=dim {
        for k in 0..=k_max {
            if strong_regime {
                keys.extend((1..=2).map(|field| NormKey::Directional { field, direction, k }));
            } else {
                keys.extend((0..=k).map(|a1| NormKey::Mixed { direction, a1, a2: k - a1 }));
            }
        }
    }
    keys
}

/// Ledger-weighted norms from a sampled table.
///
/// With `strong_regime` the outer sum runs over directions and both fields with
/// a sup over `k`; otherwise it runs over directions with a sup over `k` of the
/// sup over all mixed words of length `k`. Weights are applied in the log
/// domain so deep orders neither overflow nor underflow prematurely.
pub fn xy_norm_from_samples(
    table: &NormTable,
    rho: f64,
    exponent: f64,
    strong_regime: bool,
    dim: u8,
    k_max: u32,
) -> Result<XyNorms> {
    if !(1..=3).contains(&dim) {
        return Err(invalid("dim", format!("{dim} not in 1..=3")));
    }
    let missing: Vec<String> = required_keys(strong_regime, dim, k_max)
        .into_iter()
        .filter(|key| !table.contains_key(key))
        .map(|key| key.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingEntries(missing));
    }
    for (key, sample) in table {
        if !(sample.sup_norm >= 0.0 && sample.dissipation_integral >= 0.0) {
            return Err(invalid("norm_table", format!("{key} holds a negative or non-finite entry")));
        }
    }
    let log_weights: Vec<f64> = (0..=k_max).map(|k| log_ledger_value(rho, k, exponent)).collect::<Result<_>>()?;
    let weighted = |value: f64, k: u32| if value == 0.0 { 0.0 } else { (log_weights[k as usize] + value.ln()).exp() };

    let groups: Vec<Vec<Vec<NormKey>>> = if strong_regime {
        (1..=dim)
            .flat_map(|direction| {
                (1..=2u8).map(move |field| {
                    (0..=k_max).map(|k| vec![NormKey::Directional { field, direction, k }]).collect()
                })
            })
            .collect()
    } else {
        (1..=dim)
            .map(|direction| {
                (0..=k_max).map(|k| (0..=k).map(|a1| NormKey::Mixed { direction, a1, a2: k - a1 }).collect()).collect()
            })
            .collect()
    };

    let mut x = 0.0;
    let mut y = 0.0;
    for group in &groups {
        let mut sup_x = 0.0f64;
        let mut sup_y = 0.0f64;
        for (k, words) in group.iter().enumerate() {
            for key in words {
                let s = table[key];
                sup_x = sup_x.max(weighted(s.sup_norm, k as u32));
                sup_y = sup_y.max(weighted(s.dissipation_integral.sqrt(), k as u32));
            }
        }
        x += sup_x;
        y += sup_y;
    }
    Ok(XyNorms { x, y })
}

#[cfg(test)]
mod tests {
    use super::super::ledger::ln_factorial;
    use super::*;

    fn filled(strong: bool, k_max: u32, value: impl Fn(NormKey) -> f64) -> NormTable {
        required_keys(strong, 3, k_max)
            .into_iter()
            .map(|key| {
                let v = value(key);
                (key, NormSample { sup_norm: v, dissipation_integral: v * v })
            })
            .collect()
    }

    #[test]
    fn zero_table_gives_zero() {
        for strong in [true, false] {
            let t = filled(strong, 6, |_| 0.0);
            assert_eq!(xy_norm_from_samples(&t, 1.0, 1.5, strong, 3, 6).unwrap(), XyNorms { x: 0.0, y: 0.0 });
        }
    }

    #[test]
    fn single_order_zero_entry() {
        let c = 0.37;
        let t = filled(true, 4, |key| match key {
            NormKey::Directional { k: 0, .. } => c,
            _ => 0.0,
        });
        let n = xy_norm_from_samples(&t, 2.0, 1.0, true, 3, 4).unwrap();
        assert!((n.x - 6.0 * c).abs() < 1e-15);
        assert!((n.y - 6.0 * c).abs() < 1e-15);
    }

    #[test]
    fn ledger_fixed_point_table() {
        let (rho, e) = (0.8f64, 1.5);
        let inverse = |k: u32| {
            if k == 0 {
                1.0
            } else {
                let k_f = k as f64;
                ((k_f - 1.0) * rho.ln() + e * ln_factorial(k) - 3.0 * (k_f + 1.0).ln()).exp()
            }
        };
        let t = filled(true, 60, |key| match key {
            NormKey::Directional { k, .. } => inverse(k),
            NormKey::Mixed { .. } => unreachable!(),
        });
        let n = xy_norm_from_samples(&t, rho, e, true, 3, 60).unwrap();
        assert!((n.x - 6.0).abs() < 1e-10, "{}", n.x);
        let t = filled(false, 12, |key| match key {
            NormKey::Mixed { a1, a2, .. } => inverse(a1 + a2),
            NormKey::Directional { .. } => unreachable!(),
        });
        let n = xy_norm_from_samples(&t, rho, e, false, 3, 12).unwrap();
        assert!((n.x - 3.0).abs() < 1e-10 && (n.y - 3.0).abs() < 1e-10);
    }

    #[test]
    fn missing_entries_are_listed() {
        let mut t = filled(true, 3, |_| 1.0);
        t.remove(&NormKey::Directional { field: 2, direction: 1, k: 3 });
        match xy_norm_from_samples(&t, 1.0, 1.0, true, 3, 3) {
            Err(Error::MissingEntries(m)) => assert_eq!(m, vec!["H2[1]^3".to_string()]),
            other => panic!("{other:?}"),
        }
    }
}
