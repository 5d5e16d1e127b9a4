//! Exact calculus for the transport-adapted vector fields
//! `H_δ = (1/(δ+1)) t^{δ+1} ∂_x + t^δ ∂_v`, their commutators with free
//! transport, and the factorial ledger that weights their powers.

mod fields;
mod ledger;
mod norms;
mod poly;

pub use fields::*;
pub use ledger::*;
pub use norms::*;
pub use poly::{Monomial, PolyFunction};

use crate::error::Result;
use crate::exec::Exec;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Outcome of an exact identity sweep. `failures` is empty iff the identity
/// held on every case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub params: BTreeMap<String, String>,
    pub corpus_size: usize,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Seeded random polynomials with small integer coefficients, integer powers of
/// `t` up to 2, and total `(x, v)` degree at most `max_degree`.
pub fn polynomial_corpus(seed: u64, size: usize, max_degree: u32) -> Vec<PolyFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size)
        .map(|_| {
            let mut p = PolyFunction::zero();
            while p.is_zero() {
                for _ in 0..rng.random_range(1..=4) {
                    let budget = rng.random_range(0..=max_degree);
                    let mut x = [0u32; 3];
                    let mut v = [0u32; 3];
                    for _ in 0..budget {
                        let slot = rng.random_range(0..6usize);
                        if slot < 3 {
                            x[slot] += 1;
                        } else {
                            v[slot - 3] += 1;
                        }
                    }
                    let c = rng.random_range(-5i64..=5);
                    let q = Rational64::from_integer(rng.random_range(0..=2));
                    p = p.add(&PolyFunction::term(c, q, x, v));
                }
            }
            p
        })
        .collect()
}

fn collect_failures<T: Sync>(
    cases: &[T],
    exec: Exec,
    check: impl Fn(&T) -> Result<Option<String>> + Sync + Send,
) -> Result<Vec<String>> {
    let outcomes = exec.map(cases, check);
    let mut failures = Vec::new();
    for o in outcomes {
        if let Some(msg) = o? {
            failures.push(msg);
        }
    }
    Ok(failures)
}

fn residual_message(label: String, residual: PolyFunction) -> Option<String> {
    check_identity(label, residual).err().map(|v| v.to_string())
}

/// `[T, H_δ^k] = δk t^{δ−1} ∂_v H_δ^{k−1}` for every corpus member, `δ`,
/// `1 ≤ k ≤ k_max` and direction.
pub fn commutator_sweep(
    corpus: &[PolyFunction],
    deltas: &[Rational64],
    k_max: u32,
    exec: Exec,
) -> Result<IdentityReport> {
    let mut cases = Vec::new();
    for (i, _) in corpus.iter().enumerate() {
        for &d in deltas {
            for k in 1..=k_max {
                for dir in 1..=3 {
                    cases.push((i, d, k, dir));
                }
            }
        }
    }
    let failures = collect_failures(&cases, exec, |&(i, d, k, dir)| {
        let r = commutator_residual(&corpus[i], d, dir, k)?;
        Ok(residual_message(format!("poly {i}, delta {d}, k {k}, direction {dir}"), r))
    })?;
    let params = BTreeMap::from([
        ("deltas".to_string(), deltas.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")),
        ("k_max".to_string(), k_max.to_string()),
    ]);
    Ok(IdentityReport { identity_id: "transport-commutator".into(), params, corpus_size: corpus.len(), failures })
}

/// Both derivative reconstructions for every corpus member and parameter set.
pub fn reconstruction_sweep(corpus: &[PolyFunction], params: &[VFParams], exec: Exec) -> Result<IdentityReport> {
    let cases: Vec<(usize, usize)> =
        (0..corpus.len()).flat_map(|i| (0..params.len()).map(move |p| (i, p))).collect();
    let failures = collect_failures(&cases, exec, |&(i, p)| {
        let vp = &params[p];
        let (rx, rv) = reconstruction_residuals(&corpus[i], vp)?;
        let tag = format!("poly {i}, lambda {}, gamma {}, s {}", vp.lambda, vp.gamma, vp.s);
        Ok(residual_message(format!("{tag}, spatial"), rx).or_else(|| residual_message(format!("{tag}, velocity"), rv)))
    })?;
    let listed = params
        .iter()
        .map(|vp| format!("({},{},{})", vp.lambda, vp.gamma, vp.s))
        .collect::<Vec<_>>()
        .join(";");
    Ok(IdentityReport {
        identity_id: "derivative-reconstruction".into(),
        params: BTreeMap::from([("lambda_gamma_s".to_string(), listed)]),
        corpus_size: corpus.len(),
        failures,
    })
}

/// Two-field commutator expansion for every word with `1 ≤ |α| ≤ max_order`.
pub fn mixed_commutator_sweep(
    corpus: &[PolyFunction],
    deltas: (Rational64, Rational64),
    max_order: u32,
    exec: Exec,
) -> Result<IdentityReport> {
    let mut cases = Vec::new();
    for i in 0..corpus.len() {
        for n in 1..=max_order {
            for a1 in 0..=n {
                cases.push((i, a1, n - a1));
            }
        }
    }
    let failures = collect_failures(&cases, exec, |&(i, a1, a2)| {
        let r = mixed_commutator_residual(&corpus[i], deltas, (a1, a2), 1)?;
        Ok(residual_message(format!("poly {i}, alpha ({a1},{a2})"), r))
    })?;
    let params = BTreeMap::from([
        ("delta1".to_string(), deltas.0.to_string()),
        ("delta2".to_string(), deltas.1.to_string()),
        ("max_order".to_string(), max_order.to_string()),
    ]);
    Ok(IdentityReport { identity_id: "mixed-commutator".into(), params, corpus_size: corpus.len(), failures })
}

/// Product rule for `H_δ` on consecutive corpus pairs.
pub fn leibniz_sweep(corpus: &[PolyFunction], delta: Rational64, exec: Exec) -> Result<IdentityReport> {
    let pairs: Vec<usize> = (0..corpus.len()).collect();
    let failures = collect_failures(&pairs, exec, |&i| {
        let f = &corpus[i];
        let g = &corpus[(i + 1) % corpus.len()];
        let lhs = apply_h(&f.mul(g), delta, 1)?;
        let rhs = apply_h(f, delta, 1)?.mul(g).add(&f.mul(&apply_h(g, delta, 1)?));
        Ok(residual_message(format!("pair {i}"), lhs.sub(&rhs)))
    })?;
    Ok(IdentityReport {
        identity_id: "leibniz".into(),
        params: BTreeMap::from([("delta".to_string(), delta.to_string())]),
        corpus_size: corpus.len(),
        failures,
    })
}

/// Random admissible `(λ, γ, s)` with small denominators.
pub fn admissible_parameter_sweep(seed: u64, count: usize) -> Vec<(Rational64, Rational64, Rational64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let gamma = Rational64::new(-rng.random_range(1..36), 12);
        let s = Rational64::new(rng.random_range(1..12), 12);
        let two = Rational64::from_integer(2);
        if gamma + two * s <= Rational64::from_integer(-1) {
            continue;
        }
        let tau = two * s / (two - gamma);
        let floor = std::cmp::max(Rational64::from_integer(1), Rational64::from_integer(1) / (two * tau));
        let lambda = floor + Rational64::new(rng.random_range(1..=24), 8);
        out.push((lambda, gamma, s));
    }
    out
}

/// Constructs [`VFParams`] for each sampled triple; any failure is a violation
/// of `δ1 > δ2 ≥ 1`.
pub fn delta_ordering_sweep(seed: u64, count: usize) -> IdentityReport {
    let triples = admissible_parameter_sweep(seed, count);
    let failures = triples
        .iter()
        .filter_map(|&(l, g, s)| VFParams::new(l, g, s, 1).err().map(|e| format!("({l},{g},{s}): {e}")))
        .collect();
    IdentityReport {
        identity_id: "delta-ordering".into(),
        params: BTreeMap::from([("seed".to_string(), seed.to_string())]),
        corpus_size: triples.len(),
        failures,
    }
}

/// The parameter triples used for reconstruction checks: two in the weak
/// regime (`δ2 = 5/3`, `δ2 = 7/4`) and one with `δ2 = 1`.
pub fn reference_parameters() -> Vec<VFParams> {
    let r = Rational64::new;
    [(r(2, 1), r(-1, 1), r(1, 2)), (r(2, 1), r(-1, 2), r(3, 4)), (r(3, 1), r(-2, 1), r(3, 4))]
        .into_iter()
        .map(|(l, g, s)| VFParams::new(l, g, s, 1).expect("reference parameters are admissible"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn corpus_is_deterministic_and_bounded() {
        let a = polynomial_corpus(7, 20, 6);
        assert_eq!(a, polynomial_corpus(7, 20, 6));
        for p in &a {
            assert!(!p.is_zero());
            assert!(p.terms().all(|(m, _)| m.spatial_degree() <= 6));
        }
    }

    #[test]
    fn reference_parameters_cover_both_regimes() {
        let d2: Vec<_> = reference_parameters().iter().map(|p| p.delta2).collect();
        assert_eq!(d2, vec![r(5, 3), r(1, 1), r(7, 4)]);
    }

    #[test]
    fn small_sweeps_pass() {
        let corpus = polynomial_corpus(1, 6, 4);
        assert!(commutator_sweep(&corpus, &[r(3, 2)], 3, Exec::Sequential).unwrap().passed());
        assert!(reconstruction_sweep(&corpus, &reference_parameters(), Exec::Parallel).unwrap().passed());
        assert!(mixed_commutator_sweep(&corpus, (r(2, 1), r(5, 3)), 3, Exec::Sequential).unwrap().passed());
        assert!(leibniz_sweep(&corpus, r(5, 3), Exec::Sequential).unwrap().passed());
        assert!(delta_ordering_sweep(3, 100).passed());
    }
}
