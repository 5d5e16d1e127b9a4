//! Exact polynomials in `(t, x, v)` with rational powers of `t`.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

/// Exponents of `t^q x^a v^b`, with up to three components each for `x`, `v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub t: Rational64,
    pub x: [u32; 3],
    pub v: [u32; 3],
}

impl Monomial {
    pub fn unit() -> Self {
        Self { t: Rational64::zero(), x: [0; 3], v: [0; 3] }
    }

    /// Total degree in `x` and `v`.
    pub fn spatial_degree(&self) -> u32 {
        self.x.iter().chain(&self.v).sum()
    }
}

pub(crate) fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Finite sum of monomials with exact rational coefficients. Zero
/// coefficients are never stored, so the zero polynomial is the empty map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyFunction {
    terms: BTreeMap<Monomial, BigRational>,
}

impl PolyFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, Monomial::unit())
    }

    pub fn monomial(c: BigRational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// `c · t^q · x^a · v^b`.
    pub fn term(c: i64, q: Rational64, x: [u32; 3], v: [u32; 3]) -> Self {
        Self::monomial(BigRational::from_integer(c.into()), Monomial { t: q, x, v })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut x = [0; 3];
                let mut v = [0; 3];
                for i in 0..3 {
                    x[i] = ma.x[i] + mb.x[i];
                    v[i] = ma.v[i] + mb.v[i];
                }
                out.add_term(Monomial { t: ma.t + mb.t, x, v }, ca * cb);
            }
        }
        out
    }

    /// Multiplies by `t^q`.
    pub fn mul_t_pow(&self, q: Rational64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial { t: m.t + q, ..m.clone() }, c.clone()))
                .collect(),
        }
    }

    /// Multiplies by `v_axis`.
    pub fn mul_v(&self, axis: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.v[axis] += 1;
                    (m, c.clone())
                })
                .collect(),
        }
    }

    pub fn diff_t(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if !m.t.is_zero() {
                out.add_term(Monomial { t: m.t - Rational64::one(), ..m.clone() }, c * big(m.t));
            }
        }
        out
    }

    pub fn diff_x(&self, axis: usize) -> Self {
        self.diff_space(axis, false)
    }

    pub fn diff_v(&self, axis: usize) -> Self {
        self.diff_space(axis, true)
    }

    fn diff_space(&self, axis: usize, velocity: bool) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = if velocity { m.v[axis] } else { m.x[axis] };
            if e == 0 {
                continue;
            }
            let mut n = m.clone();
            if velocity {
                n.v[axis] -= 1;
            } else {
                n.x[axis] -= 1;
            }
            out.add_term(n, c * BigRational::from_integer(e.into()));
        }
        out
    }

    /// Numerical value at `t > 0`, for cross-checks only.
    pub fn eval(&self, t: f64, x: [f64; 3], v: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut p = c.to_f64().unwrap_or(f64::NAN) * t.powf(m.t.to_f64().unwrap_or(f64::NAN));
                for i in 0..3 {
                    p *= x[i].powi(m.x[i] as i32) * v[i].powi(m.v[i] as i32);
                }
                p
            })
            .sum()
    }
}

impl fmt::Display for PolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            write!(f, "{}", c.abs())?;
            if !m.t.is_zero() {
                write!(f, "·t^{}", m.t)?;
            }
            for (name, exps) in [("x", &m.x), ("v", &m.v)] {
                for (a, &e) in exps.iter().enumerate() {
                    if e > 0 {
                        write!(f, "·{name}{}^{e}", a + 1)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn derivatives_follow_power_rule() {
        let p = PolyFunction::term(3, r(5, 3), [2, 0, 0], [0, 1, 0]);
        let dt = p.diff_t();
        assert_eq!(dt, PolyFunction::monomial(BigRational::from_integer(5.into()), Monomial { t: r(2, 3), x: [2, 0, 0], v: [0, 1, 0] }));
        assert_eq!(p.diff_x(0), PolyFunction::term(6, r(5, 3), [1, 0, 0], [0, 1, 0]));
        assert!(p.diff_v(0).is_zero());
        assert!(PolyFunction::term(4, r(0, 1), [0; 3], [0; 3]).diff_t().is_zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = PolyFunction::term(2, r(1, 2), [1, 0, 0], [0; 3]);
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.sub(&p).to_string(), "0");
    }

    #[test]
    fn product_rule_for_derivatives() {
        let a = PolyFunction::term(1, r(1, 1), [1, 0, 0], [2, 0, 0]).add(&PolyFunction::term(-3, r(0, 1), [0; 3], [1, 0, 0]));
        let b = PolyFunction::term(2, r(1, 3), [0, 1, 0], [1, 0, 0]);
        let lhs = a.mul(&b).diff_v(0);
        let rhs = a.diff_v(0).mul(&b).add(&a.mul(&b.diff_v(0)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_matches_structure() {
        let p = PolyFunction::term(2, r(1, 2), [1, 0, 0], [0, 0, 2]);
        assert!((p.eval(4.0, [3.0, 0.0, 0.0], [0.0, 0.0, 0.5]) - 2.0 * 2.0 * 3.0 * 0.25).abs() < 1e-14);
    }
}
