use kgl_core::vector_fields::{
    commutator_residual, ledger_round_trip, ledger_value, polynomial_corpus, reconstruction_residuals, PolyFunction,
    VFParams,
};
use kgl_core::SoftPotentialParams;
use num_rational::Rational64;
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = PolyFunction> {
    (any::<u64>(), 0u32..=6).prop_map(|(seed, deg)| polynomial_corpus(seed, 1, deg).remove(0))
}

/// Admissible `(λ, γ, s)` on a twelfths lattice.
fn admissible() -> impl Strategy<Value = (Rational64, Rational64, Rational64)> {
    (1i64..36, 1i64..12, 1i64..=24).prop_filter_map("gamma + 2s > -1", |(g, s, extra)| {
        let (gamma, s) = (Rational64::new(-g, 12), Rational64::new(s, 12));
        let two = Rational64::from_integer(2);
        if gamma + two * s <= Rational64::from_integer(-1) {
            return None;
        }
        let tau = two * s / (two - gamma);
        let floor = std::cmp::max(Rational64::from_integer(1), Rational64::from_integer(1) / (two * tau));
        Some((floor + Rational64::new(extra, 8), gamma, s))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transport_commutator_is_exact(f in poly(), k in 1u32..=5, dn in 2i64..=12, dir in 1usize..=3) {
        let delta = Rational64::new(dn, 2);
        prop_assert!(commutator_residual(&f, delta, dir, k).unwrap().is_zero());
    }

    #[test]
    fn delta_ordering_and_regimes((l, g, s) in admissible()) {
        let vp = VFParams::new(l, g, s, 1).unwrap();
        let one = Rational64::from_integer(1);
        prop_assert!(vp.delta1 > vp.delta2 && vp.delta2 >= one);
        prop_assert_eq!(vp.delta1, l);
        let two = Rational64::from_integer(2);
        let tau = two * s / (two - g);
        let expected = if g / two + two * s >= one { one } else { one + (one - two * tau) * l };
        prop_assert_eq!(vp.delta2, expected);
    }

    #[test]
    fn reconstruction_is_exact(f in poly(), (l, g, s) in admissible()) {
        let vp = VFParams::new(l, g, s, 1).unwrap();
        let (rx, rv) = reconstruction_residuals(&f, &vp).unwrap();
        prop_assert!(rx.is_zero() && rv.is_zero());
    }

    #[test]
    fn differentiation_lowers_the_exponent(c in -5i64..=5, e in 0u32..6, q in 0i64..6) {
        let t = Rational64::from_integer(q);
        let f = PolyFunction::term(c, t, [e, 0, 0], [0, e + 1, 0]);
        let dx = f.diff_x(0);
        if e == 0 || c == 0 {
            prop_assert!(dx.is_zero());
        } else {
            prop_assert_eq!(dx, PolyFunction::term(c * e as i64, t, [e - 1, 0, 0], [0, e + 1, 0]));
        }
        prop_assert_eq!(f.diff_v(1), PolyFunction::term(c * (e as i64 + 1), t, [e, 0, 0], [0, e, 0]));
    }

    #[test]
    fn ledger_round_trip_vanishes(rho in 0.1f64..10.0, k in 0u32..=300, g in -2.9f64..-0.01, s in 0.01f64..0.99) {
        prop_assume!(g + 2.0 * s > -1.0);
        let e = SoftPotentialParams::new(g, s).unwrap().gevrey_exponent();
        prop_assert!(ledger_round_trip(rho, k, e).unwrap().abs() <= 1e-12 * (1.0 + k as f64).powi(2));
        if k == 0 {
            prop_assert_eq!(ledger_value(rho, 0, e).unwrap(), 1.0);
        }
    }
}
