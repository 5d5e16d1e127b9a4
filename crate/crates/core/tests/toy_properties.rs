use kgl_core::spectral::{apply_multiplier, MultiplierSpec, SpectralField, VelocityGrid};
use kgl_core::toy::{block_decay_exact, block_rate, evolve_toy, sharpness_infimum, BlockLawState, ToyParams};
use kgl_core::SoftPotentialParams;
use proptest::prelude::*;

fn admissible() -> impl Strategy<Value = SoftPotentialParams> {
    (-2.9f64..-0.01, 0.01f64..0.99).prop_filter_map("gamma + 2s > -1", |(g, s)| SoftPotentialParams::new(g, s).ok())
}

fn gaussian(grid: VelocityGrid, c: f64, center: f64) -> SpectralField {
    SpectralField::from_fn(grid, |v| (-c * (v[0] - center).powi(2)).exp()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn law_is_closed_form(p in admissible(), t in 0.0f64..2.0, a0 in 0.1f64..2.0) {
        let st = BlockLawState::flat(p, a0, t, 12, 8).unwrap();
        let st0 = BlockLawState::flat(p, a0, 0.0, 12, 8).unwrap();
        for (j, k, lm) in st.entries() {
            let expect = st0.log_magnitude(j, k) - t * block_rate(j, k, &p);
            prop_assert!((lm - expect).abs() <= 1e-12 * expect.abs().max(1.0));
            let decay = block_decay_exact(j, k, t, &p);
            if decay > 1e-300 {
                prop_assert!((decay.ln() + t * block_rate(j, k, &p)).abs() <= 1e-12 * (1.0 + t * block_rate(j, k, &p)));
            }
        }
    }

    #[test]
    fn infimum_is_the_brute_force_minimum(p in admissible(), j in 0i32..40, a0 in 0.1f64..4.0) {
        let r = sharpness_infimum(j, &p, a0, 64).unwrap();
        let cost = |k: i32| 2f64.powf(2.0 * p.s() * j as f64 + p.gamma() * k as f64) + a0 * 4f64.powi(k);
        prop_assert!((0..=r.k_max).all(|k| cost(k) >= r.value));
        prop_assert_eq!(r.value, cost(r.k_star));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn evolution_contracts(p in admissible(), c in 0.3f64..3.0, center in -2.0f64..2.0) {
        let grid = VelocityGrid::new(1, 128, 12.0).unwrap();
        let f0 = gaussian(grid, c, center);
        let toy = ToyParams::new(p, 1.0, 0.5, grid, 16).unwrap();
        let norms = evolve_toy(&f0, &toy).unwrap().norms();
        for w in norms.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-10));
        }
    }

    #[test]
    fn constant_coefficient_evolution_commutes_with_multipliers(s in 0.05f64..0.95, order in -1.0f64..1.0, c in 0.3f64..3.0) {
        let p = SoftPotentialParams::new_diagnostic(0.0, s).unwrap();
        let grid = VelocityGrid::new(1, 128, 12.0).unwrap();
        let f0 = gaussian(grid, c, 0.3);
        let m = MultiplierSpec::JapaneseBracket { order };
        let toy = ToyParams::new(p, 1.0, 0.5, grid, 16).unwrap();
        let a = apply_multiplier(evolve_toy(&f0, &toy).unwrap().last(), m).unwrap();
        let b = evolve_toy(&apply_multiplier(&f0, m).unwrap(), &toy).unwrap();
        prop_assert!(a.sub(b.last()).unwrap().max_abs() <= 1e-10 * a.max_abs().max(1e-300));
    }
}
