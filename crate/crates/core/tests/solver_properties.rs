use kgl_core::solver::{picard_iterate, solve, PhaseField, RegularizedProblem, RATIO_ENVELOPE};
use kgl_core::spectral::VelocityGrid;
use kgl_core::SoftPotentialParams;
use proptest::prelude::*;

fn grid() -> VelocityGrid {
    VelocityGrid::new(1, 64, 6.0).unwrap()
}

fn data(m: usize, c: f64, center: f64, amp: f64) -> PhaseField {
    PhaseField::from_fn(m, grid(), |x, v| (1.0 + amp * x.cos()) * (-c * (v - center).powi(2)).exp()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn zero_source_steps_contract(
        eps in 0.0f64..=1.0, c in 0.5f64..3.0, center in -1.0f64..1.0, amp in 0.0f64..0.9, m in prop::sample::select(vec![1usize, 3, 7])
    ) {
        let prm = SoftPotentialParams::new(-1.0, 0.5).unwrap();
        let p = RegularizedProblem::new_diagnostic(eps, prm, 0.25, grid(), m, 0.1, 16).unwrap();
        let traj = solve(&p, &data(m, c, center, amp), None).unwrap();
        for w in traj.snapshots.windows(2) {
            prop_assert!(w[1].l2_norm() <= w[0].l2_norm() * (1.0 + 1e-13));
        }
    }

    #[test]
    fn contracted_picard_runs_stay_in_the_envelope(eps in 0.05f64..0.5, c in 0.5f64..2.0) {
        let prm = SoftPotentialParams::new(-1.0, 0.5).unwrap();
        let p = RegularizedProblem::new(eps, prm, 0.25, grid(), 1, 0.05, 16).unwrap();
        let state = picard_iterate(&data(1, c, 0.0, 0.0), &p, 10).unwrap();
        prop_assert_eq!(state.diff_norms.len(), state.iterations);
        // The ratio into the rounding floor is dropped, every earlier one is kept.
        let n = state.diff_norms.len();
        prop_assert!(state.ratios.len() + 1 == n || state.ratios.len() + 2 == n);
        if state.contracted {
            prop_assert!(state.envelope_holds());
            prop_assert!(state.ratios.iter().rev().take(3).all(|&r| r <= RATIO_ENVELOPE));
        }
    }
}
