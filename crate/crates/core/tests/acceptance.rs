//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion with its
//! measured values and runtime, and exits non-zero if any criterion fails.
//! A criterion passes only if its numbers are within tolerance and it ran
//! within its time budget.

use kgl_core::corpus;
use kgl_core::dyadic::{
    last_frequency_shell, norm_equivalence_suite, project_frequency, BumpPair, EQUIVALENCE_BAND, REFINEMENT_TOLERANCE,
};
use kgl_core::exec::Exec;
use kgl_core::inequalities::{standard_suite, SuiteSettings, REGULARIZER_CONSTANT};
use kgl_core::solver::{
    admissibility, moments, picard_with_retry, richardson_order, solve, MomentBounds, PhaseField, RegularizedProblem,
    RATIO_ENVELOPE,
};
use kgl_core::spectral::{SpectralField, VelocityGrid};
use kgl_core::toy::{
    estimate_gevrey_index, pde_consistency, predicted_index, sharpness_infimum, sharpness_sweep, BlockLawState,
    GevreySource, ToyParams,
};
use kgl_core::vector_fields::{
    commutator_sweep, convolution_bound, ledger_round_trip, log_ledger_value, mixed_commutator_sweep,
    polynomial_corpus, reconstruction_sweep, reference_parameters,
};
use kgl_core::SoftPotentialParams;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

type Outcome = Result<(bool, String), String>;
/// Name, time budget in seconds, and the check itself.
type Criterion = (&'static str, f64, fn() -> Outcome);

fn prm(gamma: f64, s: f64) -> SoftPotentialParams {
    SoftPotentialParams::new(gamma, s).expect("admissible parameters")
}

fn within(measured: f64, expected: f64, rel: f64) -> bool {
    (measured / expected - 1.0).abs() <= rel
}

fn sharp_index() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (g, s) in [(-1.0, 0.5), (-2.0, 0.75)] {
        let p = prm(g, s);
        let law = BlockLawState::flat(p, 1.0, 1.0, 40, 128).map_err(|e| e.to_string())?;
        let fit = estimate_gevrey_index(GevreySource::Law(&law), (16, 40)).map_err(|e| e.to_string())?;
        let expected = 4.0 * s / (2.0 - g);
        let this = within(fit.slope, expected, 0.01) && within(fit.r_hat, (2.0 - g) / (4.0 * s), 0.01);
        ok &= this;
        notes.push(format!("({g},{s}): slope {:.5} vs {expected:.5}, r {:.4}", fit.slope, fit.r_hat));
    }
    Ok((ok, notes.join("; ")))
}

fn analytic_clamp() -> Outcome {
    let p = prm(-0.5, 0.75);
    let law = BlockLawState::flat(p, 1.0, 1.0, 40, 128).map_err(|e| e.to_string())?;
    let fit = estimate_gevrey_index(GevreySource::Law(&law), (16, 40)).map_err(|e| e.to_string())?;
    let ok = fit.clamped_index == 1.0 && predicted_index(&p) == 1.0 && p.raw_index() < 1.0;
    Ok((ok, format!("raw {:.4}, fitted r {:.4}, reported index {}", p.raw_index(), fit.r_hat, fit.clamped_index)))
}

fn pde_law_consistency() -> Outcome {
    let grid = VelocityGrid::new(1, 4096, 32.0).map_err(|e| e.to_string())?;
    let toy = ToyParams::new(prm(-1.0, 0.5), 1.0, 1.0, grid, 16).map_err(|e| e.to_string())?;
    let bump = BumpPair::new(4096).map_err(|e| e.to_string())?;
    let pc = pde_consistency(&toy, 1, &bump, Exec::Parallel).map_err(|e| e.to_string())?;
    let worst = pc.comparison.worst_discrepancy();
    let (slope_ok, slope) = match &pc.fit {
        Ok(fit) => (within(fit.slope, 2.0 / 3.0, 0.15), format!("{:.4}", fit.slope)),
        Err(e) => (false, format!("no fit ({e})")),
    };
    let at = pc.comparison.worst.map_or(String::new(), |w| format!(" at (j={}, k={})", w.j, w.k));
    Ok((worst <= 4.0 && slope_ok, format!("worst block factor {worst:.3e}{at} (bound 4), slope {slope} vs 0.6667 (15%)")))
}

fn infimum() -> Outcome {
    let p = prm(-1.0, 0.5);
    let r = sharpness_infimum(10, &p, 1.0, 64).map_err(|e| e.to_string())?;
    let sweep = sharpness_sweep(1..=40, &p, 1.0, 64, Exec::Sequential).map_err(|e| e.to_string())?;
    let ratios: Vec<f64> = sweep.iter().map(|x| x.value / 2f64.powf(2.0 * x.j as f64 / 3.0)).collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    let ok = (r.k_star, r.value) == (3, 192.0) && lo >= 0.125 && hi <= 8.0;
    Ok((ok, format!("(k*, value) = ({}, {}), ratio in [{lo:.4}, {hi:.4}]", r.k_star, r.value)))
}

fn partition_of_unity() -> Outcome {
    let bump = BumpPair::new(4096).map_err(|e| e.to_string())?;
    let grid = corpus::default_grid();
    let last = last_frequency_shell(&grid);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let band = grid.max_frequency();
    let partition = (0..10_000)
        .map(|_| (bump.partition_sum(rng.random_range(0.0..=band), last) - 1.0).abs())
        .fold(0.0f64, f64::max);
    let mut recon = 0.0f64;
    for member in corpus::packets(5, 50) {
        let f = member.function.sample(grid).map_err(|e| e.to_string())?;
        let mut sum = SpectralField::zeros(grid);
        for j in -1..=last {
            sum = sum.add(&project_frequency(&f, &bump, j).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        }
        recon = recon.max(sum.sub(&f).map_err(|e| e.to_string())?.max_abs() / f.max_abs());
    }
    Ok((partition <= 1e-12 && recon <= 1e-10, format!("partition {partition:.2e} (1e-12), reconstruction {recon:.2e} (1e-10)")))
}

fn norm_characterization() -> Outcome {
    let p = prm(-1.0, 0.5);
    let pairs = [(0.0, 0.0), (1.0, 0.0), (0.0, p.tau()), (-0.5, 0.5)];
    let bump = BumpPair::new(4096).map_err(|e| e.to_string())?;
    let members = corpus::standard(1, 200);
    let reports = norm_equivalence_suite(&members, corpus::default_grid(), &bump, &pairs, Exec::Parallel)
        .map_err(|e| e.to_string())?;
    let lo = reports.iter().map(|r| r.min_ratio).fold(f64::INFINITY, f64::min);
    let hi = reports.iter().map(|r| r.max_ratio).fold(0.0, f64::max);
    let change = reports.iter().map(|r| r.max_refinement_change).fold(0.0, f64::max);
    let ok = reports.iter().all(|r| r.passed())
        && lo >= EQUIVALENCE_BAND.0
        && hi <= EQUIVALENCE_BAND.1
        && change <= REFINEMENT_TOLERANCE;
    Ok((ok, format!("ratio in [{lo:.4}, {hi:.4}], refinement change {change:.2e} over 200 functions x 4 pairs")))
}

fn inequality_suite() -> Outcome {
    let reports = standard_suite(&SuiteSettings::default(), Exec::Parallel).map_err(|e| e.to_string())?;
    let failures: usize = reports.iter().map(|r| r.failures.len()).sum();
    let eps = reports.iter().find(|r| r.inequality_id == "weighted-epsilon").ok_or("weighted-epsilon missing")?;
    let slope_err = eps.metrics.get("slope_relative_error").copied().unwrap_or(f64::INFINITY);
    let reg = reports.iter().find(|r| r.inequality_id == "regularizer-bound").ok_or("regularizer missing")?;
    let ok = reports.len() == 6 && failures == 0 && slope_err <= 0.25 && reg.fitted_constant == REGULARIZER_CONSTANT;
    Ok((
        ok,
        format!(
            "{} checks, {failures} failures, epsilon slope error {slope_err:.3} (0.25), regularizer constant {}",
            reports.len(),
            reg.fitted_constant
        ),
    ))
}

fn vector_field_algebra() -> Outcome {
    let r = Rational64::new;
    let polys = polynomial_corpus(1, 50, 6);
    let refs = reference_parameters();
    let deltas = [r(1, 1), r(3, 2), r(2, 1), r(5, 3)];
    let reports = [
        commutator_sweep(&polys, &deltas, 5, Exec::Parallel),
        mixed_commutator_sweep(&polys, (refs[0].delta1, refs[0].delta2), 4, Exec::Parallel),
        reconstruction_sweep(&polys, &refs, Exec::Parallel),
    ];
    let mut failures = 0;
    for rep in reports {
        failures += rep.map_err(|e| e.to_string())?.failures.len();
    }
    let w = &refs[0];
    let worked = (w.delta1, w.delta2) == (r(2, 1), r(5, 3))
        && w.spatial_coefficients() == (r(-24, 1), r(24, 1))
        && w.velocity_coefficients() == (r(9, 1), r(-8, 1));
    Ok((failures == 0 && worked, format!("{failures} nonzero residuals over 50 polynomials, worked instance {worked}")))
}

fn ledger() -> Outcome {
    let e = prm(-1.0, 0.5).gevrey_exponent();
    let mut worst = 0.0f64;
    for k in 0..=200 {
        let rt = ledger_round_trip(2.0, k, e).map_err(|e| e.to_string())?;
        let scale = 1.0 + log_ledger_value(2.0, k, e).map_err(|e| e.to_string())?.abs();
        worst = worst.max(rt.abs() / scale);
    }
    let half = convolution_bound(5_000, Exec::Parallel).map_err(|e| e.to_string())?;
    let full = convolution_bound(10_000, Exec::Parallel).map_err(|e| e.to_string())?;
    let delta = (full.sup - half.sup).abs();
    Ok((
        worst <= 1e-12 && delta <= 1e-6,
        format!("round trip {worst:.2e} for k <= 200, sup {:.10} with change {delta:.2e} (1e-6)", full.sup),
    ))
}

fn picard() -> Outcome {
    let p = prm(-1.0, 0.5);
    let grid = VelocityGrid::new(1, 128, 6.0).map_err(|e| e.to_string())?;
    let problem = RegularizedProblem::new(0.1, p, 0.25, grid, 1, 0.1, 32).map_err(|e| e.to_string())?;
    let f_in = PhaseField::from_fn(1, grid, |_, v| (-v * v).exp()).map_err(|e| e.to_string())?;
    let outcome = picard_with_retry(&f_in, &problem, 15).map_err(|e| e.to_string())?;
    let state = outcome.accepted().ok_or("no horizon contracted")?;
    let eventual = state.ratios.iter().rev().take(3).all(|&r| r <= RATIO_ENVELOPE);
    let order = richardson_order(1.1, 1.0, 16).order;
    let ok = eventual && state.fixed_point_residual <= 1e-6 && (1.8..=2.2).contains(&order);
    Ok((
        ok,
        format!(
            "T = {}, last ratio {:.3}, residual {:.2e} (1e-6), time order {order:.4}",
            state.t_final,
            state.ratios.last().copied().unwrap_or(f64::NAN),
            state.fixed_point_residual
        ),
    ))
}

fn moment_checks() -> Outcome {
    let p = prm(-1.0, 0.5);
    let grid = VelocityGrid::new(1, 128, 8.0).map_err(|e| e.to_string())?;
    let g = moments(&PhaseField::from_fn(1, grid, |_, v| (-v * v).exp()).map_err(|e| e.to_string())?);
    let mass_err = (g.mean_mass() - PI.sqrt()).abs();
    let energy_err = (g.mean_energy() - PI.sqrt() / 2.0).abs();

    let t = 0.5;
    let problem = RegularizedProblem::new_diagnostic(0.0, p, 1.0, grid, 15, t, 50).map_err(|e| e.to_string())?;
    let f = PhaseField::from_fn(15, grid, |x, v| (1.0 + 0.5 * x.cos()) * (-v * v).exp()).map_err(|e| e.to_string())?;
    let traj = solve(&problem, &f, None).map_err(|e| e.to_string())?;
    let drift = (moments(traj.last()).mean_mass() - moments(&f).mean_mass()).abs() / t;

    let bounds = MomentBounds { mass_lower: 1.0, mass_upper: 2.0, energy: 1.0, entropy: 1.0 };
    let vacuum = admissibility(&moments(&PhaseField::zeros(1, grid).map_err(|e| e.to_string())?), &bounds);
    let hot = PhaseField::from_fn(1, grid, |_, v| (-(v * v) / 8.0).exp() / 4.0).map_err(|e| e.to_string())?;
    let hot = admissibility(&moments(&hot), &bounds);
    let fine = admissibility(&g, &bounds);
    let flags_ok = vacuum.vacuum && !vacuum.admissible() && hot.excess_energy && !hot.vacuum && fine.admissible();
    Ok((
        mass_err <= 1e-8 && energy_err <= 1e-8 && drift <= 1e-10 && flags_ok,
        format!("mass {mass_err:.1e}, energy {energy_err:.1e}, transport drift {drift:.1e}/time, flags {flags_ok}"),
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("sharp index from the block law", 1.0, sharp_index),
        ("analytic-regime clamp", 1.0, analytic_clamp),
        ("toy evolution against the block law", 60.0, pde_law_consistency),
        ("sharpness infimum", 0.1, infimum),
        ("partition of unity and reconstruction", 5.0, partition_of_unity),
        ("block-sum norm characterization", 30.0, norm_characterization),
        ("inequality suite", 60.0, inequality_suite),
        ("vector-field algebra", 5.0, vector_field_algebra),
        ("ledger and convolution bound", 5.0, ledger),
        ("Picard contraction and time order", 120.0, picard),
        ("moments and admissibility flags", 5.0, moment_checks),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match result {
            Ok((ok, detail)) => (ok && secs <= *budget, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "{} criterion {:>2} {name}: {detail} [{secs:.3} s of {budget} s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 11 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
