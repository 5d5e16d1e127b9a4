//! Sequential against rayon-backed execution on the heavy sweeps. Without the
//! `parallel` feature both variants run sequentially.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kgl_core::corpus;
use kgl_core::dyadic::{measure_blocks, norm_equivalence_suite, BumpPair};
use kgl_core::exec::Exec;
use kgl_core::inequalities::{standard_suite, SuiteSettings};
use kgl_core::spectral::{SpectralField, VelocityGrid};
use kgl_core::toy::sharpness_sweep;
use kgl_core::SoftPotentialParams;
use std::hint::black_box;

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn block_measurement(c: &mut Criterion) {
    let bump = BumpPair::new(4096).unwrap();
    let grid = VelocityGrid::new(1, 4096, 32.0).unwrap();
    let f = SpectralField::from_fn(grid, |v| (-v[0] * v[0]).exp() * (1.0 + (7.0 * v[0]).cos())).unwrap();
    let mut g = c.benchmark_group("measure_blocks");
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| measure_blocks(black_box(&f), &bump, exec).unwrap())
        });
    }
    g.finish();
}

fn corpus_suites(c: &mut Criterion) {
    let bump = BumpPair::new(4096).unwrap();
    let members = corpus::standard(1, 50);
    let pairs = [(0.0, 0.0), (1.0, 0.0), (-0.5, 0.5)];
    let settings = SuiteSettings { corpus_size: 50, ..SuiteSettings::default() };
    let mut g = c.benchmark_group("corpus");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::new("norm_equivalence", name), |b| {
            b.iter(|| norm_equivalence_suite(&members, corpus::default_grid(), &bump, &pairs, exec).unwrap())
        });
        g.bench_function(BenchmarkId::new("inequalities", name), |b| {
            b.iter(|| standard_suite(black_box(&settings), exec).unwrap())
        });
    }
    g.finish();
}

fn sharpness(c: &mut Criterion) {
    let prm = SoftPotentialParams::new(-1.0, 0.5).unwrap();
    let mut g = c.benchmark_group("sharpness_sweep");
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sharpness_sweep(1..=200, black_box(&prm), 1.0, 256, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, block_measurement, corpus_suites, sharpness);
criterion_main!(benches);
