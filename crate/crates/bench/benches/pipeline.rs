use bcov_core::euler_holo::holo_report;
use bcov_core::euler_top::{total_chi_y0, StratumOptions};
use bcov_core::gw::n1_invariants;
use bcov_core::lattice_fan::{build_fan_pi, certify};
use bcov_core::ledger::series_checks;
use bcov_core::series::ipq_table;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn fan(c: &mut Criterion) {
    c.bench_function("build_fan_pi", |b| b.iter(|| build_fan_pi().unwrap()));
    let pi = build_fan_pi().unwrap();
    c.bench_function("certify_pi", |b| {
        b.iter(|| certify(black_box(&pi)).unwrap())
    });
}

fn euler(c: &mut Criterion) {
    let pi = build_fan_pi().unwrap();
    let mut g = c.benchmark_group("euler");
    g.sample_size(10);
    g.bench_function("chi_top", |b| {
        b.iter(|| total_chi_y0(black_box(&pi), &StratumOptions::default()).unwrap())
    });
    g.bench_function("chi_holo_guard64", |b| {
        b.iter(|| holo_report(black_box(&pi), 64).unwrap())
    });
    g.finish();
}

fn series(c: &mut Criterion) {
    c.bench_function("ipq_table_12", |b| {
        b.iter(|| ipq_table(black_box(12)).unwrap())
    });
    c.bench_function("series_checks_12", |b| {
        b.iter(|| series_checks(black_box(12)).unwrap())
    });
    c.bench_function("n1_invariants_12", |b| {
        b.iter(|| n1_invariants(black_box(12)).unwrap())
    });
}

criterion_group!(benches, fan, euler, series);
criterion_main!(benches);
