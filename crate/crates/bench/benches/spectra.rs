use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use optomech::presets::{FigurePreset, GAMMA};
use optomech::spectra::{characteristic_roots, residues};
use optomech::stability::{assemble_drift, is_stable};
use optomech::{sweep, Approximation, Grid};
use optomech_bench::{fixture, split_fixture};

fn bench_sweep(c: &mut Criterion) {
    let (spec, drive) = fixture(FigurePreset::Fig2, 2);
    let grid = Grid::around_sideband(20.0 * GAMMA, 2001);
    c.bench_function("sweep_fig2_2001", |b| b.iter(|| sweep(black_box(&spec), black_box(&drive), &grid).unwrap()));
}

fn bench_roots(c: &mut Criterion) {
    let mut group = c.benchmark_group("characteristic_roots_exact");
    for n in [2usize, 4, 8, 16] {
        let (spec, drive) = fixture(FigurePreset::Fig3, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| characteristic_roots(black_box(&spec), black_box(&drive), Approximation::Exact).unwrap())
        });
    }
    group.finish();

    let (spec, drive) = split_fixture(FigurePreset::Fig3, 1.25);
    c.bench_function("residues_two_mode", |b| {
        b.iter(|| residues(black_box(&spec), black_box(&drive), Approximation::ConstantChiC).unwrap())
    });
}

fn bench_stability(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_stable");
    for n in [2usize, 8, 16] {
        let (spec, drive) = fixture(FigurePreset::Fig3, n);
        let drift = assemble_drift(&spec, &drive);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| is_stable(black_box(&drift)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweep, bench_roots, bench_stability);
criterion_main!(benches);
