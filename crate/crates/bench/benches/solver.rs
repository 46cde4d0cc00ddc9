use std::hint::black_box;

use aomm_core::model::{default_config, Couplings};
use aomm_core::presets::preset;
use aomm_core::response::{self, DelayMode};
use aomm_core::spectra::{delay_surface, sweep_spectrum, GridSpec};
use aomm_core::tdoracle::{self, ORACLE_TOLERANCE};
use criterion::{criterion_group, criterion_main, Criterion};

fn fig3d() -> aomm_core::SystemConfig {
    default_config().with_couplings(Couplings::from_hz(8e6, 8e6, 8e6))
}

fn pointwise(c: &mut Criterion) {
    let cfg = fig3d();
    c.bench_function("solve_sidebands", |b| {
        b.iter(|| response::solve_sidebands(black_box(&cfg), black_box(1.3e5)))
    });
    c.bench_function("c_plus_closed_form", |b| {
        b.iter(|| response::c_plus_closed_form(black_box(&cfg), black_box(1.3e5)))
    });
    c.bench_function("group_delay_eq8", |b| {
        b.iter(|| response::group_delay(black_box(&cfg), black_box(cfg.omega_b + 1.3e5), DelayMode::OutputField))
    });
}

fn sweeps(c: &mut Criterion) {
    let cfg = fig3d();
    let grid = GridSpec::center_refined(&cfg).build(cfg.omega_b).unwrap();
    c.bench_function("sweep_center_refined", |b| {
        b.iter(|| sweep_spectrum(black_box(&cfg), &grid))
    });

    let p = preset("fig6").unwrap();
    let grid = p.grid.build(p.config.omega_b).unwrap();
    let etas: Vec<f64> = (0..200).map(|i| 2.0 * i as f64 / 199.0).collect();
    c.bench_function("delay_surface_200x200", |b| {
        b.iter(|| delay_surface(black_box(&p.config), &etas, &grid))
    });
}

fn oracle(c: &mut Criterion) {
    let cfg = tdoracle::desk_scale(&fig3d());
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("cross_check_kappa_c", |b| {
        b.iter(|| tdoracle::cross_check(&cfg, &[cfg.rates.kappa_c], None, ORACLE_TOLERANCE))
    });
    group.finish();
}

criterion_group!(benches, pointwise, sweeps, oracle);
criterion_main!(benches);
