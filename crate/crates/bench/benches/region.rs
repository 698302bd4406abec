use criterion::{criterion_group, criterion_main, Criterion};
use dilation_core::region::theta_grid;
use dilation_core::seed::task_rng;
use dilation_core::subsampling::{cht_subsample_sups, SubsampleConfig};
use dilation_core::{confidence_region_bisect, confidence_region_scan, Interval, ShiftModel};
use rand::Rng;

fn sample(n: usize) -> Vec<f64> {
    let mut rng = task_rng(9, 0);
    // rough normal draws via the sum of uniforms are enough for timing
    (0..n).map(|_| (0..12).map(|_| rng.random::<f64>()).sum::<f64>() - 6.0).collect()
}

fn regions(c: &mut Criterion) {
    let grid = theta_grid(-3.0, 3.0, 0.01).unwrap();
    let y = sample(500);
    let model = ShiftModel::default();
    let mut group = c.benchmark_group("region_n500");
    group.bench_function("full_scan", |b| b.iter(|| confidence_region_scan(&y, 0.15, &grid, &model, 0.05).unwrap()));
    group.bench_function("bisect", |b| b.iter(|| confidence_region_bisect(&y, 0.15, &grid, &model, 0.05).unwrap()));
    let config = SubsampleConfig {
        subsample_size: 450,
        num_subsamples: 500,
        alpha: 0.05,
        seed: 1,
        known_identified_set: Interval::new(-1.0, 1.0),
    };
    group.sample_size(20);
    group.bench_function("subsample_sups_500", |b| b.iter(|| cht_subsample_sups(&y, &config, &grid, &model).unwrap()));
    group.finish();
}

criterion_group!(benches, regions);
criterion_main!(benches);
