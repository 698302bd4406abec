use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dilation_core::bootstrap::{bootstrap_etas, MatchStrategy};
use dilation_core::seed::task_rng;
use dilation_core::{bottleneck_match, sorted_match_1d, Norm, PointCloud};
use rand::Rng;

fn uniform_cloud(n: usize, d: usize, seed: u64) -> PointCloud {
    let mut rng = task_rng(seed, 0);
    let coords = (0..n * d).map(|_| rng.random::<f64>()).collect();
    PointCloud::from_flat(coords, d, Norm::Sup).unwrap()
}

fn bottleneck(c: &mut Criterion) {
    let mut group = c.benchmark_group("bottleneck_match_2d");
    for n in [50, 200, 800] {
        let a = uniform_cloud(n, 2, 1);
        let b = uniform_cloud(n, 2, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| bottleneck_match(&a, &b).unwrap().cost)
        });
    }
    group.finish();

    let mut group = c.benchmark_group("univariate_1000");
    let a = uniform_cloud(1000, 1, 3);
    let b = uniform_cloud(1000, 1, 4);
    group.bench_function("sorted", |bench| bench.iter(|| sorted_match_1d(&a, &b).unwrap().cost));
    group.bench_function("bottleneck", |bench| bench.iter(|| bottleneck_match(&a, &b).unwrap().cost));
    group.finish();
}

fn bootstrap(c: &mut Criterion) {
    let mut group = c.benchmark_group("bootstrap_etas_100_replicates");
    group.sample_size(10);
    for (n, d) in [(500, 1), (100, 2), (400, 2)] {
        let cloud = uniform_cloud(n, d, 5);
        group.bench_function(format!("n{n}_d{d}"), |bench| {
            bench.iter(|| bootstrap_etas(&cloud, 100, 7, MatchStrategy::Auto).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bottleneck, bootstrap);
criterion_main!(benches);
