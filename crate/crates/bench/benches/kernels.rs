use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use setbm::{embed, gh_diff, hausdorff, simulate_bm, DirectionGrid, TimeGrid};
use setbm_bench::{crossing_pair, nested_pair};

fn embedding(c: &mut Criterion) {
    let (a, _) = crossing_pair(64);
    let mut g = c.benchmark_group("embed");
    for m in [64, 256, 1024] {
        let grid = DirectionGrid::circle(m).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(m), &grid, |bch, grid| bch.iter(|| embed(&a, grid).unwrap()));
    }
    g.finish();
}

fn distance(c: &mut Criterion) {
    let mut g = c.benchmark_group("hausdorff");
    for n in [8, 32, 128] {
        let (a, b) = crossing_pair(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &(a, b), |bch, (a, b)| {
            bch.iter(|| hausdorff(a, b).unwrap())
        });
    }
    g.finish();
}

fn difference(c: &mut Criterion) {
    let grid = DirectionGrid::circle(256).unwrap();
    let mut g = c.benchmark_group("gh_diff");
    for n in [8, 32] {
        let (a, b) = nested_pair(n);
        g.bench_with_input(BenchmarkId::new("nested", n), &(a, b), |bch, (a, b)| {
            bch.iter(|| gh_diff(a, b, &grid).unwrap())
        });
        let (a, b) = crossing_pair(n);
        g.bench_with_input(BenchmarkId::new("crossing", n), &(a, b), |bch, (a, b)| {
            bch.iter(|| gh_diff(a, b, &grid).unwrap())
        });
    }
    g.finish();
}

fn simulation(c: &mut Criterion) {
    let grid = DirectionGrid::circle(16).unwrap();
    let tg = TimeGrid::uniform(100, 1.0).unwrap();
    let mut g = c.benchmark_group("simulate_bm");
    g.sample_size(20);
    for n in [1_000, 10_000] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |bch, &n| {
            bch.iter(|| simulate_bm(&tg, &grid, n, 42).unwrap())
        });
    }
    g.finish();
}

criterion_group!(kernels, embedding, distance, difference, simulation);
criterion_main!(kernels);
