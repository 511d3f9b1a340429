use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subtraj_bench::{corridor, walk, CORRIDOR_DELTA};
use subtraj_core::fast::{rank_select_coarsen, solve_sc_fast, VecList};
use subtraj_core::sc::solve_sc;
use subtraj_core::scm::solve_scm;

fn cover(c: &mut Criterion) {
    let mut g = c.benchmark_group("cover");
    g.sample_size(10);
    for n in [25, 50, 100] {
        let p = corridor(n, 5, 7);
        g.bench_with_input(BenchmarkId::new("sc/corridor", n), &p, |b, p| b.iter(|| solve_sc(p, CORRIDOR_DELTA, 6).unwrap()));
        g.bench_with_input(BenchmarkId::new("fast/corridor", n), &p, |b, p| b.iter(|| solve_sc_fast(p, CORRIDOR_DELTA, 6).unwrap()));
        let w = walk(n, 3);
        g.bench_with_input(BenchmarkId::new("sc/walk", n), &w, |b, p| b.iter(|| solve_sc(p, 0.3, 4).unwrap()));
    }
    g.finish();
}

fn maximize(c: &mut Criterion) {
    let mut g = c.benchmark_group("maximize");
    g.sample_size(10);
    for n in [25, 50] {
        let p = walk(n, 5);
        g.bench_with_input(BenchmarkId::new("scm/walk", n), &p, |b, p| b.iter(|| solve_scm(p, 0.3, 4, 3, 0.1).unwrap()));
    }
    g.finish();
}

fn coarsen(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let lists: Vec<VecList<u64>> = (0..200)
        .map(|_| {
            let mut v: Vec<u64> = (0..500).map(|_| rng.gen()).collect();
            v.sort();
            VecList(v)
        })
        .collect();
    let mut g = c.benchmark_group("rank_select_coarsen");
    for k in [10, 100, 1000] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| b.iter(|| rank_select_coarsen(&lists, k)));
    }
    g.finish();
}

criterion_group!(benches, cover, maximize, coarsen);
criterion_main!(benches);
