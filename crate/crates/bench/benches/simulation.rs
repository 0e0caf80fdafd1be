use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use evotopo_bench::clustered_lattice;
use evotopo_core::{
    efg_run, grass_with_fires, pd_run, Cell, Coord, EfgConfig, Lattice, PdConfig, Strategy,
};

fn pd(c: &mut Criterion) {
    let mut cfg = PdConfig::standard(10, 10, 3);
    cfg.mu = 0.05;
    cfg.zeta = Some(20.0);
    let mixed =
        Lattice::from_fn(10, 10, |p| Cell::new(Strategy::PD[(p.x * 3 + p.y) % 4], 2)).unwrap();
    c.bench_function("pd_run_10x10_100", |b| {
        b.iter(|| pd_run(black_box(&cfg), &mixed, 100).unwrap())
    });
    let small = PdConfig::standard(7, 7, 3);
    let lat = clustered_lattice();
    c.bench_function("pd_run_7x7_25", |b| {
        b.iter(|| pd_run(black_box(&small), &lat, 25).unwrap())
    });
}

fn efg(c: &mut Criterion) {
    let fires = [
        Coord::new(5, 5),
        Coord::new(6, 5),
        Coord::new(5, 6),
        Coord::new(6, 6),
    ];
    let init = grass_with_fires(12, 12, &fires).unwrap();
    let cfg = EfgConfig {
        max_age: 2,
        width: 12,
        height: 12,
        seed: 3,
        iterations: 20,
    };
    c.bench_function("efg_run_12x12_20", |b| {
        b.iter(|| efg_run(black_box(&cfg), &init).unwrap())
    });
}

criterion_group!(benches, pd, efg);
criterion_main!(benches);
