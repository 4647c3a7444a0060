use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sctk_core::surface::{models, orbit_vectors, primitive_lattice, trace_direction, trace_saddle_connections, validate_origami};

fn enumeration(c: &mut Criterion) {
    let l3 = models::l3_origami();
    c.bench_function("trace_l3_r30", |b| b.iter(|| trace_saddle_connections(black_box(&l3), 30.0).unwrap()));

    let sing = validate_origami(&l3).unwrap();
    c.bench_function("trace_direction_l3_large", |b| {
        b.iter(|| trace_direction(black_box(&l3), &sing, 103_993, 33_102).unwrap())
    });

    c.bench_function("primitive_lattice_r100", |b| b.iter(|| primitive_lattice(black_box(100.0))));

    let golden = models::golden_l();
    c.bench_function("orbit_golden_l_r20", |b| b.iter(|| orbit_vectors(black_box(&golden), 20.0, 100_000).unwrap()));
}

criterion_group!(benches, enumeration);
criterion_main!(benches);
