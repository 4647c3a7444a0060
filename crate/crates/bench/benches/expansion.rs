use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sctk_core::mink::mink_upper_bound_enclosure;
use sctk_core::surface::models;
use sctk_core::zexp::{
    sandwich_check, z_expansion, Direction, ExpansionLimit, OrbitWindowSource, OrigamiWindowSource, WindowConfig,
};
use sctk_core::SurfaceModel;

fn expansion(c: &mut Criterion) {
    let pi = Direction::parse("pi").unwrap();
    c.bench_function("lattice_pi_15_terms", |b| {
        b.iter(|| {
            let mut src = OrbitWindowSource::new(models::sl2z_lattice(), &pi, WindowConfig::default());
            z_expansion(&mut src, black_box(&pi), ExpansionLimit::terms(15)).unwrap()
        })
    });

    c.bench_function("origami_l3_pi_12_terms", |b| {
        b.iter(|| {
            let mut src = OrigamiWindowSource::new(models::l3_origami(), &pi, WindowConfig::default()).unwrap();
            z_expansion(&mut src, black_box(&pi), ExpansionLimit::terms(12)).unwrap()
        })
    });

    let sqrt2 = Direction::parse("sqrt(2)").unwrap();
    c.bench_function("golden_l_sqrt2_12_terms", |b| {
        b.iter(|| {
            let mut src = OrbitWindowSource::new(models::golden_l(), &sqrt2, WindowConfig::default());
            z_expansion(&mut src, black_box(&sqrt2), ExpansionLimit::terms(12)).unwrap()
        })
    });

    let mut src = OrbitWindowSource::new(models::golden_l(), &sqrt2, WindowConfig::default());
    let e = z_expansion(&mut src, &sqrt2, ExpansionLimit::terms(14)).unwrap();
    let mu = mink_upper_bound_enclosure(&SurfaceModel::Orbit(models::golden_l()), 128);
    c.bench_function("sandwich_golden_l_14", |b| b.iter(|| sandwich_check(black_box(&e.records), &sqrt2, &mu).unwrap()));
}

criterion_group!(benches, expansion);
criterion_main!(benches);
