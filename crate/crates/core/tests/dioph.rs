use std::time::Instant;

use num_bigint::BigInt;
use sctk_core::dioph::*;
use sctk_core::exactfield::FieldElement;
use sctk_core::surface::{models, SaddleVector};
use sctk_core::zexp::{z_expansion, Direction, ExpansionLimit, OrbitWindowSource, WindowConfig};

#[test]
fn golden_l_words_are_dominated() {
    let start = Instant::now();
    let r = domination_suite(&models::golden_l(), 8, 20.0, 100_000).unwrap();
    eprintln!("{} words, {:?}", r.words, start.elapsed());
    assert_eq!(r.c1, FieldElement::quadratic(3, -1, 2, 5).unwrap());
    assert_eq!(r.trace_failures, 0);
    assert_eq!(r.entry_failures, 0);
    assert!(r.hyperbolic > 0 && r.parabolic > 0);
    assert!(r.undominated_non_hyperbolic > 0);
    assert!(r.all_pass());
    assert!(r.stable, "{:?} vs {:?}", r.c_emp, r.c_emp_doubled);
}

#[test]
fn origami_vectors_have_unit_constant() {
    let m = sctk_core::surface::SurfaceModel::Origami(models::l3_origami());
    let v = m.saddle_vectors(15.0, 0).unwrap();
    assert_eq!(vector_domination(&v).unwrap(), Some(FieldElement::one()));
}

#[test]
fn vector_constant_does_not_increase_with_radius() {
    let mut disk = sctk_core::surface::OrbitDisk::new(models::golden_l(), 100_000);
    let mut last: Option<f64> = None;
    for r in [5.0, 10.0, 20.0] {
        let c = vector_domination(disk.within(r).unwrap()).unwrap().unwrap().to_f64();
        if let Some(l) = last {
            assert!(c <= l + 1e-15);
        }
        last = Some(c);
    }
}

fn lattice_window(theta: &Direction) -> OrbitWindowSource {
    OrbitWindowSource::new(models::sl2z_lattice(), theta, WindowConfig::default())
}

#[test]
fn torus_heights_fit_with_theta_plus_one() {
    let theta = Direction::parse("pi").unwrap();
    let e = z_expansion(&mut lattice_window(&theta), &theta, ExpansionLimit::terms(14)).unwrap();
    let recs: Vec<_> = e.records.iter().filter(|r| !r.q().is_zero()).cloned().collect();
    let r = convergent_height_check(&recs, 1, &BigInt::from(1), 5).unwrap();
    assert_eq!(r.violations, 0);
    // H(p/q) = max(|p|, q) with p/q near π.
    let expect = recs[..recs.len() - 5]
        .iter()
        .map(|r| r.p().to_f64().abs().max(r.q().to_f64()) / r.q().to_f64())
        .fold(0.0, f64::max);
    assert!((r.c2 - expect).abs() < 1e-12);
    assert!(r.c2 <= std::f64::consts::PI + 1.0);
}

#[test]
fn golden_l_heights_hold_out() {
    let theta = Direction::parse("sqrt(2)").unwrap();
    let mut src = OrbitWindowSource::new(models::golden_l(), &theta, WindowConfig::default());
    let e = z_expansion(&mut src, &theta, ExpansionLimit::terms(14)).unwrap();
    let recs: Vec<_> = e.records.iter().filter(|r| !r.q().is_zero()).cloned().collect();
    let r = convergent_height_check(&recs, 2, &BigInt::from(1), 5).unwrap();
    assert_eq!(r.violations, 0, "{:?}", r.steps);
}

#[test]
fn integral_ratio_and_errors() {
    let rec = |p: i64, q: i64| sctk_core::zexp::ConvergentRecord {
        index: 0,
        vector: SaddleVector::from_ints(p, q),
        hor: sctk_core::zexp::hor_theta(&SaddleVector::from_ints(p, q), &Direction::parse("pi").unwrap()),
        provisional: false,
    };
    let r = convergent_height_check(&[rec(6, 2), rec(3, 1)], 1, &BigInt::from(1), 0).unwrap();
    assert_eq!(r.violations, 0);
    assert_eq!(r.steps[0].height, BigInt::from(3));
    assert!(convergent_height_check(&[rec(1, 0)], 1, &BigInt::from(1), 0).is_err());
    let half = sctk_core::zexp::ConvergentRecord {
        vector: SaddleVector::new(FieldElement::from_ratio(1, 2), FieldElement::one()),
        ..rec(1, 1)
    };
    assert!(convergent_height_check(std::slice::from_ref(&half), 1, &BigInt::from(1), 0).is_err());
    assert!(convergent_height_check(&[half], 1, &BigInt::from(2), 0).is_ok());
}

#[test]
fn growth_flag_is_stable_under_rescaling() {
    let liouville: Vec<f64> = (1..=20u32).map(|n| (1..=n).map(f64::from).product::<f64>() * 10f64.ln()).collect();
    let scaled: Vec<f64> = liouville.iter().map(|l| l + 1000f64.ln()).collect();
    let cfg = GrowthConfig::default();
    assert_eq!(growth_indicator(&liouville, 1, &cfg).unwrap().flagged, growth_indicator(&scaled, 1, &cfg).unwrap().flagged);

    let mut fib = vec![1.0f64, 2.0];
    while fib.len() < 40 {
        let n = fib.len();
        fib.push(fib[n - 1] + fib[n - 2]);
    }
    let logs: Vec<f64> = fib.iter().map(|q| q.ln()).collect();
    let scaled: Vec<f64> = logs.iter().map(|l| l + 7f64.ln()).collect();
    let cfg = GrowthConfig { margin: 0.2, tail: Some(10) };
    let a = growth_indicator(&logs, 1, &cfg).unwrap();
    let b = growth_indicator(&scaled, 1, &cfg).unwrap();
    assert_eq!(a.flagged, b.flagged);
    assert!(!a.flagged);
}
