use proptest::prelude::*;
use sctk_core::exactfield::FieldElement;
use sctk_core::matrix::GroupElement;
use sctk_core::mink::*;
use sctk_core::surface::{models, primitive_lattice, OrbitDisk, SaddleVector, SurfaceModel};

#[test]
fn l3_bounds() {
    let m = SurfaceModel::Origami(models::l3_origami());
    let z = m.saddle_vectors(20.0, 0).unwrap();
    let upper = mink_upper_bound(&m);
    assert!((upper - 3.0 * std::f64::consts::PI).abs() < 1e-12);
    let r = mink_lower_bound_search(&z, 20.0, &SearchBudget::default(), Some(upper)).unwrap();
    assert!(r.lower_bound >= 0.99);
    assert_eq!(mink_exact_lattice(), 1.0);
    assert_eq!(mink_exact_lattice(), m.volume().to_f64() / 3.0);
    let json = serde_json::to_value(&r).unwrap();
    assert!(json["witness"]["shape"].is_string());
    assert!(json["witness"]["a"].is_number());
}

#[test]
fn golden_l_lower_bound_is_below_upper() {
    let m = models::golden_l();
    let upper = mink_upper_bound(&SurfaceModel::Orbit(m.clone()));
    let mut disk = OrbitDisk::new(m, 100_000);
    let z = disk.within(15.0).unwrap().to_vec();
    let r = mink_lower_bound_search(&z, 15.0, &SearchBudget::default(), Some(upper)).unwrap();
    assert!(r.lower_bound > 0.0 && r.lower_bound <= upper);
    assert!(body_avoids(&r.witness, &z, 15.0).unwrap());
}

#[test]
fn enlarging_z_never_raises_grid_bound() {
    let budget = SearchBudget { refine_steps: 0, ..SearchBudget::default() };
    let z = primitive_lattice(10.0);
    let mut sparse: Vec<SaddleVector> = z.iter().filter(|v| v.x.to_f64().abs() != 1.0).cloned().collect();
    let a = mink_lower_bound_search(&sparse, 10.0, &budget, None).unwrap();
    sparse.push(SaddleVector::from_ints(1, 0));
    sparse.push(SaddleVector::from_ints(-1, 0));
    let b = mink_lower_bound_search(&sparse, 10.0, &budget, None).unwrap();
    let c = mink_lower_bound_search(&z, 10.0, &budget, None).unwrap();
    assert!(b.lower_bound <= a.lower_bound);
    assert!(c.lower_bound <= b.lower_bound);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn membership_is_sl2_invariant(
        p in -3i64..=3, q in 1i64..=3, r in -3i64..=3,
        a in 0.5f64..2.0, b in -1.0f64..1.0, s in 0.2f64..2.0, disk in any::<bool>(),
    ) {
        // Upper · lower with rational entries, determinant 1.
        let u = GroupElement::upper(FieldElement::from_ratio(p, q));
        let l = GroupElement::lower(FieldElement::from_ratio(r, q));
        let g = u.mul(&l);
        let shape = if disk { Shape::Disk } else { Shape::Square };
        let body = ConvexBodyParam::new(shape, a, b, s).unwrap().body();
        let moved = body.transformed(&g).unwrap();
        for v in primitive_lattice(6.0) {
            let (x, y) = g.apply(&v.x, &v.y);
            prop_assert_eq!(body.contains(&v), moved.contains(&SaddleVector::new(x, y)));
        }
    }
}
