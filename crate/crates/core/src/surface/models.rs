//! Ready-made surfaces used in tests, benchmarks and examples.

use super::orbit::GroupOrbitModel;
use super::origami::{MarkedPolicy, Origami};
use crate::exactfield::{FieldDescriptor, FieldElement};
use crate::matrix::GroupElement;

fn int(n: i64) -> FieldElement {
    FieldElement::from_integer(n)
}

/// The square torus with its one vertex marked.
pub fn torus_origami() -> Origami {
    Origami::from_cycles(1, &[], &[], MarkedPolicy::AllVertices).unwrap()
}

/// Three squares in an L: square 1 at the corner, 2 to its right, 3 above.
pub fn l3_origami() -> Origami {
    Origami::from_cycles(3, &[vec![1, 2]], &[vec![1, 3]], MarkedPolicy::ConePointsOnly).unwrap()
}

/// Primitive integer vectors as the orbit of the axis unit vectors under
/// SL₂(ℤ); area 1.
pub fn sl2z_lattice() -> GroupOrbitModel {
    GroupOrbitModel::new(
        FieldDescriptor::Rational,
        vec![GroupElement::upper(int(1)), GroupElement::lower(int(1))],
        vec![(int(1), int(0)), (int(-1), int(0)), (int(0), int(1)), (int(0), int(-1))],
        int(1),
    )
    .unwrap()
}

/// The three-square L described by its Veech group, generated by
/// `[[1,2],[0,1]]` and the quarter turn; area 3.
pub fn theta_group() -> GroupOrbitModel {
    GroupOrbitModel::new(
        FieldDescriptor::Rational,
        vec![GroupElement::upper(int(2)), GroupElement::rotation()],
        vec![(int(1), int(0)), (int(0), int(1)), (int(1), int(1))],
        int(3),
    )
    .unwrap()
}

/// The golden L: a `φ × φ` square with a `1 × φ` arm on the right and a
/// `φ × 1` arm on top. Horizontal and vertical cylinders all have inverse
/// modulus `φ`, so the Veech group contains `[[1,φ],[0,1]]` and
/// `[[1,0],[φ,1]]`. Area `φ² + 2φ`.
pub fn golden_l() -> GroupOrbitModel {
    let phi = FieldElement::golden();
    let one = int(1);
    let zero = FieldElement::zero();
    let mut seeds = Vec::new();
    for len in [one.clone(), phi.clone()] {
        seeds.push((len.clone(), zero.clone()));
        seeds.push((-&len, zero.clone()));
        seeds.push((zero.clone(), len.clone()));
        seeds.push((zero.clone(), -&len));
    }
    let volume = &(&phi * &phi) + &(&int(2) * &phi);
    GroupOrbitModel::new(
        FieldDescriptor::Quadratic { d: 5 },
        vec![GroupElement::upper(phi.clone()), GroupElement::lower(phi)],
        seeds,
        volume,
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_l_volume() {
        let v = golden_l().volume().clone();
        assert_eq!(v, FieldElement::quadratic(5, 3, 2, 5).unwrap());
        assert!((v.to_f64() - 5.854_101_966).abs() < 1e-8);
    }

    #[test]
    fn origami_sizes() {
        assert_eq!(torus_origami().n(), 1);
        assert_eq!(l3_origami().n(), 3);
    }
}
