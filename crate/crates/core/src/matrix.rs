//! Determinant-one 2×2 matrices over an exact field.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::FieldElement;

/// An element of SL₂(K): entries `[[a11, a12], [a21, a22]]`, determinant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[[FieldElement; 2]; 2]", into = "[[FieldElement; 2]; 2]")]
pub struct GroupElement {
    a11: FieldElement,
    a12: FieldElement,
    a21: FieldElement,
    a22: FieldElement,
}

impl GroupElement {
    pub fn new(a11: FieldElement, a12: FieldElement, a21: FieldElement, a22: FieldElement) -> Result<Self> {
        let det = a11.try_mul(&a22)?.try_sub(&a12.try_mul(&a21)?)?;
        if det != FieldElement::one() {
            return Err(Error::Determinant { index: 0, det: det.to_string() });
        }
        Ok(GroupElement { a11, a12, a21, a22 })
    }

    pub fn identity() -> Self {
        GroupElement {
            a11: FieldElement::one(),
            a12: FieldElement::zero(),
            a21: FieldElement::zero(),
            a22: FieldElement::one(),
        }
    }

    /// `[[1, λ], [0, 1]]`
    pub fn upper(lambda: FieldElement) -> Self {
        GroupElement { a11: FieldElement::one(), a12: lambda, a21: FieldElement::zero(), a22: FieldElement::one() }
    }

    /// `[[1, 0], [λ, 1]]`
    pub fn lower(lambda: FieldElement) -> Self {
        GroupElement { a11: FieldElement::one(), a12: FieldElement::zero(), a21: lambda, a22: FieldElement::one() }
    }

    /// `[[0, −1], [1, 0]]`
    pub fn rotation() -> Self {
        GroupElement {
            a11: FieldElement::zero(),
            a12: FieldElement::from_integer(-1),
            a21: FieldElement::one(),
            a22: FieldElement::zero(),
        }
    }

    pub fn entries(&self) -> [&FieldElement; 4] {
        [&self.a11, &self.a12, &self.a21, &self.a22]
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        match (i, j) {
            (0, 0) => &self.a11,
            (0, 1) => &self.a12,
            (1, 0) => &self.a21,
            (1, 1) => &self.a22,
            _ => panic!("entry index out of range"),
        }
    }

    pub fn trace(&self) -> FieldElement {
        &self.a11 + &self.a22
    }

    pub fn inverse(&self) -> Self {
        GroupElement { a11: self.a22.clone(), a12: -&self.a12, a21: -&self.a21, a22: self.a11.clone() }
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement {
            a11: &(&self.a11 * &o.a11) + &(&self.a12 * &o.a21),
            a12: &(&self.a11 * &o.a12) + &(&self.a12 * &o.a22),
            a21: &(&self.a21 * &o.a11) + &(&self.a22 * &o.a21),
            a22: &(&self.a21 * &o.a12) + &(&self.a22 * &o.a22),
        }
    }

    pub fn try_mul(&self, o: &GroupElement) -> Result<GroupElement> {
        let m = |a: &FieldElement, b: &FieldElement, c: &FieldElement, d: &FieldElement| -> Result<FieldElement> {
            a.try_mul(b)?.try_add(&c.try_mul(d)?)
        };
        Ok(GroupElement {
            a11: m(&self.a11, &o.a11, &self.a12, &o.a21)?,
            a12: m(&self.a11, &o.a12, &self.a12, &o.a22)?,
            a21: m(&self.a21, &o.a11, &self.a22, &o.a21)?,
            a22: m(&self.a21, &o.a12, &self.a22, &o.a22)?,
        })
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, k: i64) -> GroupElement {
        if self.is_unipotent() {
            // (I + N)^k = I + kN when N² = 0.
            let kk = FieldElement::from_integer(k);
            let one = FieldElement::one();
            return GroupElement {
                a11: &one + &(&kk * &(&self.a11 - &one)),
                a12: &kk * &self.a12,
                a21: &kk * &self.a21,
                a22: &one + &(&kk * &(&self.a22 - &one)),
            };
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = GroupElement::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// True when `M − I` is nilpotent and nonzero (trace 2, not the identity).
    pub fn is_unipotent(&self) -> bool {
        self.trace() == FieldElement::from_integer(2) && *self != GroupElement::identity()
    }

    pub fn apply(&self, x: &FieldElement, y: &FieldElement) -> (FieldElement, FieldElement) {
        (&(&self.a11 * x) + &(&self.a12 * y), &(&self.a21 * x) + &(&self.a22 * y))
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        [[self.a11.to_f64(), self.a12.to_f64()], [self.a21.to_f64(), self.a22.to_f64()]]
    }
}

impl TryFrom<[[FieldElement; 2]; 2]> for GroupElement {
    type Error = Error;
    fn try_from(m: [[FieldElement; 2]; 2]) -> Result<Self> {
        let [[a, b], [c, d]] = m;
        GroupElement::new(a, b, c, d)
    }
}

impl From<GroupElement> for [[FieldElement; 2]; 2] {
    fn from(g: GroupElement) -> Self {
        [[g.a11, g.a12], [g.a21, g.a22]]
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_enforced() {
        let two = FieldElement::from_integer(2);
        assert!(GroupElement::new(two.clone(), FieldElement::zero(), FieldElement::zero(), two).is_err());
    }

    #[test]
    fn unipotent_power_matches_repeated_product() {
        let t = GroupElement::upper(FieldElement::golden());
        let mut acc = GroupElement::identity();
        for _ in 0..5 {
            acc = acc.mul(&t);
        }
        assert_eq!(t.pow(5), acc);
        assert_eq!(t.pow(-3).mul(&t.pow(3)), GroupElement::identity());
    }

    #[test]
    fn rotation_order_four() {
        let s = GroupElement::rotation();
        assert_eq!(s.pow(4), GroupElement::identity());
        assert_eq!(s.pow(-1), s.inverse());
    }
}
