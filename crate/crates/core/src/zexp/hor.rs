use std::cmp::Ordering;

use serde::Serialize;

use super::direction::Direction;
use crate::error::{Error, Result};
use crate::exactfield::FieldElement;
use crate::interval::RatInterval;
use crate::surface::SaddleVector;

/// Starting precision for interval comparisons.
pub const START_BITS: u32 = 64;
/// Refinement stops here and reports precision exhaustion.
pub const MAX_BITS: u32 = 1 << 14;

/// `hor_θ(v) = |qθ − p|`, exact when θ and `v` share a field.
#[derive(Clone, Debug, Serialize)]
pub struct Hor {
    pub exact: Option<FieldElement>,
    pub enclosure: RatInterval,
}

impl Hor {
    pub fn lo_f64(&self) -> f64 {
        self.enclosure.to_f64_interval().lo
    }

    pub fn hi_f64(&self) -> f64 {
        self.enclosure.to_f64_interval().hi
    }

    pub fn is_zero(&self) -> bool {
        self.exact.as_ref().map(|e| e.is_zero()).unwrap_or(false)
    }
}

fn exact_linear(v: &SaddleVector, theta: &Direction) -> Option<FieldElement> {
    if v.y.is_zero() {
        return Some(-&v.x);
    }
    match theta {
        Direction::Exact(t) if theta.compatible_with(v.field()) => Some(&(&v.y * t) - &v.x),
        _ => None,
    }
}

/// Enclosure of `qθ − p` at the given precision.
fn linear_enclosure(v: &SaddleVector, theta: &Direction, bits: u32) -> RatInterval {
    if let Some(e) = exact_linear(v, theta) {
        return e.enclose(bits);
    }
    // Scale the precision of θ by the size of q so the product stays tight.
    let qb = v.y.enclose(bits);
    let mag = qb.abs().hi.clone();
    let extra = (mag.numer().bits() as i64 - mag.denom().bits() as i64 + 1).max(0) as u32;
    let t = theta.enclose(bits + extra);
    &(&qb * &t) - &v.x.enclose(bits)
}

pub fn hor_at(v: &SaddleVector, theta: &Direction, bits: u32) -> Hor {
    match exact_linear(v, theta) {
        Some(e) => {
            let a = e.abs();
            Hor { enclosure: a.enclose(bits), exact: Some(a) }
        }
        None => Hor { exact: None, enclosure: linear_enclosure(v, theta, bits).abs() },
    }
}

/// The horizontal component of `v` relative to the ray of slope `1/θ`.
pub fn hor_theta(v: &SaddleVector, theta: &Direction) -> Hor {
    hor_at(v, theta, START_BITS)
}

/// `θ·x + y > 0`, refining precision as needed.
pub fn in_positive_half_plane(v: &SaddleVector, theta: &Direction) -> Result<bool> {
    if let Direction::Exact(t) = theta {
        if theta.compatible_with(v.field()) {
            return Ok((&(t * &v.x) + &v.y).is_positive());
        }
    }
    if v.x.is_zero() {
        return Ok(v.y.is_positive());
    }
    // θ lies outside the field of v here, so θx + y ≠ 0 and refinement ends.
    let mut bits = START_BITS;
    while bits <= MAX_BITS {
        let xe = v.x.enclose(bits);
        let mag = xe.abs().hi.clone();
        let extra = (mag.numer().bits() as i64 - mag.denom().bits() as i64 + 1).max(0) as u32;
        let s = &(&theta.enclose(bits + extra) * &xe) + &v.y.enclose(bits);
        if let Some(sign) = s.sign() {
            return Ok(sign > 0);
        }
        bits *= 2;
    }
    Err(Error::PrecisionExhausted { bits: MAX_BITS, what: format!("half-plane test for ({}, {})", v.x, v.y) })
}

/// Compare `hor_θ(v)` with `hor_θ(w)`.
pub fn cmp_hor(v: &SaddleVector, hv: &Hor, w: &SaddleVector, hw: &Hor, theta: &Direction) -> Result<Ordering> {
    if let (Some(a), Some(b)) = (&hv.exact, &hw.exact) {
        return a.cmp_value(b);
    }
    if let Some(o) = hv.enclosure.compare(&hw.enclosure) {
        return Ok(o);
    }
    // Outside a common field, |qθ − p| = |q'θ − p'| forces v = ±w.
    if (v.x == w.x && v.y == w.y) || (v.x == -&w.x && v.y == -&w.y) {
        return Ok(Ordering::Equal);
    }
    let mut bits = START_BITS * 2;
    while bits <= MAX_BITS {
        let a = hor_at(v, theta, bits);
        let b = hor_at(w, theta, bits);
        if let Some(o) = a.enclosure.compare(&b.enclosure) {
            return Ok(o);
        }
        bits *= 2;
    }
    Err(Error::PrecisionExhausted { bits: MAX_BITS, what: format!("comparing hor of ({}, {}) and ({}, {})", v.x, v.y, w.x, w.y) })
}

/// `|θ − p/q|` for `q ≠ 0`, as an enclosure at the given precision.
pub fn distance_to_ratio(v: &SaddleVector, theta: &Direction, bits: u32) -> Result<RatInterval> {
    if v.y.is_zero() {
        return Err(Error::ZeroInput("distance_to_ratio"));
    }
    let h = hor_at(v, theta, bits);
    let q = v.y.abs();
    match h.exact {
        Some(e) => Ok((&e / &q).enclose(bits)),
        None => {
            let qe = q.enclose(bits + 8);
            Ok(h.enclosure.div(&qe).expect("nonzero height"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hor_examples() {
        let pi = Direction::parse("pi").unwrap();
        let h = hor_theta(&SaddleVector::from_ints(3, 1), &pi);
        assert!((h.enclosure.midpoint_f64() - 0.141_592_653_589_793).abs() < 1e-12);
        let h = hor_theta(&SaddleVector::from_ints(22, 7), &pi);
        assert!((h.enclosure.midpoint_f64() - (22.0 - 7.0 * std::f64::consts::PI)).abs() < 1e-12);
        let t = Direction::parse("22/7").unwrap();
        assert!(hor_theta(&SaddleVector::from_ints(22, 7), &t).is_zero());
    }

    #[test]
    fn half_plane_examples() {
        for theta in ["pi", "sqrt(2)", "3/2"] {
            let t = Direction::parse(theta).unwrap();
            assert!(in_positive_half_plane(&SaddleVector::from_ints(1, 0), &t).unwrap());
            assert!(!in_positive_half_plane(&SaddleVector::from_ints(-1, 0), &t).unwrap());
            assert!(in_positive_half_plane(&SaddleVector::from_ints(0, 1), &t).unwrap());
        }
        // θx + y = 0 exactly for (−2, 3) with θ = 3/2.
        let t = Direction::parse("3/2").unwrap();
        assert!(!in_positive_half_plane(&SaddleVector::from_ints(-2, 3), &t).unwrap());
    }

    #[test]
    fn compare_across_fields() {
        let t = Direction::parse("sqrt(2)").unwrap();
        let phi = FieldElement::golden();
        let v = SaddleVector::new(phi.clone(), phi.clone());
        let w = SaddleVector::new(FieldElement::from_integer(3), FieldElement::from_integer(2));
        let (hv, hw) = (hor_theta(&v, &t), hor_theta(&w, &t));
        let expect = (phi.to_f64() * 2f64.sqrt() - phi.to_f64()).abs().total_cmp(&(2.0 * 2f64.sqrt() - 3.0).abs());
        assert_eq!(cmp_hor(&v, &hv, &w, &hw, &t).unwrap(), expect);
        assert_eq!(cmp_hor(&v, &hv, &v, &hv, &t).unwrap(), Ordering::Equal);
    }
}
