use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::constants::{e_enclosure, pi_enclosure};
use crate::error::{Error, Result};
use crate::exactfield::{parse_field_literal, squarefree_decomposition, FieldDescriptor, FieldElement};
use crate::interval::RatInterval;

/// A positive real known through enclosures at any requested precision.
/// Assumed irrational and outside every quadratic field.
#[derive(Clone)]
pub struct RealConstant {
    name: String,
    enclose: fn(u32) -> RatInterval,
    cache: Arc<Mutex<BTreeMap<u32, RatInterval>>>,
}

impl RealConstant {
    pub fn new(name: &str, enclose: fn(u32) -> RatInterval) -> Self {
        RealConstant { name: name.into(), enclose, cache: Arc::default() }
    }

    pub fn pi() -> Self {
        RealConstant::new("pi", pi_enclosure)
    }

    pub fn e() -> Self {
        RealConstant::new("e", e_enclosure)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn enclose(&self, bits: u32) -> RatInterval {
        let mut cache = self.cache.lock().unwrap();
        if let Some((_, v)) = cache.range(bits..).next() {
            return v.clone();
        }
        let v = (self.enclose)(bits);
        cache.insert(bits, v.clone());
        v
    }
}

impl fmt::Debug for RealConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealConstant({})", self.name)
    }
}

/// The slope parameter θ > 0 of the ray being approximated.
#[derive(Clone, Debug)]
pub enum Direction {
    Exact(FieldElement),
    Real(RealConstant),
}

impl Direction {
    pub fn exact(theta: FieldElement) -> Result<Self> {
        if !theta.is_positive() {
            return Err(Error::InvalidArgument(format!("direction must be positive, got {theta}")));
        }
        Ok(Direction::Exact(theta))
    }

    /// Accepts `pi`, `e`, a decimal, `sqrt(k)`, `a/b`, or a field literal
    /// such as `(1+sqrt(5))/2`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        match t {
            "pi" => return Ok(Direction::Real(RealConstant::pi())),
            "e" => return Ok(Direction::Real(RealConstant::e())),
            _ => {}
        }
        if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let k: u64 = inner
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad radicand in `{t}`")))?;
            let (outer, d) = squarefree_decomposition(k);
            let theta = if d == 1 {
                FieldElement::from_integer(outer as i64)
            } else {
                FieldElement::new(
                    BigRational::from_integer(BigInt::from(0)),
                    BigRational::from_integer(BigInt::from(outer)),
                    FieldDescriptor::quadratic(d)?,
                )
            };
            return Direction::exact(theta);
        }
        if let Some(r) = parse_decimal(t) {
            return Direction::exact(FieldElement::rational(r));
        }
        Direction::exact(parse_field_literal(t)?)
    }

    /// Enclosure of θ with width at most `2^-bits · max(1, θ)`.
    pub fn enclose(&self, bits: u32) -> RatInterval {
        match self {
            Direction::Exact(x) => x.enclose(bits),
            Direction::Real(c) => c.enclose(bits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Direction::Exact(x) => x.to_f64(),
            Direction::Real(c) => c.enclose(64).midpoint_f64(),
        }
    }

    pub fn as_exact(&self) -> Option<&FieldElement> {
        match self {
            Direction::Exact(x) => Some(x),
            Direction::Real(_) => None,
        }
    }

    /// True when θ·x + y can be formed exactly for `x, y` in `field`.
    pub fn compatible_with(&self, field: FieldDescriptor) -> bool {
        match self {
            Direction::Exact(t) => {
                t.is_rational() || field == FieldDescriptor::Rational || t.field() == field
            }
            Direction::Real(_) => false,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Exact(x) => write!(f, "{x}"),
            Direction::Real(c) => write!(f, "{}", c.name()),
        }
    }
}

/// `[-]digits[.digits]` as an exact rational.
fn parse_decimal(t: &str) -> Option<BigRational> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t),
    };
    let (int, frac) = body.split_once('.')?;
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, scale);
    Some(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert!(matches!(Direction::parse("pi").unwrap(), Direction::Real(_)));
        assert!(matches!(Direction::parse("e").unwrap(), Direction::Real(_)));
        let d = Direction::parse("3.25").unwrap();
        assert_eq!(d.as_exact().unwrap(), &FieldElement::from_ratio(13, 4));
        let d = Direction::parse("sqrt(8)").unwrap();
        assert_eq!(d.as_exact().unwrap(), &FieldElement::quadratic(0, 2, 1, 2).unwrap());
        let d = Direction::parse("sqrt(9)").unwrap();
        assert_eq!(d.as_exact().unwrap(), &FieldElement::from_integer(3));
        let d = Direction::parse("22/7").unwrap();
        assert_eq!(d.as_exact().unwrap(), &FieldElement::from_ratio(22, 7));
        let d = Direction::parse("(1+sqrt(5))/2").unwrap();
        assert_eq!(d.as_exact().unwrap(), &FieldElement::golden());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Direction::parse("1+1*sqrt(5)/2").is_err());
        assert!(Direction::parse("-2").is_err());
        assert!(Direction::parse("0.0").is_err());
        assert!(Direction::parse("tau").is_err());
    }

    #[test]
    fn enclosures_tighten() {
        let d = Direction::parse("pi").unwrap();
        let a = d.enclose(64);
        let b = d.enclose(256);
        assert!(b.width() < a.width());
        assert!((d.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }
}
