use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{isqrt_bounds, RatInterval};

/// The ambient field: ℚ or a real quadratic field ℚ(√d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldDescriptor {
    Rational,
    Quadratic { d: u64 },
}

impl FieldDescriptor {
    pub fn quadratic(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidField(format!("d = {d} must be at least 2")));
        }
        if !is_squarefree(d) {
            return Err(Error::InvalidField(format!("d = {d} is not square-free")));
        }
        Ok(FieldDescriptor::Quadratic { d })
    }

    /// Extension degree over ℚ.
    pub fn degree(&self) -> usize {
        match self {
            FieldDescriptor::Rational => 1,
            FieldDescriptor::Quadratic { .. } => 2,
        }
    }

    pub fn d(&self) -> Option<u64> {
        match self {
            FieldDescriptor::Rational => None,
            FieldDescriptor::Quadratic { d } => Some(*d),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Quadratic { d } => write!(f, "Q(sqrt({d}))"),
        }
    }
}

pub fn is_squarefree(d: u64) -> bool {
    let mut p = 2u64;
    while p.saturating_mul(p) <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Split `k > 0` as `s² · d` with `d` square-free.
pub fn squarefree_decomposition(k: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut d = k;
    let mut p = 2u64;
    while p.saturating_mul(p) <= d {
        while d.is_multiple_of(p * p) {
            d /= p * p;
            s *= p;
        }
        p += 1;
    }
    (s, d)
}

/// Exact element `a + b√d`. For rational elements `b = 0`.
///
/// Equality and hashing are structural on the reduced coefficients; an
/// element with `b = 0` compares equal to the same rational in any field.
#[derive(Clone, Debug)]
pub struct FieldElement {
    a: BigRational,
    b: BigRational,
    field: FieldDescriptor,
}

/// Binary operation selector for [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl FieldElement {
    pub fn new(a: BigRational, b: BigRational, field: FieldDescriptor) -> Self {
        match field {
            FieldDescriptor::Rational => {
                assert!(b.is_zero(), "rational field element with nonzero sqrt part");
                FieldElement { a, b, field }
            }
            FieldDescriptor::Quadratic { .. } => FieldElement { a, b, field },
        }
    }

    pub fn rational(a: BigRational) -> Self {
        FieldElement { a, b: BigRational::zero(), field: FieldDescriptor::Rational }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::rational(rat(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::rational(BigRational::new(n.into(), d.into()))
    }

    /// `a + b√d` with small integer numerators and a common denominator.
    pub fn quadratic(a: i64, b: i64, den: i64, d: u64) -> Result<Self> {
        let field = FieldDescriptor::quadratic(d)?;
        Ok(FieldElement {
            a: BigRational::new(a.into(), den.into()),
            b: BigRational::new(b.into(), den.into()),
            field,
        })
    }

    /// The golden ratio `(1+√5)/2`.
    pub fn golden() -> Self {
        Self::quadratic(1, 1, 2, 5).unwrap()
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    /// Degree of the element over ℚ (1 or 2).
    pub fn degree(&self) -> usize {
        if self.b.is_zero() {
            1
        } else {
            2
        }
    }

    /// Same value viewed in `field` (ℚ embeds in every field).
    pub fn in_field(&self, field: FieldDescriptor) -> Result<Self> {
        if self.field == field {
            return Ok(self.clone());
        }
        if self.b.is_zero() {
            return Ok(FieldElement { a: self.a.clone(), b: BigRational::zero(), field });
        }
        Err(Error::FieldMismatch(self.field.to_string(), field.to_string()))
    }

    /// The nontrivial Galois conjugate `a − b√d` (identity on ℚ).
    pub fn conjugate(&self) -> Self {
        FieldElement { a: self.a.clone(), b: -&self.b, field: self.field }
    }

    /// Images under all real embeddings, identity first.
    pub fn embeddings(&self) -> Vec<FieldElement> {
        match self.field {
            FieldDescriptor::Rational => vec![self.clone()],
            FieldDescriptor::Quadratic { .. } => vec![self.clone(), self.conjugate()],
        }
    }

    /// Field norm `(a+b√d)(a−b√d)`, a rational.
    pub fn norm(&self) -> BigRational {
        match self.field {
            FieldDescriptor::Rational => self.a.clone(),
            FieldDescriptor::Quadratic { d } => &self.a * &self.a - &self.b * &self.b * rat(d as i64),
        }
    }

    /// Field trace, a rational.
    pub fn trace(&self) -> BigRational {
        match self.field {
            FieldDescriptor::Rational => self.a.clone(),
            FieldDescriptor::Quadratic { .. } => &self.a * rat(2),
        }
    }

    /// Exact sign of the real number under the identity embedding.
    pub fn sign(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        let d = match self.field {
            FieldDescriptor::Rational => return sa,
            FieldDescriptor::Quadratic { d } => d,
        };
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a² with b²d.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * rat(d as i64);
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Exact comparison of real values.
    pub fn cmp_value(&self, other: &FieldElement) -> Result<Ordering> {
        let diff = self.try_sub(other)?;
        Ok(match diff.sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        arith(self, o, ArithOp::Add)
    }
    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        arith(self, o, ArithOp::Sub)
    }
    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        arith(self, o, ArithOp::Mul)
    }
    pub fn try_div(&self, o: &Self) -> Result<Self> {
        arith(self, o, ArithOp::Div)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.field == FieldDescriptor::Rational {
            return Ok(FieldElement { a: self.a.recip(), b: BigRational::zero(), field: self.field });
        }
        let n = self.norm();
        Ok(FieldElement { a: &self.a / &n, b: -&self.b / &n, field: self.field })
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        FieldElement { a: &self.a * r, b: &self.b * r, field: self.field }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = FieldElement::one().in_field(self.field).unwrap();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Rigorous enclosure of the identity embedding with width at most
    /// `2^-bits · max(1, |x|)`.
    pub fn enclose(&self, bits: u32) -> RatInterval {
        match self.field {
            FieldDescriptor::Rational => RatInterval::point(self.a.clone()),
            FieldDescriptor::Quadratic { d } => {
                if self.b.is_zero() {
                    return RatInterval::point(self.a.clone());
                }
                // width = |b| 2^-k; choose k so that |b| 2^-k <= 2^-bits.
                let bmag = self.b.abs();
                let extra = (bmag.numer().bits() as i64 - bmag.denom().bits() as i64 + 1).max(0) as u32;
                let k = bits + extra;
                let s = sqrt_enclosure(d, k);
                let bi = RatInterval::point(self.b.clone());
                &RatInterval::point(self.a.clone()) + &(&bi * &s)
            }
        }
    }

    /// Enclosures of every real embedding, identity first.
    pub fn embed_all(&self, bits: u32) -> Vec<RatInterval> {
        self.embeddings().iter().map(|e| e.enclose(bits)).collect()
    }

    pub fn to_f64(&self) -> f64 {
        match self.field {
            FieldDescriptor::Rational => self.a.to_f64().unwrap_or(f64::NAN),
            FieldDescriptor::Quadratic { d } => {
                if let (Some(a), Some(b)) = (self.a.to_f64(), self.b.to_f64()) {
                    let s = b * (d as f64).sqrt();
                    let v = a + s;
                    // Fall back when the two terms nearly cancel.
                    if v.is_finite() && v.abs() >= 1e-3 * (a.abs() + s.abs()) {
                        return v;
                    }
                }
                self.enclose(60).midpoint_f64()
            }
        }
    }

    /// True when the element lies in the ring of integers of its field.
    pub fn is_algebraic_integer(&self) -> bool {
        match self.field {
            FieldDescriptor::Rational => self.a.is_integer(),
            FieldDescriptor::Quadratic { .. } => {
                if self.b.is_zero() {
                    self.a.is_integer()
                } else {
                    self.trace().is_integer() && self.norm().is_integer()
                }
            }
        }
    }
}

/// `√d` enclosed to within `2^-k`.
pub fn sqrt_enclosure(d: u64, k: u32) -> RatInterval {
    let scaled = BigInt::from(d) << (2 * k);
    let (lo, hi) = isqrt_bounds(&scaled);
    let den = BigRational::from_integer(BigInt::one() << k);
    RatInterval::new(BigRational::from_integer(lo) / &den, BigRational::from_integer(hi) / &den)
}

fn sign_of(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn unify(x: &FieldElement, y: &FieldElement) -> Result<FieldDescriptor> {
    if x.field == y.field {
        return Ok(x.field);
    }
    match (x.field, y.field) {
        (FieldDescriptor::Rational, f) | (f, FieldDescriptor::Rational) => Ok(f),
        _ if x.b.is_zero() => Ok(y.field),
        _ if y.b.is_zero() => Ok(x.field),
        _ => Err(Error::FieldMismatch(x.field.to_string(), y.field.to_string())),
    }
}

/// Exact field arithmetic.
pub fn arith(x: &FieldElement, y: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    let field = unify(x, y)?;
    let (a, b, c, e) = (&x.a, &x.b, &y.a, &y.b);
    let (na, nb) = match op {
        ArithOp::Add => (a + c, b + e),
        ArithOp::Sub => (a - c, b - e),
        ArithOp::Mul => {
            let d = match field {
                FieldDescriptor::Rational => BigRational::zero(),
                FieldDescriptor::Quadratic { d } => rat(d as i64),
            };
            (a * c + b * e * d, a * e + b * c)
        }
        ArithOp::Div => {
            let inv = y.in_field(field)?.inverse()?;
            return arith(&x.in_field(field)?, &inv, ArithOp::Mul);
        }
    };
    Ok(FieldElement { a: na, b: nb, field })
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.field == other.field)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        if !self.b.is_zero() {
            self.field.hash(state);
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                arith(self, rhs, $op).unwrap_or_else(|e| panic!("{}", e))
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                arith(&self, &rhs, $op).unwrap_or_else(|e| panic!("{}", e))
            }
        }
    };
}

binop!(Add, add, ArithOp::Add);
binop!(Sub, sub, ArithOp::Sub);
binop!(Mul, mul, ArithOp::Mul);
binop!(Div, div, ArithOp::Div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { a: -&self.a, b: -&self.b, field: self.field }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::from_integer(n)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serialized as `a/b + c/e*sqrt(d)`; rationals as `a/b` or `a`.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.field, self.b.is_zero()) {
            (FieldDescriptor::Quadratic { d }, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}*sqrt({})", fmt_rat(&self.a), sign, fmt_rat(&self.b.abs()), d)
            }
            _ => write!(f, "{}", fmt_rat(&self.a)),
        }
    }
}

impl FromStr for FieldElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_field_literal(s)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Lit {
            Int(i64),
            Str(String),
        }
        match Lit::deserialize(d)? {
            Lit::Int(n) => Ok(FieldElement::from_integer(n)),
            Lit::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Parser for exact literals.
///
/// Grammar (whitespace ignored):
/// ```text
/// literal  := body | "(" body ")" "/" int
/// body     := rational [ ("+"|"-") surd ] | ["-"] surd
/// surd     := [ rational "*" ] "sqrt(" int ")"
/// rational := ["-"] int [ "/" int ]
/// ```
/// A surd may only be divided through the parenthesized form, so
/// `1+1*sqrt(5)/2` is rejected while `(1+sqrt(5))/2` is accepted.
pub fn parse_field_literal(input: &str) -> Result<FieldElement> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty literal".into()));
    }
    let mut p = LitParser { s: s.as_bytes(), i: 0, src: input };
    let v = if p.peek() == Some(b'(') {
        p.i += 1;
        let body = p.body()?;
        p.expect(b')')?;
        p.expect(b'/')?;
        let den = p.integer()?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{input}`")));
        }
        body.scale(&BigRational::new(BigInt::one(), den))
    } else {
        p.body()?
    };
    if p.i != p.s.len() {
        return Err(Error::Parse(format!(
            "unexpected `{}` at offset {} in `{}`",
            String::from_utf8_lossy(&p.s[p.i..]),
            p.i,
            input
        )));
    }
    Ok(v)
}

struct LitParser<'a> {
    s: &'a [u8],
    i: usize,
    src: &'a str,
}

impl LitParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("expected {what} at offset {} in `{}`", self.i, self.src)))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            self.err(&format!("`{}`", c as char))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.i;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.i += 1;
        }
        if start == self.i {
            return self.err("digits");
        }
        Ok(std::str::from_utf8(&self.s[start..self.i]).unwrap().parse().unwrap())
    }

    fn at_sqrt(&self) -> bool {
        self.s[self.i..].starts_with(b"sqrt(")
    }

    fn rational(&mut self) -> Result<BigRational> {
        let neg = if self.peek() == Some(b'-') {
            self.i += 1;
            true
        } else {
            false
        };
        let n = self.integer()?;
        let mut r = BigRational::from_integer(n);
        if self.peek() == Some(b'/') && matches!(self.s.get(self.i + 1), Some(b'0'..=b'9')) {
            self.i += 1;
            let d = self.integer()?;
            if d.is_zero() {
                return self.err("nonzero denominator");
            }
            r /= BigRational::from_integer(d);
        }
        Ok(if neg { -r } else { r })
    }

    fn sqrt_atom(&mut self) -> Result<FieldElement> {
        if !self.at_sqrt() {
            return self.err("`sqrt(`");
        }
        self.i += 5;
        let k = self.integer()?;
        self.expect(b')')?;
        let k = k.to_u64().ok_or_else(|| Error::Parse("radicand too large".into()))?;
        if k == 0 {
            return Ok(FieldElement::zero());
        }
        let (sq, d) = squarefree_decomposition(k);
        let sq = BigRational::from_integer(BigInt::from(sq));
        if d == 1 {
            Ok(FieldElement::rational(sq))
        } else {
            Ok(FieldElement { a: BigRational::zero(), b: sq, field: FieldDescriptor::quadratic(d)? })
        }
    }

    fn surd(&mut self) -> Result<FieldElement> {
        if self.at_sqrt() {
            return self.sqrt_atom();
        }
        let c = self.rational()?;
        self.expect(b'*')?;
        Ok(self.sqrt_atom()?.scale(&c))
    }

    fn body(&mut self) -> Result<FieldElement> {
        if self.at_sqrt() {
            return self.sqrt_atom();
        }
        if self.peek() == Some(b'-') && self.s[self.i + 1..].starts_with(b"sqrt(") {
            self.i += 1;
            return Ok(-self.sqrt_atom()?);
        }
        let a = self.rational()?;
        if self.peek() == Some(b'*') {
            self.i += 1;
            return Ok(self.sqrt_atom()?.scale(&a));
        }
        let sign = match self.peek() {
            Some(b'+') => BigRational::one(),
            Some(b'-') => -BigRational::one(),
            _ => return Ok(FieldElement::rational(a)),
        };
        self.i += 1;
        let s = self.surd()?.scale(&sign);
        Ok(&FieldElement::rational(a) + &s)
    }
}
