//! Rigorous real intervals.
//!
//! [`RatInterval`] carries exact rational endpoints and is used for every
//! decision that must be correct (comparisons of horizontal components,
//! inequality checks). [`Interval`] is an `f64` interval with outward
//! rounding, used where transcendental functions (`ln`) are involved.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        RatInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::point(BigRational::from_integer(n.into()))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Sign if it is decided by the enclosure.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            let m = if -&self.lo > self.hi { -&self.lo } else { self.hi.clone() };
            RatInterval::new(BigRational::zero(), m)
        }
    }

    /// Certain ordering of the two enclosed values, when the intervals decide it.
    pub fn compare(&self, other: &RatInterval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn max(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(
            std::cmp::max(&self.lo, &other.lo).clone(),
            std::cmp::max(&self.hi, &other.hi).clone(),
        )
    }

    pub fn recip(&self) -> Option<RatInterval> {
        if self.contains_zero() {
            return None;
        }
        Some(RatInterval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, other: &RatInterval) -> Option<RatInterval> {
        other.recip().map(|r| self * &r)
    }

    pub fn square(&self) -> RatInterval {
        let a = self.abs();
        RatInterval::new(&a.lo * &a.lo, &a.hi * &a.hi)
    }

    /// Widen the endpoints to dyadic rationals with `bits` fractional bits.
    pub fn round_outward(&self, bits: u32) -> RatInterval {
        if self.is_point() && self.lo.denom().is_one() {
            return self.clone();
        }
        let scale = BigInt::one() << bits;
        let lo = (&self.lo * &scale).floor();
        let hi = (&self.hi * &scale).ceil();
        let den = BigRational::from_integer(scale);
        RatInterval::new(lo / &den, hi / &den)
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn to_f64_interval(&self) -> Interval {
        Interval::new(rat_to_f64_down(&self.lo), rat_to_f64_up(&self.hi))
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.to_f64_interval();
        write!(f, "[{:.17e}, {:.17e}]", i.lo, i.hi)
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval::new(-&self.hi, -&self.lo)
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &RatInterval) -> RatInterval {
        if self.is_point() && rhs.is_point() {
            return RatInterval::point(&self.lo * &rhs.lo);
        }
        let c = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }
}

/// Largest f64 not above `x`.
pub fn rat_to_f64_down(x: &BigRational) -> f64 {
    let f = x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY });
    if !f.is_finite() {
        return if x.is_negative() { f64::NEG_INFINITY } else { f64::MAX };
    }
    match BigRational::from_float(f) {
        Some(r) if &r <= x => f,
        _ => f.next_down(),
    }
}

/// Smallest f64 not below `x`.
pub fn rat_to_f64_up(x: &BigRational) -> f64 {
    let f = x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY });
    if !f.is_finite() {
        return if x.is_negative() { f64::MIN } else { f64::INFINITY };
    }
    match BigRational::from_float(f) {
        Some(r) if &r >= x => f,
        _ => f.next_up(),
    }
}

/// Exact rational value of a finite float.
pub fn f64_to_rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// `f64` interval with outward rounding.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Widening applied around libm results, which are faithful but not
/// guaranteed correctly rounded.
const LIBM_ULPS: usize = 2;

fn down(mut x: f64, n: usize) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

fn up(mut x: f64, n: usize) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

impl std::ops::Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new(down(self.lo + o.lo, 1), up(self.hi + o.hi, 1))
    }
}

impl std::ops::Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::new(down(self.lo - o.hi, 1), up(self.hi - o.lo, 1))
    }
}

impl std::ops::Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo, 1), up(hi, 1))
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Division by a positive interval.
    pub fn div_pos(self, o: Interval) -> Interval {
        assert!(o.lo > 0.0, "div_pos needs a positive divisor");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo, 1), up(hi, 1))
    }

    pub fn scale(self, k: f64) -> Interval {
        self * Interval::point(k)
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            Interval::new(-self.hi, -self.lo)
        } else {
            Interval::new(0.0, self.hi.max(-self.lo))
        }
    }

    pub fn max(self, o: Interval) -> Interval {
        Interval::new(self.lo.max(o.lo), self.hi.max(o.hi))
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(self) -> Interval {
        assert!(self.lo > 0.0, "ln of non-positive interval");
        Interval::new(down(self.lo.ln(), LIBM_ULPS), up(self.hi.ln(), LIBM_ULPS))
    }

    /// `log⁺ x = max(0, ln x)` for a nonnegative interval.
    pub fn ln_plus(self) -> Interval {
        let lo = if self.lo <= 1.0 { 0.0 } else { down(self.lo.ln(), LIBM_ULPS).max(0.0) };
        let hi = if self.hi <= 1.0 { 0.0 } else { up(self.hi.ln(), LIBM_ULPS) };
        Interval::new(lo, hi)
    }

    /// `ln 2` enclosure.
    pub fn ln2() -> Interval {
        let l = std::f64::consts::LN_2;
        Interval::new(l.next_down(), l.next_up())
    }

    pub fn certainly_le(&self, o: &Interval) -> bool {
        self.hi <= o.lo
    }

    pub fn certainly_lt(&self, o: &Interval) -> bool {
        self.hi < o.lo
    }
}

/// Enclosure of `ln |n|` for a nonzero big integer.
pub fn ln_bigint(n: &BigInt) -> Interval {
    assert!(!n.is_zero(), "ln of zero");
    let m = n.magnitude();
    let bits = m.bits();
    if bits <= 52 {
        let f = m.to_f64().unwrap();
        return Interval::point(f).ln();
    }
    // n = top * 2^shift with top < 2^53; top <= n / 2^shift < top + 1.
    let shift = bits - 53;
    let top = (m >> shift).to_f64().unwrap();
    let base = Interval::new(top, top + 1.0).ln();
    let ln2 = Interval::ln2();
    base + ln2.scale(shift as f64)
}

/// Integer square root bounds: floor and ceil of `sqrt(n)`.
pub fn isqrt_bounds(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.sign() != Sign::Minus);
    let s = n.sqrt();
    if &(&s * &s) == n {
        (s.clone(), s)
    } else {
        let s1 = &s + 1u32;
        (s, s1)
    }
}


/// Floor of a rational as a big integer.
pub fn floor_rat(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

impl serde::Serialize for RatInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let f = self.to_f64_interval();
        let mut st = s.serialize_struct("RatInterval", 2)?;
        st.serialize_field("lo", &f.lo)?;
        st.serialize_field("hi", &f.hi)?;
        st.end()
    }
}
