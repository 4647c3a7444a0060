//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Regular continued fraction partial quotients of an exact rational.
pub fn cf_of_rational(mut x: BigRational, n: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    while out.len() < n {
        let a = x.floor().to_integer();
        out.push(a.clone());
        let frac = &x - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
    }
    out
}

fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

/// Partial quotients of `(a + b√d)/c` with `d` not a square, `b ≠ 0`, `c ≠ 0`.
pub fn cf_of_quadratic(a: i64, b: i64, c: i64, d: i64, n: usize) -> Vec<BigInt> {
    // Write θ = (P + √D)/Q with Q | D − P².
    let (a, c) = if b < 0 { (-a, -c) } else { (a, c) };
    let b = b.abs();
    let c2 = BigInt::from(c) * BigInt::from(c.abs());
    let mut p = BigInt::from(a) * BigInt::from(c.abs());
    let dd = BigInt::from(b * b * d) * BigInt::from(c) * BigInt::from(c);
    let mut q = c2;
    let s = isqrt(&dd);
    let mut out = Vec::new();
    while out.len() < n {
        let num = if q.is_positive() { &p + &s } else { &p + &s + 1 };
        let ak = num.div_floor(&q);
        out.push(ak.clone());
        p = &ak * &q - &p;
        q = (&dd - &p * &p) / &q;
    }
    out
}

/// Convergent denominators, with consecutive repeats removed.
pub fn denominators(quotients: &[BigInt]) -> Vec<BigInt> {
    let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out: Vec<BigInt> = Vec::new();
    for a in quotients {
        let q2 = a * &q1 + &q0;
        q0 = std::mem::replace(&mut q1, q2);
        if out.last() != Some(&q1) {
            out.push(q1.clone());
        }
    }
    out
}

/// 60 decimals of π.
pub const PI_DIGITS: &str = "3141592653589793238462643383279502884197169399375105820974944";

pub fn pi_rational() -> BigRational {
    let n: BigInt = PI_DIGITS.parse().unwrap();
    BigRational::new(n, num_traits::pow(BigInt::from(10), PI_DIGITS.len() - 1))
}

/// `e = [2; 1, 2, 1, 1, 4, 1, 1, 6, …]`.
pub fn e_quotients(n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(2)];
    let mut k = 1;
    while out.len() < n {
        for x in [1, 2 * k, 1] {
            out.push(BigInt::from(x));
        }
        k += 1;
    }
    out.truncate(n);
    out
}
