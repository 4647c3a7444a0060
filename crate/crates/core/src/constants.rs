//! Rigorous dyadic enclosures of π and e.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::interval::RatInterval;

fn guard(bits: u32) -> u32 {
    bits + 32
}

fn dyadic(n: BigInt, prec: u32) -> BigRational {
    BigRational::new(n, BigInt::one() << prec)
}

/// `atan(1/x) · 2^prec` as integer bounds, from the alternating series with
/// every term floored.
fn atan_inv_scaled(x: u64, prec: u32) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x * x);
    let mut power = (BigInt::one() << prec) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        power = &power / &x2;
        k += 1;
    }
    // Each floored term is off by less than one unit and the tail is below
    // one unit.
    let slack = BigInt::from(k + 1);
    (&sum - &slack, &sum + &slack)
}

/// Enclosure of π with width at most `2^-bits`, via
/// `π = 16 atan(1/5) − 4 atan(1/239)`.
pub fn pi_enclosure(bits: u32) -> RatInterval {
    let prec = guard(bits);
    let (a_lo, a_hi) = atan_inv_scaled(5, prec);
    let (b_lo, b_hi) = atan_inv_scaled(239, prec);
    let lo = BigInt::from(16) * a_lo - BigInt::from(4) * b_hi;
    let hi = BigInt::from(16) * a_hi - BigInt::from(4) * b_lo;
    RatInterval::new(dyadic(lo, prec), dyadic(hi, prec))
}

/// Enclosure of e with width at most `2^-bits`, via `Σ 1/k!`.
pub fn e_enclosure(bits: u32) -> RatInterval {
    let prec = guard(bits);
    let mut term = BigInt::one() << prec;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !term.is_zero() {
        sum += &term;
        k += 1;
        term = &term / BigInt::from(k);
    }
    // Floor errors add up to less than k units; the tail after a zero term
    // is below two units.
    let hi = &sum + BigInt::from(k + 2);
    RatInterval::new(dyadic(sum, prec), dyadic(hi, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn pi_digits() {
        let p = pi_enclosure(200);
        // 50 digits of π, independent of the series above.
        let digits: BigInt = "314159265358979323846264338327950288419716939937510".parse().unwrap();
        let scale: BigInt = BigInt::from(10).pow(50);
        let below = BigRational::new(digits.clone(), scale.clone());
        let above = BigRational::new(digits + 1, scale);
        assert!(p.lo < above && below < p.hi);
        assert!(p.width() <= BigRational::new(BigInt::one(), BigInt::one() << 200));
    }

    #[test]
    fn e_digits() {
        let e = e_enclosure(100);
        assert!((e.lo.to_f64().unwrap() - std::f64::consts::E).abs() < 1e-15);
        let digits: BigInt = "27182818284590452353602874713526624977572".parse().unwrap();
        let scale: BigInt = BigInt::from(10).pow(40);
        let below = BigRational::new(digits.clone(), scale.clone());
        let above = BigRational::new(digits + 1, scale);
        assert!(e.lo < above && below < e.hi);
        assert!(e.width() <= BigRational::new(BigInt::one(), BigInt::one() << 100));
    }
}
