use num_integer::Integer;

use super::{normalize_vectors, SaddleVector};

/// Primitive integer vectors `(p, q)` with `0 < ‖(p, q)‖ ≤ radius`.
pub fn primitive_lattice(radius: f64) -> Vec<SaddleVector> {
    if radius.is_nan() || radius <= 0.0 {
        return Vec::new();
    }
    let r = radius.floor() as i64;
    let r2 = radius * radius;
    let mut out = Vec::new();
    for q in -r..=r {
        for p in -r..=r {
            if (p, q) == (0, 0) || p.gcd(&q) != 1 {
                continue;
            }
            if ((p * p + q * q) as f64) <= r2 {
                out.push(SaddleVector::from_ints(p, q));
            }
        }
    }
    normalize_vectors(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn small_radii() {
        assert_eq!(primitive_lattice(1.0).len(), 4);
        let v = primitive_lattice(2.0);
        assert_eq!(v.len(), 8);
        for (p, q) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)] {
            assert!(v.contains(&SaddleVector::from_ints(p, q)));
        }
    }

    #[test]
    fn radius_ten_matches_brute_force() {
        let mut count = 0;
        for p in -10i64..=10 {
            for q in -10i64..=10 {
                if (p, q) != (0, 0) && gcd(p, q) == 1 && p * p + q * q <= 100 {
                    count += 1;
                }
            }
        }
        assert_eq!(primitive_lattice(10.0).len(), count);
    }
}
