use std::collections::BTreeMap;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::origami::{validate_origami, Corner, Origami, SingularityData};
use super::{normalize_vectors, primitive_lattice, radius_rat, SaddleVector};
use crate::error::{Error, Result};

/// Start of a traced ray: a corner of a square and a primitive direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RayStart {
    pub square: usize,
    pub corner: Corner,
    pub direction: (i64, i64),
}

/// Square and corner type at which a ray in direction `(p, q)` leaves a
/// vertex: the ray enters the square at its corner `(p < 0, q < 0)`.
fn start_corner(p: i64, q: i64) -> (bool, bool) {
    (p < 0, q < 0)
}

/// Walk one primitive segment from the start corner of `square`, returning
/// the square whose corner the segment ends at.
fn walk_segment(o: &Origami, mut square: usize, p: i64, q: i64) -> usize {
    let (ap, aq) = (p.abs(), q.abs());
    let (mut j, mut l) = (1i64, 1i64);
    // Crossing of x = j happens at parameter j/|p|, of y = l at l/|q|.
    while j < ap || l < aq {
        let take_vertical = l >= aq || (j < ap && j * aq < l * ap);
        if take_vertical {
            square = if p > 0 { o.h().apply(square) } else { o.h().apply_inv(square) };
            j += 1;
        } else {
            square = if q > 0 { o.v().apply(square) } else { o.v().apply_inv(square) };
            l += 1;
        }
    }
    square
}

fn arrival_corner(p: i64, q: i64) -> Corner {
    let (x0, y0) = start_corner(p, q);
    let x = if p != 0 { !x0 } else { x0 };
    let y = if q != 0 { !y0 } else { y0 };
    Corner::from_local(x, y)
}

/// Move through a regular vertex to the square where the next segment starts.
fn pass_vertex(o: &Origami, mut square: usize, p: i64, q: i64) -> usize {
    if p > 0 {
        square = o.h().apply(square);
    } else if p < 0 {
        square = o.h().apply_inv(square);
    }
    if q > 0 {
        square = o.v().apply(square);
    } else if q < 0 {
        square = o.v().apply_inv(square);
    }
    square
}

/// Follow a ray for `steps` lattice displacements and report, for each
/// vertex reached, whether it is marked. Tracing does not stop at marked
/// vertices; after one the continuation is undefined, so callers should
/// stop reading at the first `true`.
pub fn replay_ray(o: &Origami, sing: &SingularityData, start: RayStart, steps: usize) -> Vec<bool> {
    let (p, q) = start.direction;
    let arrive = arrival_corner(p, q);
    let mut square = start.square;
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let end = walk_segment(o, square, p, q);
        let marked = sing.is_marked(end, arrive);
        out.push(marked);
        if marked {
            break;
        }
        square = pass_vertex(o, end, p, q);
    }
    out
}

fn within(n: i128, r: &BigRational, r2_f: f64) -> bool {
    let nf = n as f64;
    if nf < r2_f * (1.0 - 1e-12) {
        return true;
    }
    if nf > r2_f * (1.0 + 1e-12) {
        return false;
    }
    BigRational::from_integer(n.into()) <= r * r
}

/// Every saddle connection of length at most `radius` as `(start, k)`, with
/// holonomy `k · start.direction`.
pub fn traced_rays(o: &Origami, radius: f64) -> Result<Vec<(RayStart, i64)>> {
    let sing = validate_origami(o)?;
    if !sing.classes.iter().any(|c| c.marked) {
        return Err(Error::NoMarkedPoints(o.marked_policy.name()));
    }
    let r = radius_rat(radius)?;
    let r2 = radius * radius;
    let directions: Vec<(i64, i64)> = primitive_lattice(radius)
        .iter()
        .map(|v| (v.x.as_rational().unwrap().to_integer().try_into().unwrap(), v.y.as_rational().unwrap().to_integer().try_into().unwrap()))
        .collect();

    let starts: Vec<(usize, Corner)> = sing
        .classes
        .iter()
        .filter(|c| c.marked)
        .flat_map(|c| c.corners.iter().copied())
        .collect();

    let mut rays: Vec<(RayStart, i64)> = directions
        .par_iter()
        .flat_map_iter(|&(p, q)| {
            let (x0, y0) = start_corner(p, q);
            let corner = Corner::from_local(x0, y0);
            let arrive = arrival_corner(p, q);
            let len2 = (p as i128) * (p as i128) + (q as i128) * (q as i128);
            let mut found = Vec::new();
            for &(s, _) in starts.iter().filter(|&&(_, c)| c == corner) {
                let mut square = s;
                let mut k = 1i64;
                while within((k as i128) * (k as i128) * len2, &r, r2) {
                    let end = walk_segment(o, square, p, q);
                    if sing.is_marked(end, arrive) {
                        found.push((RayStart { square: s, corner, direction: (p, q) }, k));
                        break;
                    }
                    square = pass_vertex(o, end, p, q);
                    k += 1;
                }
            }
            found
        })
        .collect();
    rays.sort_by_key(|(s, k)| (s.direction, s.square, *k));
    Ok(rays)
}

/// Holonomy vectors of saddle connections of length at most `radius`, with
/// multiplicities, sorted by height then lexicographically.
pub fn trace_saddle_connections(o: &Origami, radius: f64) -> Result<Vec<SaddleVector>> {
    let mut counts: BTreeMap<(i64, i64), u32> = BTreeMap::new();
    for (start, k) in traced_rays(o, radius)? {
        let (p, q) = start.direction;
        *counts.entry((k * p, k * q)).or_default() += 1;
    }
    let v = counts
        .into_iter()
        .map(|((x, y), m)| SaddleVector { multiplicity: m, ..SaddleVector::from_ints(x, y) })
        .collect();
    Ok(normalize_vectors(v))
}

/// `a` followed by `b`, as maps on square indices.
fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&s| b[s]).collect()
}

fn power(a: &[usize], mut k: u128) -> Vec<usize> {
    let mut out: Vec<usize> = (0..a.len()).collect();
    let mut base = a.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            out = compose(&out, &base);
        }
        base = compose(&base, &base);
        k >>= 1;
    }
    out
}

fn inverse(a: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// Map of the lower Christoffel word with `p` letters `x` and `q` letters
/// `y`, built along the Stern–Brocot path in O(log) compositions.
fn christoffel(x: &[usize], y: &[usize], p: u128, q: u128) -> Vec<usize> {
    let (mut l, mut lw) = ((1u128, 0u128), x.to_vec());
    let (mut r, mut rw) = ((0u128, 1u128), y.to_vec());
    if (p, q) == l {
        return lw;
    }
    if (p, q) == r {
        return rw;
    }
    loop {
        let m = (l.0 + r.0, l.1 + r.1);
        if m == (p, q) {
            return compose(&lw, &rw);
        }
        let below = q * l.0 - p * l.1;
        let above = p * r.1 - q * r.0;
        if q * m.0 < p * m.1 {
            let k = (above - 1) / below;
            rw = compose(&power(&lw, k), &rw);
            r = (r.0 + k * l.0, r.1 + k * l.1);
        } else {
            let k = (below - 1) / above;
            lw = compose(&lw, &power(&rw, k));
            l = (l.0 + k * r.0, l.1 + k * r.1);
        }
    }
}

/// Square maps for one lattice period of a primitive direction: `end`
/// sends the start square to the square at whose corner the segment ends,
/// `next` to the square where the following segment starts.
pub struct PeriodMaps {
    pub end: Vec<usize>,
    pub next: Vec<usize>,
}

impl PeriodMaps {
    pub fn new(o: &Origami, p: i128, q: i128) -> Result<PeriodMaps> {
        if (p, q) == (0, 0) || num_integer::Integer::gcd(&p, &q) != 1 {
            return Err(Error::InvalidArgument(format!("({p}, {q}) is not a primitive direction")));
        }
        let n = o.n();
        let x: Vec<usize> = (0..n).map(|s| if p >= 0 { o.h().apply(s) } else { o.h().apply_inv(s) }).collect();
        let y: Vec<usize> = (0..n).map(|s| if q >= 0 { o.v().apply(s) } else { o.v().apply_inv(s) }).collect();
        if q == 0 {
            return Ok(PeriodMaps { end: (0..n).collect(), next: x });
        }
        if p == 0 {
            return Ok(PeriodMaps { end: (0..n).collect(), next: y });
        }
        // The crossings strictly inside a period form the central word w,
        // and x·w·y is the lower Christoffel word.
        let c = christoffel(&x, &y, p.unsigned_abs(), q.unsigned_abs());
        let end = compose(&compose(&inverse(&x), &c), &inverse(&y));
        let next = compose(&compose(&end, &x), &y);
        Ok(PeriodMaps { end, next })
    }
}

/// Saddle connections in the primitive direction `(p, q)` as
/// `(start square, k)` with holonomy `k · (p, q)`. Each ray is followed
/// until it repeats a square, so every multiple is found.
pub fn trace_direction(o: &Origami, sing: &SingularityData, p: i128, q: i128) -> Result<Vec<(usize, u64)>> {
    let maps = PeriodMaps::new(o, p, q)?;
    let (x0, y0) = start_corner(p.signum() as i64, q.signum() as i64);
    let corner = Corner::from_local(x0, y0);
    let arrive = arrival_corner(p.signum() as i64, q.signum() as i64);
    let mut out = Vec::new();
    for c in sing.classes.iter().filter(|c| c.marked) {
        for &(s, _) in c.corners.iter().filter(|&&(_, cc)| cc == corner) {
            let mut square = s;
            for k in 1..=o.n() as u64 {
                let end = maps.end[square];
                if sing.is_marked(end, arrive) {
                    out.push((s, k));
                    break;
                }
                square = maps.next[square];
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{closed_under_negation, models, MarkedPolicy};

    fn set(v: &[SaddleVector]) -> Vec<(String, String)> {
        let mut s: Vec<_> = v.iter().map(|x| (x.x.to_string(), x.y.to_string())).collect();
        s.sort();
        s
    }

    #[test]
    fn torus_gives_primitive_vectors_once() {
        let v = trace_saddle_connections(&models::torus_origami(), 5.0).unwrap();
        assert_eq!(set(&v), set(&primitive_lattice(5.0)));
        assert!(v.iter().all(|s| s.multiplicity == 1));
    }

    #[test]
    fn l3_matches_primitive_lattice() {
        let o = models::l3_origami();
        let v = trace_saddle_connections(&o, 20.0).unwrap();
        assert_eq!(set(&v), set(&primitive_lattice(20.0)));
        assert!(v.iter().all(|s| s.multiplicity >= 1));
        assert!(v.iter().any(|s| s.same_point(&SaddleVector::from_ints(1, 1))));
        assert!(closed_under_negation(&v));
    }

    #[test]
    fn replay_has_no_interior_marked_points() {
        let o = models::l3_origami();
        let sing = validate_origami(&o).unwrap();
        for (start, k) in traced_rays(&o, 12.0).unwrap() {
            let path = replay_ray(&o, &sing, start, k as usize);
            assert_eq!(path.len(), k as usize);
            assert!(path[..path.len() - 1].iter().all(|m| !m));
            assert!(*path.last().unwrap());
        }
    }

    #[test]
    fn cone_policy_on_torus_errors() {
        let mut o = models::torus_origami();
        o.marked_policy = MarkedPolicy::ConePointsOnly;
        assert!(matches!(trace_saddle_connections(&o, 3.0), Err(Error::NoMarkedPoints(_))));
    }

    #[test]
    fn period_maps_match_walk() {
        let o = Origami::from_cycles(5, &[vec![1, 2, 3], vec![4, 5]], &[vec![1, 4], vec![2, 5, 3]], MarkedPolicy::default()).unwrap();
        for p in -13i64..=13 {
            for q in -13i64..=13 {
                if num_integer::Integer::gcd(&p, &q) != 1 {
                    continue;
                }
                let maps = PeriodMaps::new(&o, p as i128, q as i128).unwrap();
                for s in 0..o.n() {
                    let end = walk_segment(&o, s, p, q);
                    assert_eq!(maps.end[s], end, "({p}, {q}) from {s}");
                    assert_eq!(maps.next[s], pass_vertex(&o, end, p, q));
                }
            }
        }
    }

    #[test]
    fn direction_trace_matches_disk_trace() {
        let o = models::l3_origami();
        let sing = validate_origami(&o).unwrap();
        let mut from_dirs: Vec<(RayStart, i64)> = Vec::new();
        for v in primitive_lattice(9.0) {
            let p = v.x.as_rational().unwrap().to_integer().try_into().unwrap();
            let q = v.y.as_rational().unwrap().to_integer().try_into().unwrap();
            let (x0, y0) = start_corner(p, q);
            for (s, k) in trace_direction(&o, &sing, p as i128, q as i128).unwrap() {
                if ((k * k) as i64) * (p * p + q * q) <= 81 {
                    from_dirs.push((RayStart { square: s, corner: Corner::from_local(x0, y0), direction: (p, q) }, k as i64));
                }
            }
        }
        from_dirs.sort_by_key(|(s, k)| (s.direction, s.square, *k));
        assert_eq!(from_dirs, traced_rays(&o, 9.0).unwrap());
    }
}
