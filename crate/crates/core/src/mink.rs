//! Minkowski constants of discrete sets: the upper bound `π·vol`, a numerical
//! lower bound from empty symmetric convex bodies, and the lattice value.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::pi_enclosure;
use crate::error::{Error, Result};
use crate::exactfield::FieldElement;
use crate::interval::{f64_to_rat, rat_to_f64_up, RatInterval};
use crate::matrix::GroupElement;
use crate::surface::{SaddleVector, SurfaceModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Square,
    Disk,
}

impl Shape {
    /// Area of the unit shape.
    pub fn base_area(self) -> f64 {
        match self {
            Shape::Square => 4.0,
            Shape::Disk => std::f64::consts::PI,
        }
    }
}

/// The open body `s·T·U` with `T = [[a, b], [0, 1/a]]` and `U` the open
/// square `(−1, 1)²` or the open unit disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexBodyParam {
    pub shape: Shape,
    pub a: f64,
    pub b: f64,
    pub s: f64,
}

impl ConvexBodyParam {
    pub fn new(shape: Shape, a: f64, b: f64, s: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b.is_finite() && s >= 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad body parameters a={a} b={b} s={s}")));
        }
        Ok(ConvexBodyParam { shape, a, b, s })
    }

    pub fn area(&self) -> f64 {
        self.s * self.s * self.shape.base_area()
    }

    /// Exact form of the body. Floats are dyadic rationals, so nothing is lost.
    pub fn body(&self) -> ConvexBody {
        let a = f64_to_rat(self.a);
        let inverse = GroupElement::new(
            FieldElement::rational(a.recip()),
            FieldElement::rational(-f64_to_rat(self.b)),
            FieldElement::zero(),
            FieldElement::rational(a),
        )
        .expect("shear-diagonal inverse has determinant 1");
        ConvexBody { shape: self.shape, inverse, scale: f64_to_rat(self.s) }
    }

    /// `max |T·c|` over the unit shape, before scaling.
    fn unit_circumradius(&self) -> f64 {
        transform_circumradius(self.shape, [[self.a, self.b], [0.0, 1.0 / self.a]])
    }

    /// Gauge of `T⁻¹·z` in floating point.
    fn gauge_f64(&self, x: f64, y: f64) -> f64 {
        let u = x / self.a - self.b * y;
        let w = self.a * y;
        match self.shape {
            Shape::Square => u.abs().max(w.abs()),
            Shape::Disk => u.hypot(w),
        }
    }
}

fn transform_circumradius(shape: Shape, t: [[f64; 2]; 2]) -> f64 {
    match shape {
        Shape::Square => [(1.0, 1.0), (1.0, -1.0)]
            .iter()
            .map(|&(u, w)| (t[0][0] * u + t[0][1] * w).hypot(t[1][0] * u + t[1][1] * w))
            .fold(0.0, f64::max),
        Shape::Disk => {
            let f2 = t.iter().flatten().map(|v| v * v).sum::<f64>();
            let det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
            ((f2 + (f2 * f2 - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt()
        }
    }
}

/// An open origin-symmetric body `s·T·U`, stored through `T⁻¹` for exact
/// membership tests.
#[derive(Clone, Debug)]
pub struct ConvexBody {
    pub shape: Shape,
    pub inverse: GroupElement,
    pub scale: BigRational,
}

impl ConvexBody {
    /// The image `A·body`.
    pub fn transformed(&self, a: &GroupElement) -> Result<ConvexBody> {
        Ok(ConvexBody { shape: self.shape, inverse: self.inverse.try_mul(&a.inverse())?, scale: self.scale.clone() })
    }

    pub fn contains(&self, v: &SaddleVector) -> bool {
        if self.scale.is_zero() {
            return false;
        }
        let (u, w) = self.inverse.apply(&v.x, &v.y);
        let s = FieldElement::rational(self.scale.clone());
        let lt = |p: &FieldElement, q: &FieldElement| p.cmp_value(q).map(|o| o == Ordering::Less).unwrap_or(false);
        match self.shape {
            Shape::Square => lt(&u.abs(), &s) && lt(&w.abs(), &s),
            Shape::Disk => lt(&(&(&u * &u) + &(&w * &w)), &(&s * &s)),
        }
    }

    /// Upper bound on `max |z|` over the body.
    pub fn circumradius(&self) -> f64 {
        let m = self.inverse.inverse().to_f64();
        transform_circumradius(self.shape, m) * rat_to_f64_up(&self.scale) * (1.0 + 1e-12)
    }
}

/// True when no element of `z` lies in the open body. `radius` is the radius
/// out to which `z` is complete.
pub fn body_avoids(body: &ConvexBodyParam, z: &[SaddleVector], radius: f64) -> Result<bool> {
    if body.s == 0.0 {
        return Ok(true);
    }
    let exact = body.body();
    let needed = exact.circumradius();
    if needed > radius {
        return Err(Error::InsufficientRadius { needed, available: radius });
    }
    Ok(!z.par_iter().any(|v| exact.contains(v)))
}

/// `π·vol(S)`.
pub fn mink_upper_bound(m: &SurfaceModel) -> f64 {
    mink_upper_bound_enclosure(m, 64).to_f64_interval().hi
}

pub fn mink_upper_bound_enclosure(m: &SurfaceModel, bits: u32) -> RatInterval {
    &pi_enclosure(bits) * &m.volume().enclose(bits)
}

/// The Minkowski constant of the primitive integer vectors.
pub fn mink_exact_lattice() -> f64 {
    1.0
}

/// Search family and effort for [`mink_lower_bound_search`].
#[derive(Clone, Debug)]
pub struct SearchBudget {
    pub shapes: Vec<Shape>,
    /// Grid points per parameter; odd counts include `a = 1`, `b = 0`.
    pub grid: usize,
    /// `ln a` ranges over `[−log_a_max, log_a_max]`.
    pub log_a_max: f64,
    pub b_max: f64,
    pub refine_steps: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { shapes: vec![Shape::Square, Shape::Disk], grid: 41, log_a_max: 3.0, b_max: 2.0, refine_steps: 200 }
    }
}

impl SearchBudget {
    /// Round disks only.
    pub fn disks() -> Self {
        SearchBudget { shapes: vec![Shape::Disk], grid: 1, log_a_max: 0.0, b_max: 0.0, refine_steps: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinkReport {
    pub lower_bound: f64,
    pub upper_bound: Option<f64>,
    pub witness: ConvexBodyParam,
}

/// Largest `s` keeping `s·T·U` inside the disk of radius `radius` and off `pts`.
fn best_scale(shape: Shape, a: f64, b: f64, pts: &[(f64, f64)], radius: f64) -> ConvexBodyParam {
    let mut p = ConvexBodyParam { shape, a, b, s: 0.0 };
    let cap = radius / (p.unit_circumradius() * (1.0 + 1e-9));
    let gap = pts.iter().map(|&(x, y)| p.gauge_f64(x, y)).fold(f64::INFINITY, f64::min);
    p.s = cap.min(gap);
    p
}

fn grid_values(n: usize, half_width: f64) -> Vec<f64> {
    if n <= 1 {
        return vec![0.0];
    }
    let mid = (n - 1) as f64 / 2.0;
    (0..n).map(|i| (i as f64 - mid) / mid * half_width).collect()
}

/// Best `area/4` over empty bodies in the search family whose circumradius
/// stays within `radius`. The witness is verified exactly against `z`.
pub fn mink_lower_bound_search(z: &[SaddleVector], radius: f64, budget: &SearchBudget, upper: Option<f64>) -> Result<MinkReport> {
    let pts: Vec<(f64, f64)> = z.iter().map(|v| (v.x.to_f64(), v.y.to_f64())).collect();
    let la = grid_values(budget.grid, budget.log_a_max);
    let bs = grid_values(budget.grid, budget.b_max);
    let mut cells: Vec<(Shape, f64, f64)> = Vec::new();
    for &sh in &budget.shapes {
        for &l in &la {
            for &b in &bs {
                cells.push((sh, l, b));
            }
        }
    }
    let value = |p: &ConvexBodyParam| p.area() / 4.0;
    let start = cells
        .par_iter()
        .map(|&(sh, l, b)| best_scale(sh, l.exp(), b, &pts, radius))
        .max_by(|p, q| value(p).total_cmp(&value(q)));
    let Some(mut best) = start else {
        return Ok(MinkReport {
            lower_bound: 0.0,
            upper_bound: upper,
            witness: ConvexBodyParam { shape: Shape::Square, a: 1.0, b: 0.0, s: 0.0 },
        });
    };

    // Coordinatewise refinement around the best cell.
    let cell = |n: usize, w: f64| if n > 1 { 2.0 * w / (n - 1) as f64 } else { 0.0 };
    let (mut dl, mut db) = (cell(budget.grid, budget.log_a_max), cell(budget.grid, budget.b_max));
    for _ in 0..budget.refine_steps {
        if dl < 1e-12 && db < 1e-12 {
            break;
        }
        let l0 = best.a.ln();
        let moves = [(dl, 0.0), (-dl, 0.0), (0.0, db), (0.0, -db)];
        let cand = moves
            .iter()
            .filter(|m| m.0 != 0.0 || m.1 != 0.0)
            .map(|&(u, w)| best_scale(best.shape, (l0 + u).exp(), best.b + w, &pts, radius))
            .max_by(|p, q| value(p).total_cmp(&value(q)));
        match cand {
            Some(c) if value(&c) > value(&best) => best = c,
            _ => {
                dl /= 2.0;
                db /= 2.0;
            }
        }
    }

    // Shrink until the exact test agrees.
    let mut tries = 0;
    while !body_avoids(&best, z, radius)? {
        tries += 1;
        if tries > 64 {
            best.s = 0.0;
            break;
        }
        best.s *= 1.0 - 2f64.powi(-40 + tries);
    }
    let lower_bound = value(&best);
    if let Some(u) = upper {
        debug_assert!(lower_bound <= u * (1.0 + 1e-9), "lower bound {lower_bound} above {u}");
    }
    Ok(MinkReport { lower_bound, upper_bound: upper, witness: best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{models, primitive_lattice};

    fn square(s: f64) -> ConvexBodyParam {
        ConvexBodyParam::new(Shape::Square, 1.0, 0.0, s).unwrap()
    }

    #[test]
    fn avoidance_examples() {
        let z = primitive_lattice(5.0);
        assert!(body_avoids(&square(1.0), &z, 5.0).unwrap());
        assert!(!body_avoids(&square(1.0 + 1e-12), &z, 5.0).unwrap());
        let disk = ConvexBodyParam::new(Shape::Disk, 1.0, 0.0, 1.1).unwrap();
        assert!(!body_avoids(&disk, &z, 5.0).unwrap());
        assert!(body_avoids(&square(0.0), &z, 5.0).unwrap());
        assert!(matches!(body_avoids(&square(4.0), &z, 5.0), Err(Error::InsufficientRadius { .. })));
    }

    #[test]
    fn upper_bounds() {
        let pi = std::f64::consts::PI;
        assert!((mink_upper_bound(&SurfaceModel::Origami(models::torus_origami())) - pi).abs() < 1e-12);
        assert!((mink_upper_bound(&SurfaceModel::Origami(models::l3_origami())) - 3.0 * pi).abs() < 1e-12);
        let g = models::golden_l();
        let doubled = crate::surface::GroupOrbitModel::new(
            g.field(),
            vec![],
            vec![(FieldElement::from_integer(1), FieldElement::zero())],
            FieldElement::from_integer(2),
        )
        .unwrap();
        assert!((mink_upper_bound(&SurfaceModel::Orbit(doubled)) - 2.0 * pi).abs() < 1e-12);
    }

    #[test]
    fn lattice_search() {
        let z = primitive_lattice(20.0);
        let r = mink_lower_bound_search(&z, 20.0, &SearchBudget::default(), Some(std::f64::consts::PI)).unwrap();
        assert!(r.lower_bound >= 0.99, "{r:?}");
        assert!(r.lower_bound <= 1.0 + 1e-9);
        assert!(body_avoids(&r.witness, &z, 20.0).unwrap());

        let r = mink_lower_bound_search(&z, 20.0, &SearchBudget::disks(), None).unwrap();
        assert!((r.lower_bound - std::f64::consts::PI / 4.0).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn sparse_set_gives_large_bound() {
        let z = vec![SaddleVector::from_ints(1, 0), SaddleVector::from_ints(-1, 0)];
        let r = mink_lower_bound_search(&z, 50.0, &SearchBudget::default(), None).unwrap();
        assert!(r.lower_bound > 10.0, "{r:?}");
        assert!(r.witness.body().circumradius() <= 50.0);
    }

    #[test]
    fn empty_family() {
        let budget = SearchBudget { shapes: vec![], ..SearchBudget::default() };
        let r = mink_lower_bound_search(&primitive_lattice(5.0), 5.0, &budget, None).unwrap();
        assert_eq!(r.lower_bound, 0.0);
    }

    #[test]
    fn transformed_body_membership() {
        let body = ConvexBodyParam::new(Shape::Disk, 1.5, 0.25, 1.2).unwrap().body();
        let a = GroupElement::upper(FieldElement::from_integer(3)).mul(&GroupElement::lower(FieldElement::from_ratio(1, 2)));
        let moved = body.transformed(&a).unwrap();
        for v in primitive_lattice(6.0) {
            let (x, y) = a.apply(&v.x, &v.y);
            assert_eq!(body.contains(&v), moved.contains(&SaddleVector::new(x, y)));
        }
    }
}
