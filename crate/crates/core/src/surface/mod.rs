//! Translation surfaces and their saddle connection vectors.
//!
//! Two models are supported: square-tiled surfaces ([`Origami`]), whose
//! saddle connections are found by exact geodesic tracing, and
//! [`GroupOrbitModel`], where the vectors are the orbit of seed vectors under
//! user-supplied Veech group generators.

mod config;
mod lattice;
pub mod models;
mod orbit;
mod origami;
mod trace;

use std::cmp::Ordering;

use num_rational::BigRational;
use serde::Serialize;

pub use config::{parse_surface_config, SurfaceConfig};
pub use lattice::primitive_lattice;
pub use orbit::{orbit_vectors, GroupOrbitModel, OrbitDisk, OrbitEnumeration};
pub use origami::{validate_origami, Corner, MarkedPolicy, Origami, Permutation, SingularityData, VertexClass};
pub use trace::{replay_ray, trace_direction, trace_saddle_connections, traced_rays, PeriodMaps, RayStart};

use crate::error::{Error, Result};
use crate::exactfield::{FieldDescriptor, FieldElement};
use crate::interval::f64_to_rat;

/// A saddle connection holonomy vector with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SaddleVector {
    pub x: FieldElement,
    pub y: FieldElement,
    pub multiplicity: u32,
}

impl SaddleVector {
    pub fn new(x: FieldElement, y: FieldElement) -> Self {
        SaddleVector { x, y, multiplicity: 1 }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        SaddleVector::new(FieldElement::from_integer(x), FieldElement::from_integer(y))
    }

    /// `|y|`
    pub fn height(&self) -> FieldElement {
        self.y.abs()
    }

    pub fn norm_squared(&self) -> FieldElement {
        &(&self.x * &self.x) + &(&self.y * &self.y)
    }

    pub fn norm_f64(&self) -> f64 {
        self.x.to_f64().hypot(self.y.to_f64())
    }

    pub fn neg(&self) -> SaddleVector {
        SaddleVector { x: -&self.x, y: -&self.y, multiplicity: self.multiplicity }
    }

    pub fn same_point(&self, o: &SaddleVector) -> bool {
        self.x == o.x && self.y == o.y
    }

    pub fn within_radius(&self, radius: &BigRational) -> bool {
        let r2 = FieldElement::rational(radius * radius);
        self.norm_squared().cmp_value(&r2).map(|o| o != Ordering::Greater).unwrap_or(false)
    }

    pub fn field(&self) -> FieldDescriptor {
        if !self.x.is_rational() {
            self.x.field()
        } else {
            self.y.field()
        }
    }
}

/// Exact lexicographic order on `(x, y)`.
pub fn cmp_lex(a: &SaddleVector, b: &SaddleVector) -> Ordering {
    a.x.cmp_value(&b.x)
        .unwrap()
        .then_with(|| a.y.cmp_value(&b.y).unwrap())
}

/// Order by height, then lexicographically.
pub fn cmp_height_lex(a: &SaddleVector, b: &SaddleVector) -> Ordering {
    a.height().cmp_value(&b.height()).unwrap().then_with(|| cmp_lex(a, b))
}

/// A translation surface model.
#[derive(Clone, Debug)]
pub enum SurfaceModel {
    Origami(Origami),
    Orbit(GroupOrbitModel),
}

impl SurfaceModel {
    pub fn volume(&self) -> FieldElement {
        volume(self)
    }

    pub fn field(&self) -> FieldDescriptor {
        match self {
            SurfaceModel::Origami(_) => FieldDescriptor::Rational,
            SurfaceModel::Orbit(m) => m.field(),
        }
    }

    /// Enumerate saddle vectors of norm at most `radius`.
    pub fn saddle_vectors(&self, radius: f64, depth: usize) -> Result<Vec<SaddleVector>> {
        match self {
            SurfaceModel::Origami(o) => trace_saddle_connections(o, radius),
            SurfaceModel::Orbit(m) => Ok(orbit_vectors(m, radius, depth)?.vectors),
        }
    }
}

/// Area of the surface: the square count for an origami, the stored value
/// for a group-orbit model.
pub fn volume(s: &SurfaceModel) -> FieldElement {
    match s {
        SurfaceModel::Origami(o) => FieldElement::from_integer(o.n() as i64),
        SurfaceModel::Orbit(m) => m.volume().clone(),
    }
}

/// Result of comparing the shortest vector with `√(2·vol)`.
#[derive(Clone, Debug, Serialize)]
pub struct ShortestVectorReport {
    pub shortest: SaddleVector,
    pub shortest_length: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Shortest enumerated vector against the bound `√(2·vol(S))`; the
/// comparison `|v|² ≤ 2·vol` is exact.
pub fn shortest_vector_check(vectors: &[SaddleVector], vol: &FieldElement) -> Result<ShortestVectorReport> {
    let shortest = vectors
        .iter()
        .min_by(|a, b| a.norm_squared().cmp_value(&b.norm_squared()).unwrap())
        .ok_or_else(|| Error::CheckFailed("empty enumeration at sufficient radius".into()))?;
    let two_vol = &FieldElement::from_integer(2) * vol;
    let pass = shortest.norm_squared().cmp_value(&two_vol)? != Ordering::Greater;
    Ok(ShortestVectorReport {
        shortest: shortest.clone(),
        shortest_length: shortest.norm_f64(),
        bound: two_vol.to_f64().sqrt(),
        pass,
    })
}

/// Radius needed so that the Vorobets bound can be checked conclusively.
pub fn vorobets_radius(vol: &FieldElement) -> f64 {
    (2.0 * vol.to_f64()).sqrt() * (1.0 + 1e-9) + 1e-9
}

/// `true` when the set is closed under `v ↦ −v`.
pub fn closed_under_negation(vectors: &[SaddleVector]) -> bool {
    let set: std::collections::HashSet<(FieldElement, FieldElement)> =
        vectors.iter().map(|v| (v.x.clone(), v.y.clone())).collect();
    vectors.iter().all(|v| set.contains(&(-&v.x, -&v.y)))
}

/// Sort by height then lexicographically, merging duplicates by summing
/// multiplicities.
pub fn normalize_vectors(mut v: Vec<SaddleVector>) -> Vec<SaddleVector> {
    v.sort_by(cmp_height_lex);
    let mut out: Vec<SaddleVector> = Vec::with_capacity(v.len());
    for s in v {
        match out.last_mut() {
            Some(last) if last.same_point(&s) => last.multiplicity += s.multiplicity,
            _ => out.push(s),
        }
    }
    out
}

pub(crate) fn radius_rat(radius: f64) -> Result<BigRational> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    Ok(f64_to_rat(radius))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_merges() {
        let v = vec![SaddleVector::from_ints(1, 1), SaddleVector::from_ints(1, 0), SaddleVector::from_ints(1, 1)];
        let n = normalize_vectors(v);
        assert_eq!(n.len(), 2);
        assert_eq!(n[0], SaddleVector::from_ints(1, 0));
        assert_eq!(n[1].multiplicity, 2);
    }

    #[test]
    fn shortest_check_rejects_empty() {
        assert!(shortest_vector_check(&[], &FieldElement::one()).is_err());
    }
}
