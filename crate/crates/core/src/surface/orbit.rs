use std::collections::HashSet;

use num_rational::BigRational;
use rayon::prelude::*;

use super::{normalize_vectors, radius_rat, SaddleVector};
use crate::error::{Error, Result};
use crate::exactfield::{FieldDescriptor, FieldElement};
use crate::matrix::GroupElement;

/// Saddle vectors realized as the orbit of seed vectors under Veech group
/// generators.
#[derive(Clone, Debug)]
pub struct GroupOrbitModel {
    field: FieldDescriptor,
    generators: Vec<GroupElement>,
    seeds: Vec<(FieldElement, FieldElement)>,
    volume: FieldElement,
}

impl GroupOrbitModel {
    pub fn new(
        field: FieldDescriptor,
        generators: Vec<GroupElement>,
        seeds: Vec<(FieldElement, FieldElement)>,
        volume: FieldElement,
    ) -> Result<Self> {
        let check = |x: &FieldElement, what: &str| -> Result<()> {
            x.in_field(field).map(|_| ()).map_err(|_| {
                Error::InvalidModel(format!("{what} {x} is not in {field}"))
            })
        };
        for (i, g) in generators.iter().enumerate() {
            for e in g.entries() {
                check(e, &format!("generator {i} entry"))?;
            }
        }
        if seeds.is_empty() {
            return Err(Error::InvalidModel("no seed vectors".into()));
        }
        for (x, y) in &seeds {
            check(x, "seed component")?;
            check(y, "seed component")?;
            if x.is_zero() && y.is_zero() {
                return Err(Error::InvalidModel("zero seed vector".into()));
            }
        }
        check(&volume, "volume")?;
        if !volume.is_positive() {
            return Err(Error::InvalidModel(format!("volume must be positive, got {volume}")));
        }
        Ok(GroupOrbitModel { field, generators, seeds, volume })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn seeds(&self) -> &[(FieldElement, FieldElement)] {
        &self.seeds
    }

    pub fn volume(&self) -> &FieldElement {
        &self.volume
    }

    /// True if some seed is a positive multiple of `(1, 0)`.
    pub fn has_axis_seed(&self) -> bool {
        self.seeds.iter().any(|(x, y)| y.is_zero() && x.is_positive())
    }

    /// Generators followed by their inverses, without duplicates.
    pub fn symmetric_generators(&self) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> = Vec::new();
        for g in self.generators.iter().flat_map(|g| [g.clone(), g.inverse()]) {
            if g != GroupElement::identity() && !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }
}

/// Result of a bounded orbit enumeration.
#[derive(Clone, Debug)]
pub struct OrbitEnumeration {
    pub vectors: Vec<SaddleVector>,
    /// Every generator image of a reported vector that lies within the
    /// radius is itself reported.
    pub closed: bool,
    /// The word-length limit stopped the search while new vectors were still
    /// being found.
    pub depth_exhausted: bool,
}

struct DiskTest {
    r: BigRational,
    r_f: f64,
}

impl DiskTest {
    fn new(radius: f64) -> Result<Self> {
        Ok(DiskTest { r: radius_rat(radius)?, r_f: radius })
    }

    fn contains(&self, x: &FieldElement, y: &FieldElement) -> bool {
        let n = x.to_f64().hypot(y.to_f64());
        if n < self.r_f * (1.0 - 1e-9) {
            return true;
        }
        if n > self.r_f * (1.0 + 1e-9) {
            return false;
        }
        SaddleVector::new(x.clone(), y.clone()).within_radius(&self.r)
    }
}

/// Breadth-first orbit search from the seeds, keeping only vectors inside
/// the disk of the given radius. The search stops after `depth` levels or
/// when no new vectors appear.
pub fn orbit_vectors(m: &GroupOrbitModel, radius: f64, depth: usize) -> Result<OrbitEnumeration> {
    let disk = DiskTest::new(radius)?;
    let gens = m.symmetric_generators();
    let mut seen: HashSet<(FieldElement, FieldElement)> = HashSet::new();
    let mut frontier: Vec<(FieldElement, FieldElement)> = Vec::new();
    for s in &m.seeds {
        if disk.contains(&s.0, &s.1) && seen.insert(s.clone()) {
            frontier.push(s.clone());
        }
    }
    let mut level = 0;
    while !frontier.is_empty() && level < depth {
        let images: Vec<(FieldElement, FieldElement)> = frontier
            .par_iter()
            .flat_map_iter(|(x, y)| {
                gens.iter()
                    .map(move |g| g.apply(x, y))
                    .filter(|(a, b)| disk.contains(a, b))
                    .collect::<Vec<_>>()
            })
            .collect();
        frontier.clear();
        for v in images {
            if !seen.contains(&v) {
                seen.insert(v.clone());
                frontier.push(v);
            }
        }
        level += 1;
    }
    let depth_exhausted = !frontier.is_empty();
    let closed = if depth_exhausted {
        seen.par_iter().all(|(x, y)| {
            gens.iter().all(|g| {
                let (a, b) = g.apply(x, y);
                !disk.contains(&a, &b) || seen.contains(&(a, b))
            })
        })
    } else {
        true
    };
    let vectors = normalize_vectors(seen.into_iter().map(|(x, y)| SaddleVector::new(x, y)).collect());
    Ok(OrbitEnumeration { vectors, closed, depth_exhausted })
}

/// Orbit vectors in a disk, kept sorted by norm and regrown on demand.
#[derive(Clone, Debug)]
pub struct OrbitDisk {
    model: GroupOrbitModel,
    depth: usize,
    radius: f64,
    norms: Vec<f64>,
    vectors: Vec<SaddleVector>,
}

impl OrbitDisk {
    pub fn new(model: GroupOrbitModel, depth: usize) -> Self {
        OrbitDisk { model, depth, radius: 0.0, norms: Vec::new(), vectors: Vec::new() }
    }

    pub fn model(&self) -> &GroupOrbitModel {
        &self.model
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// All orbit vectors of norm at most `r`, plus possibly a few slightly
    /// beyond it.
    pub fn within(&mut self, r: f64) -> Result<&[SaddleVector]> {
        let want = r * (1.0 + 1e-9);
        if want > self.radius {
            let target = want.max(self.radius * 1.25);
            let e = orbit_vectors(&self.model, target, self.depth)?;
            if !e.closed {
                return Err(Error::InsufficientRadius { needed: target, available: self.radius });
            }
            let mut v: Vec<(f64, SaddleVector)> = e.vectors.into_iter().map(|s| (s.norm_f64(), s)).collect();
            v.sort_by(|a, b| a.0.total_cmp(&b.0));
            (self.norms, self.vectors) = v.into_iter().unzip();
            self.radius = target;
        }
        let end = self.norms.partition_point(|n| *n <= want);
        Ok(&self.vectors[..end])
    }
}
