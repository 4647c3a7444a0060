use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{0, …, n−1}`; configs use 1-based cycle notation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect(), inverse: (0..n).collect() }
    }

    /// From a 0-based image table.
    pub fn from_images(image: Vec<usize>, field: &str) -> Result<Self> {
        let n = image.len();
        let mut inverse = vec![usize::MAX; n];
        for (i, &j) in image.iter().enumerate() {
            if j >= n {
                return Err(Error::MalformedPermutation {
                    field: field.into(),
                    reason: format!("image {} out of range 1..={n}", j + 1),
                });
            }
            if inverse[j] != usize::MAX {
                return Err(Error::MalformedPermutation {
                    field: field.into(),
                    reason: format!("{} is hit twice", j + 1),
                });
            }
            inverse[j] = i;
        }
        Ok(Permutation { image, inverse })
    }

    /// From 1-based cycles; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>], field: &str) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p > n {
                    return Err(Error::MalformedPermutation {
                        field: field.into(),
                        reason: format!("point {p} out of range 1..={n}"),
                    });
                }
                if seen[p - 1] {
                    return Err(Error::MalformedPermutation {
                        field: field.into(),
                        reason: format!("point {p} appears in more than one cycle position"),
                    });
                }
                seen[p - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                image[p - 1] = next - 1;
            }
        }
        Self::from_images(image, field)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    #[inline]
    pub fn apply_inv(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// 1-based cycles of length > 1.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                c.push(i + 1);
                i = self.image[i];
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }
}

/// Which vertices count as singularities for saddle connections.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarkedPolicy {
    /// Only vertices with cone angle greater than 2π.
    #[default]
    ConePointsOnly,
    /// Every vertex of the square tiling.
    AllVertices,
}

impl MarkedPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            MarkedPolicy::ConePointsOnly => "cone-points-only",
            MarkedPolicy::AllVertices => "all-vertices",
        }
    }
}

/// A square-tiled surface: `h` maps a square to its right neighbour, `v` to
/// the one above.
#[derive(Clone, Debug)]
pub struct Origami {
    h: Permutation,
    v: Permutation,
    pub marked_policy: MarkedPolicy,
}

impl Origami {
    pub fn new(h: Permutation, v: Permutation, marked_policy: MarkedPolicy) -> Result<Self> {
        if h.len() != v.len() {
            return Err(Error::MalformedPermutation {
                field: "v".into(),
                reason: format!("length {} differs from h length {}", v.len(), h.len()),
            });
        }
        if h.is_empty() {
            return Err(Error::InvalidModel("origami needs at least one square".into()));
        }
        Ok(Origami { h, v, marked_policy })
    }

    pub fn from_cycles(n: usize, h: &[Vec<usize>], v: &[Vec<usize>], policy: MarkedPolicy) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModel("origami needs at least one square".into()));
        }
        Self::new(Permutation::from_cycles(n, h, "h")?, Permutation::from_cycles(n, v, "v")?, policy)
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &Permutation {
        &self.h
    }

    pub fn v(&self) -> &Permutation {
        &self.v
    }
}

/// Corner of a unit square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Corner {
    LowerLeft = 0,
    LowerRight = 1,
    UpperLeft = 2,
    UpperRight = 3,
}

impl Corner {
    pub fn from_local(right: bool, top: bool) -> Corner {
        match (right, top) {
            (false, false) => Corner::LowerLeft,
            (true, false) => Corner::LowerRight,
            (false, true) => Corner::UpperLeft,
            (true, true) => Corner::UpperRight,
        }
    }

    fn all() -> [Corner; 4] {
        [Corner::LowerLeft, Corner::LowerRight, Corner::UpperLeft, Corner::UpperRight]
    }
}

/// One vertex of the surface: the square corners glued to it.
#[derive(Clone, Debug, Serialize)]
pub struct VertexClass {
    pub corners: Vec<(usize, Corner)>,
    /// The cone angle is `2π · angle_multiple`.
    pub angle_multiple: usize,
    pub marked: bool,
}

/// Vertex classes of an origami, with genus and marking.
#[derive(Clone, Debug, Serialize)]
pub struct SingularityData {
    pub classes: Vec<VertexClass>,
    pub genus: usize,
    #[serde(skip)]
    class_of: Vec<usize>,
}

impl SingularityData {
    pub fn class_of(&self, square: usize, corner: Corner) -> usize {
        self.class_of[4 * square + corner as usize]
    }

    pub fn is_marked(&self, square: usize, corner: Corner) -> bool {
        self.classes[self.class_of(square, corner)].marked
    }

    pub fn cone_points(&self) -> impl Iterator<Item = &VertexClass> {
        self.classes.iter().filter(|c| c.angle_multiple > 1)
    }

    /// `Σ (k_i − 1)`, which equals `2g − 2`.
    pub fn excess_sum(&self) -> usize {
        self.classes.iter().map(|c| c.angle_multiple - 1).sum()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Check connectivity and compute vertex classes from the edge gluings.
pub fn validate_origami(o: &Origami) -> Result<SingularityData> {
    let n = o.n();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(s) = queue.pop_front() {
        for t in [o.h.apply(s), o.h.apply_inv(s), o.v.apply(s), o.v.apply_inv(s)] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    if seen.iter().any(|&b| !b) {
        return Err(Error::NotTransitive);
    }

    let idx = |s: usize, c: Corner| 4 * s + c as usize;
    let mut parent: Vec<usize> = (0..4 * n).collect();
    for s in 0..n {
        let left = o.h.apply_inv(s);
        let below = o.v.apply_inv(s);
        union(&mut parent, idx(s, Corner::LowerLeft), idx(left, Corner::LowerRight));
        union(&mut parent, idx(s, Corner::UpperLeft), idx(left, Corner::UpperRight));
        union(&mut parent, idx(s, Corner::LowerLeft), idx(below, Corner::UpperLeft));
        union(&mut parent, idx(s, Corner::LowerRight), idx(below, Corner::UpperRight));
    }

    let mut root_to_class = std::collections::BTreeMap::new();
    let mut class_of = vec![0usize; 4 * n];
    let mut classes: Vec<VertexClass> = Vec::new();
    for s in 0..n {
        for c in Corner::all() {
            let r = find(&mut parent, idx(s, c));
            let id = *root_to_class.entry(r).or_insert_with(|| {
                classes.push(VertexClass { corners: Vec::new(), angle_multiple: 0, marked: false });
                classes.len() - 1
            });
            classes[id].corners.push((s, c));
            class_of[idx(s, c)] = id;
        }
    }
    for c in classes.iter_mut() {
        // Each corner contributes π/2 of cone angle.
        debug_assert_eq!(c.corners.len() % 4, 0);
        c.angle_multiple = c.corners.len() / 4;
        c.marked = match o.marked_policy {
            MarkedPolicy::AllVertices => true,
            MarkedPolicy::ConePointsOnly => c.angle_multiple > 1,
        };
    }
    // χ = V − E + F = V − 2n + n.
    let chi = classes.len() as i64 - n as i64;
    let genus = ((2 - chi) / 2) as usize;
    Ok(SingularityData { classes, genus, class_of })
}
