use std::cmp::Ordering;
use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::direction::Direction;
use super::hor::hor_theta;
use crate::error::{Error, Result};
use crate::exactfield::FieldElement;
use crate::interval::{f64_to_rat, floor_rat, rat_to_f64_down, rat_to_f64_up, RatInterval};
use crate::matrix::GroupElement;
use crate::surface::{
    models, normalize_vectors, trace_direction, validate_origami, GroupOrbitModel, OrbitDisk, Origami, SaddleVector,
    SingularityData, SurfaceModel,
};

/// A supply of elements of Z in nondecreasing height order.
pub trait ZSource {
    /// The next element. `bound` is an upper bound on the smallest
    /// horizontal component seen so far; elements whose horizontal component
    /// certainly exceeds it cannot be convergents and may be skipped.
    fn next_vector(&mut self, bound: Option<f64>) -> Result<Option<SaddleVector>>;

    /// Whether every element of height at most `height` and horizontal
    /// component at most `hor` is supplied.
    fn certifies(&self, _height: f64, _hor: f64) -> bool {
        true
    }
}

/// A finite enumeration, typically everything inside a disk.
#[derive(Clone, Debug)]
pub struct ListSource {
    items: VecDeque<SaddleVector>,
    radius: Option<f64>,
    theta_hi: f64,
    theta_mid: f64,
}

impl ListSource {
    /// `radius`: the enumeration is known to contain every element of norm
    /// at most this value. Without it the list is trusted to be complete.
    pub fn new(vectors: Vec<SaddleVector>, radius: Option<f64>, theta: &Direction) -> Self {
        let t = theta.enclose(64).to_f64_interval();
        ListSource { items: normalize_vectors(vectors).into(), radius, theta_hi: t.hi, theta_mid: (t.lo + t.hi) / 2.0 }
    }
}

impl ZSource for ListSource {
    fn next_vector(&mut self, bound: Option<f64>) -> Result<Option<SaddleVector>> {
        while let Some(v) = self.items.pop_front() {
            let Some(b) = bound else { return Ok(Some(v)) };
            let (x, y) = (v.x.to_f64(), v.y.to_f64());
            let slack = 1e-9 * (x.abs() + (y * self.theta_mid).abs() + b.abs()) + 1e-300;
            if (y * self.theta_mid - x).abs() <= b + slack {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    fn certifies(&self, height: f64, hor: f64) -> bool {
        match self.radius {
            None => true,
            Some(r) => {
                // A competitor w has |w₂| ≤ height and |w₁| ≤ height·θ + hor.
                let x = height * self.theta_hi + hor;
                height.hypot(x) * (1.0 + 1e-12) <= r
            }
        }
    }
}

/// Wraps any height-ordered iterator.
pub struct StreamSource<I> {
    inner: I,
}

impl<I: Iterator<Item = SaddleVector>> StreamSource<I> {
    pub fn new(inner: I) -> Self {
        StreamSource { inner }
    }
}

impl<I: Iterator<Item = SaddleVector>> ZSource for StreamSource<I> {
    fn next_vector(&mut self, _bound: Option<f64>) -> Result<Option<SaddleVector>> {
        Ok(self.inner.next())
    }
}

/// Primitive integer vectors, generated height by height near the ray.
///
/// Only `(±1, 0)` have height zero; at height `q > 0` the vectors with
/// `|qθ − p| ≤ bound` are produced. Vectors with negative second coordinate
/// in the positive half-plane have horizontal component above `2|q| ≥ 2`,
/// more than `hor(1, 0) = 1`, so they are never produced.
#[derive(Clone, Debug)]
pub struct LatticeSource {
    theta: Direction,
    q: i64,
    buf: VecDeque<SaddleVector>,
    max_height: Option<i64>,
    enclosure: Option<(u32, RatInterval)>,
}

impl LatticeSource {
    pub fn new(theta: &Direction, max_height: Option<i64>) -> Self {
        LatticeSource { theta: theta.clone(), q: -1, buf: VecDeque::new(), max_height, enclosure: None }
    }

    fn theta_at(&mut self, bits: u32) -> RatInterval {
        match &self.enclosure {
            Some((b, t)) if *b >= bits => t.clone(),
            _ => {
                let bits = bits.div_ceil(32) * 32;
                let t = self.theta.enclose(bits);
                self.enclosure = Some((bits, t.clone()));
                t
            }
        }
    }
}

impl ZSource for LatticeSource {
    fn next_vector(&mut self, bound: Option<f64>) -> Result<Option<SaddleVector>> {
        while self.buf.is_empty() {
            self.q += 1;
            if self.max_height.is_some_and(|m| self.q > m) {
                return Ok(None);
            }
            if self.q == 0 {
                self.buf.push_back(SaddleVector::from_ints(-1, 0));
                self.buf.push_back(SaddleVector::from_ints(1, 0));
                continue;
            }
            let eps = f64_to_rat(bound.unwrap_or(1.0).clamp(0.0, 1.0));
            let q = BigInt::from(self.q);
            let bits = 64 + q.bits() as u32;
            let t = self.theta_at(bits);
            let qr = BigRational::from_integer(q.clone());
            let lo = floor_rat(&(&(&qr * &t.lo) - &eps));
            let hi = floor_rat(&(&(&qr * &t.hi) + &eps)) + 1;
            let mut p = lo;
            while p <= hi {
                if p.gcd(&q) == BigInt::from(1) {
                    let x = FieldElement::rational(BigRational::from_integer(p.clone()));
                    self.buf.push_back(SaddleVector::new(x, FieldElement::from_integer(self.q)));
                }
                p += 1;
            }
        }
        Ok(self.buf.pop_front())
    }
}

/// Tuning for [`OrbitWindowSource`].
#[derive(Clone, Debug)]
pub struct WindowConfig {
    /// Radius of the first disk; it must contain a positive x-axis element.
    pub initial_radius: Option<f64>,
    /// Area of each later search window.
    pub band_area: Option<f64>,
    /// Word-length limit for the underlying orbit search.
    pub depth: usize,
    pub max_height: Option<f64>,
    /// Horizontal limit of the windows in place of the shortest positive
    /// x-axis element.
    pub hor_cap: Option<f64>,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig { initial_radius: None, band_area: None, depth: 100_000, max_height: None, hor_cap: None }
    }
}

/// Height-ordered orbit vectors of a group-orbit model, produced band by
/// band.
///
/// After a first disk, each band `h_lo < |y| ≤ h_hi` is searched only in
/// the window `|qθ − p| ≤ bound`. The window is a long thin parallelogram;
/// a group element `A` that makes `A·window` small is found greedily from
/// generator powers, the orbit is enumerated in a disk around `A·window`
/// (orbits are `A`-invariant), and the hits are mapped back by `A⁻¹`.
pub struct OrbitWindowSource {
    disk: OrbitDisk,
    theta: Direction,
    gens: Vec<GroupElement>,
    config: WindowConfig,
    band_area: f64,
    buf: VecDeque<SaddleVector>,
    done_height: Option<f64>,
    axis_hor: f64,
    finished: bool,
    pub bands: usize,
    pub max_disk_radius: f64,
}

impl OrbitWindowSource {
    pub fn new(model: GroupOrbitModel, theta: &Direction, config: WindowConfig) -> Self {
        let vol = model.volume().to_f64();
        let seed_max = model
            .seeds()
            .iter()
            .map(|(x, y)| x.to_f64().hypot(y.to_f64()))
            .fold(0.0, f64::max);
        let band_area = config.band_area.unwrap_or(32.0 * vol.max(1.0));
        let gens = reduction_moves(&model.symmetric_generators());
        let depth = config.depth;
        let mut config = config;
        config.initial_radius = Some(config.initial_radius.unwrap_or((2.0 * seed_max).max(8.0)));
        OrbitWindowSource {
            disk: OrbitDisk::new(model, depth),
            theta: theta.clone(),
            gens,
            config,
            band_area,
            buf: VecDeque::new(),
            done_height: None,
            axis_hor: f64::INFINITY,
            finished: false,
            bands: 0,
            max_disk_radius: 0.0,
        }
    }

    fn first_band(&mut self) -> Result<()> {
        let r0 = self.config.initial_radius.unwrap();
        let theta_hi = self.theta.enclose(64).to_f64_interval().hi;
        let vectors = self.disk.within(r0)?.to_vec();
        self.max_disk_radius = self.max_disk_radius.max(r0);
        let eps = vectors
            .iter()
            .filter(|v| v.y.is_zero() && v.x.is_positive())
            .map(|v| v.x.enclose(64).to_f64_interval().hi)
            .fold(f64::INFINITY, f64::min);
        let eps = self.config.hor_cap.unwrap_or(eps);
        if !eps.is_finite() {
            return Err(Error::Hypothesis(format!("no positive x-axis element within radius {r0}")));
        }
        self.axis_hor = eps;
        // Largest h with h² + (hθ + ε)² ≤ r0².
        let a = 1.0 + theta_hi * theta_hi;
        let b = theta_hi * eps;
        let c = eps * eps - r0 * r0;
        let h0 = ((-b + (b * b - a * c).sqrt()) / a * (1.0 - 1e-9)).max(0.0);
        let h0 = self.config.max_height.map_or(h0, |m| h0.min(m));
        let h0r = FieldElement::rational(f64_to_rat(h0));
        let keep: Vec<SaddleVector> = vectors
            .into_iter()
            .filter(|v| v.height().cmp_value(&h0r).unwrap() != Ordering::Greater)
            .filter(|v| hor_theta(v, &self.theta).lo_f64() <= eps)
            .collect();
        self.buf.extend(normalize_vectors(keep));
        self.done_height = Some(h0);
        self.bands += 1;
        Ok(())
    }

    fn next_band(&mut self, bound: Option<f64>) -> Result<()> {
        let lo = self.done_height.unwrap();
        let eps = bound.unwrap_or(self.axis_hor).min(self.axis_hor);
        if eps <= 0.0 {
            self.finished = true;
            return Ok(());
        }
        let mut hi = lo + (self.band_area / (2.0 * eps)).max(1.0);
        if let Some(m) = self.config.max_height {
            if lo >= m {
                self.finished = true;
                return Ok(());
            }
            hi = hi.min(m);
        }
        let (a, r) = self.reduce_window(lo, hi, eps);
        let limit = 64.0 * (self.band_area.sqrt() + self.config.initial_radius.unwrap());
        if r > limit {
            return Err(Error::Hypothesis(format!(
                "the generators do not reduce the search window: radius {r:.3e} at height {lo:.3e}"
            )));
        }
        self.max_disk_radius = self.max_disk_radius.max(r);
        let ainv = a.inverse();
        let lor = f64_to_rat(lo);
        let hir = f64_to_rat(hi);
        let in_band = |h: &FieldElement| -> bool {
            let above = h.cmp_value(&FieldElement::rational(lor.clone())).unwrap() == Ordering::Greater;
            let below = h.cmp_value(&FieldElement::rational(hir.clone())).unwrap() != Ordering::Greater;
            above && below
        };
        let mut keep = Vec::new();
        for w in self.disk.within(r)? {
            let (x, y) = ainv.apply(&w.x, &w.y);
            let v = SaddleVector::new(x, y);
            if in_band(&v.height()) && hor_theta(&v, &self.theta).lo_f64() <= eps {
                keep.push(v);
            }
        }
        self.buf.extend(normalize_vectors(keep));
        self.done_height = Some(hi);
        self.bands += 1;
        Ok(())
    }

    /// Greedy choice of `A` making `A·window` small, with a rigorous bound
    /// on the circumradius of `A·window`.
    fn reduce_window(&self, lo: f64, hi: f64, eps: f64) -> (GroupElement, f64) {
        let window = Window::new(&self.theta, lo, hi, eps);
        let mut a = GroupElement::identity();
        let mut best = window.radius_f64(&a);
        for _ in 0..10_000 {
            let corners = window.corners_f64(&a);
            let mut step: Option<(GroupElement, f64)> = None;
            for g in &self.gens {
                for k in candidate_powers(g, &corners) {
                    let cand = g.pow(k).mul(&a);
                    let r = window.radius_f64(&cand);
                    if r < best * (1.0 - 1e-9) && step.as_ref().is_none_or(|(_, s)| r < *s) {
                        step = Some((cand, r));
                    }
                }
            }
            match step {
                Some((cand, r)) => {
                    a = cand;
                    best = r;
                }
                None => break,
            }
        }
        let r = window.radius(&a);
        (a, r)
    }
}

/// Generators and inverses, plus conjugates of the parabolic ones by every
/// generator, so that shears in more than one direction are available.
fn reduction_moves(gens: &[GroupElement]) -> Vec<GroupElement> {
    let mut out = gens.to_vec();
    for g in gens.iter().filter(|g| g.is_unipotent()) {
        for h in gens {
            let c = h.mul(g).mul(&h.inverse());
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

fn candidate_powers(g: &GroupElement, corners: &[(f64, f64)]) -> Vec<i64> {
    if !g.is_unipotent() {
        return vec![1, 2, 3];
    }
    // For g = I + N, minimize Σ |c + kNc|² over real k, then round.
    let m = g.to_f64();
    let n = [[m[0][0] - 1.0, m[0][1]], [m[1][0], m[1][1] - 1.0]];
    let (mut num, mut den) = (0.0, 0.0);
    for &(x, y) in corners {
        let nx = n[0][0] * x + n[0][1] * y;
        let ny = n[1][0] * x + n[1][1] * y;
        num += x * nx + y * ny;
        den += nx * nx + ny * ny;
    }
    if den == 0.0 || !num.is_finite() {
        return vec![1];
    }
    let k = (-num / den).round().clamp(-1e15, 1e15) as i64;
    let mut out: Vec<i64> = [k - 1, k, k + 1].into_iter().filter(|&k| k != 0).collect();
    out.dedup();
    out
}

/// `{(p, q) : lo ≤ q ≤ hi, |qθ − p| ≤ ε}`, written as `q·(θ, 1) + t·(1, 0)`.
struct Window {
    theta: Direction,
    lo: BigRational,
    hi: BigRational,
    eps: BigRational,
}

impl Window {
    fn new(theta: &Direction, lo: f64, hi: f64, eps: f64) -> Self {
        Window { theta: theta.clone(), lo: f64_to_rat(lo), hi: f64_to_rat(hi), eps: f64_to_rat(eps) }
    }

    fn bits(&self, a: &GroupElement) -> u32 {
        let size = a.entries().iter().map(|e| e.to_f64().abs()).fold(1.0, f64::max);
        let h = self.hi.to_f64().unwrap_or(1.0).max(1.0);
        96 + (size.log2() + h.log2()).max(0.0) as u32
    }

    /// Enclosure of `A·(θ, 1)`.
    fn direction(&self, a: &GroupElement) -> (RatInterval, RatInterval) {
        let bits = self.bits(a);
        let t = self.theta.enclose(bits);
        let e = |i, j| a.entry(i, j).enclose(bits);
        (&(&e(0, 0) * &t) + &e(0, 1), &(&e(1, 0) * &t) + &e(1, 1))
    }

    /// Enclosures of the four corners of `A·window`.
    fn corners(&self, a: &GroupElement) -> Vec<(RatInterval, RatInterval)> {
        let bits = self.bits(a);
        let (dir_x, dir_y) = self.direction(a);
        let side_x = a.entry(0, 0).enclose(bits);
        let side_y = a.entry(1, 0).enclose(bits);
        let mut out = Vec::with_capacity(4);
        for q in [&self.lo, &self.hi] {
            let qi = RatInterval::point(q.clone());
            for s in [-&self.eps, self.eps.clone()] {
                let si = RatInterval::point(s);
                out.push((&(&qi * &dir_x) + &(&si * &side_x), &(&qi * &dir_y) + &(&si * &side_y)));
            }
        }
        out
    }

    /// Approximate corners. `A·(θ, 1)` is taken from an enclosure so the
    /// cancellation in `aθ + b` costs nothing.
    fn corners_f64(&self, a: &GroupElement) -> Vec<(f64, f64)> {
        let (dx, dy) = self.direction(a);
        let (dx, dy) = (dx.midpoint_f64(), dy.midpoint_f64());
        let (sx, sy) = (a.entry(0, 0).to_f64(), a.entry(1, 0).to_f64());
        let (lo, hi, eps) = (rat_to_f64_down(&self.lo), rat_to_f64_up(&self.hi), rat_to_f64_up(&self.eps));
        let mut out = Vec::with_capacity(4);
        for q in [lo, hi] {
            for t in [-eps, eps] {
                out.push((q * dx + t * sx, q * dy + t * sy));
            }
        }
        out
    }

    fn radius_f64(&self, a: &GroupElement) -> f64 {
        self.corners_f64(a).iter().map(|&(x, y)| x.hypot(y)).fold(0.0, f64::max)
    }

    /// Upper bound on `max |A·z|` over the window.
    fn radius(&self, a: &GroupElement) -> f64 {
        let mut r2 = BigRational::zero();
        for (x, y) in self.corners(a) {
            let n = &x.square().hi + &y.square().hi;
            if n > r2 {
                r2 = n;
            }
        }
        rat_to_f64_up(&r2).sqrt() * (1.0 + 1e-12)
    }
}

impl ZSource for OrbitWindowSource {
    fn next_vector(&mut self, bound: Option<f64>) -> Result<Option<SaddleVector>> {
        while self.buf.is_empty() {
            if self.finished {
                return Ok(None);
            }
            if self.done_height.is_none() {
                self.first_band()?;
            } else {
                self.next_band(bound)?;
            }
        }
        Ok(self.buf.pop_front())
    }
}

/// Height-ordered saddle connections of an origami.
///
/// Holonomies are multiples `k·w` of primitive integer vectors `w`, and
/// `|hor(w)| ≤ |hor(k·w)|`, so the candidates `w` come from a window source
/// over primitive ℤ². Each is traced once and its multiples wait in a
/// buffer until no later candidate can undercut them.
pub struct OrigamiWindowSource {
    origami: Origami,
    sing: SingularityData,
    lattice: OrbitWindowSource,
    pending: Vec<SaddleVector>,
    ready: VecDeque<SaddleVector>,
    exhausted: bool,
}

impl OrigamiWindowSource {
    pub fn new(origami: Origami, theta: &Direction, config: WindowConfig) -> Result<Self> {
        let sing = validate_origami(&origami)?;
        if !sing.classes.iter().any(|c| c.marked) {
            return Err(Error::NoMarkedPoints(origami.marked_policy.name()));
        }
        let axis = trace_direction(&origami, &sing, 1, 0)?
            .iter()
            .map(|&(_, k)| k)
            .min()
            .ok_or_else(|| Error::Hypothesis("no horizontal saddle connection".into()))?;
        let band_area = config.band_area.unwrap_or(32.0 * origami.n() as f64);
        let config = WindowConfig { hor_cap: Some(axis as f64), band_area: Some(band_area), ..config };
        let lattice = OrbitWindowSource::new(models::sl2z_lattice(), theta, config);
        Ok(OrigamiWindowSource {
            origami,
            sing,
            lattice,
            pending: Vec::new(),
            ready: VecDeque::new(),
            exhausted: false,
        })
    }

    /// Move buffered vectors of height below `height` (all if `None`) out.
    fn release(&mut self, height: Option<&FieldElement>) {
        let (out, keep): (Vec<_>, Vec<_>) = std::mem::take(&mut self.pending)
            .into_iter()
            .partition(|v| height.is_none_or(|h| v.height().cmp_value(h).unwrap() == Ordering::Less));
        self.pending = keep;
        self.ready.extend(normalize_vectors(out));
    }

    fn push_multiples(&mut self, w: &SaddleVector) -> Result<()> {
        let int = |e: &FieldElement| -> Result<i128> {
            e.as_rational()
                .and_then(|r| r.to_integer().to_i128())
                .ok_or_else(|| Error::InvalidArgument(format!("lattice coordinate {e} out of range")))
        };
        let (p, q) = (int(&w.x)?, int(&w.y)?);
        for (_, k) in trace_direction(&self.origami, &self.sing, p, q)? {
            let k = BigInt::from(k);
            self.pending.push(SaddleVector::new(
                FieldElement::rational(BigRational::from_integer(BigInt::from(p) * &k)),
                FieldElement::rational(BigRational::from_integer(BigInt::from(q) * &k)),
            ));
        }
        Ok(())
    }
}

impl ZSource for OrigamiWindowSource {
    fn next_vector(&mut self, bound: Option<f64>) -> Result<Option<SaddleVector>> {
        loop {
            if let Some(v) = self.ready.pop_front() {
                return Ok(Some(v));
            }
            if self.exhausted {
                if self.pending.is_empty() {
                    return Ok(None);
                }
                self.release(None);
                continue;
            }
            match self.lattice.next_vector(bound)? {
                None => self.exhausted = true,
                Some(w) => {
                    self.release(Some(&w.height()));
                    self.push_multiples(&w)?;
                }
            }
        }
    }
}

/// The windowed source for a surface model.
pub fn window_source(model: &SurfaceModel, theta: &Direction, config: WindowConfig) -> Result<Box<dyn ZSource>> {
    Ok(match model {
        SurfaceModel::Origami(o) => Box::new(OrigamiWindowSource::new(o.clone(), theta, config)?),
        SurfaceModel::Orbit(m) => Box::new(OrbitWindowSource::new(m.clone(), theta, config)),
    })
}
