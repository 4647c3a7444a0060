//! Arithmetic diagnostics: Galois-conjugate domination, convergent heights
//! and the growth-rate test on convergent denominators.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::{naive_height, FieldElement};
use crate::interval::ln_bigint;
use crate::matrix::GroupElement;
use crate::surface::{GroupOrbitModel, OrbitDisk, SaddleVector};
use crate::zexp::ConvergentRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Hyperbolic,
    Parabolic,
    Elliptic,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceCheck {
    pub trace: FieldElement,
    pub conjugates: Vec<FieldElement>,
    pub kind: TraceKind,
    /// `|tr M| ≥ |σ(tr M)|` for every nontrivial embedding.
    pub dominates: bool,
    /// Domination where it is required, i.e. for hyperbolic elements.
    pub pass: bool,
}

fn le_abs(small: &FieldElement, big: &FieldElement) -> bool {
    small.abs().cmp_value(&big.abs()).map(|o| o != Ordering::Greater).unwrap_or(false)
}

/// `|tr M| ≥ |σ(tr M)|` for every nontrivial embedding `σ`, decided exactly.
/// Only hyperbolic elements can fail; the others are reported by kind.
pub fn trace_domination(m: &GroupElement) -> TraceCheck {
    let t = m.trace();
    let two = FieldElement::from_integer(2);
    let kind = match t.abs().cmp_value(&two).expect("comparison with a rational") {
        Ordering::Greater => TraceKind::Hyperbolic,
        Ordering::Equal => TraceKind::Parabolic,
        Ordering::Less => TraceKind::Elliptic,
    };
    let conjugates: Vec<FieldElement> = t.embeddings().into_iter().skip(1).collect();
    let dominates = conjugates.iter().all(|c| le_abs(c, &t));
    let pass = dominates || kind != TraceKind::Hyperbolic;
    TraceCheck { trace: t, conjugates, kind, dominates, pass }
}

/// `min_σ |σ(λ)/λ|` over all embeddings, for the translation length `λ` of a
/// parabolic element.
pub fn compute_c1(lambda: &FieldElement) -> Result<FieldElement> {
    if lambda.is_zero() {
        return Err(Error::ZeroInput("parabolic translation length"));
    }
    let mut best = FieldElement::one();
    for s in lambda.embeddings().iter().skip(1) {
        let r = (s / lambda).abs();
        if r.cmp_value(&best)? == Ordering::Less {
            best = r;
        }
    }
    Ok(best)
}

/// The translation length of the first unipotent generator.
pub fn parabolic_length(model: &GroupOrbitModel) -> Result<FieldElement> {
    model
        .generators()
        .iter()
        .find(|g| g.is_unipotent())
        .map(|g| if g.entry(0, 1).is_zero() { g.entry(1, 0).clone() } else { g.entry(0, 1).clone() })
        .ok_or_else(|| Error::InvalidArgument("the group has no parabolic generator".into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryCheck {
    pub row: usize,
    pub col: usize,
    pub pass: bool,
}

/// Off-diagonal entries must satisfy `|a| ≥ c₁|σ(a)|`, diagonal ones
/// `|a| ≥ c₁²|σ(a)|`.
pub fn entry_domination(a: &GroupElement, c1: &FieldElement) -> Vec<EntryCheck> {
    let c1sq = c1 * c1;
    let mut out = Vec::with_capacity(4);
    for row in 0..2 {
        for col in 0..2 {
            let x = a.entry(row, col);
            let c = if row == col { &c1sq } else { c1 };
            let pass = x.embeddings().iter().skip(1).all(|s| le_abs(&(c * s), x));
            out.push(EntryCheck { row, col, pass });
        }
    }
    out
}

/// `min |vᵢ|/|σ(vᵢ)|` over components and embeddings other than the
/// identity, zero components skipped. Rational components give 1. `None`
/// when every component is zero.
pub fn vector_domination(vectors: &[SaddleVector]) -> Result<Option<FieldElement>> {
    let ratios: Vec<FieldElement> = vectors
        .par_iter()
        .flat_map_iter(|v| [v.x.clone(), v.y.clone()])
        .filter(|x| !x.is_zero())
        .map(|x| {
            if x.is_rational() {
                return vec![FieldElement::one()];
            }
            x.embeddings().into_iter().skip(1).map(|s| (&x / &s).abs()).collect::<Vec<_>>()
        })
        .flatten_iter()
        .collect();
    let mut best: Option<FieldElement> = None;
    for r in ratios {
        if best.as_ref().is_none_or(|b| r.cmp_value(b).map(|o| o == Ordering::Less).unwrap_or(false)) {
            best = Some(r);
        }
    }
    Ok(best)
}

/// Every distinct product of at most `max_len` generators and inverses.
pub fn words_up_to(generators: &[GroupElement], max_len: usize) -> Vec<GroupElement> {
    let mut seen: HashSet<GroupElement> = HashSet::new();
    seen.insert(GroupElement::identity());
    let mut frontier = vec![GroupElement::identity()];
    for _ in 0..max_len {
        let next: Vec<GroupElement> = frontier
            .par_iter()
            .flat_map_iter(|w| generators.iter().map(move |g| w.mul(g)))
            .collect();
        frontier = next.into_iter().filter(|w| seen.insert(w.clone())).collect();
    }
    let mut out: Vec<GroupElement> = seen.into_iter().collect();
    out.sort_by_key(|w| w.to_string());
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationReport {
    pub c1: FieldElement,
    pub words: usize,
    pub hyperbolic: usize,
    pub parabolic: usize,
    pub elliptic: usize,
    pub trace_failures: usize,
    /// Non-hyperbolic words whose trace is smaller than a conjugate.
    pub undominated_non_hyperbolic: usize,
    pub entry_failures: usize,
    pub radius: f64,
    pub c_emp: Option<FieldElement>,
    /// `c_emp` after doubling the enumeration radius.
    pub c_emp_doubled: Option<FieldElement>,
    /// `c_emp` agrees at both radii to within `1e-9`.
    pub stable: bool,
}

impl DominationReport {
    pub fn all_pass(&self) -> bool {
        self.trace_failures == 0 && self.entry_failures == 0 && self.c_emp.as_ref().is_some_and(|c| c.is_positive())
    }
}

/// Trace and entry domination over all words of length `≤ max_len`, and the
/// vector constant at `radius` and `2·radius`.
pub fn domination_suite(model: &GroupOrbitModel, max_len: usize, radius: f64, depth: usize) -> Result<DominationReport> {
    let c1 = compute_c1(&parabolic_length(model)?)?;
    let words = words_up_to(&model.symmetric_generators(), max_len);
    let traces: Vec<TraceCheck> = words.par_iter().map(trace_domination).collect();
    let entry_failures = words
        .par_iter()
        .filter(|w| entry_domination(w, &c1).iter().any(|e| !e.pass))
        .count();
    let count = |k: TraceKind| traces.iter().filter(|t| t.kind == k).count();

    let mut disk = OrbitDisk::new(model.clone(), depth);
    let near = disk.within(radius)?.to_vec();
    let c_emp = vector_domination(&near)?;
    let far = disk.within(2.0 * radius)?.to_vec();
    let c_emp_doubled = vector_domination(&far)?;
    let stable = match (&c_emp, &c_emp_doubled) {
        (Some(a), Some(b)) => (a.to_f64() - b.to_f64()).abs() <= 1e-9,
        _ => false,
    };
    Ok(DominationReport {
        c1,
        words: words.len(),
        hyperbolic: count(TraceKind::Hyperbolic),
        parabolic: count(TraceKind::Parabolic),
        elliptic: count(TraceKind::Elliptic),
        trace_failures: traces.iter().filter(|t| !t.pass).count(),
        undominated_non_hyperbolic: traces.iter().filter(|t| t.pass && !t.dominates).count(),
        entry_failures,
        radius,
        c_emp,
        c_emp_doubled,
        stable,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HeightStep {
    pub n: usize,
    pub q: FieldElement,
    #[serde(serialize_with = "as_string")]
    pub height: BigInt,
    /// `H(p/q) / |q|^D`
    pub ratio: f64,
    pub held_out: bool,
    pub pass: bool,
}

fn as_string<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

#[derive(Clone, Debug, Serialize)]
pub struct HeightCheckReport {
    pub degree: u32,
    pub c2: f64,
    pub steps: Vec<HeightStep>,
    pub violations: usize,
}

/// Fit the smallest `c₂` with `H(pₙ/qₙ) ≤ c₂|qₙ|^D` on all but the last
/// `holdout` records, then test the held-out records against it. `m` must
/// make `m·pₙ` and `m·qₙ` algebraic integers.
pub fn convergent_height_check(records: &[ConvergentRecord], degree: u32, m: &BigInt, holdout: usize) -> Result<HeightCheckReport> {
    let mf = FieldElement::rational(num_rational::BigRational::from_integer(m.clone()));
    let mut ratios = Vec::with_capacity(records.len());
    for r in records {
        if r.q().is_zero() {
            return Err(Error::ZeroInput("record height"));
        }
        if !(&mf * r.p()).is_algebraic_integer() || !(&mf * r.q()).is_algebraic_integer() {
            return Err(Error::InvalidArgument(format!("{m}·({}, {}) is not integral", r.p(), r.q())));
        }
        let h = naive_height(&(r.p() / r.q()));
        let ratio = &FieldElement::rational(h.clone().into()) / &r.q().abs().pow(degree);
        ratios.push((h, ratio));
    }
    let fit = records.len().saturating_sub(holdout);
    let mut c2: Option<FieldElement> = None;
    for (_, r) in &ratios[..fit] {
        if c2.as_ref().is_none_or(|c| r.cmp_value(c).map(|o| o == Ordering::Greater).unwrap_or(false)) {
            c2 = Some(r.clone());
        }
    }
    let c2 = c2.ok_or_else(|| Error::InvalidArgument("no records left to fit".into()))?;
    let mut steps = Vec::new();
    let mut violations = 0;
    for (n, (r, (h, ratio))) in records.iter().zip(ratios).enumerate() {
        let pass = ratio.cmp_value(&c2)? != Ordering::Greater;
        if !pass {
            violations += 1;
        }
        steps.push(HeightStep { n, q: r.q().clone(), height: h, ratio: ratio.to_f64(), held_out: n >= fit, pass });
    }
    Ok(HeightCheckReport { degree, c2: c2.enclose(64).to_f64_interval().hi, steps, violations })
}

#[derive(Clone, Debug)]
pub struct GrowthConfig {
    pub margin: f64,
    /// Number of final terms over which the running maximum is taken.
    /// `None` uses the later half of the sequence.
    pub tail: Option<usize>,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig { margin: 0.05, tail: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthPoint {
    pub n: usize,
    pub log_q: f64,
    /// `log log qₙ / n`
    pub indicator: f64,
    pub running_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub degree: u32,
    pub threshold: f64,
    pub margin: f64,
    /// First and last index of the window used for the flag.
    pub window: (usize, usize),
    pub points: Vec<GrowthPoint>,
    pub window_max: f64,
    pub flagged: bool,
    /// `log q_{n+1} / log q_n` for consecutive usable terms.
    pub exponents: Vec<f64>,
    pub exponent_reference: f64,
}

/// The growth test on denominators given through `log qₙ` for `n = 1, 2, …`.
/// Terms with `qₙ ≤ 1` are skipped.
pub fn growth_indicator(log_heights: &[f64], degree: u32, config: &GrowthConfig) -> Result<GrowthReport> {
    if degree == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    if log_heights.windows(2).any(|w| w[1] < w[0]) || log_heights.iter().any(|l| l.is_nan()) {
        return Err(Error::InvalidArgument("heights must be nondecreasing".into()));
    }
    let usable: Vec<(usize, f64)> = log_heights
        .iter()
        .enumerate()
        .map(|(i, &l)| (i + 1, l))
        .filter(|&(_, l)| l > 0.0)
        .collect();
    if usable.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 terms with q > 1, got {}", usable.len())));
    }
    let mut points = Vec::with_capacity(usable.len());
    let mut running = f64::NEG_INFINITY;
    for &(n, l) in &usable {
        let indicator = l.ln() / n as f64;
        running = running.max(indicator);
        points.push(GrowthPoint { n, log_q: l, indicator, running_max: running });
    }
    let tail = config.tail.unwrap_or(usable.len().div_ceil(2)).clamp(1, usable.len());
    let window = &points[points.len() - tail..];
    let window_max = window.iter().map(|p| p.indicator).fold(f64::NEG_INFINITY, f64::max);
    let threshold = ((2 * degree - 1) as f64).ln();
    let exponents = usable.windows(2).map(|w| w[1].1 / w[0].1).collect();
    Ok(GrowthReport {
        degree,
        threshold,
        margin: config.margin,
        window: (window[0].n, window[window.len() - 1].n),
        points,
        window_max,
        flagged: window_max > threshold + config.margin,
        exponents,
        exponent_reference: (2 * degree - 1) as f64,
    })
}

/// [`growth_indicator`] on exact integer heights.
pub fn growth_indicator_from_heights(heights: &[BigInt], degree: u32, config: &GrowthConfig) -> Result<GrowthReport> {
    let logs: Vec<f64> = heights
        .iter()
        .map(|q| if q.sign() == num_bigint::Sign::Plus { ln_bigint(q).mid() } else { f64::NEG_INFINITY })
        .collect();
    growth_indicator(&logs, degree, config)
}
