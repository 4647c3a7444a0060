use std::cmp::Ordering;

use num_rational::BigRational;
use serde::Serialize;

use super::direction::Direction;
use super::hor::{cmp_hor, distance_to_ratio, hor_theta, in_positive_half_plane, Hor, MAX_BITS, START_BITS};
use super::source::ZSource;
use crate::error::{Error, Result};
use crate::exactfield::FieldElement;
use crate::interval::RatInterval;
use crate::surface::{cmp_lex, SaddleVector};

/// One Z-convergent.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergentRecord {
    pub index: usize,
    pub vector: SaddleVector,
    pub hor: Hor,
    /// The source could not confirm that no unseen element beats this one.
    pub provisional: bool,
}

impl ConvergentRecord {
    pub fn p(&self) -> &FieldElement {
        &self.vector.x
    }

    pub fn q(&self) -> &FieldElement {
        &self.vector.y
    }
}

/// Stopping rule for [`z_expansion`]. The height group in progress is always
/// completed.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExpansionLimit {
    pub max_terms: Option<usize>,
    pub max_height: Option<f64>,
}

impl ExpansionLimit {
    pub fn terms(n: usize) -> Self {
        ExpansionLimit { max_terms: Some(n), max_height: None }
    }

    pub fn height(h: f64) -> Self {
        ExpansionLimit { max_terms: None, max_height: Some(h) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Expansion {
    pub theta: String,
    pub records: Vec<ConvergentRecord>,
    /// A convergent with zero horizontal component was found.
    pub terminated: bool,
}

impl Expansion {
    /// Heights of the records, as exact values.
    pub fn heights(&self) -> Vec<FieldElement> {
        self.records.iter().map(|r| r.vector.height()).collect()
    }
}

struct Candidate {
    v: SaddleVector,
    hor: Hor,
}

/// Compute the Z-convergents of θ from a height-ordered source.
///
/// An element of `Z ∩ H₊(θ)` is emitted when its horizontal component is at
/// most that of every element of equal or smaller height. Ties within a
/// height are emitted in lexicographic order.
pub fn z_expansion(source: &mut dyn ZSource, theta: &Direction, limit: ExpansionLimit) -> Result<Expansion> {
    let max_height = limit.max_height.map(|h| FieldElement::rational(BigRational::from_float(h).unwrap()));
    let mut records: Vec<ConvergentRecord> = Vec::new();
    let mut best: Option<Candidate> = None;
    let mut group: Vec<Candidate> = Vec::new();
    let mut group_height: Option<FieldElement> = None;
    let mut last_height: Option<FieldElement> = None;
    let mut first_group = true;
    let mut terminated = false;

    let bound = |best: &Option<Candidate>, group: &[Candidate]| -> Option<f64> {
        let b = best.as_ref().map(|c| c.hor.hi_f64());
        let g = group.iter().map(|c| c.hor.hi_f64()).fold(f64::INFINITY, f64::min);
        match b {
            Some(b) => Some(b.min(g)),
            None if g.is_finite() => Some(g),
            None => None,
        }
    };

    loop {
        let next = source.next_vector(bound(&best, &group))?;
        let next_height = next.as_ref().map(|v| v.height());
        if let (Some(h), Some(prev)) = (&next_height, &last_height) {
            if h.cmp_value(prev)? == Ordering::Less {
                return Err(Error::StreamNotSorted(format!("height {h} after {prev}")));
            }
        }
        let closes_group = match (&next_height, &group_height) {
            (Some(h), Some(g)) => h != g,
            _ => true,
        };
        if closes_group && group_height.is_some() {
            let gh = group_height.take().unwrap();
            let members = std::mem::take(&mut group);
            if !members.is_empty() {
                if first_group {
                    first_group = false;
                    if !gh.is_zero() {
                        return Err(Error::Hypothesis(
                            "Z has no element on the positive x-axis, so the expansion is not defined".into(),
                        ));
                    }
                }
                let emitted = close_group(members, &mut best, theta)?;
                for c in emitted {
                    let provisional = !source.certifies(c.v.height().to_f64(), c.hor.hi_f64());
                    if c.hor.is_zero() {
                        terminated = true;
                    }
                    records.push(ConvergentRecord { index: records.len(), vector: c.v, hor: c.hor, provisional });
                }
            }
            if terminated || limit.max_terms.is_some_and(|m| records.len() >= m) {
                break;
            }
        }
        let Some(v) = next else { break };
        let h = next_height.unwrap();
        if let Some(m) = &max_height {
            if h.cmp_value(m)? == Ordering::Greater {
                break;
            }
        }
        last_height = Some(h.clone());
        if group_height.is_none() {
            group_height = Some(h);
        }
        if in_positive_half_plane(&v, theta)? {
            let hor = hor_theta(&v, theta);
            group.push(Candidate { v, hor });
        }
    }
    Ok(Expansion { theta: theta.to_string(), records, terminated })
}

/// Emit the minimizers of one height group if they are no worse than the
/// best element so far, and update the best.
fn close_group(members: Vec<Candidate>, best: &mut Option<Candidate>, theta: &Direction) -> Result<Vec<Candidate>> {
    let mut mins: Vec<Candidate> = Vec::new();
    for c in members {
        match mins.first() {
            None => mins.push(c),
            Some(m) => match cmp_hor(&c.v, &c.hor, &m.v, &m.hor, theta)? {
                Ordering::Less => mins = vec![c],
                Ordering::Equal => mins.push(c),
                Ordering::Greater => {}
            },
        }
    }
    mins.sort_by(|a, b| cmp_lex(&a.v, &b.v));
    let m = &mins[0];
    let admit = match best.as_ref() {
        None => true,
        Some(b) => cmp_hor(&m.v, &m.hor, &b.v, &b.hor, theta)? != Ordering::Greater,
    };
    if !admit {
        return Ok(Vec::new());
    }
    *best = Some(Candidate { v: m.v.clone(), hor: m.hor.clone() });
    Ok(mins)
}

/// Outcome of searching for an element of Z on the ray.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Termination {
    Terminating { vector: Box<SaddleVector> },
    NotFound { height_bound: f64 },
}

/// Look for an element of Z on the ray up to the given height. Requires a
/// positive x-axis element in Z.
pub fn termination_check(source: &mut dyn ZSource, theta: &Direction, height_bound: f64) -> Result<Termination> {
    let e = z_expansion(source, theta, ExpansionLimit::height(height_bound))?;
    match e.records.last() {
        Some(r) if e.terminated => Ok(Termination::Terminating { vector: Box::new(r.vector.clone()) }),
        _ => Ok(Termination::NotFound { height_bound }),
    }
}

/// One consecutive pair in [`sandwich_check`].
#[derive(Clone, Debug, Serialize)]
pub struct SandwichStep {
    pub n: usize,
    pub p: FieldElement,
    pub q: FieldElement,
    pub p_next: FieldElement,
    pub q_next: FieldElement,
    pub left: f64,
    pub middle: f64,
    pub right: f64,
    pub left_holds: bool,
    pub right_holds: bool,
    pub bits: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub steps: Vec<SandwichStep>,
    pub violations: usize,
}

impl SandwichReport {
    pub fn all_pass(&self) -> bool {
        self.violations == 0
    }
}

/// The last record at each positive height.
fn sandwich_records(records: &[ConvergentRecord]) -> Vec<&ConvergentRecord> {
    let mut out: Vec<&ConvergentRecord> = Vec::new();
    for r in records.iter().filter(|r| !r.vector.y.is_zero()) {
        match out.last() {
            Some(last) if last.vector.height() == r.vector.height() => *out.last_mut().unwrap() = r,
            _ => out.push(r),
        }
    }
    out
}

/// For consecutive records with positive height check
/// `|pq' − p'q| / (2qq') < |θ − p/q| ≤ μ / (qq')` with rigorous enclosures.
/// `mu` encloses an upper bound for the Minkowski constant.
pub fn sandwich_check(records: &[ConvergentRecord], theta: &Direction, mu: &RatInterval) -> Result<SandwichReport> {
    let rs = sandwich_records(records);
    let mut steps = Vec::new();
    let mut violations = 0;
    for (n, pair) in rs.windows(2).enumerate() {
        let (a, b) = (&pair[0].vector, &pair[1].vector);
        let (q, qn) = (a.y.abs(), b.y.abs());
        let qq = &q * &qn;
        let cross = (&(&a.x * &b.y) - &(&b.x * &a.y)).abs();
        let left = &cross / &(&FieldElement::from_integer(2) * &qq);
        let mut bits = START_BITS;
        let (left_holds, right_holds, mid, right) = loop {
            let mid = distance_to_ratio(a, theta, bits)?;
            let l = left.enclose(bits);
            let qqe = qq.enclose(bits);
            let right = mu.div(&qqe).expect("positive heights");
            let lh = l.hi < mid.lo;
            let rh = mid.hi <= right.lo;
            let l_undecided = !lh && !(l.lo >= mid.hi);
            let r_undecided = !rh && !(mid.lo > right.hi);
            if (!l_undecided && !r_undecided) || bits >= MAX_BITS {
                break (lh, rh, mid, right);
            }
            bits *= 2;
        };
        if !(left_holds && right_holds) {
            violations += 1;
        }
        steps.push(SandwichStep {
            n,
            p: a.x.clone(),
            q: a.y.clone(),
            p_next: b.x.clone(),
            q_next: b.y.clone(),
            left: left.to_f64(),
            middle: mid.midpoint_f64(),
            right: right.midpoint_f64(),
            left_holds,
            right_holds,
            bits,
        });
    }
    Ok(SandwichReport { steps, violations })
}
