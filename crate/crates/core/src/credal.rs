//! Finitely generated credal sets: cores of convex capacities, their
//! likelihood-maximizing faces, and Minkowski mixtures.
//!
//! A [`CredalSet`] is the convex hull of its vertex list. Vertices are kept
//! sorted lexicographically with near-duplicates (L∞ distance within the
//! tolerance) merged, so the representation does not depend on the order in
//! which points were produced.

use std::cmp::Ordering;

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::space::{EventMask, StateSpace};
use crate::tolerance;

/// Operations enumerating all `n!` orderings of the states refuse larger
/// spaces.
pub const PERMUTATION_MAX_STATES: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    space: StateSpace,
    p: Vec<f64>,
}

impl ProbabilityVector {
    /// Entries below `−τ` or a total off by more than `τ` are rejected;
    /// small negative entries are clipped to zero.
    pub fn new(space: StateSpace, p: Vec<f64>) -> Result<Self> {
        let p = check_probability(&space, p)?;
        Ok(Self { space, p })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn prob(&self, event: EventMask) -> f64 {
        event_prob(&self.p, event)
    }
}

fn check_probability(space: &StateSpace, mut p: Vec<f64>) -> Result<Vec<f64>> {
    let tol = tolerance();
    if p.len() != space.len() {
        return Err(Error::ValueCount {
            expected: space.len(),
            got: p.len(),
        });
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < -tol) {
        return Err(Error::InvalidProbability(format!("entry {x}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::InvalidProbability(format!("entries sum to {total}")));
    }
    for x in &mut p {
        *x = x.max(0.0);
    }
    Ok(p)
}

/// `p(A)` for a probability vector given as a slice.
pub fn event_prob(p: &[f64], event: EventMask) -> f64 {
    event.states().map(|i| p[i]).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CredalSet {
    space: StateSpace,
    vertices: Vec<Vec<f64>>,
}

impl CredalSet {
    pub fn new(space: StateSpace, vertices: Vec<Vec<f64>>) -> Result<Self> {
        let vertices = vertices
            .into_iter()
            .map(|v| check_probability(&space, v))
            .collect::<Result<Vec<_>>>()?;
        Self::from_points(space, vertices)
    }

    /// Canonicalizes already-valid points.
    pub(crate) fn from_points(space: StateSpace, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCredalSet);
        }
        Ok(Self {
            space,
            vertices: canonicalize(points),
        })
    }

    pub fn singleton(p: ProbabilityVector) -> Self {
        Self {
            space: p.space,
            vertices: vec![p.p],
        }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `max_{p ∈ C} p(E)`, attained at a vertex.
    pub fn max_prob(&self, event: EventMask) -> f64 {
        self.vertices
            .iter()
            .map(|v| event_prob(v, event))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `min_{p ∈ C} p(E)`, attained at a vertex.
    pub fn min_prob(&self, event: EventMask) -> f64 {
        self.vertices
            .iter()
            .map(|v| event_prob(v, event))
            .fold(f64::INFINITY, f64::min)
    }

    /// The vertices attaining `max_{p ∈ C} p(E)` within the tolerance. They
    /// span the maximizing face, so the result is never empty.
    pub fn maximizers(&self, event: EventMask) -> CredalSet {
        let best = self.max_prob(event);
        let tol = tolerance();
        let vertices = self
            .vertices
            .iter()
            .filter(|v| event_prob(v, event) >= best - tol)
            .cloned()
            .collect();
        CredalSet {
            space: self.space.clone(),
            vertices,
        }
    }

    /// Smallest L∞ distance from `p` to a vertex.
    pub fn distance_to_nearest(&self, p: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| linf(v, p))
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Sorts lexicographically and merges points within `τ` (L∞) of an already
/// kept point. Kept points stay sorted by their first coordinate, so only a
/// trailing window needs checking.
fn canonicalize(mut points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let tol = tolerance();
    points.sort_by(|a, b| lex_cmp(a, b));
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        let duplicate = kept
            .iter()
            .rev()
            .take_while(|k| p[0] - k[0] <= tol)
            .any(|k| linf(k, &p) <= tol);
        if !duplicate {
            kept.push(p);
        }
    }
    kept
}

/// Visits every permutation of `0..n` in lexicographic order.
pub(crate) fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        visit(&perm);
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

pub(crate) fn check_permutable(what: &'static str, n: usize) -> Result<()> {
    if n > PERMUTATION_MAX_STATES {
        return Err(Error::TooLarge {
            what,
            got: n,
            max: PERMUTATION_MAX_STATES,
        });
    }
    Ok(())
}

/// The marginal vector of `ν` along an ordering of the states:
/// `p[π(i)] = ν({π(1..=i)}) − ν({π(1..i)})`.
pub fn marginal_vector(c: &Capacity, order: &[usize]) -> Vec<f64> {
    let mut p = vec![0.0; c.n()];
    let mut prefix = EventMask::EMPTY;
    for &state in order {
        let next = prefix.with(state);
        p[state] = c.get(next) - c.get(prefix);
        prefix = next;
    }
    p
}

/// Extreme points of the core of a convex capacity: the marginal vectors
/// over all orderings of the states, deduplicated.
pub fn core_vertices(c: &Capacity) -> Result<CredalSet> {
    c.require_convex()?;
    check_permutable("core vertex enumeration", c.n())?;
    let mut points = Vec::new();
    for_each_permutation(c.n(), |order| points.push(marginal_vector(c, order)));
    CredalSet::from_points(c.space().clone(), points)
}

/// Whether `p(A) ≥ ν(A) − τ` for every event.
pub fn membership(c: &Capacity, p: &ProbabilityVector) -> Result<bool> {
    if c.space() != p.space() {
        return Err(Error::SpaceMismatch);
    }
    Ok(dominates(c, p.as_slice()))
}

pub(crate) fn dominates(c: &Capacity, p: &[f64]) -> bool {
    let tol = tolerance();
    let mut sums = vec![0.0; c.space().event_count()];
    for mask in 1..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + p[low];
        if sums[mask] < c.values()[mask] - tol {
            return false;
        }
    }
    true
}

/// `max_{p ∈ core} p(E) = 1 − ν(Eᶜ)` for convex `ν`.
pub fn max_prob(c: &Capacity, event: EventMask) -> Result<f64> {
    c.require_convex()?;
    c.space().check(event)?;
    Ok(1.0 - c.get(c.complement(event)))
}

/// The core members maximizing the probability of a nonnull event, as the
/// core vertices attaining the maximum.
pub fn maximizer_set(c: &Capacity, event: EventMask) -> Result<CredalSet> {
    c.require_nonnull(event)?;
    Ok(core_vertices(c)?.maximizers(event))
}

/// Vertex list of `α·a + (1−α)·b`: all pairwise mixtures, deduplicated.
pub fn mixture(a: &CredalSet, b: &CredalSet, alpha: f64) -> Result<CredalSet> {
    if a.space != b.space {
        return Err(Error::SpaceMismatch);
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if alpha == 1.0 {
        return Ok(a.clone());
    }
    if alpha == 0.0 {
        return Ok(b.clone());
    }
    let beta = 1.0 - alpha;
    let mut points = Vec::with_capacity(a.len() * b.len());
    for u in &a.vertices {
        for v in &b.vertices {
            points.push(u.iter().zip(v).map(|(x, y)| alpha * x + beta * y).collect());
        }
    }
    CredalSet::from_points(a.space.clone(), points)
}

/// `min_{p ∈ C} p(A ∩ E) / p(E)`.
///
/// The ratio is linear-fractional with a positive denominator on the set, so
/// the minimum is attained at a vertex. Every vertex must give `E`
/// probability above the tolerance.
pub fn min_conditional(set: &CredalSet, a: EventMask, e: EventMask) -> Result<f64> {
    set.space.check(a)?;
    set.space.check(e)?;
    let tol = tolerance();
    let ae = a & e;
    let mut best = f64::INFINITY;
    for (index, v) in set.vertices.iter().enumerate() {
        let mass = event_prob(v, e);
        if mass <= tol {
            return Err(Error::ZeroConditioningMass { index, mass });
        }
        best = best.min(event_prob(v, ae) / mass);
    }
    Ok(best)
}
