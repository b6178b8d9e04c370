//! Capacities: monotone set functions with `ν(∅) = 0` and `ν(Ω) = 1`,
//! stored densely and indexed by [`EventMask`].

mod choquet;
mod moebius;

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{EventMask, StateSpace};
use crate::tolerance;

pub use choquet::{choquet_integral, Act};
pub use moebius::{from_moebius, to_moebius, MoebiusMasses};

/// Above this many states the convexity test switches from the all-pairs
/// scan to the equivalent local condition on `A ∪ {i}`, `A ∪ {j}`.
const EXHAUSTIVE_CONVEXITY_MAX_STATES: usize = 10;

#[derive(Clone)]
pub struct Capacity {
    space: StateSpace,
    values: Vec<f64>,
    convexity: OnceLock<Option<(EventMask, EventMask)>>,
}

impl Capacity {
    /// Wraps raw values indexed by event mask. Only the length and finiteness
    /// are checked here; use [`Capacity::validate`] for the capacity axioms.
    pub fn new(space: StateSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.event_count() {
            return Err(Error::ValueCount {
                expected: space.event_count(),
                got: values.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self {
            space,
            values,
            convexity: OnceLock::new(),
        })
    }

    pub fn from_fn(space: StateSpace, f: impl FnMut(EventMask) -> f64) -> Result<Self> {
        let values = space.events().map(f).collect();
        Self::new(space, values)
    }

    /// The additive capacity `ν(A) = Σ_{ω∈A} p(ω)`.
    pub fn additive(space: StateSpace, p: &[f64]) -> Result<Self> {
        if p.len() != space.len() {
            return Err(Error::ValueCount {
                expected: space.len(),
                got: p.len(),
            });
        }
        let full = space.full();
        Self::from_fn(space, |a| {
            if a == full {
                1.0
            } else {
                a.states().map(|i| p[i]).sum()
            }
        })
    }

    /// Total ignorance: zero everywhere except on `Ω`.
    pub fn unanimity(space: StateSpace) -> Self {
        let full = space.full();
        Self::from_fn(space, |a| if a == full { 1.0 } else { 0.0 })
            .expect("unanimity values are finite")
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, event: EventMask) -> f64 {
        self.values[event.index()]
    }

    pub fn complement(&self, event: EventMask) -> EventMask {
        self.space.complement(event)
    }

    /// `ν(E) > τ`.
    pub fn is_nonnull(&self, event: EventMask) -> bool {
        self.get(event) > tolerance()
    }

    pub fn require_nonnull(&self, event: EventMask) -> Result<()> {
        self.space.check(event)?;
        if self.is_nonnull(event) {
            Ok(())
        } else {
            Err(Error::NullEvent(event))
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate_values(&self.space, &self.values)
    }

    /// `ν(A ∪ B) + ν(A ∩ B) ≥ ν(A) + ν(B) − τ` for every pair of events.
    pub fn is_convex(&self) -> bool {
        self.convexity_violation().is_none()
    }

    /// The first pair `(A, B)` violating supermodularity, if any.
    ///
    /// Up to ten states every non-nested pair is scanned with `A < B` in mask
    /// order. Beyond that the local condition
    /// `ν(S ∪ {i,j}) + ν(S) ≥ ν(S ∪ {i}) + ν(S ∪ {j})` is checked instead; it is
    /// equivalent for exact arithmetic and the reported pair is
    /// `(S ∪ {i}, S ∪ {j})`.
    pub fn convexity_violation(&self) -> Option<(EventMask, EventMask)> {
        *self.convexity.get_or_init(|| {
            if self.n() <= EXHAUSTIVE_CONVEXITY_MAX_STATES {
                self.scan_pairs()
            } else {
                self.scan_local()
            }
        })
    }

    pub fn require_convex(&self) -> Result<()> {
        match self.convexity_violation() {
            None => Ok(()),
            Some((a, b)) => Err(Error::NotConvex(a, b)),
        }
    }

    fn supermodular_gap(&self, a: usize, b: usize) -> f64 {
        let v = &self.values;
        v[a | b] + v[a & b] - v[a] - v[b]
    }

    fn scan_pairs(&self) -> Option<(EventMask, EventMask)> {
        let tol = tolerance();
        let count = self.values.len();
        for a in 0..count {
            for b in a + 1..count {
                let meet = a & b;
                if meet == a || meet == b {
                    continue;
                }
                if self.supermodular_gap(a, b) < -tol {
                    return Some((EventMask(a as u32), EventMask(b as u32)));
                }
            }
        }
        None
    }

    fn scan_local(&self) -> Option<(EventMask, EventMask)> {
        let tol = tolerance();
        let n = self.n();
        for s in self.space.events() {
            for i in 0..n {
                if s.contains(i) {
                    continue;
                }
                for j in i + 1..n {
                    if s.contains(j) {
                        continue;
                    }
                    let (a, b) = (s.with(i), s.with(j));
                    if self.supermodular_gap(a.index(), b.index()) < -tol {
                        return Some((a, b));
                    }
                }
            }
        }
        None
    }

    /// Largest absolute difference between two capacities on the same space.
    pub fn max_abs_diff(&self, other: &Capacity) -> Result<f64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

impl PartialEq for Capacity {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.values == other.values
    }
}

impl fmt::Debug for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (event, v) in self.space.events().zip(&self.values) {
            m.entry(&event, v);
        }
        m.finish()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Length { expected: usize, got: usize },
    NonFinite { event: EventMask },
    /// `ν(∅) ≠ 0` or `ν(Ω) ≠ 1`.
    Normalization { event: EventMask, value: f64 },
    Range { event: EventMask, value: f64 },
    Monotonicity { subset: EventMask, superset: EventMask },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Length { expected, got } => {
                write!(f, "length: expected {expected} values, got {got}")
            }
            Violation::NonFinite { event } => write!(f, "non-finite value at {event}"),
            Violation::Normalization { event, value } => {
                write!(f, "normalization: value {value} at {event}")
            }
            Violation::Range { event, value } => {
                write!(f, "range: value {value} at {event} outside [0, 1]")
            }
            Violation::Monotonicity { subset, superset } => {
                write!(f, "monotonicity: ν{subset} > ν{superset}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the capacity axioms on raw values; never fails, every problem is
/// listed in the report.
///
/// `ν(∅) = 0` and `ν(Ω) = 1` must hold exactly. Range and monotonicity are
/// checked within the tolerance, the latter on covering pairs `A ⊂ A ∪ {i}`
/// (which implies it for all nested pairs).
pub fn validate_values(space: &StateSpace, values: &[f64]) -> ValidationReport {
    let tol = tolerance();
    let mut violations = Vec::new();
    if values.len() != space.event_count() {
        violations.push(Violation::Length {
            expected: space.event_count(),
            got: values.len(),
        });
        return ValidationReport { violations };
    }

    let full = space.full();
    for event in space.events() {
        let v = values[event.index()];
        if !v.is_finite() {
            violations.push(Violation::NonFinite { event });
            continue;
        }
        if (event.is_empty() && v != 0.0) || (event == full && v != 1.0) {
            violations.push(Violation::Normalization { event, value: v });
        } else if v < -tol || v > 1.0 + tol {
            violations.push(Violation::Range { event, value: v });
        }
    }

    for event in space.events() {
        for i in 0..space.len() {
            if event.contains(i) {
                continue;
            }
            let sup = event.with(i);
            if values[event.index()] > values[sup.index()] + tol {
                violations.push(Violation::Monotonicity {
                    subset: event,
                    superset: sup,
                });
            }
        }
    }
    ValidationReport { violations }
}
