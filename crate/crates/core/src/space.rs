//! Finite state spaces and events as bitmasks.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of states. Capacities are stored densely, so a
/// 16-state space already holds 65,536 values.
pub const MAX_STATES: usize = 16;

/// An ordered, labeled, finite set of states.
///
/// Cloning is cheap; labels are shared.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSpace {
    labels: Arc<[String]>,
}

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_STATES {
            return Err(Error::StateCount {
                got: labels.len(),
                max: MAX_STATES,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || label.contains('|') {
                return Err(Error::BadLabel(label.clone()));
            }
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self {
            labels: labels.into(),
        })
    }

    /// States labeled `s1`, `s2`, ..., `sn`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("s{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of events, `2^n`.
    pub fn event_count(&self) -> usize {
        1 << self.len()
    }

    pub fn full(&self) -> EventMask {
        EventMask::full(self.len())
    }

    pub fn complement(&self, event: EventMask) -> EventMask {
        event.complement(self.len())
    }

    /// All events in mask order, `∅` first and `Ω` last.
    pub fn events(&self) -> impl Iterator<Item = EventMask> {
        (0..self.event_count() as u32).map(EventMask)
    }

    pub fn check(&self, event: EventMask) -> Result<EventMask> {
        if event.0 & !self.full().0 != 0 {
            return Err(Error::MaskOutOfRange {
                mask: event,
                n: self.len(),
            });
        }
        Ok(event)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Parses a `|`-joined list of labels; the empty string is `∅`.
    pub fn parse_event(&self, text: &str) -> Result<EventMask> {
        let mut mask = EventMask::EMPTY;
        if text.is_empty() {
            return Ok(mask);
        }
        for token in text.split('|') {
            let token = token.trim();
            let i = self
                .index_of(token)
                .ok_or_else(|| Error::UnknownLabel(token.to_string()))?;
            if mask.contains(i) {
                return Err(Error::DuplicateLabel(token.to_string()));
            }
            mask = mask.with(i);
        }
        Ok(mask)
    }

    /// Inverse of [`StateSpace::parse_event`]; labels appear in state order.
    pub fn format_event(&self, event: EventMask) -> String {
        event
            .states()
            .map(|i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join("|")
    }
}

impl fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

/// A subset of states, bit `i` set iff state `i` belongs to the event.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventMask(pub u32);

impl EventMask {
    pub const EMPTY: EventMask = EventMask(0);

    pub fn full(n: usize) -> Self {
        EventMask(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(state: usize) -> Self {
        EventMask(1 << state)
    }

    pub fn from_states<I: IntoIterator<Item = usize>>(states: I) -> Self {
        states.into_iter().fold(Self::EMPTY, |m, s| m.with(s))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn with(self, state: usize) -> Self {
        EventMask(self.0 | (1 << state))
    }

    pub fn without(self, state: usize) -> Self {
        EventMask(self.0 & !(1 << state))
    }

    pub fn contains(self, state: usize) -> bool {
        self.0 & (1 << state) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        EventMask(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        EventMask(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        EventMask(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        EventMask(!self.0 & Self::full(n).0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// State indices in increasing order.
    pub fn states(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }

    /// All subsets of this event, including `∅` and the event itself, in
    /// decreasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = EventMask> {
        let full = self.0;
        let mut next = Some(full);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 { None } else { Some((cur - 1) & full) };
            Some(EventMask(cur))
        })
    }
}

impl BitOr for EventMask {
    type Output = EventMask;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl BitAnd for EventMask {
    type Output = EventMask;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs)
    }
}

/// Raw bit complement; callers mask with the space (see [`EventMask::complement`]).
impl Not for EventMask {
    type Output = EventMask;
    fn not(self) -> Self {
        EventMask(!self.0)
    }
}

impl fmt::Display for EventMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.states().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for EventMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn labels_are_validated() {
        assert!(StateSpace::new(Vec::<String>::new()).is_err());
        assert_eq!(
            StateSpace::new(["a", "a"]),
            Err(Error::DuplicateLabel("a".into()))
        );
        assert!(matches!(StateSpace::new(["a", ""]), Err(Error::BadLabel(_))));
        assert!(matches!(StateSpace::new(["a|b"]), Err(Error::BadLabel(_))));
        assert!(StateSpace::numbered(16).is_ok());
        assert!(StateSpace::numbered(17).is_err());
    }

    #[test]
    fn event_strings_round_trip() {
        let space = StateSpace::new(["x", "y", "z"]).unwrap();
        assert_eq!(space.parse_event("").unwrap(), EventMask::EMPTY);
        let e = space.parse_event("z|x").unwrap();
        assert_eq!(e, EventMask(0b101));
        assert_eq!(space.format_event(e), "x|z");
        assert_eq!(
            space.parse_event("x|w"),
            Err(Error::UnknownLabel("w".into()))
        );
        assert_eq!(
            space.parse_event("x|x"),
            Err(Error::DuplicateLabel("x".into()))
        );
    }

    #[test]
    fn subsets_enumerates_every_submask() {
        let e = EventMask(0b1011);
        let subs: Vec<_> = e.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s.is_subset_of(e)));
        assert_eq!(EventMask::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(EventMask(0b110).to_string(), "{2,3}");
        assert_eq!(EventMask::EMPTY.to_string(), "{}");
    }

    proptest! {
        #[test]
        fn boolean_algebra_laws(a in 0u32..256, b in 0u32..256, c in 0u32..256) {
            let n = 8;
            let (a, b, c) = (EventMask(a), EventMask(b), EventMask(c));
            // De Morgan
            prop_assert_eq!((a | b).complement(n), a.complement(n) & b.complement(n));
            prop_assert_eq!((a & b).complement(n), a.complement(n) | b.complement(n));
            // distributivity
            prop_assert_eq!(a & (b | c), (a & b) | (a & c));
            prop_assert_eq!(a | (b & c), (a | b) & (a | c));
            // complement
            prop_assert_eq!(a | a.complement(n), EventMask::full(n));
            prop_assert_eq!(a & a.complement(n), EventMask::EMPTY);
            prop_assert_eq!(a.complement(n).complement(n), a);
            prop_assert_eq!((a | b).len() + (a & b).len(), a.len() + b.len());
        }
    }
}
