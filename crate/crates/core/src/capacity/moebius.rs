use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::space::{EventMask, StateSpace};
use crate::tolerance;

use super::Capacity;

/// Masses below this magnitude are treated as rounding noise by
/// [`to_moebius`] and dropped from the sparse map.
const MASS_NOISE: f64 = 1e-15;

/// Sparse Möbius masses `m`, with `ν(A) = Σ_{B⊆A} m(B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MoebiusMasses {
    space: StateSpace,
    masses: BTreeMap<EventMask, f64>,
}

impl MoebiusMasses {
    /// Requires masses summing to 1 within tolerance and no mass on `∅`.
    /// Repeated events accumulate.
    pub fn new<I>(space: StateSpace, masses: I) -> Result<Self>
    where
        I: IntoIterator<Item = (EventMask, f64)>,
    {
        let mut map = BTreeMap::new();
        for (event, mass) in masses {
            space.check(event)?;
            if !mass.is_finite() {
                return Err(Error::NonFinite {
                    index: event.index(),
                    value: mass,
                });
            }
            *map.entry(event).or_insert(0.0) += mass;
        }
        if let Some(&m) = map.get(&EventMask::EMPTY) {
            if m != 0.0 {
                return Err(Error::EmptySetMass(m));
            }
        }
        map.retain(|_, m| *m != 0.0);
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > tolerance() {
            return Err(Error::MassSum(total));
        }
        Ok(Self { space, masses: map })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn get(&self, event: EventMask) -> f64 {
        self.masses.get(&event).copied().unwrap_or(0.0)
    }

    /// Nonzero masses in mask order.
    pub fn iter(&self) -> impl Iterator<Item = (EventMask, f64)> + '_ {
        self.masses.iter().map(|(&e, &m)| (e, m))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.masses.values().all(|&m| m >= -tolerance())
    }
}

/// Zeta transform. `ν(∅) = 0` and `ν(Ω) = 1` are pinned exactly.
pub fn from_moebius(m: &MoebiusMasses) -> Capacity {
    let n = m.space.len();
    let mut values = vec![0.0; m.space.event_count()];
    for (event, mass) in m.iter() {
        values[event.index()] = mass;
    }
    for i in 0..n {
        let bit = 1 << i;
        for mask in 0..values.len() {
            if mask & bit != 0 {
                values[mask] += values[mask ^ bit];
            }
        }
    }
    values[0] = 0.0;
    *values.last_mut().unwrap() = 1.0;
    Capacity::new(m.space.clone(), values).expect("finite masses give finite values")
}

/// Inverse (Möbius) transform.
pub fn to_moebius(c: &Capacity) -> MoebiusMasses {
    let n = c.n();
    let mut m = c.values().to_vec();
    for i in 0..n {
        let bit = 1 << i;
        for mask in 0..m.len() {
            if mask & bit != 0 {
                m[mask] -= m[mask ^ bit];
            }
        }
    }
    let masses = m
        .into_iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > MASS_NOISE)
        .map(|(i, v)| (EventMask(i as u32), v))
        .collect();
    MoebiusMasses {
        space: c.space().clone(),
        masses,
    }
}
