use crate::error::{Error, Result};
use crate::space::{EventMask, StateSpace};

use super::Capacity;

/// A simple act given directly by its utility in each state.
#[derive(Debug, Clone, PartialEq)]
pub struct Act {
    space: StateSpace,
    utils: Vec<f64>,
}

impl Act {
    pub fn new(space: StateSpace, utils: Vec<f64>) -> Result<Self> {
        if utils.len() != space.len() {
            return Err(Error::ValueCount {
                expected: space.len(),
                got: utils.len(),
            });
        }
        if let Some((index, &value)) = utils.iter().enumerate().find(|(_, u)| !u.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { space, utils })
    }

    pub fn constant(space: StateSpace, x: f64) -> Result<Self> {
        let n = space.len();
        Self::new(space, vec![x; n])
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn utils(&self) -> &[f64] {
        &self.utils
    }

    pub fn max_on(&self, event: EventMask) -> Option<f64> {
        event.states().map(|i| self.utils[i]).reduce(f64::max)
    }
}

/// Choquet integral over descending level sets:
/// `Σ_{i<n} (u₍ᵢ₎ − u₍ᵢ₊₁₎)·ν(S_i) + u₍ₙ₎·ν(Ω)`, where `u₍₁₎ ≥ … ≥ u₍ₙ₎` and
/// `S_i` holds the states of the `i` largest utilities. Ties are ordered by
/// state index; the value does not depend on it.
pub fn choquet_integral(c: &Capacity, f: &Act) -> Result<f64> {
    if c.space() != f.space() {
        return Err(Error::SpaceMismatch);
    }
    let u = f.utils();
    let mut order: Vec<usize> = (0..u.len()).collect();
    order.sort_by(|&i, &j| u[j].total_cmp(&u[i]).then(i.cmp(&j)));

    let mut level = EventMask::EMPTY;
    let mut total = 0.0;
    for (k, &state) in order.iter().enumerate() {
        level = level.with(state);
        let next = order.get(k + 1).map_or(0.0, |&s| u[s]);
        let step = if k + 1 == order.len() {
            u[state]
        } else {
            u[state] - next
        };
        total += step * c.get(level);
    }
    Ok(total)
}
