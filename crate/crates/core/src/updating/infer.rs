use serde::Serialize;

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::space::EventMask;
use crate::tolerance;

use super::rules::{ds_update, fh_update};

/// Largest admissible spread between per-event weight estimates, and the
/// largest admissible gap between the posterior and the common value on
/// events where Dempster-Shafer and Fagin-Halpern agree.
pub const ALPHA_SPREAD_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaEstimate {
    Identified(f64),
    /// Dempster-Shafer and Fagin-Halpern coincide on every event, so every
    /// weight explains the posterior.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaInference {
    pub estimate: AlphaEstimate,
    /// Per-event estimates on the events where the two endpoint rules differ.
    pub per_event: Vec<(EventMask, f64)>,
    pub spread: f64,
}

/// Recovers the weight of the extended update that maps `prior` to
/// `posterior` on `event`.
///
/// For each `A ⊆ E` the extended formula is linear-fractional in `α`; where
/// the endpoint rules differ it is strictly monotone in `α` and can be
/// inverted. The per-event solutions are combined by their median and the
/// posterior is rejected when they disagree.
pub fn infer_alpha(prior: &Capacity, posterior: &Capacity, event: EventMask) -> Result<AlphaInference> {
    if prior.space() != posterior.space() {
        return Err(Error::SpaceMismatch);
    }
    let ds = ds_update(prior, event)?;
    let fh = fh_update(prior, event)?;
    let tol = tolerance();

    let space = prior.space();
    for a in space.events() {
        let gap = (posterior.get(a) - posterior.get(a & event)).abs();
        if gap > ALPHA_SPREAD_TOLERANCE {
            return Err(Error::NotRationalizable(format!(
                "posterior is not supported on the conditioning event (differs by {gap} at {a})"
            )));
        }
    }

    let comp_mask = space.complement(event);
    let comp = prior.get(comp_mask);
    let mut per_event = Vec::new();
    for a in event.subsets() {
        let y = posterior.get(a);
        if (ds.get(a) - fh.get(a)).abs() <= tol {
            let gap = (y - ds.get(a)).abs();
            if gap > ALPHA_SPREAD_TOLERANCE {
                return Err(Error::NotRationalizable(format!(
                    "value {y} at {a} differs from the rule-independent value {}",
                    ds.get(a)
                )));
            }
            continue;
        }
        // y·(α·d + (1−α)·e) = α·s + (1−α)·f, solved for α
        let inter = prior.get(a);
        let union_comp = prior.get(a | comp_mask);
        let s = union_comp - comp;
        let d = 1.0 - comp;
        let f = inter;
        let e = inter + 1.0 - union_comp;
        let slope = y * (d - e) - (s - f);
        if slope.abs() <= f64::EPSILON {
            return Err(Error::NotRationalizable(format!(
                "value {y} at {a} is not attained by any alpha"
            )));
        }
        let alpha = (f - y * e) / slope;
        if !(-ALPHA_SPREAD_TOLERANCE..=1.0 + ALPHA_SPREAD_TOLERANCE).contains(&alpha) {
            return Err(Error::NotRationalizable(format!(
                "value {y} at {a} requires alpha = {alpha}"
            )));
        }
        per_event.push((a, alpha));
    }
    per_event.sort_by_key(|(a, _)| *a);

    if per_event.is_empty() {
        return Ok(AlphaInference {
            estimate: AlphaEstimate::Indeterminate,
            per_event,
            spread: 0.0,
        });
    }
    let mut sorted: Vec<f64> = per_event.iter().map(|(_, x)| *x).collect();
    sorted.sort_by(f64::total_cmp);
    let spread = sorted[sorted.len() - 1] - sorted[0];
    if spread > ALPHA_SPREAD_TOLERANCE {
        return Err(Error::NotRationalizable(format!(
            "per-event weights range over [{}, {}]",
            sorted[0],
            sorted[sorted.len() - 1]
        )));
    }
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    Ok(AlphaInference {
        estimate: AlphaEstimate::Identified(median.clamp(0.0, 1.0)),
        per_event,
        spread,
    })
}
