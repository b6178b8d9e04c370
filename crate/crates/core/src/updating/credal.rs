//! Prior-by-prior counterparts of the capacity rules: full Bayesian,
//! maximum likelihood, and their mixture.

use crate::comonotonic::is_comonotonic;
use crate::credal::{event_prob, mixture, CredalSet, PERMUTATION_MAX_STATES};
use crate::error::{Error, Result};
use crate::space::EventMask;
use crate::tolerance;

/// Updated credal set. `comonotonic` is `Some(false)` when the posteriors
/// are not the core of any convex capacity, and `None` when the space is too
/// large to check.
#[derive(Debug, Clone, PartialEq)]
pub struct CredalPosterior {
    pub set: CredalSet,
    pub comonotonic: Option<bool>,
}

/// `p(· ∩ E) / p(E)`, or `None` when `p(E)` is within the tolerance of zero.
pub fn bayes_posterior(p: &[f64], event: EventMask) -> Option<Vec<f64>> {
    let mass = event_prob(p, event);
    if mass <= tolerance() {
        return None;
    }
    Some(
        p.iter()
            .enumerate()
            .map(|(i, x)| if event.contains(i) { x / mass } else { 0.0 })
            .collect(),
    )
}

fn condition_all(set: &CredalSet, event: EventMask) -> Result<CredalPosterior> {
    set.space().check(event)?;
    let mut points = Vec::with_capacity(set.len());
    for (index, v) in set.vertices().iter().enumerate() {
        let post = bayes_posterior(v, event).ok_or(Error::ZeroConditioningMass {
            index,
            mass: event_prob(v, event),
        })?;
        points.push(post);
    }
    let set = CredalSet::from_points(set.space().clone(), points)?;
    let comonotonic = if set.space().len() <= PERMUTATION_MAX_STATES {
        Some(is_comonotonic(&set)?.comonotonic)
    } else {
        None
    };
    Ok(CredalPosterior { set, comonotonic })
}

/// Full Bayesian updating: every vertex conditioned on `E`. The result is
/// the vertex-wise posteriors, which span the posterior set.
pub fn credal_fb_update(set: &CredalSet, event: EventMask) -> Result<CredalPosterior> {
    condition_all(set, event)
}

/// Maximum likelihood updating: only the vertices maximizing `p(E)`.
pub fn credal_ml_update(set: &CredalSet, event: EventMask) -> Result<CredalPosterior> {
    condition_all(&set.maximizers(event), event)
}

/// Relative maximum likelihood: Bayesian updating of
/// `α·C*(E) + (1−α)·C`.
pub fn credal_rml_update(set: &CredalSet, event: EventMask, alpha: f64) -> Result<CredalPosterior> {
    let mixed = mixture(&set.maximizers(event), set, alpha)?;
    condition_all(&mixed, event)
}
