//! Deciding whether a credal set is the core of a convex capacity.
//!
//! A nested sequence of events is *comonotonic* for a set `C` when one
//! member of `C` maximizes the probability of every event in the sequence at
//! once; `C` is comonotonic when every nested sequence is. A convex compact
//! `C` is the core of a convex capacity exactly when it is comonotonic.
//!
//! Only maximal chains `∅ ⊂ {π(1)} ⊂ {π(1),π(2)} ⊂ … ⊂ Ω`, one per ordering
//! `π` of the states, need checking: every nested sequence extends to a
//! maximal chain, and a common maximizer for the longer chain is one for
//! every subsequence.
//!
//! For a polytope the common maximizers of a chain form the intersection of
//! the maximizing faces, itself a face; a nonempty face contains a vertex.
//! So the check over the vertex list is exact.

use std::ops::Range;

use serde::Serialize;

use crate::capacity::Capacity;
use crate::credal::{
    check_permutable, core_vertices, event_prob, for_each_permutation, CredalSet,
};
use crate::error::{Error, Result};
use crate::generate::belief_function;
use crate::space::EventMask;
use crate::tolerance;
use crate::updating::credal_fb_update;

/// A chain of events and, when one exists, a vertex maximizing every event
/// of the chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainWitness {
    pub chain: Vec<EventMask>,
    pub witness: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComonotonicReport {
    pub comonotonic: bool,
    /// The first maximal chain (orderings taken lexicographically) without a
    /// common maximizer.
    pub failing: Option<ChainWitness>,
}

/// For every event, which vertices attain the maximal probability.
struct MaximizerTable {
    attains: Vec<Vec<bool>>,
}

impl MaximizerTable {
    fn new(set: &CredalSet) -> Self {
        let tol = tolerance();
        let attains = set
            .space()
            .events()
            .map(|event| {
                let probs: Vec<f64> = set
                    .vertices()
                    .iter()
                    .map(|v| event_prob(v, event))
                    .collect();
                let best = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                probs.iter().map(|&p| p >= best - tol).collect()
            })
            .collect();
        Self { attains }
    }

    fn common(&self, chain: &[EventMask]) -> Option<usize> {
        let k = self.attains[0].len();
        (0..k).find(|&v| chain.iter().all(|e| self.attains[e.index()][v]))
    }
}

fn chain_of(order: &[usize]) -> Vec<EventMask> {
    let mut prefix = EventMask::EMPTY;
    order
        .iter()
        .map(|&s| {
            prefix = prefix.with(s);
            prefix
        })
        .collect()
}

/// Checks every maximal chain for a common maximizing vertex.
pub fn is_comonotonic(set: &CredalSet) -> Result<ComonotonicReport> {
    let n = set.space().len();
    check_permutable("comonotonicity check", n)?;
    let table = MaximizerTable::new(set);
    let mut failing = None;
    for_each_permutation(n, |order| {
        if failing.is_some() {
            return;
        }
        let chain = chain_of(order);
        if table.common(&chain).is_none() {
            failing = Some(ChainWitness {
                chain,
                witness: None,
            });
        }
    });
    Ok(ComonotonicReport {
        comonotonic: failing.is_none(),
        failing,
    })
}

/// The first vertex maximizing every event of `chain`, if any.
pub fn chain_witness(set: &CredalSet, chain: &[EventMask]) -> ChainWitness {
    let tol = tolerance();
    let witness = set
        .vertices()
        .iter()
        .find(|v| {
            chain
                .iter()
                .all(|&e| event_prob(v, e) >= set.max_prob(e) - tol)
        })
        .cloned();
    ChainWitness {
        chain: chain.to_vec(),
        witness,
    }
}

/// Lower envelope `ν(A) = min_{p ∈ C} p(A)`, with `ν(∅) = 0` and `ν(Ω) = 1`
/// pinned.
pub fn envelope_capacity(set: &CredalSet) -> Capacity {
    let space = set.space().clone();
    let full = space.full();
    Capacity::from_fn(space, |a| {
        if a.is_empty() {
            0.0
        } else if a == full {
            1.0
        } else {
            set.min_prob(a)
        }
    })
    .expect("probabilities are finite")
}

/// How far the core of the envelope strays from `C`: the largest L∞
/// distance from a core vertex of the envelope to the nearest vertex of
/// `C`. Since `C` always lies inside the core of its envelope, a zero
/// deviation means both have the same convex hull.
///
/// Fails when the envelope is not convex.
pub fn hull_round_trip_deviation(set: &CredalSet) -> Result<f64> {
    let env = envelope_capacity(set);
    let core = core_vertices(&env)?;
    Ok(core
        .vertices()
        .iter()
        .map(|v| set.distance_to_nearest(v))
        .fold(0.0, f64::max))
}

/// A convex prior whose full Bayesian posterior set on `event` is not the
/// core of any convex capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct FbPathology {
    pub seed: u64,
    pub prior: Capacity,
    pub event: EventMask,
    pub posterior: CredalSet,
    pub failing: ChainWitness,
}

/// Scans belief functions on `n` states, seed by seed and event by event in
/// mask order, for a full Bayesian posterior set that is not comonotonic.
pub fn find_fb_pathology(n: usize, seeds: Range<u64>) -> Result<Option<FbPathology>> {
    for seed in seeds {
        let prior = belief_function(n, seed);
        let core = core_vertices(&prior)?;
        for event in prior.space().events() {
            if event.is_empty() || !prior.is_nonnull(event) {
                continue;
            }
            let posterior = match credal_fb_update(&core, event) {
                Ok(p) => p.set,
                Err(Error::ZeroConditioningMass { .. }) => continue,
                Err(e) => return Err(e),
            };
            if let Some(failing) = is_comonotonic(&posterior)?.failing {
                return Ok(Some(FbPathology {
                    seed,
                    prior,
                    event,
                    posterior,
                    failing,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::{from_moebius, MoebiusMasses};
    use crate::credal::mixture;
    use crate::space::StateSpace;

    fn space3() -> StateSpace {
        StateSpace::numbered(3).unwrap()
    }

    #[test]
    fn singletons_are_comonotonic() {
        let c = CredalSet::new(space3(), vec![vec![0.2, 0.3, 0.5]]).unwrap();
        let r = is_comonotonic(&c).unwrap();
        assert!(r.comonotonic);
        assert_eq!(r.failing, None);
        let env = envelope_capacity(&c);
        let additive = Capacity::additive(space3(), &[0.2, 0.3, 0.5]).unwrap();
        assert!(env.max_abs_diff(&additive).unwrap() < 1e-15);
    }

    #[test]
    fn simplex_envelope_is_unanimity() {
        let c = CredalSet::new(
            space3(),
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        )
        .unwrap();
        assert_eq!(envelope_capacity(&c), Capacity::unanimity(space3()));
        assert!(is_comonotonic(&c).unwrap().comonotonic);
        assert_eq!(hull_round_trip_deviation(&c).unwrap(), 0.0);
    }

    #[test]
    fn segment_across_the_simplex_is_not_a_core() {
        // segment from (1,0,0) to (0,½,½): along {2} ⊂ {1,2} the first event
        // is maximized only by (0,½,½) and the second only by (1,0,0)
        let c = CredalSet::new(space3(), vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.5, 0.5]]).unwrap();
        let r = is_comonotonic(&c).unwrap();
        assert!(!r.comonotonic);
        let failing = r.failing.unwrap();
        assert_eq!(failing.chain, vec![EventMask(0b010), EventMask(0b011), EventMask(0b111)]);
        assert_eq!(chain_witness(&c, &failing.chain).witness, None);
    }

    #[test]
    fn mixtures_of_cores_envelope_to_mixed_capacities() {
        let m = MoebiusMasses::new(
            space3(),
            [(EventMask(0b001), 0.1), (EventMask(0b110), 0.5), (EventMask(0b111), 0.4)],
        )
        .unwrap();
        let c = from_moebius(&m);
        let core = core_vertices(&c).unwrap();
        let star = core.maximizers(EventMask(0b011));
        let mix = mixture(&star, &core, 0.5).unwrap();
        let env = envelope_capacity(&mix);
        for a in c.space().events() {
            let expected = 0.5 * star.min_prob(a) + 0.5 * c.get(a);
            assert!((env.get(a) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn fb_pathology_exists_on_four_states() {
        let found = find_fb_pathology(4, 0..10_000).unwrap().expect("a witness");
        let again = find_fb_pathology(4, found.seed..found.seed + 1).unwrap().unwrap();
        assert_eq!(again, found);
        assert!(found.prior.is_convex());
        assert_eq!(chain_witness(&found.posterior, &found.failing.chain).witness, None);
    }

    #[test]
    fn core_vertices_are_comonotonic() {
        let m = MoebiusMasses::new(
            space3(),
            [(EventMask(0b001), 0.1), (EventMask(0b110), 0.5), (EventMask(0b111), 0.4)],
        )
        .unwrap();
        let core = core_vertices(&from_moebius(&m)).unwrap();
        assert!(is_comonotonic(&core).unwrap().comonotonic);
        assert!(hull_round_trip_deviation(&core).unwrap() <= 1e-12);
        for_each_permutation(3, |order| {
            let w = chain_witness(&core, &chain_of(order));
            assert!(w.witness.is_some());
        });
    }
}
