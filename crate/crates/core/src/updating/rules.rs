use crate::capacity::Capacity;
use crate::error::Result;
use crate::space::EventMask;
use crate::tolerance;

use super::{Alpha, Posterior, UpdateRule};

/// The three prior values every rule reads for an event `A`.
#[derive(Debug, Clone, Copy)]
struct Terms {
    /// `ν(A ∩ E)`
    inter: f64,
    /// `ν(A ∪ Eᶜ)`
    union_comp: f64,
    /// `ν(Eᶜ)`
    comp: f64,
}

impl Terms {
    fn ds(self) -> (f64, f64) {
        (self.union_comp - self.comp, 1.0 - self.comp)
    }

    fn fh(self) -> (f64, f64) {
        (self.inter, self.inter + 1.0 - self.union_comp)
    }

    fn erml(self, alpha: f64) -> (f64, f64) {
        let beta = 1.0 - alpha;
        (
            alpha * (self.union_comp - self.comp) + beta * self.inter,
            alpha * (1.0 - self.comp) + beta * (self.inter + 1.0 - self.union_comp),
        )
    }
}

/// Builds a conditional capacity supported on `event` from a per-event
/// (numerator, denominator) pair.
///
/// The value at `A` depends on `A ∩ E` only. `A ∩ E = ∅` maps to 0 and
/// `A ⊇ E` to 1 exactly; a denominator within the tolerance of zero is a
/// `0/0` corner, mapped to 0 and flagged. Other values are clamped to `[0, 1]`.
fn conditional(
    prior: &Capacity,
    event: EventMask,
    mut ratio: impl FnMut(EventMask, Terms) -> (f64, f64),
) -> Result<Posterior> {
    prior.require_nonnull(event)?;
    let space = prior.space();
    let tol = tolerance();
    let comp_mask = space.complement(event);
    let comp = prior.get(comp_mask);

    let mut values = vec![0.0; space.event_count()];
    let mut degenerate = Vec::new();
    for a in event.subsets() {
        values[a.index()] = if a.is_empty() {
            0.0
        } else if a == event {
            1.0
        } else {
            let terms = Terms {
                inter: prior.get(a),
                union_comp: prior.get(a | comp_mask),
                comp,
            };
            let (num, den) = ratio(a, terms);
            if den <= tol {
                degenerate.push(a);
                0.0
            } else {
                (num / den).clamp(0.0, 1.0)
            }
        };
    }
    for a in space.events() {
        let inner = a & event;
        if inner != a {
            values[a.index()] = values[inner.index()];
        }
    }
    degenerate.sort();
    Ok(Posterior {
        capacity: Capacity::new(space.clone(), values)?,
        event,
        degenerate,
    })
}

/// `ν_E(A) = (ν(A∪Eᶜ) − ν(Eᶜ)) / (1 − ν(Eᶜ))`
#[derive(Debug, Clone, Copy, Default)]
pub struct DempsterShafer;

impl UpdateRule for DempsterShafer {
    fn name(&self) -> &'static str {
        "ds"
    }

    fn alpha(&self) -> Option<Alpha> {
        Some(Alpha::ONE)
    }

    fn condition(&self, prior: &Capacity, event: EventMask) -> Result<Posterior> {
        conditional(prior, event, |_, t| t.ds())
    }
}

/// `ν_E(A) = ν(A∩E) / (ν(A∩E) + 1 − ν(A∪Eᶜ))`
#[derive(Debug, Clone, Copy, Default)]
pub struct FaginHalpern;

impl UpdateRule for FaginHalpern {
    fn name(&self) -> &'static str {
        "fh"
    }

    fn alpha(&self) -> Option<Alpha> {
        Some(Alpha::ZERO)
    }

    fn condition(&self, prior: &Capacity, event: EventMask) -> Result<Posterior> {
        conditional(prior, event, |_, t| t.fh())
    }
}

/// Extended relative maximum likelihood:
///
/// ```text
///            α(ν(A∪Eᶜ) − ν(Eᶜ)) + (1−α)ν(A∩E)
/// ν_E(A) = ─────────────────────────────────────────────
///          α(1 − ν(Eᶜ)) + (1−α)(ν(A∩E) + 1 − ν(A∪Eᶜ))
/// ```
///
/// With `α = 1` this is [`DempsterShafer`] and with `α = 0` it is
/// [`FaginHalpern`], bit for bit.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedRml {
    alpha: Alpha,
}

impl ExtendedRml {
    pub fn new(alpha: Alpha) -> Self {
        Self { alpha }
    }
}

impl UpdateRule for ExtendedRml {
    fn name(&self) -> &'static str {
        "erml"
    }

    fn alpha(&self) -> Option<Alpha> {
        Some(self.alpha)
    }

    fn condition(&self, prior: &Capacity, event: EventMask) -> Result<Posterior> {
        let alpha = self.alpha.get();
        conditional(prior, event, |_, t| t.erml(alpha))
    }
}

pub fn ds_update(c: &Capacity, event: EventMask) -> Result<Capacity> {
    Ok(DempsterShafer.condition(c, event)?.capacity)
}

pub fn fh_update(c: &Capacity, event: EventMask) -> Result<Capacity> {
    Ok(FaginHalpern.condition(c, event)?.capacity)
}

pub fn erml_update(c: &Capacity, event: EventMask, alpha: f64) -> Result<Capacity> {
    Ok(ExtendedRml::new(Alpha::new(alpha)?)
        .condition(c, event)?
        .capacity)
}

/// The auxiliary capacity
/// `ν′(A) = α[ν(A∪Eᶜ) + ν(A∩Eᶜ) − ν(Eᶜ)] + (1−α)ν(A)`,
/// whose Fagin-Halpern update on `E` is the extended update of `ν`.
///
/// Evaluated as `ν(A) + α[(ν(A∪Eᶜ) − ν(A)) + (ν(A∩Eᶜ) − ν(Eᶜ))]`, which
/// makes `ν′(A) = ν(A)` hold exactly whenever `A ⊇ Eᶜ`.
pub fn nu_prime(c: &Capacity, event: EventMask, alpha: f64) -> Result<Capacity> {
    let alpha = Alpha::new(alpha)?.get();
    c.require_nonnull(event)?;
    let comp_mask = c.complement(event);
    let comp = c.get(comp_mask);
    Capacity::from_fn(c.space().clone(), |a| {
        let own = c.get(a);
        own + alpha * ((c.get(a | comp_mask) - own) + (c.get(a & comp_mask) - comp))
    })
}

/// `α` on conditioning events of even size and `alt` on odd ones.
#[derive(Debug, Clone, Copy)]
pub struct PerEventAlpha {
    even: Alpha,
    odd: Alpha,
}

impl PerEventAlpha {
    pub fn new(even: Alpha, odd: Alpha) -> Self {
        Self { even, odd }
    }

    pub fn alpha_for(&self, event: EventMask) -> Alpha {
        if event.len().is_multiple_of(2) {
            self.even
        } else {
            self.odd
        }
    }
}

impl UpdateRule for PerEventAlpha {
    fn name(&self) -> &'static str {
        "hybrid-event"
    }

    fn condition(&self, prior: &Capacity, event: EventMask) -> Result<Posterior> {
        ExtendedRml::new(self.alpha_for(event)).condition(prior, event)
    }
}

/// `α` where `|A ∩ E|` is even and `alt` where odd. Binary acts are indexed
/// by `A`, so this is a per-act weight. The result need not be monotone.
#[derive(Debug, Clone, Copy)]
pub struct PerActAlpha {
    even: Alpha,
    odd: Alpha,
}

impl PerActAlpha {
    pub fn new(even: Alpha, odd: Alpha) -> Self {
        Self { even, odd }
    }
}

impl UpdateRule for PerActAlpha {
    fn name(&self) -> &'static str {
        "hybrid-act"
    }

    fn condition(&self, prior: &Capacity, event: EventMask) -> Result<Posterior> {
        let (even, odd) = (self.even.get(), self.odd.get());
        conditional(prior, event, |a, t| {
            t.erml(if a.len().is_multiple_of(2) { even } else { odd })
        })
    }
}

/// A base rule whose conditional value at `target ∩ E` is raised by `delta`
/// (capped at 1), followed by the smallest upward repair restoring
/// monotonicity.
#[derive(Debug, Clone, Copy)]
pub struct Perturbed {
    base: ExtendedRml,
    target: EventMask,
    delta: f64,
}

impl Perturbed {
    pub fn new(base: ExtendedRml, target: EventMask, delta: f64) -> Self {
        Self {
            base,
            target,
            delta,
        }
    }

    pub fn target(&self) -> EventMask {
        self.target
    }
}

impl UpdateRule for Perturbed {
    fn name(&self) -> &'static str {
        "perturbed"
    }

    fn condition(&self, prior: &Capacity, event: EventMask) -> Result<Posterior> {
        let post = self.base.condition(prior, event)?;
        let shifted = self.target & event;
        if shifted.is_empty() || shifted == event {
            return Ok(post);
        }
        let space = prior.space().clone();
        let mut values = post.capacity.values().to_vec();
        for a in space.events() {
            if a & event == shifted {
                values[a.index()] = (values[a.index()] + self.delta).min(1.0);
            }
        }
        for mask in space.events() {
            for i in mask.states() {
                let below = values[mask.without(i).index()];
                if below > values[mask.index()] {
                    values[mask.index()] = below;
                }
            }
        }
        Ok(Posterior {
            capacity: Capacity::new(space, values)?,
            ..post
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::{from_moebius, MoebiusMasses};
    use crate::error::Error;
    use crate::space::StateSpace;

    fn set(states: &[usize]) -> EventMask {
        EventMask::from_states(states.iter().map(|s| s - 1))
    }

    fn space3() -> StateSpace {
        StateSpace::numbered(3).unwrap()
    }

    fn worked_example() -> Capacity {
        from_moebius(
            &MoebiusMasses::new(
                space3(),
                [
                    (set(&[1]), 0.1),
                    (set(&[2, 3]), 0.5),
                    (set(&[1, 2, 3]), 0.4),
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn worked_example_values() {
        let c = worked_example();
        let e = set(&[1, 2]);
        let a = set(&[2]);
        assert!((ds_update(&c, e).unwrap().get(a) - 0.5).abs() < 1e-15);
        assert_eq!(fh_update(&c, e).unwrap().get(a), 0.0);
        assert!((erml_update(&c, e, 0.5).unwrap().get(a) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn endpoints_are_bit_identical() {
        let c = worked_example();
        for e in c.space().events().filter(|&e| c.is_nonnull(e)) {
            assert_eq!(erml_update(&c, e, 1.0).unwrap(), ds_update(&c, e).unwrap());
            assert_eq!(erml_update(&c, e, 0.0).unwrap(), fh_update(&c, e).unwrap());
        }
    }

    #[test]
    fn conditioning_on_everything_changes_nothing() {
        let c = worked_example();
        assert_eq!(ds_update(&c, c.space().full()).unwrap(), c);
        let fh = fh_update(&c, c.space().full()).unwrap();
        assert!(fh.max_abs_diff(&c).unwrap() <= 1e-15);
    }

    #[test]
    fn additive_prior_gives_bayes() {
        let p = [0.2, 0.3, 0.5];
        let c = Capacity::additive(space3(), &p).unwrap();
        let e = set(&[1, 2]);
        for alpha in [0.0, 0.3, 1.0] {
            let post = erml_update(&c, e, alpha).unwrap();
            assert!((post.get(set(&[1])) - 0.4).abs() < 1e-12);
            assert!((post.get(set(&[2, 3])) - 0.6).abs() < 1e-12);
        }
    }

    #[test]
    fn events_containing_the_condition_get_one() {
        let c = worked_example();
        let e = set(&[1, 2]);
        for post in [
            ds_update(&c, e).unwrap(),
            fh_update(&c, e).unwrap(),
            erml_update(&c, e, 0.7).unwrap(),
        ] {
            assert_eq!(post.get(e), 1.0);
            assert_eq!(post.get(set(&[1, 2, 3])), 1.0);
            assert_eq!(post.get(set(&[3])), 0.0);
            for a in c.space().events() {
                assert_eq!(post.get(a), post.get(a & e));
            }
        }
    }

    #[test]
    fn null_events_and_bad_alpha_are_errors() {
        let c = worked_example();
        assert_eq!(ds_update(&c, set(&[2])), Err(Error::NullEvent(set(&[2]))));
        assert_eq!(
            erml_update(&c, set(&[1, 2]), -0.1),
            Err(Error::AlphaOutOfRange(-0.1))
        );
    }

    #[test]
    fn zero_over_zero_is_flagged() {
        // monotone but not convex: ν({1}) = 0 while ν({1,3}) = 1
        let mut values = vec![0.0; 8];
        values[set(&[1, 3]).index()] = 1.0;
        values[set(&[1, 2]).index()] = 0.5;
        values[set(&[2, 3]).index()] = 0.5;
        values[7] = 1.0;
        let c = Capacity::new(space3(), values).unwrap();
        assert!(c.validate().is_valid());
        let post = FaginHalpern.condition(&c, set(&[1, 2])).unwrap();
        assert_eq!(post.degenerate, vec![set(&[1])]);
        assert_eq!(post.capacity.get(set(&[1])), 0.0);
        let post = DempsterShafer.condition(&c, set(&[1, 2])).unwrap();
        assert!(post.degenerate.is_empty());
    }

    #[test]
    fn nu_prime_examples() {
        let c = worked_example();
        let e = set(&[1, 2]);
        assert_eq!(nu_prime(&c, e, 0.0).unwrap(), c);
        let half = nu_prime(&c, e, 0.5).unwrap();
        assert!((half.get(set(&[2])) - 0.25).abs() < 1e-15);
        let additive = Capacity::additive(space3(), &[0.2, 0.3, 0.5]).unwrap();
        assert!(nu_prime(&additive, e, 1.0)
            .unwrap()
            .max_abs_diff(&additive)
            .unwrap()
            <= 1e-15);
        // ν′(A ∪ Eᶜ) = ν(A ∪ Eᶜ) exactly
        for a in c.space().events() {
            let b = a | set(&[3]);
            assert_eq!(half.get(b), c.get(b));
        }
    }

    #[test]
    fn hybrids_switch_weights() {
        let c = worked_example();
        let rule = PerEventAlpha::new(Alpha::new(0.2).unwrap(), Alpha::new(0.8).unwrap());
        assert_eq!(
            rule.condition(&c, set(&[1, 2])).unwrap().capacity,
            erml_update(&c, set(&[1, 2]), 0.2).unwrap()
        );
        assert_eq!(
            rule.condition(&c, set(&[1, 2, 3])).unwrap().capacity,
            erml_update(&c, set(&[1, 2, 3]), 0.8).unwrap()
        );

        let rule = PerActAlpha::new(Alpha::ZERO, Alpha::ONE);
        let post = rule.condition(&c, set(&[1, 2])).unwrap().capacity;
        assert_eq!(post.get(set(&[2])), ds_update(&c, set(&[1, 2])).unwrap().get(set(&[2])));
    }

    #[test]
    fn perturbation_is_monotone_repaired() {
        let c = worked_example();
        let e = set(&[1, 2]);
        let rule = Perturbed::new(ExtendedRml::new(Alpha::new(0.5).unwrap()), set(&[2]), 0.05);
        let post = rule.condition(&c, e).unwrap().capacity;
        let base = erml_update(&c, e, 0.5).unwrap();
        assert!((post.get(set(&[2])) - base.get(set(&[2])) - 0.05).abs() < 1e-15);
        assert!(post.validate().is_valid());
        assert_eq!(post.get(set(&[1])), base.get(set(&[1])));
    }
}
