//! Conditioning rules for convex capacities.
//!
//! Every rule implements [`UpdateRule`] and can be looked up by name in a
//! [`RuleRegistry`]. The built-in rules are
//!
//! | name            | rule                                                  |
//! |-----------------|-------------------------------------------------------|
//! | `ds`            | Dempster-Shafer                                       |
//! | `fh`            | Fagin-Halpern                                         |
//! | `erml`          | extended relative maximum likelihood with weight `α`  |
//! | `hybrid-event`  | `erml` whose `α` depends on the parity of `|E|`       |
//! | `hybrid-act`    | `erml` whose `α` depends on the parity of `|A ∩ E|`   |
//! | `perturbed`     | `erml` shifted upward at one event, then re-monotonized |
//!
//! The last three do not belong to the extended family; they exist so the
//! axiom checks have something to reject.

mod credal;
mod infer;
mod rules;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::space::EventMask;

pub use credal::{
    bayes_posterior, credal_fb_update, credal_ml_update, credal_rml_update, CredalPosterior,
};
pub use infer::{infer_alpha, AlphaEstimate, AlphaInference, ALPHA_SPREAD_TOLERANCE};
pub use rules::{
    ds_update, erml_update, fh_update, nu_prime, DempsterShafer, ExtendedRml, FaginHalpern,
    PerActAlpha, PerEventAlpha, Perturbed,
};

/// Mixing weight between Dempster-Shafer (`1`) and Fagin-Halpern (`0`).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Alpha(f64);

impl Alpha {
    pub const ZERO: Alpha = Alpha(0.0);
    pub const ONE: Alpha = Alpha(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&alpha) {
            Ok(Alpha(alpha))
        } else {
            Err(Error::AlphaOutOfRange(alpha))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A conditional capacity together with the events where the rule's ratio
/// was `0/0` and the value was set to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Posterior {
    pub capacity: Capacity,
    pub event: EventMask,
    pub degenerate: Vec<EventMask>,
}

pub trait UpdateRule: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;

    /// The mixing weight, for rules that have a single one.
    fn alpha(&self) -> Option<Alpha> {
        None
    }

    /// Conditions `prior` on a nonnull `event`.
    fn condition(&self, prior: &Capacity, event: EventMask) -> Result<Posterior>;
}

/// Parameters a registered rule may consume.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RuleParams {
    pub alpha: Option<f64>,
    /// Second weight for the hybrid rules.
    pub alt_alpha: Option<f64>,
    /// Event shifted by the perturbed rule.
    pub target: Option<EventMask>,
    /// Size of the perturbed rule's shift.
    pub delta: Option<f64>,
}

impl RuleParams {
    pub fn with_alpha(alpha: f64) -> Self {
        Self {
            alpha: Some(alpha),
            ..Self::default()
        }
    }

    fn alpha(&self) -> Result<Alpha> {
        Alpha::new(self.alpha.ok_or(Error::MissingParameter("alpha"))?)
    }

    fn alt_alpha(&self) -> Result<Alpha> {
        Alpha::new(self.alt_alpha.ok_or(Error::MissingParameter("alt_alpha"))?)
    }
}

pub type RuleFactory = fn(&RuleParams) -> Result<Box<dyn UpdateRule>>;

struct RuleEntry {
    description: &'static str,
    factory: RuleFactory,
}

/// Name-keyed constructors for update rules.
pub struct RuleRegistry {
    entries: BTreeMap<&'static str, RuleEntry>,
}

impl RuleRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, description: &'static str, factory: RuleFactory) {
        self.entries.insert(
            name,
            RuleEntry {
                description,
                factory,
            },
        );
    }

    pub fn build(&self, name: &str, params: &RuleParams) -> Result<Box<dyn UpdateRule>> {
        let entry = self.entries.get(name).ok_or_else(|| Error::Unknown {
            kind: "rule",
            name: name.to_string(),
            known: self.names().collect::<Vec<_>>().join(", "),
        })?;
        (entry.factory)(params)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn describe(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.entries.iter().map(|(k, e)| (*k, e.description))
    }
}

impl Default for RuleRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register("ds", "Dempster-Shafer", |_| Ok(Box::new(DempsterShafer)));
        r.register("fh", "Fagin-Halpern", |_| Ok(Box::new(FaginHalpern)));
        r.register(
            "erml",
            "extended relative maximum likelihood (needs alpha)",
            |p| Ok(Box::new(ExtendedRml::new(p.alpha()?))),
        );
        r.register(
            "hybrid-event",
            "alpha on events of even size, alt_alpha on odd",
            |p| Ok(Box::new(PerEventAlpha::new(p.alpha()?, p.alt_alpha()?))),
        );
        r.register(
            "hybrid-act",
            "alpha where |A ∩ E| is even, alt_alpha where odd",
            |p| Ok(Box::new(PerActAlpha::new(p.alpha()?, p.alt_alpha()?))),
        );
        r.register(
            "perturbed",
            "erml shifted by delta at target, re-monotonized",
            |p| {
                let target = p.target.ok_or(Error::MissingParameter("target"))?;
                Ok(Box::new(Perturbed::new(
                    ExtendedRml::new(p.alpha()?),
                    target,
                    p.delta.unwrap_or(0.05),
                )))
            },
        );
        r
    }
}
