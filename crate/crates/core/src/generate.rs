//! Seeded generators of convex capacities.
//!
//! Generators implement [`CapacityGenerator`] and are looked up by name in a
//! [`GeneratorRegistry`]:
//!
//! * `belief-function`: random focal sets with Dirichlet masses. Totally
//!   monotone, hence convex. Draws between 1 and `n + 2` focal sets unless a
//!   count is given.
//! * `epsilon-contamination`: `ν(A) = (1−ε)·p(A)` for `A ≠ Ω`.
//! * `additive`: a random probability vector.
//!
//! The same name, size and seed always give the same capacity.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::capacity::{from_moebius, Capacity, MoebiusMasses};
use crate::error::{Error, Result};
use crate::space::{EventMask, StateSpace};

pub const GENERATE_MAX_STATES: usize = 8;

pub type SeededRng = ChaCha8Rng;

pub trait CapacityGenerator: Send + Sync {
    fn name(&self) -> &'static str;
    fn generate(&self, space: &StateSpace, rng: &mut SeededRng) -> Result<Capacity>;
}

/// Uniform draw from the probability simplex.
pub fn random_probability(n: usize, rng: &mut SeededRng) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BeliefFunction {
    pub focal_sets: Option<usize>,
}

impl CapacityGenerator for BeliefFunction {
    fn name(&self) -> &'static str {
        "belief-function"
    }

    fn generate(&self, space: &StateSpace, rng: &mut SeededRng) -> Result<Capacity> {
        let n = space.len();
        let focal_count = match self.focal_sets {
            Some(0) => return Err(Error::Format("at least one focal set is needed".into())),
            Some(k) => k,
            None => rng.random_range(1..=n + 2),
        };
        let focal: Vec<EventMask> = (0..focal_count)
            .map(|_| EventMask(rng.random_range(1..space.event_count() as u32)))
            .collect();
        let masses = random_probability(focal_count, rng);
        let m = MoebiusMasses::new(space.clone(), focal.into_iter().zip(masses))?;
        Ok(from_moebius(&m))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EpsilonContamination {
    /// Fixed contamination level; drawn from `[0.05, 0.5)` when absent.
    pub epsilon: Option<f64>,
}

impl CapacityGenerator for EpsilonContamination {
    fn name(&self) -> &'static str {
        "epsilon-contamination"
    }

    fn generate(&self, space: &StateSpace, rng: &mut SeededRng) -> Result<Capacity> {
        let eps = match self.epsilon {
            Some(e) if (0.0..=1.0).contains(&e) => e,
            Some(e) => return Err(Error::Format(format!("epsilon {e} outside [0, 1]"))),
            None => rng.random_range(0.05..0.5),
        };
        let p = random_probability(space.len(), rng);
        let full = space.full();
        Capacity::from_fn(space.clone(), |a| {
            if a == full {
                1.0
            } else {
                (1.0 - eps) * a.states().map(|i| p[i]).sum::<f64>()
            }
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Additive;

impl CapacityGenerator for Additive {
    fn name(&self) -> &'static str {
        "additive"
    }

    fn generate(&self, space: &StateSpace, rng: &mut SeededRng) -> Result<Capacity> {
        let p = random_probability(space.len(), rng);
        Capacity::additive(space.clone(), &p)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GeneratorParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub focal_sets: Option<usize>,
}

pub type GeneratorFactory = fn(&GeneratorParams) -> Box<dyn CapacityGenerator>;

pub struct GeneratorRegistry {
    entries: BTreeMap<&'static str, GeneratorFactory>,
}

impl GeneratorRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, factory: GeneratorFactory) {
        self.entries.insert(name, factory);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn build(&self, name: &str, params: &GeneratorParams) -> Result<Box<dyn CapacityGenerator>> {
        let factory = self.entries.get(name).ok_or_else(|| Error::Unknown {
            kind: "generator",
            name: name.to_string(),
            known: self.names().collect::<Vec<_>>().join(", "),
        })?;
        Ok(factory(params))
    }
}

impl Default for GeneratorRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register("belief-function", |p| {
            Box::new(BeliefFunction {
                focal_sets: p.focal_sets,
            })
        });
        r.register("epsilon-contamination", |p| {
            Box::new(EpsilonContamination { epsilon: p.epsilon })
        });
        r.register("additive", |_| Box::new(Additive));
        r
    }
}

/// Replay information stored alongside generated capacities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorMeta {
    pub generator: String,
    pub n: usize,
    pub seed: u64,
    pub params: GeneratorParams,
}

/// Generates a capacity on `s1..sn` from a named generator and a seed.
pub fn generate(
    registry: &GeneratorRegistry,
    kind: &str,
    n: usize,
    seed: u64,
    params: &GeneratorParams,
) -> Result<(Capacity, GeneratorMeta)> {
    if n == 0 || n > GENERATE_MAX_STATES {
        return Err(Error::TooLarge {
            what: "generation",
            got: n,
            max: GENERATE_MAX_STATES,
        });
    }
    let generator = registry.build(kind, params)?;
    let space = StateSpace::numbered(n)?;
    let mut rng = SeededRng::seed_from_u64(seed);
    let capacity = generator.generate(&space, &mut rng)?;
    Ok((
        capacity,
        GeneratorMeta {
            generator: generator.name().to_string(),
            n,
            seed,
            params: params.clone(),
        },
    ))
}

/// Belief function on `n` states from `seed`, the corpus generator used by
/// the property checks.
pub fn belief_function(n: usize, seed: u64) -> Capacity {
    belief_function_with(n, seed, None)
}

/// Belief function with `2^n − 1` focal draws, so that most events carry
/// mass straddling any split.
pub fn dense_belief_function(n: usize, seed: u64) -> Capacity {
    belief_function_with(n, seed, Some((1 << n) - 1))
}

fn belief_function_with(n: usize, seed: u64, focal_sets: Option<usize>) -> Capacity {
    let params = GeneratorParams {
        focal_sets,
        ..GeneratorParams::default()
    };
    generate(&GeneratorRegistry::default(), "belief-function", n, seed, &params)
        .expect("belief-function generation succeeds for 1 ≤ n ≤ 8")
        .0
}
