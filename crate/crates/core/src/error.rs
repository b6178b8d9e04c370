use thiserror::Error;

use crate::space::EventMask;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a state space needs between 1 and {max} states, got {got}")]
    StateCount { got: usize, max: usize },

    #[error("state labels must be non-empty and must not contain `|`: `{0}`")]
    BadLabel(String),

    #[error("duplicate state label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown state label `{0}`")]
    UnknownLabel(String),

    #[error("event {mask} has states outside a {n}-state space")]
    MaskOutOfRange { mask: EventMask, n: usize },

    #[error("expected {expected} values, got {got}")]
    ValueCount { expected: usize, got: usize },

    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("Möbius masses sum to {0}, not 1")]
    MassSum(f64),

    #[error("the empty event carries Möbius mass {0}")]
    EmptySetMass(f64),

    #[error("operands live on different state spaces")]
    SpaceMismatch,

    #[error("capacity is not convex: supermodularity fails at ({0}, {1})")]
    NotConvex(EventMask, EventMask),

    #[error("event {0} is null under the prior")]
    NullEvent(EventMask),

    #[error("alpha {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),

    #[error("vertex {index} assigns the conditioning event probability {mass}")]
    ZeroConditioningMass { index: usize, mass: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("a credal set needs at least one vertex")]
    EmptyCredalSet,

    #[error("posterior is not rationalizable by any alpha: {0}")]
    NotRationalizable(String),

    #[error("invalid act: {0}")]
    InvalidAct(String),

    #[error("x* = {xstar} lies below the act's best outcome {max} on the event")]
    GridViolation { xstar: f64, max: f64 },

    #[error("no x* pair satisfies the side condition on the given grid")]
    NoMatchingPair,

    #[error("the axiom harness needs at least {min} states, got {got}")]
    TooFewStates { got: usize, min: usize },

    #[error("mixing weight depends on x* (spread {0})")]
    XStarDependence(f64),

    #[error("acts are conditioned on different events")]
    EventMismatch,

    #[error("unknown {kind} `{name}`; expected one of: {known}")]
    Unknown {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),

    #[error("{what} is limited to {max} states, got {got}")]
    TooLarge {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("{0}")]
    Format(String),
}
