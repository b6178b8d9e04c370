//! Convex capacities (non-additive probabilities) on finite state spaces and
//! the rules that update them on observed events.
//!
//! The crate covers:
//!
//! * [`capacity`]: dense set functions, validation, Möbius transforms,
//!   supermodularity and Choquet integration;
//! * [`credal`]: cores of convex capacities as vertex lists, likelihood
//!   maximizers, Minkowski mixtures and lower conditional envelopes;
//! * [`updating`]: Dempster-Shafer, Fagin-Halpern and extended relative
//!   maximum likelihood conditioning behind a common [`updating::UpdateRule`]
//!   trait with a name-keyed registry, their prior-by-prior counterparts, and
//!   recovery of the mixing weight from a prior/posterior pair;
//! * [`comonotonic`]: deciding whether a credal set is the core of a convex
//!   capacity via common maximizers along chains of events;
//! * [`axioms`]: numerical checks of the behavioral axioms that characterize
//!   the extended rule, with a seeded sampling harness;
//! * [`generate`]: seeded generators of convex test capacities;
//! * [`io`]: the JSON formats for capacities and credal sets.
//!
//! All numeric comparisons use the tolerance returned by [`tolerance`].

use std::sync::OnceLock;

pub mod axioms;
pub mod capacity;
pub mod comonotonic;
pub mod credal;
pub mod error;
pub mod generate;
pub mod io;
pub mod space;
pub mod updating;

pub use capacity::{Act, Capacity, MoebiusMasses, ValidationReport, Violation};
pub use credal::{CredalSet, ProbabilityVector};
pub use error::{Error, Result};
pub use space::{EventMask, StateSpace};
pub use updating::{Alpha, UpdateRule};

/// Default tolerance for validity and equality checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE: OnceLock<f64> = OnceLock::new();

/// The tolerance used throughout the crate; [`DEFAULT_TOLERANCE`] unless
/// overridden with [`set_tolerance`] before first use.
pub fn tolerance() -> f64 {
    *TOLERANCE.get_or_init(|| DEFAULT_TOLERANCE)
}

/// Overrides the tolerance. Only the first call before any use takes effect;
/// returns whether it did.
pub fn set_tolerance(tol: f64) -> bool {
    tol.is_finite() && tol >= 0.0 && TOLERANCE.set(tol).is_ok()
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
