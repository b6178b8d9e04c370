//! Executable versions of the three updating axioms over conditional binary
//! acts.
//!
//! A [`PreferenceOracle`] ranks unconditional acts by the Choquet integral
//! against the prior and conditional acts by the Choquet integral against
//! the rule's posterior. Utilities are identified with consequences.
//!
//! Notation: for an act `f` and an event `E`, `f_E x` pays `f` on `E` and the
//! constant `x` off `E`; `x_E y` pays `x` on `E` and `y` off `E`.
//!
//! * **CR-UO\*** with `f ∼_E x`: `f_E x ≾ x`, and `f_E x* ≿ x_E x*` for every
//!   `x*` at least the best outcome of `f` on `E`.
//! * **DC-CS\*** with `g ∼_E x`: if `f_E x ∼ g_E x` and `f_E x* ∼ g_E x*` for
//!   all large `x*`, then `f ∼_E g`.
//! * **EC\*** with `g ∼_{E₂} x`: if `f_{E₁} x ∼ g_{E₂} x` and
//!   `f_{E₁} x₁* ∼ g_{E₂} x₂*` whenever `x_{E₁} x₁* ∼ x_{E₂} x₂*`, then
//!   `f ∼_{E₁} x`.
//!
//! The two conditional axioms have measure-zero premises, so instances are
//! built by solving the premises for the partner act (see
//! [`solve_partner`]) rather than by rejection sampling.

mod harness;

pub use harness::{
    find_violation, run_axiom, run_suite, ActRecord, AxiomSummary, FailingInstance, HarnessConfig,
    SuiteReport, HARNESS_MIN_STATES,
};

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::capacity::{choquet_integral, Act, Capacity};
use crate::error::{Error, Result};
use crate::space::{EventMask, StateSpace};
use crate::updating::{AlphaEstimate, UpdateRule};

/// Tolerance for axiom margins and premises.
pub const AXIOM_TOLERANCE: f64 = 1e-7;

/// Largest utility magnitude accepted for a constructed partner act.
pub const PARTNER_BOUND: f64 = 1e3;

/// Smallest determinant accepted when solving for a partner act.
pub const PARTNER_MIN_DET: f64 = 1e-6;

/// The act paying `best` on `set`, `worst` on `event ∖ set`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalBinaryAct {
    pub event: EventMask,
    pub set: EventMask,
    pub best: f64,
    pub worst: f64,
}

impl ConditionalBinaryAct {
    pub fn new(event: EventMask, set: EventMask, best: f64, worst: f64) -> Result<Self> {
        if !set.is_subset_of(event) {
            return Err(Error::InvalidAct(format!("{set} is not a subset of {event}")));
        }
        if !best.is_finite() || !worst.is_finite() {
            return Err(Error::InvalidAct("utilities must be finite".into()));
        }
        if best < worst {
            return Err(Error::InvalidAct(format!("best {best} below worst {worst}")));
        }
        Ok(Self { event, set, best, worst })
    }

    /// The full act, paying `outside` off the conditioning event.
    pub fn materialize(&self, space: &StateSpace, outside: f64) -> Act {
        let utils = (0..space.len())
            .map(|s| {
                if self.set.contains(s) {
                    self.best
                } else if self.event.contains(s) {
                    self.worst
                } else {
                    outside
                }
            })
            .collect();
        Act::new(space.clone(), utils).expect("utilities are finite")
    }

    /// Best outcome on the conditioning event.
    pub fn max_on_event(&self) -> f64 {
        if self.set.is_empty() {
            self.worst
        } else {
            self.best
        }
    }
}

/// `x` on `event`, `y` elsewhere.
fn bet(space: &StateSpace, event: EventMask, x: f64, y: f64) -> Act {
    ConditionalBinaryAct {
        event,
        set: event,
        best: x,
        worst: x,
    }
    .materialize(space, y)
}

/// Preferences induced by a prior and an update rule. Posteriors are
/// computed once per event.
pub struct PreferenceOracle {
    prior: Capacity,
    rule: Box<dyn UpdateRule>,
    posteriors: Vec<OnceLock<Result<Capacity>>>,
}

impl fmt::Debug for PreferenceOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PreferenceOracle")
            .field("prior", &self.prior)
            .field("rule", &self.rule)
            .finish()
    }
}

impl PreferenceOracle {
    pub fn new(prior: Capacity, rule: Box<dyn UpdateRule>) -> Self {
        let posteriors = (0..prior.space().event_count()).map(|_| OnceLock::new()).collect();
        Self {
            prior,
            rule,
            posteriors,
        }
    }

    pub fn prior(&self) -> &Capacity {
        &self.prior
    }

    pub fn space(&self) -> &StateSpace {
        self.prior.space()
    }

    pub fn rule(&self) -> &dyn UpdateRule {
        self.rule.as_ref()
    }

    pub fn posterior(&self, event: EventMask) -> Result<&Capacity> {
        self.space().check(event)?;
        match self.posteriors[event.index()]
            .get_or_init(|| self.rule.condition(&self.prior, event).map(|p| p.capacity))
        {
            Ok(c) => Ok(c),
            Err(e) => Err(e.clone()),
        }
    }

    /// Unconditional evaluation.
    pub fn value(&self, act: &Act) -> Result<f64> {
        choquet_integral(&self.prior, act)
    }

    pub fn conditional_value(&self, event: EventMask, act: &Act) -> Result<f64> {
        choquet_integral(self.posterior(event)?, act)
    }
}

/// Certainty equivalent of `f` under the preference conditional on its
/// event: `ν_E(A)·b + (1 − ν_E(A))·w`.
pub fn conditional_ce(o: &PreferenceOracle, f: &ConditionalBinaryAct) -> Result<f64> {
    o.conditional_value(f.event, &f.materialize(o.space(), f.worst))
}

/// `{m, m + ½, m + 1}`.
pub fn xstar_grid(max: f64) -> Vec<f64> {
    vec![max, max + 0.5, max + 1.0]
}

fn check_grid(grid: &[f64], max: f64) -> Result<()> {
    match grid.iter().find(|&&x| x < max) {
        Some(&xstar) => Err(Error::GridViolation { xstar, max }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    #[serde(rename = "CR-UO*")]
    CrUo,
    #[serde(rename = "DC-CS*")]
    DcCs,
    #[serde(rename = "EC*")]
    Ec,
}

impl Axiom {
    pub const ALL: [Axiom; 3] = [Axiom::CrUo, Axiom::DcCs, Axiom::Ec];
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::CrUo => "CR-UO*",
            Axiom::DcCs => "DC-CS*",
            Axiom::Ec => "EC*",
        })
    }
}

/// A signed slack; the axiom holds at this point when it is `≥ −τ_ax`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Margin {
    pub name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xstar: Option<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    /// The premises failed, so the axiom holds without its conclusion being
    /// tested.
    pub vacuous: bool,
    pub passed: bool,
    /// Largest premise residual, for the conditional axioms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub premise_gap: Option<f64>,
    pub margins: Vec<Margin>,
    pub worst_margin: f64,
}

impl AxiomReport {
    fn new(axiom: Axiom, premise_gap: Option<f64>, margins: Vec<Margin>) -> Self {
        let vacuous = premise_gap.is_some_and(|g| g > AXIOM_TOLERANCE);
        let worst_margin = margins.iter().map(|m| m.value).fold(f64::INFINITY, f64::min);
        let worst_margin = if worst_margin.is_finite() { worst_margin } else { 0.0 };
        Self {
            axiom,
            vacuous,
            passed: vacuous || worst_margin >= -AXIOM_TOLERANCE,
            premise_gap,
            margins,
            worst_margin,
        }
    }
}

pub fn check_cr_uo(o: &PreferenceOracle, f: &ConditionalBinaryAct, grid: &[f64]) -> Result<AxiomReport> {
    check_grid(grid, f.max_on_event())?;
    let space = o.space();
    let x = conditional_ce(o, f)?;
    let mut margins = vec![Margin {
        name: "undershoot",
        xstar: None,
        value: x - o.value(&f.materialize(space, x))?,
    }];
    for &xs in grid {
        margins.push(Margin {
            name: "overshoot",
            xstar: Some(xs),
            value: o.value(&f.materialize(space, xs))? - o.value(&bet(space, f.event, x, xs))?,
        });
    }
    Ok(AxiomReport::new(Axiom::CrUo, None, margins))
}

/// Solves `α·U(f_E x*) + (1−α)·U(f_E x) = α·U(x_E x*) + (1−α)·x` for `α`
/// at each grid point and checks that the solutions agree.
///
/// Indeterminate when both brackets vanish, i.e. `f_E x ∼ x` and
/// `f_E x* ∼ x_E x*`.
pub fn mixing_alpha(o: &PreferenceOracle, f: &ConditionalBinaryAct, grid: &[f64]) -> Result<AlphaEstimate> {
    if grid.len() < 2 {
        return Err(Error::Format("mixing weight needs at least two grid points".into()));
    }
    check_grid(grid, f.max_on_event())?;
    let space = o.space();
    let x = conditional_ce(o, f)?;
    let under = x - o.value(&f.materialize(space, x))?;
    let mut solved = Vec::with_capacity(grid.len());
    for &xs in grid {
        let over = o.value(&f.materialize(space, xs))? - o.value(&bet(space, f.event, x, xs))?;
        if under.abs() <= AXIOM_TOLERANCE && over.abs() <= AXIOM_TOLERANCE {
            continue;
        }
        let total = under + over;
        if total.abs() <= AXIOM_TOLERANCE {
            return Err(Error::NotRationalizable(format!(
                "brackets {under} and {over} cancel, so no weight balances them"
            )));
        }
        solved.push(under / total);
    }
    let Some(&first) = solved.first() else {
        return Ok(AlphaEstimate::Indeterminate);
    };
    let spread = solved.iter().map(|a| (a - first).abs()).fold(0.0, f64::max);
    if spread > AXIOM_TOLERANCE {
        return Err(Error::XStarDependence(spread));
    }
    Ok(AlphaEstimate::Identified(first))
}

pub fn check_dc_cs(
    o: &PreferenceOracle,
    f: &ConditionalBinaryAct,
    g: &ConditionalBinaryAct,
    grid: &[f64],
) -> Result<AxiomReport> {
    if f.event != g.event {
        return Err(Error::EventMismatch);
    }
    check_grid(grid, f.max_on_event().max(g.max_on_event()))?;
    let space = o.space();
    let x = conditional_ce(o, g)?;
    let mut gap = (o.value(&f.materialize(space, x))? - o.value(&g.materialize(space, x))?).abs();
    for &xs in grid {
        let r = o.value(&f.materialize(space, xs))? - o.value(&g.materialize(space, xs))?;
        gap = gap.max(r.abs());
    }
    let margins = if gap > AXIOM_TOLERANCE {
        Vec::new()
    } else {
        vec![Margin {
            name: "conclusion",
            xstar: None,
            value: -(conditional_ce(o, f)? - x).abs(),
        }]
    };
    Ok(AxiomReport::new(Axiom::DcCs, Some(gap), margins))
}

/// Solves `U(x_E z) = target` for `z ≥ floor`.
fn match_bet(prior: &Capacity, event: EventMask, x: f64, target: f64, floor: f64) -> Option<f64> {
    let outside = prior.get(prior.complement(event));
    let z = if target >= x {
        if outside > 0.0 {
            x + (target - x) / outside
        } else if target - x <= AXIOM_TOLERANCE {
            floor.max(x)
        } else {
            return None;
        }
    } else {
        let inside = prior.get(event);
        if inside <= 0.0 {
            return None;
        }
        x - (x - target) / inside
    };
    (z >= floor).then_some(z)
}

/// Checks the event-consistency axiom for `f` on its event `E₁` against `g`
/// on `E₂`. For each `x₁*` in `grid`, the partner `x₂*` solves
/// `x_{E₁} x₁* ∼ x_{E₂} x₂*`; grid points with no partner above the best
/// outcome of `g` are dropped.
pub fn check_ec(
    o: &PreferenceOracle,
    f: &ConditionalBinaryAct,
    g: &ConditionalBinaryAct,
    grid: &[f64],
) -> Result<AxiomReport> {
    check_grid(grid, f.max_on_event())?;
    let space = o.space();
    let x = conditional_ce(o, g)?;
    let mut pairs = Vec::new();
    for &x1 in grid {
        let target = o.value(&bet(space, f.event, x, x1))?;
        if let Some(x2) = match_bet(o.prior(), g.event, x, target, g.max_on_event()) {
            pairs.push((x1, x2));
        }
    }
    if pairs.is_empty() {
        return Err(Error::NoMatchingPair);
    }
    let mut gap = (o.value(&f.materialize(space, x))? - o.value(&g.materialize(space, x))?).abs();
    for &(x1, x2) in &pairs {
        let side = o.value(&bet(space, f.event, x, x1))? - o.value(&bet(space, g.event, x, x2))?;
        let r = o.value(&f.materialize(space, x1))? - o.value(&g.materialize(space, x2))?;
        gap = gap.max(r.abs()).max(side.abs());
    }
    let margins = if gap > AXIOM_TOLERANCE {
        Vec::new()
    } else {
        vec![Margin {
            name: "conclusion",
            xstar: None,
            value: -(conditional_ce(o, f)? - x).abs(),
        }]
    };
    Ok(AxiomReport::new(Axiom::Ec, Some(gap), margins))
}

/// Builds `f = b_{A} w` on `event` so that the premises of DC-CS\* (when
/// `event` is `g`'s event) or EC\* (otherwise) hold against `g`.
///
/// Both premises are linear in `(b, w)` once `x = CE(g)` is fixed:
///
/// ```text
/// b·ν(A) + w·(1 − U) + x·(U − ν(A))        = U(g_{E₂} x)
/// b·(U − ν(E₁ᶜ)) + w·(1 − U)               = R − x·(ν(E₁ᶜ) − ν(E₂ᶜ))
/// ```
///
/// with `U = ν(A ∪ E₁ᶜ)` and `R = U(g_{E₂} z) − z·ν(E₂ᶜ)` for any `z` above
/// the best outcome of `g`. Returns `None` when the system is nearly
/// singular, when the solution violates `b ≥ x ≥ w`, or when it exceeds
/// [`PARTNER_BOUND`].
pub fn solve_partner(
    o: &PreferenceOracle,
    g: &ConditionalBinaryAct,
    event: EventMask,
    set: EventMask,
) -> Result<Option<ConditionalBinaryAct>> {
    if !set.is_subset_of(event) {
        return Err(Error::InvalidAct(format!("{set} is not a subset of {event}")));
    }
    let prior = o.prior();
    let space = o.space();
    let x = conditional_ce(o, g)?;
    let z = g.max_on_event();
    let out1 = prior.get(prior.complement(event));
    let out2 = prior.get(prior.complement(g.event));
    let reach = o.value(&g.materialize(space, z))? - z * out2;

    let c = prior.get(set);
    let u = prior.get(set | prior.complement(event));
    let k = 1.0 - u;
    let a = u - out1;
    let det = k * (c - a);
    if det.abs() <= PARTNER_MIN_DET {
        return Ok(None);
    }
    let r1 = o.value(&g.materialize(space, x))? - x * (u - c);
    let r2 = reach - x * (out1 - out2);
    let best = (r1 - r2) / (c - a);
    let worst = (r1 - c * best) / k;
    let ok = best >= x && x >= worst && best.abs().max(worst.abs()) <= PARTNER_BOUND;
    ok.then(|| ConditionalBinaryAct::new(event, set, best, worst)).transpose()
}
