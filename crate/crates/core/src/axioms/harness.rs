//! Seeded sampling of axiom instances.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    check_cr_uo, check_dc_cs, check_ec, solve_partner, xstar_grid, Axiom, AxiomReport,
    ConditionalBinaryAct, PreferenceOracle,
};
use crate::error::{Error, Result};
use crate::generate::SeededRng;
use crate::space::{EventMask, StateSpace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarnessConfig {
    /// Non-vacuous instances wanted per axiom.
    pub samples: usize,
    /// Draws allowed per axiom before giving up on `samples`.
    pub max_attempts: usize,
    /// Failing instances kept per axiom.
    pub keep_failures: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self::with_samples(500)
    }
}

impl HarnessConfig {
    pub fn with_samples(samples: usize) -> Self {
        Self {
            samples,
            max_attempts: samples.saturating_mul(40).max(1000),
            keep_failures: 10,
        }
    }
}

/// A conditional binary act with its events named by state labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActRecord {
    pub event: String,
    pub set: String,
    pub best: f64,
    pub worst: f64,
}

impl ActRecord {
    pub fn new(space: &StateSpace, act: &ConditionalBinaryAct) -> Self {
        Self {
            event: space.format_event(act.event),
            set: space.format_event(act.set),
            best: act.best,
            worst: act.worst,
        }
    }

    pub fn to_act(&self, space: &StateSpace) -> Result<ConditionalBinaryAct> {
        ConditionalBinaryAct::new(
            space.parse_event(&self.event)?,
            space.parse_event(&self.set)?,
            self.best,
            self.worst,
        )
    }
}

/// Everything needed to replay one failed check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailingInstance {
    pub axiom: Axiom,
    /// `[f]` for CR-UO*, `[f, g]` otherwise.
    pub acts: Vec<ActRecord>,
    pub grid: Vec<f64>,
    pub worst_margin: f64,
}

impl FailingInstance {
    pub fn replay(&self, o: &PreferenceOracle) -> Result<AxiomReport> {
        let acts = self
            .acts
            .iter()
            .map(|a| a.to_act(o.space()))
            .collect::<Result<Vec<_>>>()?;
        match (self.axiom, acts.as_slice()) {
            (Axiom::CrUo, [f]) => check_cr_uo(o, f, &self.grid),
            (Axiom::DcCs, [f, g]) => check_dc_cs(o, f, g, &self.grid),
            (Axiom::Ec, [f, g]) => check_ec(o, f, g, &self.grid),
            _ => Err(Error::Format(format!(
                "{} instance with {} acts",
                self.axiom,
                acts.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomSummary {
    pub axiom: Axiom,
    pub attempts: usize,
    /// Draws that produced no checkable instance: a null event, a singular
    /// premise system, or no matched `x*` pair.
    pub skipped: usize,
    pub vacuous: usize,
    pub non_vacuous: usize,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_margin: Option<f64>,
    pub failures: Vec<FailingInstance>,
}

impl AxiomSummary {
    fn new(axiom: Axiom) -> Self {
        Self {
            axiom,
            attempts: 0,
            skipped: 0,
            vacuous: 0,
            non_vacuous: 0,
            passed: 0,
            failed: 0,
            worst_margin: None,
            failures: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub cr_uo: AxiomSummary,
    pub dc_cs: AxiomSummary,
    pub ec: AxiomSummary,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summaries().iter().all(|s| s.all_passed())
    }

    pub fn summaries(&self) -> [&AxiomSummary; 3] {
        [&self.cr_uo, &self.dc_cs, &self.ec]
    }
}

fn random_event(o: &PreferenceOracle, rng: &mut SeededRng) -> Option<EventMask> {
    let count = o.space().event_count() as u32;
    let e = EventMask(rng.random_range(1..count));
    (o.prior().is_nonnull(e) && o.posterior(e).is_ok()).then_some(e)
}

fn random_subset(event: EventMask, rng: &mut SeededRng) -> EventMask {
    EventMask(rng.random::<u32>() & event.bits())
}

fn random_act(event: EventMask, rng: &mut SeededRng) -> ConditionalBinaryAct {
    let worst = rng.random::<f64>();
    let best = worst + rng.random::<f64>();
    ConditionalBinaryAct::new(event, random_subset(event, rng), best, worst)
        .expect("subset of event with best ≥ worst")
}

/// A checked instance with the acts and grid that produced it.
type Draw = (AxiomReport, Vec<ConditionalBinaryAct>, Vec<f64>);

/// One draw: `None` when no instance could be formed.
fn draw(o: &PreferenceOracle, axiom: Axiom, rng: &mut SeededRng) -> Result<Option<Draw>> {
    let Some(e) = random_event(o, rng) else {
        return Ok(None);
    };
    match axiom {
        Axiom::CrUo => {
            let f = random_act(e, rng);
            let grid = xstar_grid(f.max_on_event());
            Ok(Some((check_cr_uo(o, &f, &grid)?, vec![f], grid)))
        }
        Axiom::DcCs => {
            let g = random_act(e, rng);
            let set = random_subset(e, rng);
            let Some(f) = solve_partner(o, &g, e, set)? else {
                return Ok(None);
            };
            let grid = xstar_grid(f.max_on_event().max(g.max_on_event()));
            Ok(Some((check_dc_cs(o, &f, &g, &grid)?, vec![f, g], grid)))
        }
        Axiom::Ec => {
            let Some(e1) = random_event(o, rng) else {
                return Ok(None);
            };
            let g = random_act(e, rng);
            let set = random_subset(e1, rng);
            let Some(f) = solve_partner(o, &g, e1, set)? else {
                return Ok(None);
            };
            let grid = xstar_grid(f.max_on_event());
            match check_ec(o, &f, &g, &grid) {
                Ok(r) => Ok(Some((r, vec![f, g], grid))),
                Err(Error::NoMatchingPair) => Ok(None),
                Err(e) => Err(e),
            }
        }
    }
}

/// Smallest state space the harness samples on.
pub const HARNESS_MIN_STATES: usize = 3;

fn require_states(o: &PreferenceOracle) -> Result<()> {
    let got = o.space().len();
    if got < HARNESS_MIN_STATES {
        return Err(Error::TooFewStates { got, min: HARNESS_MIN_STATES });
    }
    Ok(())
}

/// Samples instances of one axiom until `config.samples` non-vacuous checks
/// have run or the attempt budget is spent.
pub fn run_axiom(
    o: &PreferenceOracle,
    axiom: Axiom,
    config: &HarnessConfig,
    rng: &mut SeededRng,
) -> Result<AxiomSummary> {
    require_states(o)?;
    let mut s = AxiomSummary::new(axiom);
    while s.non_vacuous < config.samples && s.attempts < config.max_attempts {
        s.attempts += 1;
        let Some((report, acts, grid)) = draw(o, axiom, rng)? else {
            s.skipped += 1;
            continue;
        };
        if report.vacuous {
            s.vacuous += 1;
            continue;
        }
        s.non_vacuous += 1;
        s.worst_margin = Some(s.worst_margin.map_or(report.worst_margin, |w| w.min(report.worst_margin)));
        if report.passed {
            s.passed += 1;
        } else {
            s.failed += 1;
            if s.failures.len() < config.keep_failures {
                s.failures.push(FailingInstance {
                    axiom,
                    acts: acts.iter().map(|a| ActRecord::new(o.space(), a)).collect(),
                    grid,
                    worst_margin: report.worst_margin,
                });
            }
        }
    }
    Ok(s)
}

/// Runs all three axioms in a fixed order from one generator.
pub fn run_suite(o: &PreferenceOracle, config: &HarnessConfig, rng: &mut SeededRng) -> Result<SuiteReport> {
    Ok(SuiteReport {
        cr_uo: run_axiom(o, Axiom::CrUo, config, rng)?,
        dc_cs: run_axiom(o, Axiom::DcCs, config, rng)?,
        ec: run_axiom(o, Axiom::Ec, config, rng)?,
    })
}

/// The first failing instance of `axiom` within `attempts` draws.
pub fn find_violation(
    o: &PreferenceOracle,
    axiom: Axiom,
    attempts: usize,
    rng: &mut SeededRng,
) -> Result<Option<FailingInstance>> {
    require_states(o)?;
    let config = HarnessConfig {
        samples: usize::MAX,
        max_attempts: attempts,
        keep_failures: 1,
    };
    let mut s = AxiomSummary::new(axiom);
    while s.attempts < config.max_attempts {
        s.attempts += 1;
        if let Some((report, acts, grid)) = draw(o, axiom, rng)? {
            if !report.passed {
                return Ok(Some(FailingInstance {
                    axiom,
                    acts: acts.iter().map(|a| ActRecord::new(o.space(), a)).collect(),
                    grid,
                    worst_margin: report.worst_margin,
                }));
            }
        }
    }
    Ok(None)
}
