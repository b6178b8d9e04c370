//! Frozen fixture documents. Shared with the `genfixtures` example.

#![allow(dead_code)]

use std::path::PathBuf;

use capupdate::axioms::{FailingInstance, PreferenceOracle};
use capupdate::io::CapacityDoc;
use capupdate::updating::{RuleParams, RuleRegistry};
use capupdate::{Capacity, Result};
use serde::{Deserialize, Serialize};

pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// An update rule with its events written as state labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alt_alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

/// A prior, a rule, and an axiom instance the rule fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversarialFixture {
    pub prior: CapacityDoc,
    pub rule: RuleSpec,
    pub instance: FailingInstance,
}

impl AdversarialFixture {
    pub fn oracle(&self) -> Result<PreferenceOracle> {
        let prior = self.prior.to_capacity()?;
        let params = RuleParams {
            alpha: self.rule.alpha,
            alt_alpha: self.rule.alt_alpha,
            target: self
                .rule
                .target
                .as_deref()
                .map(|t| prior.space().parse_event(t))
                .transpose()?,
            delta: self.rule.delta,
        };
        let rule = RuleRegistry::default().build(&self.rule.name, &params)?;
        Ok(PreferenceOracle::new(prior, rule))
    }
}

/// A prior whose full Bayesian posterior set on `event` is not comonotonic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathologyFixture {
    pub n: usize,
    pub seed: u64,
    pub prior: CapacityDoc,
    pub event: String,
    pub failing_chain: Vec<String>,
}

impl PathologyFixture {
    pub fn prior(&self) -> Result<Capacity> {
        self.prior.to_capacity()
    }
}

pub const PATHOLOGY: &str = "fb_pathology.json";
pub const PER_EVENT: &str = "hybrid_event_ec.json";
pub const PER_ACT: &str = "hybrid_act_dc_cs.json";
pub const PERTURBED: &str = "perturbed_cr_uo.json";

pub fn load<T: for<'de> Deserialize<'de>>(name: &str) -> T {
    let path = dir().join(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
