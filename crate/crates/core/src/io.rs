//! JSON documents for capacities and credal sets.
//!
//! Capacity:
//!
//! ```json
//! {"states": ["s1", "s2"], "form": "explicit",
//!  "values": {"": 0.0, "s1": 0.3, "s2": 0.2, "s1|s2": 1.0}}
//! ```
//!
//! Event keys are `|`-joined state labels and `""` is the empty event. The
//! explicit form lists all `2^n` events; the `moebius` form lists nonzero
//! masses only. Writers emit events in mask order, readers accept any order.
//! An optional `meta` object is carried through untouched.
//!
//! Credal set: `{"states": [...], "vertices": [[...], ...]}`, vertices sorted
//! lexicographically.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::capacity::{from_moebius, Capacity, MoebiusMasses};
use crate::credal::CredalSet;
use crate::error::{Error, Result};
use crate::space::{EventMask, StateSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Explicit,
    Moebius,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityDoc {
    pub states: Vec<String>,
    pub form: Form,
    pub values: IndexMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Value>,
}

impl CapacityDoc {
    pub fn explicit(c: &Capacity) -> Self {
        let space = c.space();
        Self {
            states: space.labels().to_vec(),
            form: Form::Explicit,
            values: space
                .events()
                .map(|e| (space.format_event(e), c.get(e)))
                .collect(),
            meta: None,
        }
    }

    pub fn moebius(m: &MoebiusMasses) -> Self {
        let space = m.space();
        Self {
            states: space.labels().to_vec(),
            form: Form::Moebius,
            values: m.iter().map(|(e, v)| (space.format_event(e), v)).collect(),
            meta: None,
        }
    }

    pub fn with_meta(mut self, meta: Value) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn space(&self) -> Result<StateSpace> {
        StateSpace::new(self.states.iter().cloned())
    }

    fn events(&self, space: &StateSpace) -> Result<Vec<(EventMask, f64)>> {
        let mut seen = vec![false; space.event_count()];
        let mut out = Vec::with_capacity(self.values.len());
        for (key, &v) in &self.values {
            let e = space.parse_event(key)?;
            if std::mem::replace(&mut seen[e.index()], true) {
                return Err(Error::Format(format!(
                    "event `{key}` is listed more than once"
                )));
            }
            out.push((e, v));
        }
        Ok(out)
    }

    pub fn to_capacity(&self) -> Result<Capacity> {
        let space = self.space()?;
        let events = self.events(&space)?;
        match self.form {
            Form::Explicit => {
                let mut values = vec![None; space.event_count()];
                for (e, v) in events {
                    values[e.index()] = Some(v);
                }
                let values = values
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v.ok_or_else(|| {
                            Error::Format(format!(
                                "explicit form is missing event `{}`",
                                space.format_event(EventMask(i as u32))
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Capacity::new(space, values)
            }
            Form::Moebius => Ok(from_moebius(&MoebiusMasses::new(space, events)?)),
        }
    }
}

pub fn parse_capacity_doc(text: &str) -> Result<CapacityDoc> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("capacity JSON: {e}")))
}

pub fn parse_capacity(text: &str) -> Result<Capacity> {
    parse_capacity_doc(text)?.to_capacity()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CredalDoc {
    pub states: Vec<String>,
    pub vertices: Vec<Vec<f64>>,
}

impl CredalDoc {
    pub fn from_set(set: &CredalSet) -> Self {
        Self {
            states: set.space().labels().to_vec(),
            vertices: set.vertices().to_vec(),
        }
    }

    pub fn to_set(&self) -> Result<CredalSet> {
        let space = StateSpace::new(self.states.iter().cloned())?;
        CredalSet::new(space, self.vertices.clone())
    }
}

pub fn parse_credal(text: &str) -> Result<CredalSet> {
    serde_json::from_str::<CredalDoc>(text)
        .map_err(|e| Error::Format(format!("credal set JSON: {e}")))?
        .to_set()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}
