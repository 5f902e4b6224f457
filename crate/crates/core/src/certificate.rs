//! Certificates: JSON records of verified results that a separate pass can
//! re-check without searching.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lie::Alphabet;

pub const TOOL_VERSION: &str = concat!("dglforge ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    DSquared,
    Boundary,
    Decomposition,
    Substitution,
    Cat,
    Prop51,
    Claim,
    Minimalize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: Kind,
    pub k: Option<u32>,
    pub generator_order: Vec<String>,
    pub status: Status,
    pub witnesses: BTreeMap<String, Value>,
    pub dimensions: BTreeMap<String, u64>,
    pub timings: Option<BTreeMap<String, f64>>,
    pub tool_version: String,
}

impl Certificate {
    pub fn new(kind: Kind, k: Option<u32>, alphabet: &Alphabet) -> Self {
        Self {
            kind,
            k,
            generator_order: alphabet.names(),
            status: Status::Fail,
            witnesses: BTreeMap::new(),
            dimensions: BTreeMap::new(),
            timings: None,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn witness(&mut self, key: &str, value: Value) {
        self.witnesses.insert(key.to_string(), value);
    }

    pub fn dimension(&mut self, key: &str, value: u64) {
        self.dimensions.insert(key.to_string(), value);
    }

    /// Records a stage duration; a no-op unless timings were enabled.
    pub fn timing(&mut self, stage: &str, d: Duration) {
        if let Some(t) = &mut self.timings {
            t.insert(stage.to_string(), d.as_secs_f64());
        }
    }

    pub fn enable_timings(&mut self) {
        self.timings.get_or_insert_with(BTreeMap::new);
    }

    /// Digest of everything except timings and the digest itself.
    pub fn inputs_digest(&self) -> String {
        let mut c = self.clone();
        c.timings = None;
        c.witnesses.remove("inputs_digest");
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(&(c.kind, c.k, &c.generator_order, &c.witnesses, &c.dimensions)).unwrap());
        hex::encode(h.finalize())
    }

    /// Stores the digest among the witnesses.
    pub fn seal(&mut self) {
        let d = self.inputs_digest();
        self.witness("inputs_digest", Value::String(d));
    }

    pub fn is_sealed(&self) -> bool {
        self.witnesses.get("inputs_digest").and_then(Value::as_str) == Some(self.inputs_digest().as_str())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialisable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            col: e.column(),
            msg: e.to_string(),
        })
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass)
    }

    pub(crate) fn str_witness(&self, key: &str) -> Result<&str> {
        self.witnesses
            .get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::VerificationFailed(format!("missing witness `{key}`")))
    }
}
