use serde::Serialize;
use serde_json::Value;

use crate::deciders::{ring_violates, violates, Property, Verdict, Witness};
use crate::error::Result;
use crate::expr::{build, Structure};
use crate::limits::Limits;
use crate::ElementId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Confirmed,
    Refuted,
    Skipped,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Confirmed => "confirmed",
            Status::Refuted => "refuted",
            Status::Skipped => "skipped",
            Status::Error => "error",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A property violation that can be replayed from its descriptor alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRecord {
    pub descriptor: String,
    pub property: Property,
    pub a: ElementId,
    pub r: ElementId,
    pub m: ElementId,
    pub rendered: [String; 3],
}

impl WitnessRecord {
    pub fn from_verdict(verdict: &Verdict, w: &Witness) -> Self {
        WitnessRecord {
            descriptor: verdict.descriptor.clone(),
            property: verdict.property,
            a: w.a,
            r: w.r,
            m: w.m,
            rendered: [w.rendered.a.clone(), w.rendered.r.clone(), w.rendered.m.clone()],
        }
    }

    /// Rebuilds the structure and evaluates the violation once.
    pub fn replay(&self, limits: &Limits) -> Result<bool> {
        let structure = build(&self.descriptor, limits)?;
        Ok(match (self.property, structure) {
            (Property::RingSemicommutative | Property::RingNilSemicommutative, Structure::Ring(r)) => {
                ring_violates(&r, self.property, self.a, self.r, self.m)
            }
            (p, s) => violates(&s.into_module()?, p, self.a, self.r, self.m),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    /// The mathematical statement under test.
    pub claim: String,
    pub status: Status,
    pub detail: Value,
    /// Violations found or replayed by the check; every refutation lists at least one.
    pub witnesses: Vec<WitnessRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl CheckReport {
    /// Replays every witness; `Ok(true)` when all reproduce their violation.
    pub fn reverify(&self, limits: &Limits) -> Result<bool> {
        for w in &self.witnesses {
            if !w.replay(limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
