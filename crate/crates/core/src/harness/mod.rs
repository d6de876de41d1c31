//! Named instance checks for the statements about nilpotent elements and the
//! semicommutativity hierarchy, each producing a [`CheckReport`].

pub mod checks;
pub mod report;

use std::time::Instant;

use serde::Serialize;
use serde_json::json;

pub use checks::{CheckSpec, HIERARCHY_SUITE, REGISTRY};
pub use report::{CheckReport, Status, WitnessRecord};

use crate::error::{AlgebraError, Result};
use crate::limits::Limits;

#[derive(Debug, Clone)]
pub struct HarnessConfig {
    /// Caps and the sampling seed (`limits.seed`).
    pub limits: Limits,
    pub samples: usize,
    pub n_max: u64,
    /// Restrict the run to these check ids.
    pub only: Option<Vec<String>>,
    pub timings: bool,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            limits: Limits::default(),
            samples: 1000,
            n_max: 1000,
            only: None,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HarnessRun {
    pub reports: Vec<CheckReport>,
}

impl HarnessRun {
    pub fn count(&self, status: Status) -> usize {
        self.reports.iter().filter(|r| r.status == status).count()
    }

    /// 1 if any check errored, 2 if any was refuted, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Error) > 0 {
            1
        } else if self.count(Status::Refuted) > 0 {
            2
        } else {
            0
        }
    }
}

/// Errors when `only` names a check that does not exist.
pub fn select(only: Option<&[String]>) -> Result<Vec<&'static CheckSpec>> {
    let Some(ids) = only else {
        return Ok(REGISTRY.iter().collect());
    };
    if let Some(bad) = ids.iter().find(|id| !REGISTRY.iter().any(|c| c.id == id.as_str())) {
        let known: Vec<&str> = REGISTRY.iter().map(|c| c.id).collect();
        return Err(AlgebraError::InvalidParameter(format!(
            "unknown check id '{bad}' (known: {})",
            known.join(", ")
        )));
    }
    Ok(REGISTRY.iter().filter(|c| ids.iter().any(|id| id == c.id)).collect())
}

pub fn run_check(spec: &CheckSpec, config: &HarnessConfig) -> CheckReport {
    let start = Instant::now();
    let mut report = (spec.run)(config).unwrap_or_else(|e| CheckReport {
        check_id: spec.id.to_string(),
        claim: spec.claim.to_string(),
        status: Status::Error,
        detail: json!({ "error": e.to_string() }),
        witnesses: Vec::new(),
        runtime_ms: None,
    });
    if config.timings {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    report
}

/// Runs the selected checks in registry order. A failing check becomes an `error` report.
pub fn run_all(config: &HarnessConfig) -> Result<HarnessRun> {
    let specs = select(config.only.as_deref())?;
    Ok(HarnessRun {
        reports: specs.into_iter().map(|s| run_check(s, config)).collect(),
    })
}
