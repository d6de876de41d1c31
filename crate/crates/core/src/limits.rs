use crate::error::{AlgebraError, Result};

/// Default bound on the number of elements a constructor may produce.
pub const DEFAULT_CONSTRUCTION_CAP: usize = 1 << 20;
/// Default bound on the number of `(a, r, m)` evaluations an exhaustive decision may perform.
pub const DEFAULT_DECISION_CAP: u64 = 1 << 24;
/// Rings and modules with at most this many elements get precomputed operation tables.
pub const TABULATE_MAX: usize = 1024;
/// Fixed seed for every sampled validation or sampled decision.
pub const DEFAULT_SEED: u64 = 0x6e69_6c63_6f6d_6d00;

/// Size caps and validation policy shared by constructors and deciders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    pub construction_cap: usize,
    pub decision_cap: u64,
    /// Ignore `decision_cap`.
    pub force: bool,
    /// When set, deciders above the cap sample this many random triples instead of failing.
    pub sample: Option<usize>,
    /// Axiom validation is exhaustive when the number of checked tuples is at most this.
    pub exhaustive_validation: u64,
    /// Number of random tuples checked per axiom when validation is not exhaustive.
    pub validation_samples: usize,
    pub seed: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            construction_cap: DEFAULT_CONSTRUCTION_CAP,
            decision_cap: DEFAULT_DECISION_CAP,
            force: false,
            sample: None,
            exhaustive_validation: 1 << 22,
            validation_samples: 100_000,
            seed: DEFAULT_SEED,
        }
    }
}

impl Limits {
    pub fn with_decision_cap(mut self, cap: u64) -> Self {
        self.decision_cap = cap;
        self
    }

    pub fn forced(mut self) -> Self {
        self.force = true;
        self
    }

    pub(crate) fn check_size(&self, what: impl FnOnce() -> String, size: u128) -> Result<usize> {
        if size > self.construction_cap as u128 {
            return Err(AlgebraError::SizeLimit {
                what: what(),
                size,
                cap: self.construction_cap as u128,
            });
        }
        Ok(size as usize)
    }

    pub fn within_decision_cap(&self, work: u128) -> bool {
        self.force || work <= self.decision_cap as u128
    }

    pub(crate) fn check_work(&self, what: impl FnOnce() -> String, work: u128) -> Result<()> {
        if self.within_decision_cap(work) {
            Ok(())
        } else {
            Err(AlgebraError::DecisionCap {
                what: what(),
                work,
                cap: self.decision_cap as u128,
            })
        }
    }
}
