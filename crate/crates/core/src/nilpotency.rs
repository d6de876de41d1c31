//! Nilpotent, torsion and regular-torsion elements of a finite module.
//!
//! An element `m` is nilpotent when `m = 0` or some `t` has `t^2 m = 0` and `t m != 0`.
//! Equivalently, some `r` and `k >= 2` have `r^k m = 0` and `r^(k-1) m != 0`; both criteria
//! are implemented and [`nil_set`] uses the first.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::limits::Limits;
use crate::module::FiniteModule;
use crate::set::ElementSet;
use crate::ElementId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NilWitness {
    /// Ring element with `t^k m = 0` and `t^(k-1) m != 0`.
    pub t: ElementId,
    pub k: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nilpotency {
    Zero,
    Witness(NilWitness),
    NotNilpotent,
}

impl Nilpotency {
    pub fn is_nilpotent(&self) -> bool {
        !matches!(self, Nilpotency::NotNilpotent)
    }

    pub fn witness(&self) -> Option<NilWitness> {
        match self {
            Nilpotency::Witness(w) => Some(*w),
            _ => None,
        }
    }
}

/// Least `t` (by id) with `t^2 m = 0` and `t m != 0`.
pub fn is_nilpotent_squared(module: &FiniteModule, m: ElementId) -> Nilpotency {
    if m == module.zero() {
        return Nilpotency::Zero;
    }
    let ring = module.ring();
    ring.elements()
        .find(|&t| {
            let tm = module.act(t, m);
            tm != module.zero() && module.act(t, tm) == module.zero()
        })
        .map_or(Nilpotency::NotNilpotent, |t| {
            Nilpotency::Witness(NilWitness { t, k: 2 })
        })
}

/// Least `r` (by id) whose orbit `m, rm, r^2 m, ...` first reaches zero at some step `k >= 2`.
pub fn is_nilpotent_power(module: &FiniteModule, m: ElementId) -> Nilpotency {
    if m == module.zero() {
        return Nilpotency::Zero;
    }
    let mut stamp = vec![u32::MAX; module.size()];
    for r in module.ring().elements() {
        if let Some(k) = orbit_zero_step(module, r, m, &mut stamp, r as u32) {
            if k >= 2 {
                return Nilpotency::Witness(NilWitness { t: r, k });
            }
        }
    }
    Nilpotency::NotNilpotent
}

fn orbit_zero_step(
    module: &FiniteModule,
    r: ElementId,
    m: ElementId,
    stamp: &mut [u32],
    mark: u32,
) -> Option<u32> {
    let mut x = m;
    stamp[x] = mark;
    let mut step = 0u32;
    loop {
        x = module.act(r, x);
        step += 1;
        if x == module.zero() {
            return Some(step);
        }
        if stamp[x] == mark {
            return None;
        }
        stamp[x] = mark;
    }
}

/// `Nil_R(M)` with a witness for every nonzero member.
#[derive(Debug, Clone, Serialize)]
pub struct NilSet {
    pub descriptor: String,
    pub members: ElementSet,
    #[serde(skip)]
    witnesses: Vec<Option<NilWitness>>,
}

impl NilSet {
    pub fn contains(&self, m: ElementId) -> bool {
        self.members.contains(m)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_everything(&self) -> bool {
        self.members.is_full()
    }

    pub fn witness(&self, m: ElementId) -> Option<NilWitness> {
        self.witnesses.get(m).copied().flatten()
    }
}

/// Work of a full nilpotency scan, `|R| * |M|`.
pub fn nil_scan_work(module: &FiniteModule) -> u128 {
    module.ring().size() as u128 * module.size() as u128
}

/// Computes `Nil_R(M)` once per module; later calls return the cached set.
pub fn nil_set(module: &FiniteModule, limits: &Limits) -> Result<Arc<NilSet>> {
    if let Some(cached) = module.nil_cache().get() {
        return Ok(cached.clone());
    }
    limits.check_work(
        || format!("nilpotency scan of {}", module.descriptor()),
        nil_scan_work(module),
    )?;
    let results: Vec<Nilpotency> = module
        .elements()
        .into_par_iter()
        .map(|m| is_nilpotent_squared(module, m))
        .collect();
    let members = ElementSet::from_predicate(module.size(), |m| results[m].is_nilpotent());
    let witnesses = results.iter().map(Nilpotency::witness).collect();
    let set = Arc::new(NilSet {
        descriptor: module.descriptor().to_string(),
        members,
        witnesses,
    });
    Ok(module.nil_cache().get_or_init(|| set).clone())
}

/// Whether every element is nilpotent.
pub fn is_nil_module(module: &FiniteModule, limits: &Limits) -> Result<bool> {
    Ok(nil_set(module, limits)?.is_everything())
}

#[derive(Debug, Clone, Serialize)]
pub struct TorsionSets {
    /// `Tor(M)`: elements killed by a nonzero ring element.
    pub tor: ElementSet,
    /// `T(M)`: elements killed by a regular ring element.
    pub t_set: ElementSet,
    pub tor_is_submodule: bool,
    pub t_set_is_submodule: bool,
}

fn is_closed(module: &FiniteModule, set: &ElementSet) -> bool {
    let members = set.to_vec();
    members.par_iter().all(|&x| {
        members.iter().all(|&y| set.contains(module.add(x, y)))
            && module.ring().elements().all(|r| set.contains(module.act(r, x)))
    })
}

pub fn torsion_sets(module: &FiniteModule, limits: &Limits) -> Result<TorsionSets> {
    let ring = module.ring();
    let rs = ring.size() as u128;
    limits.check_work(
        || format!("torsion scan of {}", module.descriptor()),
        nil_scan_work(module) + rs * rs,
    )?;
    let regular = ring.regular_elements();
    let flags: Vec<(bool, bool)> = module
        .elements()
        .into_par_iter()
        .map(|m| {
            let mut tor = false;
            let mut t = false;
            for r in ring.elements().skip(1) {
                if module.act(r, m) == module.zero() {
                    tor = true;
                    if regular.contains(r) {
                        t = true;
                        break;
                    }
                }
            }
            (tor, t)
        })
        .collect();
    let tor = ElementSet::from_predicate(module.size(), |m| flags[m].0);
    let t_set = ElementSet::from_predicate(module.size(), |m| flags[m].1);
    Ok(TorsionSets {
        tor_is_submodule: is_closed(module, &tor),
        t_set_is_submodule: is_closed(module, &t_set),
        tor,
        t_set,
    })
}

pub fn is_torsion_free(module: &FiniteModule, limits: &Limits) -> Result<bool> {
    limits.check_work(
        || format!("torsion scan of {}", module.descriptor()),
        nil_scan_work(module),
    )?;
    let ring = module.ring();
    Ok(module.elements().skip(1).all(|m| {
        ring.elements()
            .skip(1)
            .all(|r| module.act(r, m) != module.zero())
    }))
}
