//! Deciders for the semicommutativity hierarchy of modules and rings.
//!
//! Every exhaustive decision scans `(a, m, r)` in lexicographic order and reports the least
//! violating triple, so verdicts do not depend on how the outer loop is split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::limits::Limits;
use crate::module::FiniteModule;
use crate::nilpotency::{is_nilpotent_squared, nil_set};
use crate::ring::FiniteRing;
use crate::set::ElementSet;
use crate::ElementId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    ReducedI,
    ReducedIi,
    Semicommutative,
    WeaklySemicommutative,
    NilSemicommutative,
    RingSemicommutative,
    RingNilSemicommutative,
}

impl Property {
    pub const MODULE: [Property; 5] = [
        Property::ReducedI,
        Property::ReducedIi,
        Property::Semicommutative,
        Property::WeaklySemicommutative,
        Property::NilSemicommutative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::ReducedI => "reduced-i",
            Property::ReducedIi => "reduced-ii",
            Property::Semicommutative => "semicommutative",
            Property::WeaklySemicommutative => "weakly-semicommutative",
            Property::NilSemicommutative => "nil-semicommutative",
            Property::RingSemicommutative => "ring-semicommutative",
            Property::RingNilSemicommutative => "ring-nil-semicommutative",
        }
    }

    pub fn from_name(name: &str) -> Option<Property> {
        [
            Property::ReducedI,
            Property::ReducedIi,
            Property::Semicommutative,
            Property::WeaklySemicommutative,
            Property::NilSemicommutative,
            Property::RingSemicommutative,
            Property::RingNilSemicommutative,
        ]
        .into_iter()
        .find(|p| p.name() == name)
    }

    fn explanation(self) -> &'static str {
        match self {
            Property::ReducedI => "a^2 m = 0 but a r m != 0",
            Property::ReducedIi => "a m = 0 but r m is a nonzero element of aM",
            Property::Semicommutative => "a m = 0 but a r m != 0",
            Property::WeaklySemicommutative => "a m = 0 but a r m is not nilpotent",
            Property::NilSemicommutative => "a m is nilpotent but a r m is not",
            Property::RingSemicommutative => "a b = 0 but a r b != 0",
            Property::RingNilSemicommutative => "a b is nilpotent but a r b is not",
        }
    }
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    WitnessOnly,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rendered {
    pub a: String,
    pub r: String,
    pub m: String,
}

/// A violating triple. For ring properties `m` is the right factor `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub a: ElementId,
    pub r: ElementId,
    pub m: ElementId,
    pub explanation: String,
    pub rendered: Rendered,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub descriptor: String,
    pub property: Property,
    /// `None` only for witness-only verdicts that no witness resolved.
    pub holds: Option<bool>,
    pub method: Method,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.holds == Some(true)
    }

    pub fn fails(&self) -> bool {
        self.holds == Some(false)
    }

    /// A verdict built from a single witness evaluation instead of a scan.
    pub fn witness_only(
        module: &FiniteModule,
        property: Property,
        triple: Option<(ElementId, ElementId, ElementId)>,
        holds: Option<bool>,
    ) -> Verdict {
        Verdict {
            descriptor: module.descriptor().to_string(),
            property,
            holds,
            method: Method::WitnessOnly,
            witness: triple.map(|(a, r, m)| module_witness(module, property, a, r, m)),
        }
    }
}

fn module_witness(
    module: &FiniteModule,
    property: Property,
    a: ElementId,
    r: ElementId,
    m: ElementId,
) -> Witness {
    let ring = module.ring();
    Witness {
        a,
        r,
        m,
        explanation: property.explanation().to_string(),
        rendered: Rendered {
            a: ring.render(a),
            r: ring.render(r),
            m: module.render(m),
        },
    }
}

fn ring_witness(ring: &FiniteRing, property: Property, a: ElementId, r: ElementId, b: ElementId) -> Witness {
    Witness {
        a,
        r,
        m: b,
        explanation: property.explanation().to_string(),
        rendered: Rendered {
            a: ring.render(a),
            r: ring.render(r),
            m: ring.render(b),
        },
    }
}

/// Triples a module decision scans, `|R|^2 |M|`.
pub fn decision_work(module: &FiniteModule) -> u128 {
    let r = module.ring().size() as u128;
    r * r * module.size() as u128
}

/// Least `(a, m, r)` with `premise(a, m)` and not `conclusion(a, r, m)`.
fn scan_module(
    module: &FiniteModule,
    premise: impl Fn(ElementId, ElementId) -> bool + Sync,
    conclusion: impl Fn(ElementId, ElementId, ElementId) -> bool + Sync,
) -> Option<(ElementId, ElementId, ElementId)> {
    let ring = module.ring();
    ring.elements().into_par_iter().find_map_first(|a| {
        for m in module.elements() {
            if !premise(a, m) {
                continue;
            }
            if let Some(r) = ring.elements().find(|&r| !conclusion(a, r, m)) {
                return Some((a, r, m));
            }
        }
        None
    })
}

fn sample_module(
    module: &FiniteModule,
    samples: usize,
    seed: u64,
    premise: impl Fn(ElementId, ElementId) -> bool,
    conclusion: impl Fn(ElementId, ElementId, ElementId) -> bool,
) -> Option<(ElementId, ElementId, ElementId)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rs = module.ring().size();
    for _ in 0..samples {
        let a = rng.gen_range(0..rs);
        let m = rng.gen_range(0..module.size());
        let r = rng.gen_range(0..rs);
        if premise(a, m) && !conclusion(a, r, m) {
            return Some((a, r, m));
        }
    }
    None
}

fn decide(
    module: &FiniteModule,
    property: Property,
    limits: &Limits,
    premise: impl Fn(ElementId, ElementId) -> bool + Sync,
    conclusion: impl Fn(ElementId, ElementId, ElementId) -> bool + Sync,
) -> Result<Verdict> {
    let work = decision_work(module);
    let (method, found) = if limits.within_decision_cap(work) {
        (Method::Exhaustive, scan_module(module, premise, conclusion))
    } else if let Some(samples) = limits.sample {
        (
            Method::Sampled,
            sample_module(module, samples, limits.seed, premise, conclusion),
        )
    } else {
        limits.check_work(
            || format!("{property} decision on {}", module.descriptor()),
            work,
        )?;
        unreachable!("check_work fails above the cap")
    };
    Ok(Verdict {
        descriptor: module.descriptor().to_string(),
        property,
        holds: Some(found.is_none()),
        method,
        witness: found.map(|(a, r, m)| module_witness(module, property, a, r, m)),
    })
}

fn check_cap(module: &FiniteModule, property: Property, limits: &Limits) -> Result<()> {
    if limits.sample.is_some() {
        return Ok(());
    }
    limits.check_work(
        || format!("{property} decision on {}", module.descriptor()),
        decision_work(module),
    )
}

/// `am = 0` implies `aRm = 0`.
pub fn is_semicommutative(module: &FiniteModule, limits: &Limits) -> Result<Verdict> {
    let z = module.zero();
    decide(
        module,
        Property::Semicommutative,
        limits,
        |a, m| module.act(a, m) == z,
        |a, r, m| module.act(a, module.act(r, m)) == z,
    )
}

/// `am = 0` implies `aRm` is contained in `Nil_R(M)`.
pub fn is_weakly_semicommutative(module: &FiniteModule, limits: &Limits) -> Result<Verdict> {
    check_cap(module, Property::WeaklySemicommutative, limits)?;
    let nil = nil_set(module, &limits.clone().forced())?;
    let z = module.zero();
    decide(
        module,
        Property::WeaklySemicommutative,
        limits,
        |a, m| module.act(a, m) == z,
        |a, r, m| nil.contains(module.act(a, module.act(r, m))),
    )
}

/// `am` in `Nil_R(M)` implies `aRm` is contained in `Nil_R(M)`.
pub fn is_nil_semicommutative(module: &FiniteModule, limits: &Limits) -> Result<Verdict> {
    check_cap(module, Property::NilSemicommutative, limits)?;
    let nil = nil_set(module, &limits.clone().forced())?;
    decide(
        module,
        Property::NilSemicommutative,
        limits,
        |a, m| nil.contains(module.act(a, m)),
        |a, r, m| nil.contains(module.act(a, module.act(r, m))),
    )
}

/// `a^2 m = 0` implies `aRm = 0`.
pub fn is_reduced_i(module: &FiniteModule, limits: &Limits) -> Result<Verdict> {
    let z = module.zero();
    let ring = module.ring();
    decide(
        module,
        Property::ReducedI,
        limits,
        |a, m| module.act(ring.mul(a, a), m) == z,
        |a, r, m| module.act(a, module.act(r, m)) == z,
    )
}

/// `am = 0` implies `aM` and `Rm` meet only in zero.
pub fn is_reduced_ii(module: &FiniteModule, limits: &Limits) -> Result<Verdict> {
    check_cap(module, Property::ReducedIi, limits)?;
    let images: Vec<ElementSet> = module
        .ring()
        .elements()
        .into_par_iter()
        .map(|a| ElementSet::from_ids(module.size(), module.elements().map(|x| module.act(a, x))))
        .collect();
    let z = module.zero();
    decide(
        module,
        Property::ReducedIi,
        limits,
        |a, m| module.act(a, m) == z,
        |a, r, m| {
            let rm = module.act(r, m);
            rm == z || !images[a].contains(rm)
        },
    )
}

pub fn decide_module(module: &FiniteModule, property: Property, limits: &Limits) -> Result<Verdict> {
    match property {
        Property::ReducedI => is_reduced_i(module, limits),
        Property::ReducedIi => is_reduced_ii(module, limits),
        Property::Semicommutative => is_semicommutative(module, limits),
        Property::WeaklySemicommutative => is_weakly_semicommutative(module, limits),
        Property::NilSemicommutative => is_nil_semicommutative(module, limits),
        Property::RingSemicommutative => ring_is_semicommutative(module.ring(), limits),
        Property::RingNilSemicommutative => ring_is_nil_semicommutative(module.ring(), limits),
    }
}

/// All five module properties, in [`Property::MODULE`] order.
pub fn classify(module: &FiniteModule, limits: &Limits) -> Result<Vec<Verdict>> {
    Property::MODULE
        .iter()
        .map(|&p| decide_module(module, p, limits))
        .collect()
}

fn decide_ring(
    ring: &FiniteRing,
    property: Property,
    limits: &Limits,
    premise: impl Fn(ElementId, ElementId) -> bool + Sync,
    conclusion: impl Fn(ElementId, ElementId, ElementId) -> bool + Sync,
) -> Result<Verdict> {
    let s = ring.size() as u128;
    limits.check_work(
        || format!("{property} decision on {}", ring.descriptor()),
        s * s * s,
    )?;
    let found = ring.elements().into_par_iter().find_map_first(|a| {
        for b in ring.elements() {
            if !premise(a, b) {
                continue;
            }
            if let Some(r) = ring.elements().find(|&r| !conclusion(a, r, b)) {
                return Some((a, r, b));
            }
        }
        None
    });
    Ok(Verdict {
        descriptor: ring.descriptor().to_string(),
        property,
        holds: Some(found.is_none()),
        method: Method::Exhaustive,
        witness: found.map(|(a, r, b)| ring_witness(ring, property, a, r, b)),
    })
}

/// `ab = 0` implies `aRb = 0`.
pub fn ring_is_semicommutative(ring: &FiniteRing, limits: &Limits) -> Result<Verdict> {
    let z = ring.zero();
    decide_ring(
        ring,
        Property::RingSemicommutative,
        limits,
        |a, b| ring.mul(a, b) == z,
        |a, r, b| ring.mul(ring.mul(a, r), b) == z,
    )
}

/// `ab` in `Nil(R)` implies `aRb` is contained in `Nil(R)`.
pub fn ring_is_nil_semicommutative(ring: &FiniteRing, limits: &Limits) -> Result<Verdict> {
    let s = ring.size() as u128;
    limits.check_work(
        || format!("ring-nil-semicommutative decision on {}", ring.descriptor()),
        s * s * s,
    )?;
    let nil = ring.nil_ring_set();
    decide_ring(
        ring,
        Property::RingNilSemicommutative,
        limits,
        |a, b| nil.contains(ring.mul(a, b)),
        |a, r, b| nil.contains(ring.mul(ring.mul(a, r), b)),
    )
}

/// `am = 0` and `a r m != 0`: a single evaluation, no size restriction.
pub fn verify_nonsemicommutative_witness(
    module: &FiniteModule,
    a: ElementId,
    r: ElementId,
    m: ElementId,
) -> bool {
    let z = module.zero();
    module.act(a, m) == z && module.act(a, module.act(r, m)) != z
}

/// `am` nilpotent and `a r m` not, each decided by a full `t`-scan over the ring.
pub fn verify_not_nil_semicommutative_witness(
    module: &FiniteModule,
    a: ElementId,
    r: ElementId,
    m: ElementId,
) -> bool {
    let am = module.act(a, m);
    let arm = module.act(a, module.act(r, m));
    is_nilpotent_squared(module, am).is_nilpotent()
        && !is_nilpotent_squared(module, arm).is_nilpotent()
}

/// Whether `(a, r, m)` violates a module property, by direct evaluation.
pub fn violates(module: &FiniteModule, property: Property, a: ElementId, r: ElementId, m: ElementId) -> bool {
    let (ring, z) = (module.ring(), module.zero());
    if !ring.contains(a) || !ring.contains(r) || !module.contains(m) {
        return false;
    }
    let am = module.act(a, m);
    let arm = module.act(a, module.act(r, m));
    let nil = |x| is_nilpotent_squared(module, x).is_nilpotent();
    match property {
        Property::Semicommutative => verify_nonsemicommutative_witness(module, a, r, m),
        Property::WeaklySemicommutative => am == z && !nil(arm),
        Property::NilSemicommutative => verify_not_nil_semicommutative_witness(module, a, r, m),
        Property::ReducedI => module.act(ring.mul(a, a), m) == z && arm != z,
        Property::ReducedIi => {
            let rm = module.act(r, m);
            am == z && rm != z && module.elements().any(|x| module.act(a, x) == rm)
        }
        Property::RingSemicommutative | Property::RingNilSemicommutative => false,
    }
}

/// Whether `(a, r, b)` violates a ring property, by direct evaluation.
pub fn ring_violates(ring: &FiniteRing, property: Property, a: ElementId, r: ElementId, b: ElementId) -> bool {
    if !ring.contains(a) || !ring.contains(r) || !ring.contains(b) {
        return false;
    }
    let ab = ring.mul(a, b);
    let arb = ring.mul(ring.mul(a, r), b);
    match property {
        Property::RingSemicommutative => ab == ring.zero() && arb != ring.zero(),
        Property::RingNilSemicommutative => ring.is_nilpotent(ab) && !ring.is_nilpotent(arb),
        _ => false,
    }
}

/// Every submodule of `module`, smallest member lists first, or `None` past `max` submodules.
pub fn all_submodules(module: &FiniteModule, max: usize) -> Result<Option<Vec<FiniteModule>>> {
    use std::collections::BTreeSet;
    let orbits: Vec<Vec<ElementId>> = module
        .elements()
        .map(|m| {
            let o: BTreeSet<ElementId> = module.ring().elements().map(|r| module.act(r, m)).collect();
            o.into_iter().collect()
        })
        .collect();
    let mut seen: BTreeSet<Vec<ElementId>> = BTreeSet::new();
    let mut queue = vec![vec![module.zero()]];
    seen.insert(queue[0].clone());
    while let Some(n) = queue.pop() {
        let set = ElementSet::from_ids(module.size(), n.iter().copied());
        for m in module.elements().filter(|&m| !set.contains(m)) {
            let sum: BTreeSet<ElementId> = n
                .iter()
                .flat_map(|&x| orbits[m].iter().map(move |&y| (x, y)))
                .map(|(x, y)| module.add(x, y))
                .collect();
            let sum: Vec<ElementId> = sum.into_iter().collect();
            if seen.insert(sum.clone()) {
                if seen.len() > max {
                    return Ok(None);
                }
                queue.push(sum);
            }
        }
    }
    let mut subs: Vec<Vec<ElementId>> = seen.into_iter().collect();
    subs.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    subs.into_iter()
        .map(|members| {
            let set = ElementSet::from_ids(module.size(), members);
            crate::module::submodule_from_set(module, &set)
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Nil-semicommutativity of `M`, of every submodule, and of every cyclic submodule.
#[derive(Debug, Clone, Serialize)]
pub struct SubmoduleEquivalence {
    pub descriptor: String,
    pub whole: Verdict,
    pub submodules: usize,
    pub every_submodule: bool,
    pub every_cyclic: bool,
    /// A failing submodule verdict, when one exists.
    pub failing: Option<Verdict>,
}

impl SubmoduleEquivalence {
    pub fn equivalent(&self) -> bool {
        self.whole.holds() == self.every_submodule && self.every_submodule == self.every_cyclic
    }
}

pub fn check_submodule_equivalence(
    module: &FiniteModule,
    max_submodules: usize,
    limits: &Limits,
) -> Result<Option<SubmoduleEquivalence>> {
    let whole = is_nil_semicommutative(module, limits)?;
    let Some(subs) = all_submodules(module, max_submodules)? else {
        return Ok(None);
    };
    let mut every_submodule = true;
    let mut failing = None;
    for sub in &subs {
        let v = is_nil_semicommutative(sub, limits)?;
        if v.fails() {
            every_submodule = false;
            failing.get_or_insert(v);
        }
    }
    let mut every_cyclic = true;
    for m in module.elements() {
        let c = crate::module::cyclic_submodule(module, m)?;
        let v = is_nil_semicommutative(&c, limits)?;
        if v.fails() {
            every_cyclic = false;
            failing.get_or_insert(v);
        }
    }
    Ok(Some(SubmoduleEquivalence {
        descriptor: module.descriptor().to_string(),
        whole,
        submodules: subs.len(),
        every_submodule,
        every_cyclic,
        failing,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::MatrixShape;
    use crate::module::{matrix_module, regular_module};
    use crate::ring::{make_matrix_ring, make_zn};

    fn lim() -> Limits {
        Limits::default()
    }

    fn zn(n: usize) -> FiniteModule {
        regular_module(&make_zn(n).unwrap())
    }

    fn m2z2() -> FiniteModule {
        let z2 = make_zn(2).unwrap();
        matrix_module(MatrixShape::full(2), &z2, &regular_module(&z2), &lim()).unwrap()
    }

    #[test]
    fn z4_splits_the_hierarchy() {
        let m = zn(4);
        assert!(is_semicommutative(&m, &lim()).unwrap().holds());
        assert!(is_weakly_semicommutative(&m, &lim()).unwrap().holds());
        let v = is_nil_semicommutative(&m, &lim()).unwrap();
        assert!(v.fails());
        let w = v.witness.unwrap();
        assert_eq!((w.a, w.m, w.r), (1, 1, 2));
        let red = is_reduced_i(&m, &lim()).unwrap();
        let w = red.witness.unwrap();
        assert_eq!((w.a, w.m, w.r), (2, 1, 1));
    }

    #[test]
    fn matrix_module_is_nil_semicommutative_not_semicommutative() {
        let m = m2z2();
        assert!(is_nil_semicommutative(&m, &lim()).unwrap().holds());
        let v = is_semicommutative(&m, &lim()).unwrap();
        assert!(v.fails());
        let w = v.witness.unwrap();
        assert!(verify_nonsemicommutative_witness(&m, w.a, w.r, w.m));
        let ring = m.ring();
        let e12 = ring.matrix_unit(0, 1, 1).unwrap();
        let e21 = ring.matrix_unit(1, 0, 1).unwrap();
        let e11 = ring.matrix_unit(0, 0, 1).unwrap();
        let k12 = m.matrix_element(&[0, 1, 0, 0]).unwrap();
        assert!(verify_nonsemicommutative_witness(&m, e12, e21, k12));
        // least triple in (a, m, r) order: a = e11, m = e21, r = e12
        let k21 = m.matrix_element(&[0, 0, 1, 0]).unwrap();
        assert_eq!((w.a, w.m, w.r), (e11, k21, e12));
    }

    #[test]
    fn zero_module_holds_everything() {
        let zero = crate::module::cyclic_submodule(&zn(4), 0).unwrap();
        for v in classify(&zero, &lim()).unwrap() {
            assert!(v.holds(), "{}", v.property);
        }
    }

    #[test]
    fn small_fields_and_square_free() {
        for v in classify(&zn(3), &lim()).unwrap() {
            assert!(v.holds());
        }
        for v in classify(&zn(6), &lim()).unwrap() {
            assert!(v.holds(), "{}", v.property);
        }
    }

    #[test]
    fn upper_triangular_counterexamples() {
        let z4 = make_zn(4).unwrap();
        let t = regular_module(&make_matrix_ring(MatrixShape::upper(2), &z4, &lim()).unwrap());
        let v = is_nil_semicommutative(&t, &lim()).unwrap();
        assert!(v.fails());
        let ring = t.ring();
        let e11 = ring.matrix_unit(0, 0, 1).unwrap();
        let l = ring.matrix_unit(0, 0, 2).unwrap();
        let w = v.witness.unwrap();
        assert_eq!((w.a, w.r, w.m), (e11, l, e11));
        assert!(verify_not_nil_semicommutative_witness(&t, e11, l, e11));
    }

    #[test]
    fn ring_level_properties() {
        for n in 2..20 {
            let r = make_zn(n).unwrap();
            assert!(ring_is_semicommutative(&r, &lim()).unwrap().holds());
            assert!(ring_is_nil_semicommutative(&r, &lim()).unwrap().holds());
        }
        let z2 = make_zn(2).unwrap();
        let t2 = make_matrix_ring(MatrixShape::upper(2), &z2, &lim()).unwrap();
        assert!(ring_is_nil_semicommutative(&t2, &lim()).unwrap().holds());
        let m2 = make_matrix_ring(MatrixShape::full(2), &z2, &lim()).unwrap();
        let v = ring_is_semicommutative(&m2, &lim()).unwrap();
        assert!(v.fails());
        let (e12, e21) = (m2.matrix_unit(0, 1, 1).unwrap(), m2.matrix_unit(1, 0, 1).unwrap());
        assert_eq!(m2.mul(e12, e12), 0);
        assert_ne!(m2.mul(m2.mul(e12, e21), e12), 0);
    }

    #[test]
    fn zero_a_is_never_a_witness() {
        let m = m2z2();
        for r in m.ring().elements() {
            for x in m.elements() {
                assert!(!verify_nonsemicommutative_witness(&m, 0, r, x));
            }
        }
    }

    #[test]
    fn submodule_lattices() {
        let subs = all_submodules(&zn(12), 100).unwrap().unwrap();
        // one submodule per divisor of 12
        assert_eq!(subs.len(), 6);
        let z2 = make_zn(2).unwrap();
        let v = crate::module::product_module(&[regular_module(&z2), regular_module(&z2)], &lim()).unwrap();
        assert_eq!(all_submodules(&v, 100).unwrap().unwrap().len(), 5);
        assert!(all_submodules(&v, 3).unwrap().is_none());
        let eq = check_submodule_equivalence(&zn(4), 100, &lim()).unwrap().unwrap();
        assert!(eq.equivalent());
        assert!(!eq.whole.holds());
    }

    #[test]
    fn direct_violation_checks() {
        let m = zn(4);
        assert!(violates(&m, Property::NilSemicommutative, 1, 2, 1));
        assert!(violates(&m, Property::ReducedI, 2, 1, 1));
        assert!(!violates(&m, Property::Semicommutative, 1, 2, 1));
        assert!(!violates(&m, Property::Semicommutative, 9, 2, 1));
        let z2 = make_zn(2).unwrap();
        let m2 = make_matrix_ring(MatrixShape::full(2), &z2, &lim()).unwrap();
        let (e12, e21) = (m2.matrix_unit(0, 1, 1).unwrap(), m2.matrix_unit(1, 0, 1).unwrap());
        assert!(ring_violates(&m2, Property::RingSemicommutative, e12, e21, e12));
    }

    #[test]
    fn caps_and_sampling() {
        let m = m2z2();
        let tight = Limits::default().with_decision_cap(100);
        assert!(is_semicommutative(&m, &tight).is_err());
        assert!(is_nil_semicommutative(&m, &tight).is_err());
        let sampled = Limits {
            sample: Some(5000),
            ..tight
        };
        let v = is_semicommutative(&m, &sampled).unwrap();
        assert_eq!(v.method, Method::Sampled);
        if let Some(w) = &v.witness {
            assert!(verify_nonsemicommutative_witness(&m, w.a, w.r, w.m));
        }
    }

    #[test]
    fn verdicts_do_not_depend_on_thread_count() {
        let z4 = make_zn(4).unwrap();
        let t = regular_module(&make_matrix_ring(MatrixShape::upper(2), &z4, &lim()).unwrap());
        let base = classify(&t, &lim()).unwrap();
        for threads in [1, 3] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let fresh = regular_module(t.ring());
            let again = pool.install(|| classify(&fresh, &lim()).unwrap());
            assert_eq!(base, again);
        }
    }
}
