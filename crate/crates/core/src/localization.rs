//! Fractions `r/s` and `m/s` over a finite multiplicatively closed central subset `S`.
//!
//! `(r, s) ~ (r', s')` iff some `u` in `S` has `u (r s' - r' s) = 0`, and on the module side
//! `(m, s) ~ (m', s')` iff `u (s' m - s m') = 0`. The existential over `u` is a full scan of `S`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use crate::deciders::is_nil_semicommutative;
use crate::error::{AlgebraError, Result};
use crate::harness::report::{CheckReport, Status, WitnessRecord};
use crate::hom::{make_ring_hom, RingHom};
use crate::limits::Limits;
use crate::module::{validate_module, FiniteModule};
use crate::ring::{validate_ring, FiniteRing};
use crate::set::ElementSet;
use crate::ElementId;

/// A multiplicatively closed subset of the center, containing 1 and avoiding 0.
#[derive(Debug, Clone)]
pub struct MultiplicativeSet {
    ring: FiniteRing,
    generators: Vec<ElementId>,
    members: ElementSet,
}

impl MultiplicativeSet {
    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    /// Sorted, deduplicated generators the set was closed from.
    pub fn generators(&self) -> &[ElementId] {
        &self.generators
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn contains(&self, s: ElementId) -> bool {
        self.members.contains(s)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn gens_label(&self) -> String {
        let list: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        format!("{{{}}}", list.join(", "))
    }
}

/// Smallest multiplicatively closed set containing `gens` and 1.
pub fn multiplicative_closure(ring: &FiniteRing, gens: &[ElementId]) -> Result<MultiplicativeSet> {
    let mut generators = gens.to_vec();
    generators.sort_unstable();
    generators.dedup();
    for &g in &generators {
        if !ring.contains(g) {
            return Err(AlgebraError::ElementOutOfRange {
                descriptor: ring.descriptor().to_string(),
                element: g as u64,
                size: ring.size(),
            });
        }
        if !ring.center().contains(g) {
            return Err(AlgebraError::NonCentralGenerator(g));
        }
    }
    // breadth-first walk; `reached[x] = (predecessor, generator)` rebuilds the product chain
    let mut reached: Vec<Option<(ElementId, ElementId)>> = vec![None; ring.size()];
    let one = ring.one();
    reached[one] = Some((one, one));
    let mut members = ElementSet::from_ids(ring.size(), [one]);
    let mut frontier = vec![one];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &x in &frontier {
            for &g in &generators {
                let y = ring.mul(x, g);
                if reached[y].is_some() {
                    continue;
                }
                reached[y] = Some((x, g));
                if y == ring.zero() {
                    let mut chain = vec![g];
                    let mut cur = x;
                    while cur != one {
                        let (prev, h) = reached[cur].expect("reached element has a predecessor");
                        chain.push(h);
                        cur = prev;
                    }
                    chain.reverse();
                    return Err(AlgebraError::ZeroAbsorbed { chain });
                }
                members.insert(y);
                next.push(y);
            }
        }
        frontier = next;
    }
    Ok(MultiplicativeSet {
        ring: ring.clone(),
        generators,
        members,
    })
}

/// Canonical representative of a fraction class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Fraction {
    pub num: ElementId,
    pub den: ElementId,
}

#[derive(Debug, Clone)]
pub struct LocalizedRing {
    pub ring: FiniteRing,
    pub source: FiniteRing,
    /// Representative of each class, indexed by the element id in `ring`.
    pub classes: Vec<Fraction>,
    /// `r -> r/1`.
    pub projection: RingHom,
    dens: Vec<ElementId>,
    pair_class: Vec<u32>,
}

impl LocalizedRing {
    /// Element id of `num/den`, if `den` is in the multiplicative set.
    pub fn fraction(&self, num: ElementId, den: ElementId) -> Option<ElementId> {
        let d = self.dens.iter().position(|&x| x == den)?;
        (num < self.source.size()).then(|| self.pair_class[d * self.source.size() + num] as ElementId)
    }
}

#[derive(Debug, Clone)]
pub struct LocalizedModule {
    pub module: FiniteModule,
    pub source: FiniteModule,
    pub ring: LocalizedRing,
    pub classes: Vec<Fraction>,
    /// `m -> m/1`.
    pub projection: Vec<ElementId>,
}

/// Pairs `(num, den)` ordered by `(den, num)`; `dens` is `S` in increasing id order.
struct Pairs {
    dens: Vec<ElementId>,
    den_index: BTreeMap<ElementId, usize>,
    nums: usize,
}

impl Pairs {
    fn new(set: &MultiplicativeSet, nums: usize) -> Self {
        let dens = set.members.to_vec();
        let den_index = dens.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        Pairs {
            dens,
            den_index,
            nums,
        }
    }

    fn len(&self) -> usize {
        self.dens.len() * self.nums
    }

    fn get(&self, p: usize) -> Fraction {
        Fraction {
            num: p % self.nums,
            den: self.dens[p / self.nums],
        }
    }

    fn index(&self, f: Fraction) -> usize {
        self.den_index[&f.den] * self.nums + f.num
    }
}

/// Classes of `related`, each represented by its least pair, verified to be an equivalence.
fn partition(
    pairs: &Pairs,
    related: impl Fn(Fraction, Fraction) -> bool,
    what: &str,
) -> Result<(Vec<u32>, Vec<Fraction>)> {
    const UNASSIGNED: u32 = u32::MAX;
    let n = pairs.len();
    let mut class = vec![UNASSIGNED; n];
    let mut reps = Vec::new();
    for p in 0..n {
        if class[p] != UNASSIGNED {
            continue;
        }
        let c = reps.len() as u32;
        let fp = pairs.get(p);
        reps.push(fp);
        class[p] = c;
        for q in p + 1..n {
            if class[q] == UNASSIGNED && related(fp, pairs.get(q)) {
                class[q] = c;
            }
        }
    }
    for p in 0..n {
        for q in p + 1..n {
            if related(pairs.get(p), pairs.get(q)) != (class[p] == class[q]) {
                let (a, b) = (pairs.get(p), pairs.get(q));
                return Err(AlgebraError::AxiomViolation {
                    descriptor: what.to_string(),
                    axiom: "fraction relation is an equivalence",
                    elements: vec![a.num, a.den, b.num, b.den],
                });
            }
        }
    }
    Ok((class, reps))
}

fn localization_work(set: &MultiplicativeSet, nums: usize) -> u128 {
    let p = (set.len() * nums) as u128;
    p * p * set.len() as u128
}

/// `S^{-1} R` with class tables checked independent of representatives.
pub fn localize_ring(set: &MultiplicativeSet, limits: &Limits) -> Result<LocalizedRing> {
    let ring = &set.ring;
    let descriptor = format!("loc({}, {})", ring.descriptor(), set.gens_label());
    limits.check_size(|| format!("fraction pairs of {descriptor}"), (set.len() * ring.size()) as u128)?;
    limits.check_work(|| format!("partition of {descriptor}"), localization_work(set, ring.size()))?;
    let pairs = Pairs::new(set, ring.size());
    let dens = pairs.dens.clone();
    let related = |x: Fraction, y: Fraction| {
        let diff = ring.sub(ring.mul(x.num, y.den), ring.mul(y.num, x.den));
        dens.iter().any(|&u| ring.mul(u, diff) == ring.zero())
    };
    let (class, reps) = partition(&pairs, related, &descriptor)?;
    let k = reps.len();
    let cls = |f: Fraction| class[pairs.index(f)];

    let add_frac = |x: Fraction, y: Fraction| Fraction {
        num: ring.add(ring.mul(x.num, y.den), ring.mul(y.num, x.den)),
        den: ring.mul(x.den, y.den),
    };
    let mul_frac = |x: Fraction, y: Fraction| Fraction {
        num: ring.mul(x.num, y.num),
        den: ring.mul(x.den, y.den),
    };
    let mut add = vec![0u32; k * k];
    let mut mul = vec![0u32; k * k];
    for (i, &x) in reps.iter().enumerate() {
        for (j, &y) in reps.iter().enumerate() {
            add[i * k + j] = cls(add_frac(x, y));
            mul[i * k + j] = cls(mul_frac(x, y));
        }
    }
    let neg: Vec<u32> = reps
        .iter()
        .map(|&x| cls(Fraction { num: ring.neg(x.num), den: x.den }))
        .collect();
    for p in 0..pairs.len() {
        let x = pairs.get(p);
        let cx = class[p] as usize;
        if neg[cx] != cls(Fraction { num: ring.neg(x.num), den: x.den }) {
            return Err(not_well_defined(&descriptor, "negation", x, x));
        }
        for q in 0..pairs.len() {
            let y = pairs.get(q);
            let cy = class[q] as usize;
            if add[cx * k + cy] != cls(add_frac(x, y)) {
                return Err(not_well_defined(&descriptor, "addition", x, y));
            }
            if mul[cx * k + cy] != cls(mul_frac(x, y)) {
                return Err(not_well_defined(&descriptor, "multiplication", x, y));
            }
        }
    }
    let one = cls(Fraction { num: ring.one(), den: ring.one() }) as ElementId;
    let labels = reps.iter().map(|f| fraction_label(ring.render(f.num), ring, f.den)).collect();
    let local = FiniteRing::from_tables(descriptor, one, add, mul, neg, labels);
    validate_ring(&local, limits)?;
    let proj: Vec<ElementId> = ring
        .elements()
        .map(|r| cls(Fraction { num: r, den: ring.one() }) as ElementId)
        .collect();
    let projection = make_ring_hom(ring, &local, proj, limits)?;
    Ok(LocalizedRing {
        ring: local,
        source: ring.clone(),
        classes: reps,
        projection,
        dens: pairs.dens.clone(),
        pair_class: class.clone(),
    })
}

fn fraction_label(num: String, ring: &FiniteRing, den: ElementId) -> String {
    if den == ring.one() {
        num
    } else {
        format!("{num}/{}", ring.render(den))
    }
}

fn not_well_defined(descriptor: &str, op: &'static str, x: Fraction, y: Fraction) -> AlgebraError {
    AlgebraError::AxiomViolation {
        descriptor: descriptor.to_string(),
        axiom: match op {
            "negation" => "negation is well defined on classes",
            "addition" => "addition is well defined on classes",
            "multiplication" => "multiplication is well defined on classes",
            _ => "action is well defined on classes",
        },
        elements: vec![x.num, x.den, y.num, y.den],
    }
}

/// `S^{-1} M` over `S^{-1} R`, where `S` lives in the ring of `module`.
pub fn localize_module(
    module: &FiniteModule,
    set: &MultiplicativeSet,
    limits: &Limits,
) -> Result<LocalizedModule> {
    let ring = module.ring();
    if ring != &set.ring {
        return Err(AlgebraError::ShapeMismatch(format!(
            "{} is over {}, the multiplicative set lives in {}",
            module.descriptor(),
            ring.descriptor(),
            set.ring.descriptor()
        )));
    }
    let local_ring = localize_ring(set, limits)?;
    let descriptor = format!("locmod({}, {})", module.descriptor(), set.gens_label());
    limits.check_size(|| format!("fraction pairs of {descriptor}"), (set.len() * module.size()) as u128)?;
    limits.check_work(|| format!("partition of {descriptor}"), localization_work(set, module.size()))?;
    let pairs = Pairs::new(set, module.size());
    let dens = pairs.dens.clone();
    let related = |x: Fraction, y: Fraction| {
        let diff = module.sub(module.act(y.den, x.num), module.act(x.den, y.num));
        dens.iter().any(|&u| module.act(u, diff) == module.zero())
    };
    let (class, reps) = partition(&pairs, related, &descriptor)?;
    let k = reps.len();
    let cls = |f: Fraction| class[pairs.index(f)];

    let add_frac = |x: Fraction, y: Fraction| Fraction {
        num: module.add(module.act(y.den, x.num), module.act(x.den, y.num)),
        den: ring.mul(x.den, y.den),
    };
    let act_frac = |r: Fraction, x: Fraction| Fraction {
        num: module.act(r.num, x.num),
        den: ring.mul(r.den, x.den),
    };
    let mut add = vec![0u32; k * k];
    for (i, &x) in reps.iter().enumerate() {
        for (j, &y) in reps.iter().enumerate() {
            add[i * k + j] = cls(add_frac(x, y));
        }
    }
    let rk = local_ring.classes.len();
    let mut act = vec![0u32; rk * k];
    for (i, &r) in local_ring.classes.iter().enumerate() {
        for (j, &x) in reps.iter().enumerate() {
            act[i * k + j] = cls(act_frac(r, x));
        }
    }
    let ring_pairs = Pairs::new(set, ring.size());
    let ring_class: Vec<usize> = local_ring.pair_class.iter().map(|&c| c as usize).collect();
    for p in 0..pairs.len() {
        let x = pairs.get(p);
        let cx = class[p] as usize;
        for q in 0..pairs.len() {
            let y = pairs.get(q);
            if add[cx * k + class[q] as usize] != cls(add_frac(x, y)) {
                return Err(not_well_defined(&descriptor, "addition", x, y));
            }
        }
        for q in 0..ring_pairs.len() {
            let r = ring_pairs.get(q);
            if act[ring_class[q] * k + cx] != cls(act_frac(r, x)) {
                return Err(not_well_defined(&descriptor, "action", r, x));
            }
        }
    }
    let labels = reps
        .iter()
        .map(|f| fraction_label(module.render(f.num), ring, f.den))
        .collect();
    let local = FiniteModule::from_tables(descriptor, local_ring.ring.clone(), add, act, labels);
    validate_module(&local, limits)?;
    let projection = module
        .elements()
        .map(|m| cls(Fraction { num: m, den: ring.one() }) as ElementId)
        .collect();
    Ok(LocalizedModule {
        module: local,
        source: module.clone(),
        ring: local_ring,
        classes: reps,
        projection,
    })
}

/// Runs the nil-semicommutativity decider on `M` and on `S^{-1} M` and compares the
/// verdicts against the claim that one holds exactly when the other does.
pub fn check_localization_transfer(
    module: &FiniteModule,
    set: &MultiplicativeSet,
    limits: &Limits,
) -> Result<CheckReport> {
    let local = localize_module(module, set, limits)?;
    let source = is_nil_semicommutative(module, limits)?;
    let target = is_nil_semicommutative(&local.module, limits)?;
    let agree = source.holds == target.holds;
    let mut witnesses = Vec::new();
    for v in [&source, &target] {
        if let Some(w) = &v.witness {
            witnesses.push(WitnessRecord::from_verdict(v, w));
        }
    }
    Ok(CheckReport {
        check_id: "localization_transfer".to_string(),
        claim: "M is nil-semicommutative iff S^-1 M is nil-semicommutative over S^-1 R".to_string(),
        status: if agree { Status::Confirmed } else { Status::Refuted },
        detail: json!({
            "module": module.descriptor(),
            "multiplicative_set": set.members(),
            "localized": local.module.descriptor(),
            "localized_size": local.module.size(),
            "classes": local.classes,
            "source_verdict": source,
            "localized_verdict": target,
        }),
        witnesses,
        runtime_ms: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::regular_module;
    use crate::ring::make_zn;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn closures() {
        let z12 = make_zn(12).unwrap();
        let s = multiplicative_closure(&z12, &[2]).unwrap();
        assert_eq!(s.members().to_vec(), vec![1, 2, 4, 8]);
        let trivial = multiplicative_closure(&z12, &[]).unwrap();
        assert_eq!(trivial.members().to_vec(), vec![1]);
        let z4 = make_zn(4).unwrap();
        assert_eq!(
            multiplicative_closure(&z4, &[2]).unwrap_err(),
            AlgebraError::ZeroAbsorbed { chain: vec![2, 2] }
        );
        assert!(matches!(
            multiplicative_closure(&z4, &[9]),
            Err(AlgebraError::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn non_central_generators_are_rejected() {
        let z2 = make_zn(2).unwrap();
        let m2 = crate::ring::make_matrix_ring(crate::matrix::MatrixShape::full(2), &z2, &lim()).unwrap();
        let e11 = m2.matrix_unit(0, 0, 1).unwrap();
        assert_eq!(
            multiplicative_closure(&m2, &[e11]).unwrap_err(),
            AlgebraError::NonCentralGenerator(e11)
        );
    }

    #[test]
    fn z12_at_powers_of_two() {
        let z12 = make_zn(12).unwrap();
        let s = multiplicative_closure(&z12, &[2]).unwrap();
        let loc = localize_ring(&s, &lim()).unwrap();
        assert_eq!(loc.ring.size(), 3);
        assert_eq!(loc.ring.descriptor(), "loc(Z(12), {2})");
        assert!(loc.projection.is_surjective());
        // 4 becomes a unit, so r/1 depends only on r mod 3
        for r in 0..12 {
            assert_eq!(loc.projection.apply(r), loc.projection.apply(r % 3));
        }
        let m = localize_module(&regular_module(&z12), &s, &lim()).unwrap();
        assert_eq!(m.module.size(), 3);
        assert_eq!(m.module.descriptor(), "locmod(regular(Z(12)), {2})");
    }

    #[test]
    fn trivial_localization_is_an_isomorphism() {
        for n in [2, 4, 6, 9] {
            let r = make_zn(n).unwrap();
            let s = multiplicative_closure(&r, &[]).unwrap();
            let loc = localize_ring(&s, &lim()).unwrap();
            assert_eq!(loc.ring.size(), n);
            assert!(loc.projection.is_surjective());
            let m = localize_module(&regular_module(&r), &s, &lim()).unwrap();
            let mut image = m.projection.clone();
            image.sort_unstable();
            image.dedup();
            assert_eq!(image.len(), n);
        }
    }

    #[test]
    fn unit_localization() {
        let z4 = make_zn(4).unwrap();
        let s = multiplicative_closure(&z4, &[3]).unwrap();
        assert_eq!(s.members().to_vec(), vec![1, 3]);
        assert_eq!(localize_ring(&s, &lim()).unwrap().ring.size(), 4);
        let report = check_localization_transfer(&regular_module(&z4), &s, &lim()).unwrap();
        assert_eq!(report.status, Status::Confirmed);
    }

    #[test]
    fn projections_are_homomorphisms() {
        let z12 = make_zn(12).unwrap();
        let s = multiplicative_closure(&z12, &[2]).unwrap();
        let m = regular_module(&z12);
        let l = localize_module(&m, &s, &lim()).unwrap();
        let pr = &l.ring.projection;
        for a in 0..12 {
            for b in 0..12 {
                assert_eq!(l.projection[m.add(a, b)], l.module.add(l.projection[a], l.projection[b]));
                assert_eq!(l.projection[m.act(a, b)], l.module.act(pr.apply(a), l.projection[b]));
            }
        }
    }

    #[test]
    fn field_transfer_is_confirmed() {
        let z3 = make_zn(3).unwrap();
        let s = multiplicative_closure(&z3, &[]).unwrap();
        let report = check_localization_transfer(&regular_module(&z3), &s, &lim()).unwrap();
        assert_eq!(report.status, Status::Confirmed);
    }
}
