//! Finite unitary left modules over [`FiniteRing`]s.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::error::{AlgebraError, Result};
use crate::hom::RingHom;
use crate::limits::{Limits, TABULATE_MAX};
use crate::matrix::{MatrixLayout, MatrixShape};
use crate::nilpotency::NilSet;
use crate::ring::{make_matrix_ring, render_matrix, scan_tuples, FiniteRing};
use crate::set::ElementSet;
use crate::ElementId;

/// Action tables are precomputed when `|R| * |M|` is at most this.
const ACTION_TABLE_MAX: usize = 1 << 20;

/// A finite unitary left module. Cheap to clone and immutable after construction.
#[derive(Clone)]
pub struct FiniteModule(Arc<ModuleData>);

struct ModuleData {
    descriptor: String,
    ring: FiniteRing,
    size: usize,
    repr: ModuleRepr,
    tables: Option<ModuleTables>,
    nil: OnceLock<Arc<NilSet>>,
}

enum ModuleRepr {
    Regular,
    Matrix {
        layout: MatrixLayout,
        ring_layout: MatrixLayout,
        base: FiniteModule,
    },
    Product {
        factors: Vec<FiniteModule>,
        strides: Vec<usize>,
    },
    Sub {
        parent: FiniteModule,
        members: Vec<ElementId>,
        index: Vec<u32>,
    },
    Quotient {
        parent: FiniteModule,
        reps: Vec<ElementId>,
        class_of: Vec<u32>,
    },
    Induced {
        hom: RingHom,
        target: FiniteModule,
    },
    Table {
        labels: Vec<String>,
    },
}

struct ModuleTables {
    add: Vec<u32>,
    act: Vec<u32>,
}

const NOT_A_MEMBER: u32 = u32::MAX;

impl std::fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteModule")
            .field("descriptor", &self.0.descriptor)
            .field("ring", &self.0.ring.descriptor())
            .field("size", &self.0.size)
            .finish()
    }
}

impl PartialEq for FiniteModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.descriptor == other.0.descriptor
    }
}

impl Eq for FiniteModule {}

impl FiniteModule {
    fn build(descriptor: String, ring: FiniteRing, size: usize, repr: ModuleRepr) -> Self {
        let mut data = ModuleData {
            descriptor,
            ring,
            size,
            repr,
            tables: None,
            nil: OnceLock::new(),
        };
        let tabulate = size <= TABULATE_MAX
            && data.ring.size().saturating_mul(size) <= ACTION_TABLE_MAX
            && !matches!(data.repr, ModuleRepr::Regular | ModuleRepr::Table { .. });
        if tabulate {
            data.tables = Some(tabulate_module(&data));
        }
        FiniteModule(Arc::new(data))
    }

    pub(crate) fn from_tables(
        descriptor: String,
        ring: FiniteRing,
        add: Vec<u32>,
        act: Vec<u32>,
        labels: Vec<String>,
    ) -> Self {
        let size = labels.len();
        FiniteModule(Arc::new(ModuleData {
            descriptor,
            ring,
            size,
            repr: ModuleRepr::Table { labels },
            tables: Some(ModuleTables { add, act }),
            nil: OnceLock::new(),
        }))
    }

    pub fn descriptor(&self) -> &str {
        &self.0.descriptor
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.0.ring
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn zero(&self) -> ElementId {
        0
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.0.size
    }

    pub fn contains(&self, m: ElementId) -> bool {
        m < self.0.size
    }

    #[inline]
    pub fn add(&self, m: ElementId, n: ElementId) -> ElementId {
        match &self.0.tables {
            Some(t) => t.add[m * self.0.size + n] as ElementId,
            None => structural_add(&self.0, m, n),
        }
    }

    /// Left action `r m`.
    #[inline]
    pub fn act(&self, r: ElementId, m: ElementId) -> ElementId {
        match &self.0.tables {
            Some(t) => t.act[r * self.0.size + m] as ElementId,
            None => structural_act(&self.0, r, m),
        }
    }

    pub fn neg(&self, m: ElementId) -> ElementId {
        let ring = self.ring();
        self.act(ring.neg(ring.one()), m)
    }

    pub fn sub(&self, m: ElementId, n: ElementId) -> ElementId {
        self.add(m, self.neg(n))
    }

    pub fn render(&self, m: ElementId) -> String {
        match &self.0.repr {
            ModuleRepr::Regular => self.ring().render(m),
            ModuleRepr::Matrix { layout, base, .. } => render_matrix(layout, m, |e| base.render(e)),
            ModuleRepr::Product { factors, strides } => {
                let parts: Vec<String> = factors
                    .iter()
                    .zip(strides)
                    .map(|(f, &s)| f.render((m / s) % f.size()))
                    .collect();
                format!("({})", parts.join(", "))
            }
            ModuleRepr::Sub {
                parent, members, ..
            } => parent.render(members[m]),
            ModuleRepr::Quotient { parent, reps, .. } => format!("{}+N", parent.render(reps[m])),
            ModuleRepr::Induced { target, .. } => target.render(m),
            ModuleRepr::Table { labels } => labels[m].clone(),
        }
    }

    /// The ambient module and the image of each element, for submodules.
    pub fn embedding(&self) -> Option<(&FiniteModule, &[ElementId])> {
        match &self.0.repr {
            ModuleRepr::Sub {
                parent, members, ..
            } => Some((parent, members)),
            _ => None,
        }
    }

    /// For a submodule, the element corresponding to `parent_element` of the ambient module.
    pub fn from_parent(&self, parent_element: ElementId) -> Option<ElementId> {
        match &self.0.repr {
            ModuleRepr::Sub { index, .. } => {
                let i = *index.get(parent_element)?;
                (i != NOT_A_MEMBER).then_some(i as ElementId)
            }
            _ => None,
        }
    }

    pub fn matrix_layout(&self) -> Option<(&MatrixLayout, &FiniteModule)> {
        match &self.0.repr {
            ModuleRepr::Matrix { layout, base, .. } => Some((layout, base)),
            _ => None,
        }
    }

    /// Element of a matrix module from dense row-major entries. For the regular module of a
    /// matrix ring this delegates to the ring encoding.
    pub fn matrix_element(&self, entries: &[ElementId]) -> Result<ElementId> {
        if let ModuleRepr::Regular = self.0.repr {
            return self.ring().matrix_element(entries);
        }
        let (layout, base) = self.matrix_layout().ok_or_else(|| {
            AlgebraError::ShapeMismatch(format!("{} is not a matrix module", self.descriptor()))
        })?;
        layout.encode(entries, base.zero()).ok_or_else(|| {
            AlgebraError::InvalidParameter(format!(
                "entries {entries:?} do not form an element of {}",
                self.descriptor()
            ))
        })
    }

    pub fn matrix_entries(&self, m: ElementId) -> Option<Vec<ElementId>> {
        match &self.0.repr {
            ModuleRepr::Regular => self.ring().matrix_entries(m),
            ModuleRepr::Matrix { layout, base, .. } => Some(layout.decode(m, base.zero())),
            _ => None,
        }
    }

    pub(crate) fn nil_cache(&self) -> &OnceLock<Arc<NilSet>> {
        &self.0.nil
    }

    fn element_check(&self, m: ElementId) -> Result<()> {
        if self.contains(m) {
            Ok(())
        } else {
            Err(AlgebraError::ElementOutOfRange {
                descriptor: self.descriptor().to_string(),
                element: m as u64,
                size: self.size(),
            })
        }
    }
}

fn structural_add(d: &ModuleData, m: ElementId, n: ElementId) -> ElementId {
    match &d.repr {
        ModuleRepr::Regular => d.ring.add(m, n),
        ModuleRepr::Matrix { layout, base, .. } => {
            let x = layout.decode(m, base.zero());
            let y = layout.decode(n, base.zero());
            let sum: Vec<ElementId> = x.iter().zip(&y).map(|(&p, &q)| base.add(p, q)).collect();
            layout.encode_unchecked(&sum)
        }
        ModuleRepr::Product { factors, strides } => factors
            .iter()
            .zip(strides)
            .map(|(f, &s)| f.add((m / s) % f.size(), (n / s) % f.size()) * s)
            .sum(),
        ModuleRepr::Sub {
            parent,
            members,
            index,
        } => index[parent.add(members[m], members[n])] as ElementId,
        ModuleRepr::Quotient {
            parent,
            reps,
            class_of,
        } => class_of[parent.add(reps[m], reps[n])] as ElementId,
        ModuleRepr::Induced { target, .. } => target.add(m, n),
        ModuleRepr::Table { .. } => unreachable!("table modules always carry tables"),
    }
}

fn structural_act(d: &ModuleData, r: ElementId, m: ElementId) -> ElementId {
    match &d.repr {
        ModuleRepr::Regular => d.ring.mul(r, m),
        ModuleRepr::Matrix {
            layout,
            ring_layout,
            base,
        } => {
            let n = layout.n();
            let a = ring_layout.decode(r, 0);
            let k = layout.decode(m, base.zero());
            let mut out = vec![base.zero(); n * n];
            for i in 0..n {
                for l in 0..n {
                    let ail = a[i * n + l];
                    if ail == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let p = base.act(ail, k[l * n + j]);
                        out[i * n + j] = base.add(out[i * n + j], p);
                    }
                }
            }
            layout.encode_unchecked(&out)
        }
        ModuleRepr::Product { factors, strides } => factors
            .iter()
            .zip(strides)
            .map(|(f, &s)| f.act(r, (m / s) % f.size()) * s)
            .sum(),
        ModuleRepr::Sub {
            parent,
            members,
            index,
        } => index[parent.act(r, members[m])] as ElementId,
        ModuleRepr::Quotient {
            parent,
            reps,
            class_of,
        } => class_of[parent.act(r, reps[m])] as ElementId,
        ModuleRepr::Induced { hom, target } => target.act(hom.apply(r), m),
        ModuleRepr::Table { .. } => unreachable!("table modules always carry tables"),
    }
}

fn tabulate_module(d: &ModuleData) -> ModuleTables {
    let size = d.size;
    let add: Vec<u32> = (0..size)
        .into_par_iter()
        .flat_map_iter(|m| (0..size).map(move |n| structural_add(d, m, n) as u32))
        .collect();
    let act: Vec<u32> = (0..d.ring.size())
        .into_par_iter()
        .flat_map_iter(|r| (0..size).map(move |m| structural_act(d, r, m) as u32))
        .collect();
    ModuleTables { add, act }
}

/// Checks the module axioms, exhaustively under the validation bound and by sampling above it.
pub fn validate_module(module: &FiniteModule, limits: &Limits) -> Result<()> {
    let ring = module.ring();
    let z = module.zero();
    let fail = |axiom: &'static str, elements: Vec<ElementId>| AlgebraError::AxiomViolation {
        descriptor: module.descriptor().to_string(),
        axiom,
        elements,
    };
    let (s, rs) = (module.size(), ring.size());
    if let Some(t) = scan_tuples(&[s], limits, 11, |t| {
        let m = t[0];
        module.add(m, z) == m && module.act(ring.one(), m) == m && module.add(m, module.neg(m)) == z
    }) {
        return Err(fail("identity, unitary action and inverses", t));
    }
    if let Some(t) = scan_tuples(&[s, s], limits, 12, |t| {
        module.add(t[0], t[1]) == module.add(t[1], t[0])
    }) {
        return Err(fail("additive commutativity", t));
    }
    if let Some(t) = scan_tuples(&[s, s, s], limits, 13, |t| {
        let (a, b, c) = (t[0], t[1], t[2]);
        module.add(module.add(a, b), c) == module.add(a, module.add(b, c))
    }) {
        return Err(fail("additive associativity", t));
    }
    if let Some(t) = scan_tuples(&[rs, s, s], limits, 14, |t| {
        let (r, m, n) = (t[0], t[1], t[2]);
        module.act(r, module.add(m, n)) == module.add(module.act(r, m), module.act(r, n))
    }) {
        return Err(fail("r(m + n) = rm + rn", t));
    }
    if let Some(t) = scan_tuples(&[rs, rs, s], limits, 15, |t| {
        let (r, q, m) = (t[0], t[1], t[2]);
        module.act(ring.add(r, q), m) == module.add(module.act(r, m), module.act(q, m))
            && module.act(ring.mul(r, q), m) == module.act(r, module.act(q, m))
    }) {
        return Err(fail("(r + s)m = rm + sm and (rs)m = r(sm)", t));
    }
    Ok(())
}

/// `_R R`: the ring acting on itself by left multiplication.
pub fn regular_module(ring: &FiniteRing) -> FiniteModule {
    FiniteModule::build(
        format!("regular({})", ring.descriptor()),
        ring.clone(),
        ring.size(),
        ModuleRepr::Regular,
    )
}

/// `M_n(M)`, `T_n(M)`, `S_n(M)` or `V_n(M)` over the matching matrix ring over `base_ring`.
pub fn matrix_module(
    shape: MatrixShape,
    base_ring: &FiniteRing,
    base_module: &FiniteModule,
    limits: &Limits,
) -> Result<FiniteModule> {
    if base_module.ring() != base_ring {
        return Err(AlgebraError::ShapeMismatch(format!(
            "{} is a module over {}, not over {}",
            base_module.descriptor(),
            base_module.ring().descriptor(),
            base_ring.descriptor()
        )));
    }
    let ring = make_matrix_ring(shape, base_ring, limits)?;
    let descriptor = format!(
        "{}({}, {})",
        shape.kind.module_constructor(),
        shape.n,
        base_module.descriptor()
    );
    let layout = MatrixLayout::new(shape, base_module.size());
    let size = limits.check_size(|| descriptor.clone(), layout.element_count())?;
    let ring_layout = MatrixLayout::new(shape, base_ring.size());
    let module = FiniteModule::build(
        descriptor,
        ring,
        size,
        ModuleRepr::Matrix {
            layout,
            ring_layout,
            base: base_module.clone(),
        },
    );
    validate_module(&module, limits)?;
    Ok(module)
}

/// Direct sum of modules over one ring; the first factor is the least significant digit.
pub fn product_module(factors: &[FiniteModule], limits: &Limits) -> Result<FiniteModule> {
    let first = factors.first().ok_or_else(|| {
        AlgebraError::InvalidParameter("a product needs at least one factor".into())
    })?;
    if let Some(bad) = factors.iter().find(|f| f.ring() != first.ring()) {
        return Err(AlgebraError::ShapeMismatch(format!(
            "{} and {} are over different rings",
            first.descriptor(),
            bad.descriptor()
        )));
    }
    let names: Vec<&str> = factors.iter().map(|f| f.descriptor()).collect();
    let descriptor = format!("prodmod({})", names.join(", "));
    let total = factors
        .iter()
        .fold(1u128, |acc, f| acc.saturating_mul(f.size() as u128));
    let size = limits.check_size(|| descriptor.clone(), total)?;
    let mut strides = Vec::with_capacity(factors.len());
    let mut acc = 1;
    for f in factors {
        strides.push(acc);
        acc *= f.size();
    }
    let module = FiniteModule::build(
        descriptor,
        first.ring().clone(),
        size,
        ModuleRepr::Product {
            factors: factors.to_vec(),
            strides,
        },
    );
    validate_module(&module, limits)?;
    Ok(module)
}

fn sub_from_members(parent: &FiniteModule, descriptor: String, members: Vec<ElementId>) -> FiniteModule {
    let mut index = vec![NOT_A_MEMBER; parent.size()];
    for (i, &m) in members.iter().enumerate() {
        index[m] = i as u32;
    }
    FiniteModule::build(
        descriptor,
        parent.ring().clone(),
        members.len(),
        ModuleRepr::Sub {
            parent: parent.clone(),
            members,
            index,
        },
    )
}

/// `Rm` as a submodule, re-indexed in the order of the ambient ids.
pub fn cyclic_submodule(module: &FiniteModule, m: ElementId) -> Result<FiniteModule> {
    module.element_check(m)?;
    let members: BTreeSet<ElementId> = module.ring().elements().map(|r| module.act(r, m)).collect();
    Ok(sub_from_members(
        module,
        format!("cyclic({}, {m})", module.descriptor()),
        members.into_iter().collect(),
    ))
}

/// Closure of `gens` under addition and the ring action.
pub fn submodule_generated(module: &FiniteModule, gens: &[ElementId]) -> Result<FiniteModule> {
    let mut gens: Vec<ElementId> = gens.to_vec();
    gens.sort_unstable();
    gens.dedup();
    for &g in &gens {
        module.element_check(g)?;
    }
    let members = span_members(module, &gens);
    Ok(sub_from_members(
        module,
        span_descriptor(module, &gens),
        members.to_vec(),
    ))
}

fn span_descriptor(module: &FiniteModule, gens: &[ElementId]) -> String {
    let list: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    format!("span({}, {{{}}})", module.descriptor(), list.join(", "))
}

fn span_members(module: &FiniteModule, gens: &[ElementId]) -> ElementSet {
    // the span is the sum of the cyclic submodules R g
    let mut span = ElementSet::from_ids(module.size(), [module.zero()]);
    for &g in gens {
        let orbit: BTreeSet<ElementId> = module.ring().elements().map(|r| module.act(r, g)).collect();
        let current = span.to_vec();
        for x in current {
            for &y in &orbit {
                span.insert(module.add(x, y));
            }
        }
    }
    span
}

/// The submodule with exactly the members of `set`, which must be closed under addition and
/// the ring action.
pub fn submodule_from_set(module: &FiniteModule, set: &ElementSet) -> Result<FiniteModule> {
    if set.universe() != module.size() {
        return Err(AlgebraError::InvalidParameter(format!(
            "set over {} elements does not live in {}",
            set.universe(),
            module.descriptor()
        )));
    }
    let members = set.to_vec();
    if !set.contains(module.zero()) {
        return Err(AlgebraError::InvalidParameter(format!(
            "{:?} misses zero, not a submodule of {}",
            members,
            module.descriptor()
        )));
    }
    check_closed(module, &members, set)?;
    Ok(sub_from_members(module, span_descriptor(module, &members), members))
}

fn check_closed(module: &FiniteModule, members: &[ElementId], set: &ElementSet) -> Result<()> {
    for &x in members {
        for &y in members {
            let s = module.add(x, y);
            if !set.contains(s) {
                return Err(AlgebraError::InvalidParameter(format!(
                    "not a submodule of {}: {x} + {y} = {s} leaves the set",
                    module.descriptor()
                )));
            }
        }
        for r in module.ring().elements() {
            let p = module.act(r, x);
            if !set.contains(p) {
                return Err(AlgebraError::InvalidParameter(format!(
                    "not a submodule of {}: {r} * {x} = {p} leaves the set",
                    module.descriptor()
                )));
            }
        }
    }
    Ok(())
}

/// `M/N` for a submodule `N` of `M`; cosets are indexed by increasing least representative.
pub fn quotient_module(module: &FiniteModule, sub: &FiniteModule) -> Result<FiniteModule> {
    let (parent, members) = sub.embedding().ok_or_else(|| {
        AlgebraError::InvalidParameter(format!(
            "{} is not a submodule (no embedding)",
            sub.descriptor()
        ))
    })?;
    if parent != module {
        return Err(AlgebraError::InvalidParameter(format!(
            "{} is a submodule of {}, not of {}",
            sub.descriptor(),
            parent.descriptor(),
            module.descriptor()
        )));
    }
    let set = ElementSet::from_ids(module.size(), members.iter().copied());
    check_closed(module, members, &set)?;
    let mut class_of = vec![NOT_A_MEMBER; module.size()];
    let mut reps = Vec::new();
    for m in module.elements() {
        if class_of[m] != NOT_A_MEMBER {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(m);
        for &n in members {
            class_of[module.add(m, n)] = c;
        }
    }
    let size = reps.len();
    Ok(FiniteModule::build(
        format!("quot({}, {})", module.descriptor(), sub.descriptor()),
        module.ring().clone(),
        size,
        ModuleRepr::Quotient {
            parent: module.clone(),
            reps,
            class_of,
        },
    ))
}

/// Restriction of scalars along `hom`: `r m = hom(r) m`.
pub fn induced_module(hom: &RingHom, module: &FiniteModule) -> Result<FiniteModule> {
    if module.ring() != hom.target() {
        return Err(AlgebraError::ShapeMismatch(format!(
            "{} is over {}, the homomorphism lands in {}",
            module.descriptor(),
            module.ring().descriptor(),
            hom.target().descriptor()
        )));
    }
    Ok(FiniteModule::build(
        format!("induced({}, {})", hom.descriptor(), module.descriptor()),
        hom.source().clone(),
        module.size(),
        ModuleRepr::Induced {
            hom: hom.clone(),
            target: module.clone(),
        },
    ))
}
