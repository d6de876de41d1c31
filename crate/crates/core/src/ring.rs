//! Finite unital rings over dense element indices.

use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{AlgebraError, Result};
use crate::limits::{Limits, TABULATE_MAX};
use crate::matrix::{MatrixLayout, MatrixShape};
use crate::set::ElementSet;
use crate::ElementId;

/// A finite associative ring with identity `one != zero`.
///
/// Cloning is cheap; the ring is immutable after construction. Small rings carry precomputed
/// operation tables, larger ones evaluate their operations structurally.
#[derive(Clone)]
pub struct FiniteRing(Arc<RingData>);

struct RingData {
    descriptor: String,
    size: usize,
    one: ElementId,
    repr: RingRepr,
    tables: Option<Tables>,
    center: OnceLock<ElementSet>,
    regular: OnceLock<ElementSet>,
    nil: OnceLock<ElementSet>,
    commutative: OnceLock<bool>,
}

pub(crate) enum RingRepr {
    Integers {
        modulus: usize,
    },
    Matrix {
        layout: MatrixLayout,
        base: FiniteRing,
    },
    Product {
        factors: Vec<FiniteRing>,
        strides: Vec<usize>,
    },
    PolyQuotient {
        base: FiniteRing,
        degree: usize,
    },
    /// Operations only exist as tables; `labels` renders each element.
    Table {
        labels: Vec<String>,
    },
}

pub(crate) struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

impl std::fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteRing")
            .field("descriptor", &self.0.descriptor)
            .field("size", &self.0.size)
            .finish()
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.descriptor == other.0.descriptor
    }
}

impl Eq for FiniteRing {}

impl FiniteRing {
    fn build(descriptor: String, size: usize, one: ElementId, repr: RingRepr) -> Self {
        let mut data = RingData {
            descriptor,
            size,
            one,
            repr,
            tables: None,
            center: OnceLock::new(),
            regular: OnceLock::new(),
            nil: OnceLock::new(),
            commutative: OnceLock::new(),
        };
        if size <= TABULATE_MAX && !matches!(data.repr, RingRepr::Table { .. }) {
            let tables = tabulate(&data);
            data.tables = Some(tables);
        }
        FiniteRing(Arc::new(data))
    }

    /// Ring given by full operation tables, e.g. a localization.
    pub(crate) fn from_tables(
        descriptor: String,
        one: ElementId,
        add: Vec<u32>,
        mul: Vec<u32>,
        neg: Vec<u32>,
        labels: Vec<String>,
    ) -> Self {
        let size = labels.len();
        debug_assert_eq!(add.len(), size * size);
        let data = RingData {
            descriptor,
            size,
            one,
            repr: RingRepr::Table { labels },
            tables: Some(Tables { add, mul, neg }),
            center: OnceLock::new(),
            regular: OnceLock::new(),
            nil: OnceLock::new(),
            commutative: OnceLock::new(),
        };
        FiniteRing(Arc::new(data))
    }

    pub fn descriptor(&self) -> &str {
        &self.0.descriptor
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    /// The zero element; every constructor indexes it as 0.
    pub fn zero(&self) -> ElementId {
        0
    }

    pub fn one(&self) -> ElementId {
        self.0.one
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.0.size
    }

    pub fn contains(&self, a: ElementId) -> bool {
        a < self.0.size
    }

    pub fn is_tabulated(&self) -> bool {
        self.0.tables.is_some()
    }

    pub(crate) fn repr(&self) -> &RingRepr {
        &self.0.repr
    }

    #[inline]
    pub fn add(&self, a: ElementId, b: ElementId) -> ElementId {
        match &self.0.tables {
            Some(t) => t.add[a * self.0.size + b] as ElementId,
            None => structural_add(&self.0, a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        match &self.0.tables {
            Some(t) => t.mul[a * self.0.size + b] as ElementId,
            None => structural_mul(&self.0, a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: ElementId) -> ElementId {
        match &self.0.tables {
            Some(t) => t.neg[a] as ElementId,
            None => structural_neg(&self.0, a),
        }
    }

    pub fn sub(&self, a: ElementId, b: ElementId) -> ElementId {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: ElementId, mut k: u64) -> ElementId {
        let mut base = a;
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Image of the integer `k` under `Z -> R`.
    pub fn integer(&self, k: i64) -> ElementId {
        let mut acc = self.zero();
        let unit = if k < 0 { self.neg(self.one()) } else { self.one() };
        // double-and-add keeps this logarithmic in |k|
        let mut step = unit;
        let mut m = k.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(acc, step);
            }
            step = self.add(step, step);
            m >>= 1;
        }
        acc
    }

    pub fn render(&self, a: ElementId) -> String {
        match &self.0.repr {
            RingRepr::Integers { .. } => a.to_string(),
            RingRepr::Matrix { layout, base } => render_matrix(layout, a, |e| base.render(e)),
            RingRepr::Product { factors, strides } => {
                let parts: Vec<String> = factors
                    .iter()
                    .zip(strides)
                    .map(|(f, &s)| f.render((a / s) % f.size()))
                    .collect();
                format!("({})", parts.join(", "))
            }
            RingRepr::PolyQuotient { base, degree } => {
                let coeffs = digits(a, base.size(), *degree);
                render_poly(&coeffs, base)
            }
            RingRepr::Table { labels } => labels[a].clone(),
        }
    }

    /// Matrix layout and entry ring, when this is a matrix ring.
    pub fn matrix_layout(&self) -> Option<(&MatrixLayout, &FiniteRing)> {
        match &self.0.repr {
            RingRepr::Matrix { layout, base } => Some((layout, base)),
            _ => None,
        }
    }

    /// Element of a matrix ring from dense row-major entries.
    pub fn matrix_element(&self, entries: &[ElementId]) -> Result<ElementId> {
        let (layout, base) = self.matrix_layout().ok_or_else(|| {
            AlgebraError::ShapeMismatch(format!("{} is not a matrix ring", self.descriptor()))
        })?;
        layout.encode(entries, base.zero()).ok_or_else(|| {
            AlgebraError::InvalidParameter(format!(
                "entries {entries:?} do not form an element of {}",
                self.descriptor()
            ))
        })
    }

    /// Dense row-major entries of a matrix-ring element.
    pub fn matrix_entries(&self, a: ElementId) -> Option<Vec<ElementId>> {
        self.matrix_layout()
            .map(|(layout, base)| layout.decode(a, base.zero()))
    }

    /// The matrix with `value` at `(i, j)` (zero-based) and zero elsewhere.
    pub fn matrix_unit(&self, i: usize, j: usize, value: ElementId) -> Result<ElementId> {
        let (layout, _) = self.matrix_layout().ok_or_else(|| {
            AlgebraError::ShapeMismatch(format!("{} is not a matrix ring", self.descriptor()))
        })?;
        let n = layout.n();
        let mut entries = vec![0; n * n];
        entries[i * n + j] = value;
        self.matrix_element(&entries)
    }

    /// The scalar matrix `value * I`.
    pub fn matrix_scalar(&self, value: ElementId) -> Result<ElementId> {
        let (layout, _) = self.matrix_layout().ok_or_else(|| {
            AlgebraError::ShapeMismatch(format!("{} is not a matrix ring", self.descriptor()))
        })?;
        let n = layout.n();
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = value;
        }
        self.matrix_element(&entries)
    }

    pub fn is_commutative(&self) -> bool {
        *self.0.commutative.get_or_init(|| match &self.0.repr {
            RingRepr::Integers { .. } => true,
            _ => self
                .elements()
                .into_par_iter()
                .all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a))),
        })
    }

    /// `C(R) = { c : cr = rc for all r }`.
    pub fn center(&self) -> &ElementSet {
        self.0.center.get_or_init(|| {
            if self.is_commutative() {
                return ElementSet::full(self.size());
            }
            let flags: Vec<bool> = self
                .elements()
                .into_par_iter()
                .map(|c| self.elements().all(|r| self.mul(c, r) == self.mul(r, c)))
                .collect();
            ElementSet::from_predicate(self.size(), |c| flags[c])
        })
    }

    /// Nonzero elements that are neither left nor right zero divisors.
    pub fn regular_elements(&self) -> &ElementSet {
        self.0.regular.get_or_init(|| {
            let flags: Vec<bool> = self
                .elements()
                .into_par_iter()
                .map(|s| {
                    s != self.zero()
                        && self.elements().skip(1).all(|r| {
                            self.mul(s, r) != self.zero() && self.mul(r, s) != self.zero()
                        })
                })
                .collect();
            ElementSet::from_predicate(self.size(), |s| flags[s])
        })
    }

    /// `Nil(R)`, the nilpotent elements of the ring.
    pub fn nil_ring_set(&self) -> &ElementSet {
        self.0.nil.get_or_init(|| {
            let flags: Vec<bool> = self
                .elements()
                .into_par_iter()
                .map(|a| self.is_nilpotent(a))
                .collect();
            ElementSet::from_predicate(self.size(), |a| flags[a])
        })
    }

    /// Whether some power of `a` vanishes.
    ///
    /// Powers of a nilpotent element are pairwise distinct until they reach zero, so the
    /// nilpotency index is at most `|R|` and `a^(2^ceil(log2 |R|))` decides membership.
    pub fn is_nilpotent(&self, a: ElementId) -> bool {
        let mut x = a;
        let mut bound = 1usize;
        while bound < self.size() {
            x = self.mul(x, x);
            bound <<= 1;
        }
        x == self.zero()
    }

    /// Least `k >= 1` with `a^k = 0`, or `None` when `a` is not nilpotent.
    pub fn nilpotency_index(&self, a: ElementId) -> Option<u64> {
        if !self.is_nilpotent(a) {
            return None;
        }
        let mut x = a;
        let mut k = 1u64;
        while x != self.zero() {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }
}

fn digits(mut id: ElementId, radix: usize, count: usize) -> Vec<ElementId> {
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(id % radix);
        id /= radix;
    }
    out
}

fn undigits(ds: &[ElementId], radix: usize) -> ElementId {
    ds.iter().rev().fold(0, |acc, &d| acc * radix + d)
}

pub(crate) fn render_matrix(
    layout: &MatrixLayout,
    a: ElementId,
    render: impl Fn(ElementId) -> String,
) -> String {
    let n = layout.n();
    let entries = layout.decode(a, 0);
    let rows: Vec<String> = entries
        .chunks(n)
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|&e| render(e)).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn render_poly(coeffs: &[ElementId], base: &FiniteRing) -> String {
    let simple = matches!(base.repr(), RingRepr::Integers { .. });
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != base.zero())
        .map(|(k, &c)| {
            let coeff = if simple {
                base.render(c)
            } else {
                format!("({})", base.render(c))
            };
            match k {
                0 => coeff,
                _ if c == base.one() => {
                    if k == 1 {
                        "x".to_string()
                    } else {
                        format!("x^{k}")
                    }
                }
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{k}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

fn structural_add(d: &RingData, a: ElementId, b: ElementId) -> ElementId {
    match &d.repr {
        RingRepr::Integers { modulus } => (a + b) % modulus,
        RingRepr::Matrix { layout, base } => {
            let x = layout.decode(a, base.zero());
            let y = layout.decode(b, base.zero());
            let sum: Vec<ElementId> = x.iter().zip(&y).map(|(&p, &q)| base.add(p, q)).collect();
            layout.encode_unchecked(&sum)
        }
        RingRepr::Product { factors, strides } => factors
            .iter()
            .zip(strides)
            .map(|(f, &s)| f.add((a / s) % f.size(), (b / s) % f.size()) * s)
            .sum(),
        RingRepr::PolyQuotient { base, degree } => {
            let x = digits(a, base.size(), *degree);
            let y = digits(b, base.size(), *degree);
            let sum: Vec<ElementId> = x.iter().zip(&y).map(|(&p, &q)| base.add(p, q)).collect();
            undigits(&sum, base.size())
        }
        RingRepr::Table { .. } => unreachable!("table rings always carry tables"),
    }
}

fn structural_neg(d: &RingData, a: ElementId) -> ElementId {
    match &d.repr {
        RingRepr::Integers { modulus } => (modulus - a) % modulus,
        RingRepr::Matrix { layout, base } => {
            let x = layout.decode(a, base.zero());
            let neg: Vec<ElementId> = x.iter().map(|&p| base.neg(p)).collect();
            layout.encode_unchecked(&neg)
        }
        RingRepr::Product { factors, strides } => factors
            .iter()
            .zip(strides)
            .map(|(f, &s)| f.neg((a / s) % f.size()) * s)
            .sum(),
        RingRepr::PolyQuotient { base, degree } => {
            let x = digits(a, base.size(), *degree);
            let neg: Vec<ElementId> = x.iter().map(|&p| base.neg(p)).collect();
            undigits(&neg, base.size())
        }
        RingRepr::Table { .. } => unreachable!("table rings always carry tables"),
    }
}

fn structural_mul(d: &RingData, a: ElementId, b: ElementId) -> ElementId {
    match &d.repr {
        RingRepr::Integers { modulus } => ((a as u64 * b as u64) % *modulus as u64) as ElementId,
        RingRepr::Matrix { layout, base } => {
            let n = layout.n();
            let x = layout.decode(a, base.zero());
            let y = layout.decode(b, base.zero());
            let mut out = vec![base.zero(); n * n];
            for i in 0..n {
                for k in 0..n {
                    let xik = x[i * n + k];
                    if xik == base.zero() {
                        continue;
                    }
                    for j in 0..n {
                        let p = base.mul(xik, y[k * n + j]);
                        out[i * n + j] = base.add(out[i * n + j], p);
                    }
                }
            }
            layout.encode_unchecked(&out)
        }
        RingRepr::Product { factors, strides } => factors
            .iter()
            .zip(strides)
            .map(|(f, &s)| f.mul((a / s) % f.size(), (b / s) % f.size()) * s)
            .sum(),
        RingRepr::PolyQuotient { base, degree } => {
            let x = digits(a, base.size(), *degree);
            let y = digits(b, base.size(), *degree);
            let mut out = vec![base.zero(); *degree];
            for (i, &p) in x.iter().enumerate() {
                if p == base.zero() {
                    continue;
                }
                for (j, &q) in y.iter().enumerate().take(*degree - i) {
                    out[i + j] = base.add(out[i + j], base.mul(p, q));
                }
            }
            undigits(&out, base.size())
        }
        RingRepr::Table { .. } => unreachable!("table rings always carry tables"),
    }
}

fn tabulate(d: &RingData) -> Tables {
    let size = d.size;
    let rows: Vec<(Vec<u32>, Vec<u32>)> = (0..size)
        .into_par_iter()
        .map(|a| {
            let add = (0..size).map(|b| structural_add(d, a, b) as u32).collect();
            let mul = (0..size).map(|b| structural_mul(d, a, b) as u32).collect();
            (add, mul)
        })
        .collect();
    let mut add = Vec::with_capacity(size * size);
    let mut mul = Vec::with_capacity(size * size);
    for (ra, rm) in rows {
        add.extend(ra);
        mul.extend(rm);
    }
    let neg = (0..size).map(|a| structural_neg(d, a) as u32).collect();
    Tables { add, mul, neg }
}

/// Runs `check` over every tuple of `arity` elements of `0..size`, or over
/// `limits.validation_samples` seeded random tuples when the tuple count is above the
/// exhaustive-validation bound. Returns the first failing tuple.
pub(crate) fn scan_tuples(
    sizes: &[usize],
    limits: &Limits,
    salt: u64,
    check: impl Fn(&[ElementId]) -> bool + Sync,
) -> Option<Vec<ElementId>> {
    let total: u128 = sizes.iter().map(|&s| s as u128).product();
    if total == 0 {
        return None;
    }
    if total <= limits.exhaustive_validation as u128 {
        let first = sizes[0];
        let rest_total: usize = sizes[1..].iter().product();
        (0..first).into_par_iter().find_map_first(|x| {
            let mut tuple = vec![0; sizes.len()];
            tuple[0] = x;
            for mut idx in 0..rest_total {
                for (slot, &s) in tuple[1..].iter_mut().zip(&sizes[1..]) {
                    *slot = idx % s;
                    idx /= s;
                }
                if !check(&tuple) {
                    return Some(tuple.clone());
                }
            }
            None
        })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(limits.seed ^ salt);
        let mut tuple = vec![0; sizes.len()];
        for _ in 0..limits.validation_samples {
            for (slot, &s) in tuple.iter_mut().zip(sizes) {
                *slot = rng.gen_range(0..s);
            }
            if !check(&tuple) {
                return Some(tuple);
            }
        }
        None
    }
}

/// Checks the ring axioms, exhaustively under the validation bound and by sampling above it.
pub fn validate_ring(ring: &FiniteRing, limits: &Limits) -> Result<()> {
    let z = ring.zero();
    let one = ring.one();
    let fail = |axiom: &'static str, elements: Vec<ElementId>| AlgebraError::AxiomViolation {
        descriptor: ring.descriptor().to_string(),
        axiom,
        elements,
    };
    if one == z {
        return Err(fail("one != zero", vec![one]));
    }
    let s = ring.size();
    if let Some(t) = scan_tuples(&[s], limits, 1, |t| {
        let a = t[0];
        ring.add(a, z) == a
            && ring.add(a, ring.neg(a)) == z
            && ring.mul(a, one) == a
            && ring.mul(one, a) == a
    }) {
        return Err(fail("identities and additive inverses", t));
    }
    if let Some(t) = scan_tuples(&[s, s], limits, 2, |t| {
        ring.add(t[0], t[1]) == ring.add(t[1], t[0])
    }) {
        return Err(fail("additive commutativity", t));
    }
    if let Some(t) = scan_tuples(&[s, s, s], limits, 3, |t| {
        let (a, b, c) = (t[0], t[1], t[2]);
        ring.add(ring.add(a, b), c) == ring.add(a, ring.add(b, c))
    }) {
        return Err(fail("additive associativity", t));
    }
    if let Some(t) = scan_tuples(&[s, s, s], limits, 4, |t| {
        let (a, b, c) = (t[0], t[1], t[2]);
        ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
    }) {
        return Err(fail("multiplicative associativity", t));
    }
    if let Some(t) = scan_tuples(&[s, s, s], limits, 5, |t| {
        let (a, b, c) = (t[0], t[1], t[2]);
        ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c))
            && ring.mul(ring.add(a, b), c) == ring.add(ring.mul(a, c), ring.mul(b, c))
    }) {
        return Err(fail("distributivity", t));
    }
    Ok(())
}

/// The ring of integers modulo `n`; element `k` is the residue `k`.
pub fn make_zn(n: usize) -> Result<FiniteRing> {
    if n < 2 {
        return Err(AlgebraError::InvalidParameter(format!(
            "Z(n) needs n >= 2, got {n}"
        )));
    }
    if n > u32::MAX as usize {
        return Err(AlgebraError::InvalidParameter(format!("modulus {n} too large")));
    }
    Ok(FiniteRing::build(
        format!("Z({n})"),
        n,
        1,
        RingRepr::Integers { modulus: n },
    ))
}

/// `M_n(R)`, `T_n(R)`, `S_n(R)` or `V_n(R)` over `base`, depending on `shape.kind`.
pub fn make_matrix_ring(shape: MatrixShape, base: &FiniteRing, limits: &Limits) -> Result<FiniteRing> {
    if shape.n == 0 {
        return Err(AlgebraError::InvalidParameter(
            "matrix dimension must be at least 1".into(),
        ));
    }
    let descriptor = format!(
        "{}({}, {})",
        shape.kind.ring_constructor(),
        shape.n,
        base.descriptor()
    );
    let layout = MatrixLayout::new(shape, base.size());
    let size = limits.check_size(|| descriptor.clone(), layout.element_count())?;
    let n = shape.n;
    let mut identity = vec![base.zero(); n * n];
    for i in 0..n {
        identity[i * n + i] = base.one();
    }
    let one = layout
        .encode(&identity, base.zero())
        .expect("identity is admitted by every shape");
    let ring = FiniteRing::build(
        descriptor,
        size,
        one,
        RingRepr::Matrix {
            layout,
            base: base.clone(),
        },
    );
    validate_ring(&ring, limits)?;
    Ok(ring)
}

/// Componentwise product ring; the first factor is the least significant digit.
pub fn make_product_ring(factors: &[FiniteRing], limits: &Limits) -> Result<FiniteRing> {
    if factors.is_empty() {
        return Err(AlgebraError::InvalidParameter(
            "a product needs at least one factor".into(),
        ));
    }
    let names: Vec<&str> = factors.iter().map(|f| f.descriptor()).collect();
    let descriptor = format!("prod({})", names.join(", "));
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
    let one = factors.iter().zip(&strides).map(|(f, &s)| f.one() * s).sum();
    let ring = FiniteRing::build(
        descriptor,
        size,
        one,
        RingRepr::Product {
            factors: factors.to_vec(),
            strides,
        },
    );
    validate_ring(&ring, limits)?;
    Ok(ring)
}

/// `R[x]/(x^n)`; element indices are coefficient tuples `(r_0, ..., r_{n-1})` with `r_0`
/// least significant.
pub fn make_poly_quotient_ring(base: &FiniteRing, n: usize, limits: &Limits) -> Result<FiniteRing> {
    if n == 0 {
        return Err(AlgebraError::InvalidParameter(
            "polyq needs n >= 1".into(),
        ));
    }
    let descriptor = format!("polyq({}, {n})", base.descriptor());
    let total = (base.size() as u128).saturating_pow(n as u32);
    let size = limits.check_size(|| descriptor.clone(), total)?;
    let ring = FiniteRing::build(
        descriptor,
        size,
        base.one(),
        RingRepr::PolyQuotient {
            base: base.clone(),
            degree: n,
        },
    );
    validate_ring(&ring, limits)?;
    Ok(ring)
}

/// Coefficients of an element of `R[x]/(x^n)`, constant term first.
pub fn poly_coefficients(ring: &FiniteRing, a: ElementId) -> Option<Vec<ElementId>> {
    match ring.repr() {
        RingRepr::PolyQuotient { base, degree } => Some(digits(a, base.size(), *degree)),
        _ => None,
    }
}

/// Element of `R[x]/(x^n)` from its coefficients, constant term first.
pub fn poly_element(ring: &FiniteRing, coeffs: &[ElementId]) -> Option<ElementId> {
    match ring.repr() {
        RingRepr::PolyQuotient { base, degree }
            if coeffs.len() == *degree && coeffs.iter().all(|&c| c < base.size()) =>
        {
            Some(undigits(coeffs, base.size()))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn zn_basics() {
        let z2 = make_zn(2).unwrap();
        assert_eq!(z2.size(), 2);
        assert_eq!(z2.add(1, 1), 0);
        let z12 = make_zn(12).unwrap();
        assert_eq!(z12.mul(5, 5), 1);
        assert_eq!(z12.descriptor(), "Z(12)");
        assert!(make_zn(1).is_err());
        assert!(make_zn(0).is_err());
        validate_ring(&z12, &lim()).unwrap();
    }

    #[test]
    fn nil_ring_sets() {
        let z4 = make_zn(4).unwrap();
        assert_eq!(z4.nil_ring_set().to_vec(), vec![0, 2]);
        let z6 = make_zn(6).unwrap();
        assert_eq!(z6.nil_ring_set().to_vec(), vec![0]);
        let t2 = make_matrix_ring(MatrixShape::upper(2), &make_zn(2).unwrap(), &lim()).unwrap();
        let e12 = t2.matrix_unit(0, 1, 1).unwrap();
        assert_eq!(t2.nil_ring_set().to_vec(), vec![0, e12]);
    }

    #[test]
    fn nil_ring_set_matches_power_walk() {
        // oracle: repeated multiplication up to |R| steps
        for n in 2..40 {
            let z = make_zn(n).unwrap();
            for a in z.elements() {
                let mut x = a;
                let mut hit = x == 0;
                for _ in 0..n {
                    x = z.mul(x, a);
                    hit |= x == 0;
                }
                assert_eq!(z.nil_ring_set().contains(a), hit, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn matrix_ring_sizes() {
        let z2 = make_zn(2).unwrap();
        let z4 = make_zn(4).unwrap();
        assert_eq!(make_matrix_ring(MatrixShape::full(2), &z2, &lim()).unwrap().size(), 16);
        assert_eq!(make_matrix_ring(MatrixShape::upper(2), &z4, &lim()).unwrap().size(), 64);
        assert_eq!(make_matrix_ring(MatrixShape::special_upper(3), &z2, &lim()).unwrap().size(), 16);
        let v2 = make_matrix_ring(MatrixShape::v_type(2), &z2, &lim()).unwrap();
        assert_eq!(v2.size(), 4);
    }

    #[test]
    fn v_type_multiplication() {
        // (aI + bV)(cI + dV) = acI + (ad + bc)V since V^2 = 0
        let z3 = make_zn(3).unwrap();
        let v2 = make_matrix_ring(MatrixShape::v_type(2), &z3, &lim()).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let x = v2.matrix_element(&[a, b, 0, a]).unwrap();
                        let y = v2.matrix_element(&[c, d, 0, c]).unwrap();
                        let ac = (a * c) % 3;
                        let mixed = (a * d + b * c) % 3;
                        let expect = v2.matrix_element(&[ac, mixed, 0, ac]).unwrap();
                        assert_eq!(v2.mul(x, y), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn construction_cap_is_enforced() {
        let z2 = make_zn(2).unwrap();
        let err = make_matrix_ring(MatrixShape::full(5), &z2, &lim()).unwrap_err();
        assert!(matches!(err, AlgebraError::SizeLimit { cap, .. } if cap == 1 << 20));
    }

    #[test]
    fn product_rings() {
        let z2 = make_zn(2).unwrap();
        let p = make_product_ring(std::slice::from_ref(&z2), &lim()).unwrap();
        assert_eq!(p.size(), 2);
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(p.add(a, b), z2.add(a, b));
                assert_eq!(p.mul(a, b), z2.mul(a, b));
            }
        }
        let pp = make_product_ring(&[z2.clone(), z2], &lim()).unwrap();
        // (1, 0) has index 1
        assert_eq!(pp.mul(1, 1), 1);
        assert_eq!(pp.render(1), "(1, 0)");
        let z4z3 = make_product_ring(&[make_zn(4).unwrap(), make_zn(3).unwrap()], &lim()).unwrap();
        assert_eq!(z4z3.size(), 12);
        assert!(make_product_ring(&[], &lim()).is_err());
    }

    #[test]
    fn poly_quotients() {
        let z2 = make_zn(2).unwrap();
        let q1 = make_poly_quotient_ring(&z2, 1, &lim()).unwrap();
        assert_eq!(q1.size(), 2);
        assert_eq!(q1.mul(1, 1), 1);
        let q2 = make_poly_quotient_ring(&z2, 2, &lim()).unwrap();
        let x = poly_element(&q2, &[0, 1]).unwrap();
        assert_eq!(q2.mul(x, x), 0);
        let z3 = make_zn(3).unwrap();
        let q = make_poly_quotient_ring(&z3, 2, &lim()).unwrap();
        let a = poly_element(&q, &[1, 1]).unwrap();
        let b = poly_element(&q, &[1, 2]).unwrap();
        assert_eq!(q.mul(a, b), q.one());
        assert_eq!(q.render(b), "1+2x");
    }

    #[test]
    fn centers() {
        let z12 = make_zn(12).unwrap();
        assert_eq!(z12.center().len(), 12);
        let z2 = make_zn(2).unwrap();
        let m2 = make_matrix_ring(MatrixShape::full(2), &z2, &lim()).unwrap();
        assert_eq!(m2.center().to_vec(), vec![0, m2.one()]);
        let t2 = make_matrix_ring(MatrixShape::upper(2), &z2, &lim()).unwrap();
        assert_eq!(t2.center().to_vec(), vec![0, t2.one()]);
    }

    #[test]
    fn regular_element_sets() {
        assert_eq!(make_zn(6).unwrap().regular_elements().to_vec(), vec![1, 5]);
        assert_eq!(make_zn(5).unwrap().regular_elements().to_vec(), vec![1, 2, 3, 4]);
        assert_eq!(make_zn(4).unwrap().regular_elements().to_vec(), vec![1, 3]);
    }

    #[test]
    fn regular_and_nil_are_disjoint() {
        let z2 = make_zn(2).unwrap();
        let z4 = make_zn(4).unwrap();
        let mut rings: Vec<FiniteRing> = (2..30).map(|n| make_zn(n).unwrap()).collect();
        rings.push(make_matrix_ring(MatrixShape::full(2), &z2, &lim()).unwrap());
        rings.push(make_matrix_ring(MatrixShape::upper(2), &z4, &lim()).unwrap());
        rings.push(make_matrix_ring(MatrixShape::v_type(3), &z2, &lim()).unwrap());
        for r in &rings {
            assert!(r.regular_elements().is_disjoint(r.nil_ring_set()), "{}", r.descriptor());
            assert!(r.regular_elements().contains(r.one()));
        }
    }

    #[test]
    fn matrix_rendering() {
        let z2 = make_zn(2).unwrap();
        let m2 = make_matrix_ring(MatrixShape::full(2), &z2, &lim()).unwrap();
        assert_eq!(m2.render(m2.one()), "[[1,0],[0,1]]");
        assert_eq!(m2.render(2), "[[0,1],[0,0]]");
    }

    #[test]
    fn integer_images() {
        let z7 = make_zn(7).unwrap();
        assert_eq!(z7.integer(-1), 6);
        assert_eq!(z7.integer(10), 3);
        let m2 = make_matrix_ring(MatrixShape::full(2), &make_zn(3).unwrap(), &lim()).unwrap();
        assert_eq!(m2.integer(2), m2.matrix_scalar(2).unwrap());
    }

    #[test]
    fn nilpotency_indices() {
        let z8 = make_zn(8).unwrap();
        assert_eq!(z8.nilpotency_index(0), Some(1));
        assert_eq!(z8.nilpotency_index(4), Some(2));
        assert_eq!(z8.nilpotency_index(2), Some(3));
        assert_eq!(z8.nilpotency_index(3), None);
    }
}
