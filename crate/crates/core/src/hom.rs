//! Ring homomorphisms and the `V_n(R) -> R[x]/(x^n)` coefficient map.

use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::limits::Limits;
use crate::matrix::{MatrixShape, ShapeKind};
use crate::ring::{
    make_matrix_ring, make_poly_quotient_ring, poly_element, scan_tuples, FiniteRing, RingRepr,
};
use crate::set::ElementSet;
use crate::ElementId;

/// A validated unital ring homomorphism.
#[derive(Clone)]
pub struct RingHom(Arc<HomData>);

struct HomData {
    descriptor: String,
    source: FiniteRing,
    target: FiniteRing,
    map: Vec<ElementId>,
    surjective: bool,
}

impl std::fmt::Debug for RingHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RingHom")
            .field("descriptor", &self.0.descriptor)
            .field("surjective", &self.0.surjective)
            .finish()
    }
}

impl RingHom {
    pub fn descriptor(&self) -> &str {
        &self.0.descriptor
    }
    pub fn source(&self) -> &FiniteRing {
        &self.0.source
    }
    pub fn target(&self) -> &FiniteRing {
        &self.0.target
    }
    pub fn is_surjective(&self) -> bool {
        self.0.surjective
    }
    pub fn map(&self) -> &[ElementId] {
        &self.0.map
    }
    #[inline]
    pub fn apply(&self, r: ElementId) -> ElementId {
        self.0.map[r]
    }
}

/// The built-in map between two rings, when one exists: the identity, reduction
/// `Z(n) -> Z(m)` for `m | n`, projection of a product onto a factor, the constant-term map
/// `polyq(R, n) -> R` / diagonal map `V(n, R) -> R`, and the scalar embedding `R -> M(n, R)`.
pub fn canonical_map(source: &FiniteRing, target: &FiniteRing) -> Option<Vec<ElementId>> {
    if source == target {
        return Some(source.elements().collect());
    }
    match (source.repr(), target.repr()) {
        (RingRepr::Integers { modulus: n }, RingRepr::Integers { modulus: m }) if n % m == 0 => {
            return Some(source.elements().map(|x| x % m).collect());
        }
        (RingRepr::Product { factors, strides }, _) => {
            if let Some((f, &s)) = factors.iter().zip(strides).find(|(f, _)| *f == target) {
                return Some(source.elements().map(|x| (x / s) % f.size()).collect());
            }
        }
        (RingRepr::PolyQuotient { base, .. }, _) if base == target => {
            return Some(source.elements().map(|x| x % base.size()).collect());
        }
        _ => {}
    }
    if let Some((layout, base)) = source.matrix_layout() {
        if layout.shape.kind == ShapeKind::VType && base == target {
            return Some(source.elements().map(|x| x % base.size()).collect());
        }
    }
    if let Some((_, base)) = target.matrix_layout() {
        if base == source {
            return source
                .elements()
                .map(|r| target.matrix_scalar(r).ok())
                .collect();
        }
    }
    None
}

/// Validates `map` as a unital ring homomorphism `source -> target`.
pub fn make_ring_hom(
    source: &FiniteRing,
    target: &FiniteRing,
    map: Vec<ElementId>,
    limits: &Limits,
) -> Result<RingHom> {
    if map.len() != source.size() {
        return Err(AlgebraError::InvalidParameter(format!(
            "map has {} entries, {} has {} elements",
            map.len(),
            source.descriptor(),
            source.size()
        )));
    }
    if let Some((r, &img)) = map.iter().enumerate().find(|(_, &img)| img >= target.size()) {
        return Err(AlgebraError::InvalidParameter(format!(
            "{r} maps to {img}, outside {}",
            target.descriptor()
        )));
    }
    if map[source.zero()] != target.zero() {
        return Err(AlgebraError::InvalidHom {
            axiom: "phi(0) = 0",
            a: source.zero(),
            b: source.zero(),
        });
    }
    if map[source.one()] != target.one() {
        return Err(AlgebraError::InvalidHom {
            axiom: "phi(1) = 1",
            a: source.one(),
            b: source.one(),
        });
    }
    let s = source.size();
    if let Some(t) = scan_tuples(&[s, s], limits, 21, |t| {
        map[source.add(t[0], t[1])] == target.add(map[t[0]], map[t[1]])
    }) {
        return Err(AlgebraError::InvalidHom {
            axiom: "phi(a + b) = phi(a) + phi(b)",
            a: t[0],
            b: t[1],
        });
    }
    if let Some(t) = scan_tuples(&[s, s], limits, 22, |t| {
        map[source.mul(t[0], t[1])] == target.mul(map[t[0]], map[t[1]])
    }) {
        return Err(AlgebraError::InvalidHom {
            axiom: "phi(ab) = phi(a) phi(b)",
            a: t[0],
            b: t[1],
        });
    }
    let image = ElementSet::from_ids(target.size(), map.iter().copied());
    let list: Vec<String> = map.iter().map(|x| x.to_string()).collect();
    let descriptor = format!(
        "hom({}, {}, [{}])",
        source.descriptor(),
        target.descriptor(),
        list.join(", ")
    );
    Ok(RingHom(Arc::new(HomData {
        descriptor,
        source: source.clone(),
        target: target.clone(),
        map,
        surjective: image.is_full(),
    })))
}

/// The built-in homomorphism between two rings; see [`canonical_map`].
pub fn canonical_hom(source: &FiniteRing, target: &FiniteRing, limits: &Limits) -> Result<RingHom> {
    let map = canonical_map(source, target).ok_or_else(|| {
        AlgebraError::InvalidParameter(format!(
            "no built-in homomorphism {} -> {}",
            source.descriptor(),
            target.descriptor()
        ))
    })?;
    let hom = make_ring_hom(source, target, map, limits)?;
    let mut data = Arc::try_unwrap(hom.0).unwrap_or_else(|_| unreachable!("fresh hom is unshared"));
    data.descriptor = format!("hom({}, {})", source.descriptor(), target.descriptor());
    Ok(RingHom(Arc::new(data)))
}

/// The coefficient-reading map `r_0 I + r_1 V + ... -> r_0 + r_1 x + ...` from `V(n, base)` to
/// `polyq(base, n)`, as a list of images.
pub fn theta_map(v_ring: &FiniteRing, poly_ring: &FiniteRing) -> Option<Vec<ElementId>> {
    let (layout, _) = v_ring.matrix_layout()?;
    let n = layout.n();
    v_ring
        .elements()
        .map(|a| {
            let entries = v_ring.matrix_entries(a)?;
            poly_element(poly_ring, &entries[..n])
        })
        .collect()
}

/// Whether the coefficient-reading map `V_n(base) -> base[x]/(x^n)` is a bijective ring
/// homomorphism, checked on every pair of elements.
pub fn verify_theta_iso(base: &FiniteRing, n: usize, limits: &Limits) -> Result<bool> {
    let v_ring = make_matrix_ring(MatrixShape::v_type(n), base, limits)?;
    let poly = make_poly_quotient_ring(base, n, limits)?;
    if v_ring.size() != poly.size() {
        return Ok(false);
    }
    let Some(map) = theta_map(&v_ring, &poly) else {
        return Ok(false);
    };
    let exhaustive = Limits {
        exhaustive_validation: u64::MAX,
        ..limits.clone()
    };
    match make_ring_hom(&v_ring, &poly, map, &exhaustive) {
        Ok(h) => Ok(h.is_surjective()),
        Err(AlgebraError::InvalidHom { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}
