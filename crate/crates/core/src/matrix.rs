//! Matrix shapes and the mixed-radix encoding of admitted matrices.
//!
//! An admitted matrix is determined by its free parameters. Parameters are listed in row-major
//! order of the positions they occupy first, and parameter `k` is the `k`-th least significant
//! digit of the element index, in base `|entries|`.

use serde::Serialize;

use crate::ElementId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    /// All `n x n` arrays, `M_n`.
    Full,
    /// Zero below the diagonal, `T_n`.
    Upper,
    /// Upper triangular with constant diagonal, `S_n`.
    SpecialUpper,
    /// `R I + R V + ... + R V^(n-1)` with `V` the superdiagonal shift, `V_n`.
    VType,
}

impl ShapeKind {
    /// Constructor name of the ring in structure expressions.
    pub fn ring_constructor(self) -> &'static str {
        match self {
            ShapeKind::Full => "M",
            ShapeKind::Upper => "T",
            ShapeKind::SpecialUpper => "S",
            ShapeKind::VType => "V",
        }
    }

    /// Constructor name of the module in structure expressions.
    pub fn module_constructor(self) -> &'static str {
        match self {
            ShapeKind::Full => "matmod",
            ShapeKind::Upper => "trimod",
            ShapeKind::SpecialUpper => "smod",
            ShapeKind::VType => "vmod",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MatrixShape {
    pub kind: ShapeKind,
    pub n: usize,
}

impl MatrixShape {
    pub fn new(kind: ShapeKind, n: usize) -> Self {
        Self { kind, n }
    }
    pub fn full(n: usize) -> Self {
        Self::new(ShapeKind::Full, n)
    }
    pub fn upper(n: usize) -> Self {
        Self::new(ShapeKind::Upper, n)
    }
    pub fn special_upper(n: usize) -> Self {
        Self::new(ShapeKind::SpecialUpper, n)
    }
    pub fn v_type(n: usize) -> Self {
        Self::new(ShapeKind::VType, n)
    }

    pub fn free_positions(&self) -> usize {
        let n = self.n;
        match self.kind {
            ShapeKind::Full => n * n,
            ShapeKind::Upper => n * (n + 1) / 2,
            ShapeKind::SpecialUpper => n * (n - 1) / 2 + 1,
            ShapeKind::VType => n,
        }
    }

    /// Parameter index stored at `(i, j)`, or `None` for a position forced to zero.
    pub fn param_at(&self, i: usize, j: usize) -> Option<usize> {
        let n = self.n;
        match self.kind {
            ShapeKind::Full => Some(i * n + j),
            ShapeKind::Upper => {
                // row i starts after rows 0..i, which hold n + (n-1) + ... + (n-i+1) entries
                (j >= i).then(|| i * n - i * (i.saturating_sub(1)) / 2 + (j - i))
            }
            ShapeKind::SpecialUpper => {
                if j < i {
                    None
                } else if i == j {
                    Some(0)
                } else {
                    // strictly upper positions in row-major order, after the diagonal parameter
                    let before: usize = (0..i).map(|r| n - 1 - r).sum();
                    Some(1 + before + (j - i - 1))
                }
            }
            ShapeKind::VType => (j >= i).then(|| j - i),
        }
    }

    /// The position where parameter `k` is read when encoding.
    fn param_source(&self, k: usize) -> (usize, usize) {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| self.param_at(i, j) == Some(k))
            .expect("every parameter occupies a position")
    }
}

impl std::fmt::Display for MatrixShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}_{}", self.kind.ring_constructor(), self.n)
    }
}

/// Encoder between element indices and dense `n x n` entry arrays (row-major).
#[derive(Debug, Clone)]
pub struct MatrixLayout {
    pub shape: MatrixShape,
    /// Number of elements of the entry structure.
    pub radix: usize,
    params: Vec<Option<usize>>,
    sources: Vec<usize>,
    powers: Vec<usize>,
}

impl MatrixLayout {
    pub fn new(shape: MatrixShape, radix: usize) -> Self {
        let n = shape.n;
        let params = (0..n * n).map(|p| shape.param_at(p / n, p % n)).collect();
        let free = shape.free_positions();
        let sources = (0..free)
            .map(|k| {
                let (i, j) = shape.param_source(k);
                i * n + j
            })
            .collect();
        let mut powers = Vec::with_capacity(free);
        let mut acc = 1usize;
        for _ in 0..free {
            powers.push(acc);
            acc = acc.saturating_mul(radix);
        }
        Self {
            shape,
            radix,
            params,
            sources,
            powers,
        }
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    /// `radix ^ free_positions`, saturating.
    pub fn element_count(&self) -> u128 {
        (self.radix as u128).saturating_pow(self.shape.free_positions() as u32)
    }

    /// Dense row-major entries of element `id`; forced-zero positions get `zero`.
    pub fn decode(&self, id: ElementId, zero: ElementId) -> Vec<ElementId> {
        let mut out = Vec::with_capacity(self.params.len());
        self.decode_into(id, zero, &mut out);
        out
    }

    pub fn decode_into(&self, id: ElementId, zero: ElementId, out: &mut Vec<ElementId>) {
        out.clear();
        out.extend(self.params.iter().map(|p| match p {
            Some(k) => (id / self.powers[*k]) % self.radix,
            None => zero,
        }));
    }

    /// Index of the admitted matrix with these entries, without checking admissibility.
    pub fn encode_unchecked(&self, entries: &[ElementId]) -> ElementId {
        self.sources
            .iter()
            .zip(&self.powers)
            .map(|(&src, &pow)| entries[src] * pow)
            .sum()
    }

    /// Index of the matrix with these entries, or `None` when the matrix is not admitted.
    pub fn encode(&self, entries: &[ElementId], zero: ElementId) -> Option<ElementId> {
        if entries.len() != self.params.len() || entries.iter().any(|&e| e >= self.radix) {
            return None;
        }
        let id = self.encode_unchecked(entries);
        (self.decode(id, zero) == entries).then_some(id)
    }
}
