//! Fixtures shared by the benchmarks in `benches/`.

use nilcomm_core::{build_module, FiniteModule, Limits};

/// Modules benchmarked by the decider and nil-set groups, smallest first.
pub const FIXTURES: &[&str] = &[
    "regular(Z(64))",
    "regular(T(2, Z(4)))",
    "regular(V(3, Z(3)))",
    "matmod(2, regular(Z(2)))",
    "regular(M(2, Z(3)))",
];

pub fn fixture(text: &str) -> FiniteModule {
    build_module(text, &Limits::default()).unwrap_or_else(|e| panic!("{text}: {e}"))
}
