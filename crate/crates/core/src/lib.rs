//! Finite rings and modules, nilpotent module elements, and exhaustive deciders for the
//! semicommutativity hierarchy.
//!
//! Elements are dense indices `0..size` with zero at index 0. Structures are immutable and
//! cheap to clone, so deciders share them freely across rayon workers.

pub mod deciders;
pub mod error;
pub mod expr;
pub mod harness;
pub mod hom;
pub mod limits;
pub mod localization;
pub mod matrix;
pub mod module;
pub mod nilpotency;
pub mod ring;
pub mod set;

/// Index of an element inside its ring or module.
pub type ElementId = usize;

pub use deciders::{Method, Property, Verdict, Witness};
pub use error::{AlgebraError, Result};
pub use expr::{build, build_module, build_ring, parse_structure, Expr, Structure};
pub use hom::RingHom;
pub use limits::Limits;
pub use matrix::{MatrixShape, ShapeKind};
pub use module::FiniteModule;
pub use nilpotency::{Nilpotency, NilSet};
pub use ring::FiniteRing;
pub use set::ElementSet;

/// Version string embedded in every report.
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
