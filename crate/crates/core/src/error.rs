use thiserror::Error;

use crate::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} has {size} elements, above the construction cap of {cap}")]
    SizeLimit { what: String, size: u128, cap: u128 },

    #[error("{what} needs {work} evaluations, above the decision cap of {cap} (use --force to override)")]
    DecisionCap { what: String, work: u128, cap: u128 },

    #[error("axiom violated in {descriptor}: {axiom} fails at {elements:?}")]
    AxiomViolation {
        descriptor: String,
        axiom: &'static str,
        elements: Vec<ElementId>,
    },

    #[error("not a ring homomorphism: {axiom} fails at ({a}, {b})")]
    InvalidHom {
        axiom: &'static str,
        a: ElementId,
        b: ElementId,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("element {element} out of range for {descriptor} of size {size}")]
    ElementOutOfRange {
        descriptor: String,
        element: u64,
        size: usize,
    },

    #[error("generator {0} is not central")]
    NonCentralGenerator(ElementId),

    #[error("multiplicative closure reaches zero via the product {chain:?}")]
    ZeroAbsorbed { chain: Vec<ElementId> },

    #[error("{0}")]
    Parse(#[from] crate::expr::ParseError),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
