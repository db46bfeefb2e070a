use num_rational::BigRational;
use thiserror::Error;

use crate::poly::Exponent;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable-count mismatch: expected {expected}, found {found}")]
    VariableCountMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for {num_vars} variables")]
    VariableIndexOutOfRange { index: usize, num_vars: usize },

    #[error("a map in {num_vars} variables needs {num_vars} components, got {components}")]
    ComponentCountMismatch { components: usize, num_vars: usize },

    #[error("a map needs at least one variable")]
    NoVariables,

    /// Maps must fix the origin. The caller is expected to subtract the
    /// constant vector before building the map.
    #[error(
        "component u{} has nonzero constant term {constant}; maps must fix the origin \
         (subtract the constant from u{} first)",
        component + 1,
        component + 1
    )]
    NonzeroConstantTerm { component: usize, constant: BigRational },

    #[error("Jacobian determinant is not constant ({} violating monomial(s))", violations.len())]
    NonConstantJacobian {
        principle_value: BigRational,
        violations: Vec<(Exponent, BigRational)>,
    },

    #[error("linear part is singular (Jacobian constant is zero)")]
    SingularLinearPart,

    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("residuum for degree {0} was not computed")]
    DegreeNotComputed(u32),

    #[error("coefficient of y in the linear component g is zero")]
    ZeroLeadingCoefficient,

    #[error("expected {expected}: {detail}")]
    UnexpectedShape { expected: &'static str, detail: String },

    #[error("linear form and direction are not orthogonal (inner product {0})")]
    OrthogonalityViolated(BigRational),

    #[error("invalid tame step {step}: {reason}")]
    InvalidStep { step: usize, reason: String },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}
