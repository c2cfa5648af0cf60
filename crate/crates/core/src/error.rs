use thiserror::Error;

/// Errors raised by constructors and structure maps.
///
/// Every variant carries enough context to rebuild the offending call; the
/// CLI serializes them as `{code, message, offending_input}` objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation is not reflexive at position {position}")]
    NotReflexive { position: usize },

    #[error("relation is not transitive: {a} <= {b} and {b} <= {c} but not {a} <= {c}")]
    NotTransitive { a: usize, b: usize, c: usize },

    #[error("relation matrix is not square of ground-set size {expected}")]
    MatrixShape { expected: usize },

    #[error("ground set has {got} labels, above the supported maximum of {max}")]
    GroundSetTooLarge { got: usize, max: usize },

    #[error("label {label} is not in the ground set")]
    LabelNotInGroundSet { label: u32 },

    #[error("label {label} occurs in both operands")]
    LabelCollision { label: u32 },

    #[error("operands live on different ground sets")]
    GroundSetMismatch,

    #[error("refinement is not finer than the base topology")]
    NotFiner,

    #[error("refinement is not admissible for the base topology")]
    NotAdmissible,

    #[error("set is not open in the topology")]
    NotOpen,

    #[error("expected a unique intermediate topology, found {found}")]
    LemmaViolation { found: usize },

    #[error("ground sets of the tensor factors do not partition the ambient ground set")]
    PartitionMismatch,

    #[error("tensor factors carry a conflicting kind tag")]
    KindMismatch,

    #[error("species tensor factors overlap at label {label}")]
    LabelOverlapInSpeciesTensor { label: u32 },

    #[error("product operands are basis elements of different spaces")]
    BasisKindMismatch,

    #[error("unknown check name: {name}")]
    UnknownCheck { name: String },
}

impl Error {
    /// Stable machine-readable code, used by the CLI error JSON.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotReflexive { .. } => "NotReflexive",
            Error::NotTransitive { .. } => "NotTransitive",
            Error::MatrixShape { .. } => "MatrixShape",
            Error::GroundSetTooLarge { .. } => "GroundSetTooLarge",
            Error::LabelNotInGroundSet { .. } => "LabelNotInGroundSet",
            Error::LabelCollision { .. } => "LabelCollision",
            Error::GroundSetMismatch => "GroundSetMismatch",
            Error::NotFiner => "NotFiner",
            Error::NotAdmissible => "NotAdmissible",
            Error::NotOpen => "NotOpen",
            Error::LemmaViolation { .. } => "LemmaViolation",
            Error::PartitionMismatch => "PartitionMismatch",
            Error::KindMismatch => "KindMismatch",
            Error::LabelOverlapInSpeciesTensor { .. } => "LabelOverlapInSpeciesTensor",
            Error::BasisKindMismatch => "BasisKindMismatch",
            Error::UnknownCheck { .. } => "UnknownCheck",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
