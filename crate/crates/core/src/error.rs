use thiserror::Error;

/// Errors raised by the workbench.
///
/// Variants fall into three classes (see [`ErrorClass`]): malformed input,
/// violated preconditions, and internal invariant violations. The last class
/// signals a bug in this crate, never a property of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("not a lattice: {a} and {b} have no {op}")]
    NotALattice {
        a: usize,
        b: usize,
        op: &'static str,
    },
    #[error("poset has no least element")]
    NoBottom,
    #[error("lattice has no top element")]
    UnboundedLattice,
    #[error("sequence is not independent")]
    NotIndependent,
    #[error("structure too large: {0}")]
    TooLarge(String),
    #[error("lattice is not complemented: element {0} has no complement")]
    NotComplemented(usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no sectional complement of {a} in [0, {b}]")]
    NoSectionalComplement { a: usize, b: usize },
    #[error("lemma violated: {0}")]
    LemmaViolated(String),
    #[error("conclusion violated: {0}")]
    ConclusionViolated(String),
    #[error("axiom violated: {0}")]
    AxiomViolated(String),
    #[error("element {0} is not in the Boolean range")]
    NotInRange(usize),
    #[error("not an additive V-relation: {axiom} fails at {witness}")]
    NotAVRelation { axiom: String, witness: String },
    #[error("ring is not regular: {0} has no quasi-inverse")]
    NotRegular(usize),
    #[error("ideals do not form a direct sum decomposition of eR")]
    NotADirectSum,
    #[error("lattice map not well defined: {0}")]
    NotWellDefined(String),
    #[error("stage {needed} exceeds the materialization bound {depth}")]
    StageOverflow { needed: usize, depth: usize },
    #[error("violation found: {0}")]
    ViolationFound(String),
    #[error("incoherent system: {0}")]
    IncoherentSystem(String),
    #[error("idempotent decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("directed system has no cofinal stage within depth")]
    NoCofinalStage,
    #[error("no ring homomorphism lifts the lattice map")]
    NoLift,
    #[error("{0} ring homomorphisms lift the lattice map")]
    MultipleLifts(usize),
    #[error("stage {0} has no coordinatizing ring")]
    MissingStageRing(usize),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Malformed,
    Precondition,
    Invariant,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            Malformed(_) => ErrorClass::Malformed,
            LemmaViolated(_) | ConclusionViolated(_) | NotWellDefined(_) | ViolationFound(_) => {
                ErrorClass::Invariant
            }
            _ => ErrorClass::Precondition,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
