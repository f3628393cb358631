use thiserror::Error;

/// Errors produced while building rings or running spectral computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),
    #[error("base polynomial {0:?} is not irreducible over F_{1}")]
    ReduciblePolynomial(Vec<u64>, u64),
    #[error("polynomial {0:?} is not monic")]
    NotMonic(Vec<i64>),
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("structure constants fail the {0} check on basis elements {1:?}")]
    StructureCheck(&'static str, Vec<usize>),
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("coordinates {0:?} are out of range for this ring")]
    BadCoordinates(Vec<u64>),
    #[error("element index {0} out of range (ring order {1})")]
    IndexOutOfRange(usize, usize),
    #[error("{0} does not divide {1}")]
    NotDivisible(u64, u64),
    #[error("functional value {value} on generator {index} violates d*psi = 0 mod {modulus}")]
    FunctionalConstraint { index: usize, value: u64, modulus: u64 },
    #[error("expected {expected} functional values, got {got}")]
    FunctionalArity { expected: usize, got: usize },
    #[error("linear functional is degenerate")]
    DegenerateFunctional,
    #[error("ring spec variant has no canonical functional")]
    NoCanonicalFunctional,
    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(i64, u64),
    #[error("connection set contains 0")]
    ZeroInConnectionSet,
    #[error("connection set is not closed under negation (missing -{0})")]
    NotSymmetricSet(usize),
    #[error("size cap exceeded: {what} = {size} > {cap}")]
    SizeCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("character error: {0}")]
    Character(String),
}

pub type Result<T> = std::result::Result<T, Error>;
