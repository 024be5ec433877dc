use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("{0} is not prime or exceeds 2^31")]
    NotPrime(u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("not a Lie algebra: {0}")]
    NotALieAlgebra(String),

    #[error("not a representation: {0}")]
    NotARepresentation(String),

    #[error("not a Nijenhuis operator: {0}")]
    NotNijenhuis(String),

    #[error("not a Nijenhuis representation: {0}")]
    NotANijenhuisRepresentation(String),

    #[error("hypothesis violated in {name}: {detail}")]
    HypothesisViolation { name: String, detail: String },

    #[error("not a cocycle: {0}")]
    NotACocycle(String),

    #[error("not an extension: {0}")]
    NotAnExtension(String),

    #[error("not a section: {0}")]
    NotASection(String),

    #[error("value lies outside the kernel subalgebra: {0}")]
    ValueOutsideKernel(String),

    #[error("witness does not satisfy the equivalence identities: {0}")]
    WitnessInvalid(String),

    #[error("kernel algebra is not abelian")]
    KernelNotAbelian,

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("map does not preserve the kernel subalgebra: {0}")]
    NotInvariant(String),

    #[error("extension does not split: {0}")]
    NotSplit(String),

    #[error("not a derivation: {0}")]
    NotDerivation(String),

    #[error("pair is not compatible with the induced representation: {0}")]
    IncompatiblePair(String),

    #[error("lambda does not satisfy the inducibility identities: {0}")]
    LambdaInvalid(String),

    #[error("enumeration needs {required} candidates, budget allows {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("enumeration requires a prime field, got {0}")]
    EnumerationNeedsPrimeField(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal invariant breached: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
