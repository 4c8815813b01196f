use thiserror::Error;

/// Errors raised by the field, polynomial, classification and spectral layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1 (k = {k}, n = {n})")]
    ZeroDegree { k: u32, n: u32 },

    #[error("modulus has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("modulus must be monic")]
    NonMonic,

    #[error("modulus is reducible over F_{0}")]
    Reducible(u64),

    #[error("field of size {p}^{degree} does not fit in 63 bits")]
    FieldTooLarge { p: u64, degree: u32 },

    #[error("operands belong to different fields")]
    SpecMismatch,

    #[error("coefficient vector has length {found}, expected {expected}")]
    BadLength { expected: usize, found: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,

    #[error("polynomial coefficient does not lie in the subfield F_q")]
    NotInSubfield,

    #[error("constant polynomial has no factorization")]
    ConstantPolynomial,

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("operation is undefined at the zero element")]
    ZeroElement,

    #[error("base element is not primitive")]
    NotPrimitive,

    #[error("element is not normal")]
    NotNormal,

    #[error("{d} does not divide the group order {order}")]
    NotDivisor { d: u64, order: u64 },

    #[error("domain size {size} exceeds the exhaustive-scan cap {cap}")]
    CapExceeded { size: u64, cap: u64 },

    #[error("numerical integrity violated in {what}: residual {residual:e}")]
    NumericalIntegrity { what: &'static str, residual: f64 },

    #[error("character is trivial")]
    TrivialCharacter,

    #[error("functions live on different domains")]
    DomainMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
