use thiserror::Error;

/// Errors raised by series arithmetic, character construction, local-factor
/// algebra, data ingestion and identity checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("series is identically zero")]
    VanishingSeries,

    #[error("series must have at least one coefficient")]
    EmptySeries,

    #[error("coefficient at n = {0} is not finite")]
    NonFiniteCoefficient(usize),

    #[error("leading coefficient |a(1)| = {magnitude:e} is below the inversion threshold {threshold:e}")]
    NonUnitLeadingCoeff { magnitude: f64, threshold: f64 },

    #[error("Re(s) = {0} must exceed 1")]
    DomainError(f64),

    #[error("truncation too short: {0}")]
    TruncationTooShort(String),

    #[error("modulus {modulus} exceeds the configured bound {bound}")]
    ModulusTooLarge { modulus: u64, bound: u64 },

    #[error("zero denominator in linear twist")]
    ZeroDenominator,

    #[error("constant term {0} of the local series is not 1")]
    NonUnitConstantTerm(String),

    #[error("no rational fit with numerator degree <= {max_num} and denominator degree <= {max_den} matches to order {order}")]
    NoRationalFit {
        max_num: usize,
        max_den: usize,
        order: usize,
    },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("local factor does not have the (1 - aX)^-1 (1 - bX)^-1 shape: {0}")]
    WrongShape(String),

    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: u64, q: u64 },

    #[error("series does not split at p = {prime} (worst deviation {deviation:e} at n = {index})")]
    NotSplit {
        prime: u64,
        index: usize,
        deviation: f64,
    },

    #[error("{p} and {q} are not congruent modulo {modulus}")]
    CongruenceViolation { p: u64, q: u64, modulus: u64 },

    #[error("conductor is unknown or not a natural number")]
    MissingConductor,

    #[error("Weierstrass model is singular (discriminant 0)")]
    SingularModel,

    #[error("malformed file at line {line}: {message}")]
    MalformedFile { line: usize, message: String },

    #[error("unsupported format version: {0}")]
    VersionUnsupported(String),

    #[error("invalid L-function data: {0}")]
    InvalidData(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
