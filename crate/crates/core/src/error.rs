use thiserror::Error;

/// Errors raised by the exact-arithmetic routines.
///
/// Most variants correspond to a violated precondition of one operation; the
/// payload names the offending input where that is cheap to report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element is not a unit: {0}")]
    NonUnit(String),
    #[error("characteristic {p} cannot support modulus {modulus} (denominators up to {modulus}-1 must be invertible)")]
    CharPrecision { p: u64, modulus: usize },
    #[error("series has nonzero constant term: {0}")]
    NonNilpotent(String),
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("root is not simple: derivative vanishes at {0}")]
    MultipleRoot(String),
    #[error("element does not live in a proper extension: {0}")]
    NotAnExtension(String),
    #[error("zero has no factorization")]
    ZeroElement,
    #[error("operation unsupported over field {0}")]
    UnsupportedField(String),
    #[error("inputs are not in general position: {0}")]
    NotInGeneralPosition(String),
    #[error("index {index} out of range for modulus {modulus}")]
    IndexOutOfRange { index: usize, modulus: usize },
    #[error("bad weight: {0}")]
    BadWeight(String),
    #[error("element is not flat (x and 1-x must both be units): {0}")]
    NotFlat(String),
    #[error("unit slot is zero")]
    ZeroUnit,
    #[error("function is not good at {point}: {reason}")]
    NotGood { point: String, reason: String },
    #[error("lifts differ modulo t^2 in slot {0}")]
    ModTwoMismatch(usize),
    #[error("configuration is not generic at {0}")]
    NotGeneric(String),
    #[error("cycle is not transverse: {0}")]
    NotTransverse(String),
    #[error("cycle is not admissible: {0}")]
    NotAdmissible(String),
    #[error("precision {got} too low, need at least {need}")]
    PrecisionTooLow { got: usize, need: usize },
    #[error("wedge is not in the image of delta on the infinitesimal part: {0}")]
    NotInFiltration(String),
    #[error("wedge term has no infinitesimal slot: {0}")]
    NotInfinitesimal(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(usize, usize),
    #[error("fields differ: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
