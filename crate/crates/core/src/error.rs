use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value is not rational")]
    NotRational,
    #[error("series or element is not invertible")]
    NotInvertible,
    #[error("truncation leaves no known coefficients")]
    TruncationEmpty,
    #[error("product has a vanishing factor (1 - q^0)")]
    VanishingFactor,
    #[error("denominator vanishes: {0}")]
    DegenerateDenominator(String),
    #[error("pole: {0}")]
    DegeneratePole(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("matrix is not in the required group: {0}")]
    NotInGroup(String),
    #[error("exponent outside the supported lattice: {0}")]
    ExponentDomain(String),
    #[error("t-polynomial fit failed at exponent {exponent}")]
    FitFailed { exponent: String },
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("evaluation too close to a pole: {0}")]
    NearPole(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
