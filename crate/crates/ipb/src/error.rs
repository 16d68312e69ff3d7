use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("n = {n} exceeds the partition enumeration cap of {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("division by the zero series")]
    DivisionByZeroSeries,

    #[error("numerator valuation {numerator} is below denominator valuation {denominator}")]
    ValuationTooLow { numerator: usize, denominator: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("mu = {0} must be <= 0 for residue computations")]
    PositiveMu(i64),

    #[error("outside the supported domain: {0}")]
    Domain(String),

    #[error("no convergence within {iterations} iterations")]
    NoConvergence { iterations: usize },
}

impl Error {
    /// Stable machine-readable code, used by the CLI's error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EnumerationCap { .. } => "enumeration-cap",
            Error::NonzeroConstantTerm => "nonzero-constant-term",
            Error::DivisionByZeroSeries => "division-by-zero-series",
            Error::ValuationTooLow { .. } => "valuation-too-low",
            Error::NotPrime(_) => "not-prime",
            Error::PositiveMu(_) => "positive-mu",
            Error::Domain(_) => "domain",
            Error::NoConvergence { .. } => "no-convergence",
        }
    }
}
