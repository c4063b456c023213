use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A numeric literal could not be parsed.
    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: &'static str },

    /// An argument is outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// `x = 0`; callers short-circuit to `R = 1`.
    #[error("degenerate input: x = 0")]
    Degenerate,

    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),

    /// An intermediate value overflowed or became NaN.
    #[error("non-finite intermediate value in {0}")]
    NonFinite(&'static str),

    /// A Gatteschi denominator vanished.
    #[error("iteration breakdown at n = {n}: {denominator} vanished")]
    Breakdown { n: usize, denominator: &'static str },

    /// The reciprocal series sums to something indistinguishable from zero.
    #[error("reciprocal instability: partial sum modulus {modulus} does not exceed the tail bound")]
    ReciprocalInstability { modulus: String },

    /// A bound that must hold by construction did not; the precision plan is wrong.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn domain(msg: &str) -> Self {
        Error::Domain(String::from(msg))
    }

    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Domain(_) | Error::Degenerate => "domain",
            Error::DivisionByZero(_) | Error::NonFinite(_) => "arithmetic",
            Error::Breakdown { .. } => "breakdown",
            Error::ReciprocalInstability { .. } => "instability",
            Error::Inconsistent(_) => "internal",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
