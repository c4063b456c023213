use core::fmt;
use core::str::FromStr;

/// Evaluation algorithm tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Euler's quadratically convergent series, certified.
    Euler,
    /// Truncated defining product.
    Product,
    /// Truncated product with the first-order tail correction.
    Corrected,
    /// Exponential of the truncated Lambert series for `log R`.
    Lambert,
    /// Gatteschi's two-sequence iteration with the accelerated combination.
    Gatteschi,
    /// Reciprocal of the series for `1/R`.
    Slater,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Euler,
        Method::Product,
        Method::Corrected,
        Method::Lambert,
        Method::Gatteschi,
        Method::Slater,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Euler => "euler",
            Method::Product => "product",
            Method::Corrected => "corrected",
            Method::Lambert => "log",
            Method::Gatteschi => "gatteschi",
            Method::Slater => "slater",
        }
    }

    /// Whether the method emits a truncation certificate.
    pub fn is_certified(self) -> bool {
        matches!(self, Method::Euler)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownMethod;

impl fmt::Display for UnknownMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of euler, product, corrected, log, gatteschi, slater")
    }
}

impl FromStr for Method {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or(UnknownMethod)
    }
}
