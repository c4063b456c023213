use astro_float::BigFloat;

use super::arith::{to_f64, Arith};
use super::complex::ComplexValue;
use crate::engine::apriori_term_count;
use crate::error::{Error, Result};

/// Minimum number of guard digits carried beyond the requested accuracy.
pub const MIN_GUARD_DIGITS: usize = 10;

/// `ln 10`, for converting digits into the exponent `K` of a target `e^{-K}`.
pub const LN_10: f64 = core::f64::consts::LN_10;

/// Decimal precision plan for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    pub requested_digits: usize,
    pub working_digits: usize,
    pub guard_digits: usize,
}

impl PrecisionContext {
    pub fn new(requested_digits: usize, working_digits: usize, guard_digits: usize) -> Result<Self> {
        if requested_digits == 0 {
            return Err(Error::domain("requested digits must be positive"));
        }
        if guard_digits < MIN_GUARD_DIGITS {
            return Err(Error::domain("at least 10 guard digits are required"));
        }
        if working_digits < requested_digits + guard_digits {
            return Err(Error::domain("working digits must cover requested plus guard digits"));
        }
        Ok(PrecisionContext {
            requested_digits,
            working_digits,
            guard_digits,
        })
    }

    /// Fixed working precision; every digit beyond `requested_digits` counts as guard.
    pub fn with_working(requested_digits: usize, working_digits: usize) -> Result<Self> {
        let guard = working_digits.saturating_sub(requested_digits);
        Self::new(requested_digits, working_digits, guard)
    }

    /// The same plan with every digit count multiplied by `factor`.
    pub fn scaled(&self, factor: usize) -> Self {
        let f = factor.max(1);
        PrecisionContext {
            requested_digits: self.requested_digits * f,
            working_digits: self.working_digits * f,
            guard_digits: self.guard_digits * f,
        }
    }

    /// Certificate exponent `K = (requested + 2) ln 10` matching this plan.
    pub fn default_k(&self) -> f64 {
        (self.requested_digits as f64 + 2.0) * LN_10
    }

    pub fn arith(&self) -> Arith {
        Arith::with_digits(self.working_digits)
    }
}

/// `gamma = -log|x|`, strictly positive for `0 < |x| < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaParam {
    gamma: BigFloat,
}

impl GammaParam {
    pub fn new(gamma: BigFloat) -> Result<Self> {
        if gamma.is_nan() || gamma.is_inf() || !gamma.is_positive() || gamma.is_zero() {
            return Err(Error::domain("gamma must be a positive finite real"));
        }
        Ok(GammaParam { gamma })
    }

    pub fn from_f64(gamma: f64, ar: &Arith) -> Result<Self> {
        Self::new(ar.from_f64(gamma))
    }

    pub fn value(&self) -> &BigFloat {
        &self.gamma
    }

    pub fn as_f64(&self) -> f64 {
        to_f64(&self.gamma)
    }
}

/// Computes `gamma = -log|x|`.
///
/// `x = 0` yields [`Error::Degenerate`]; callers treat it as `R = 1`.
pub fn gamma_of(x: &ComplexValue, ar: &Arith) -> Result<GammaParam> {
    if x.is_zero() {
        return Err(Error::Degenerate);
    }
    if !x.is_finite() {
        return Err(Error::NonFinite("x"));
    }
    let norm = x.norm_sqr(ar);
    if norm >= ar.one() {
        return Err(Error::domain("x outside open unit disc"));
    }
    let gamma = ar.ln(&x.abs(ar)).neg();
    GammaParam::new(gamma)
}

fn ceil_nonneg(v: f64) -> usize {
    // absorbs representation error in products such as 1.07 / 0.01
    let c = libm::ceil(v - 1e-9);
    if c <= 0.0 {
        0
    } else {
        c as usize
    }
}

/// Working precision for `requested_digits` of final accuracy at a given `gamma`.
///
/// Adds `ceil(1.07/gamma)` digits for cancellation between the largest
/// term and the result, and `10 + ceil(log10 N)` guard digits for rounding
/// over the `N` planned terms (`N` from the a priori count with
/// `K = (requested + 2) ln 10`).
pub fn plan_precision(requested_digits: usize, gamma: &GammaParam) -> PrecisionContext {
    let requested = requested_digits.max(1);
    let g = gamma.as_f64();
    let k = (requested as f64 + 2.0) * LN_10;
    let n = apriori_term_count(g, k).max(1);
    let guard = MIN_GUARD_DIGITS + ceil_nonneg(libm::log10(n as f64));
    let cancellation = ceil_nonneg(1.07 / g);
    PrecisionContext {
        requested_digits: requested,
        working_digits: requested + cancellation + guard,
        guard_digits: guard,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_invariants_are_enforced() {
        assert!(PrecisionContext::new(30, 45, 10).is_ok());
        assert!(PrecisionContext::new(30, 39, 10).is_err());
        assert!(PrecisionContext::new(30, 50, 9).is_err());
        assert!(PrecisionContext::new(0, 50, 10).is_err());
        assert!(PrecisionContext::with_working(30, 35).is_err());
    }

    #[test]
    fn gamma_of_examples() {
        let ar = Arith::with_digits(40);
        let x = ComplexValue::real(ar.exp(&ar.int(-1)));
        let g = gamma_of(&x, &ar).unwrap();
        assert!((g.as_f64() - 1.0).abs() < 1e-15);

        let half = ComplexValue::real(ar.frac(1, 2));
        let g = gamma_of(&half, &ar).unwrap();
        assert!((g.as_f64() - core::f64::consts::LN_2).abs() < 1e-15);

        assert_eq!(
            gamma_of(&ComplexValue::one(&ar), &ar),
            Err(Error::domain("x outside open unit disc"))
        );
        assert_eq!(gamma_of(&ComplexValue::zero(&ar), &ar), Err(Error::Degenerate));
        let outside = ComplexValue::new(ar.frac(3, 5), ar.frac(4, 5));
        assert!(gamma_of(&outside, &ar).is_err());
    }

    #[test]
    fn plan_precision_examples() {
        let ar = Arith::with_digits(30);
        let p = plan_precision(30, &GammaParam::from_f64(1.0, &ar).unwrap());
        assert_eq!((p.working_digits, p.guard_digits), (44, 12));

        let p = plan_precision(10, &GammaParam::from_f64(0.01, &ar).unwrap());
        assert_eq!((p.working_digits, p.guard_digits), (130, 13));

        let p = plan_precision(1, &GammaParam::from_f64(1e12, &ar).unwrap());
        assert_eq!(p.working_digits, 1 + p.guard_digits);
    }
}
