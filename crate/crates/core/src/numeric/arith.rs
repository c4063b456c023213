use core::cell::RefCell;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::error::{Error, Result};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Binary precision needed to carry `digits` decimal digits, plus a few spare bits.
pub fn digits_to_bits(digits: usize) -> usize {
    // log2(10) = 3.3219280948...
    (digits * 33_219_281).div_ceil(10_000_000) + 8
}

/// Decimal digits representable in `bits` binary digits (rounded down).
pub fn bits_to_digits(bits: usize) -> usize {
    bits * 3_010_299 / 10_000_000
}

/// Lossy conversion to `f64`. Values outside the `f64` range saturate to
/// zero or infinity.
pub fn to_f64(v: &BigFloat) -> f64 {
    if v.is_nan() {
        return f64::NAN;
    }
    if v.is_inf_pos() {
        return f64::INFINITY;
    }
    if v.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if v.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, exp, _)) = v.as_raw_parts() else {
        return f64::NAN;
    };
    // mantissa is 0.m with the top word most significant
    let top = words.last().copied().unwrap_or(0) as f64 / 18_446_744_073_709_551_616.0;
    let e = exp.clamp(-1100, 1100);
    let mag = libm::ldexp(top, e);
    if sign.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Arithmetic at a fixed binary working precision.
///
/// Holds the constant cache (pi, ln 2, ...) used by the transcendental
/// functions. An `Arith` is cheap to build and is meant to be owned by a
/// single evaluation.
pub struct Arith {
    bits: usize,
    consts: RefCell<Consts>,
}

impl core::fmt::Debug for Arith {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Arith").field("bits", &self.bits).finish()
    }
}

impl Arith {
    pub fn with_bits(bits: usize) -> Self {
        let consts = Consts::new().expect("constant cache allocation");
        Arith {
            bits: bits.max(64),
            consts: RefCell::new(consts),
        }
    }

    pub fn with_digits(digits: usize) -> Self {
        Self::with_bits(digits_to_bits(digits))
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn digits(&self) -> usize {
        bits_to_digits(self.bits)
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.bits)
    }

    pub fn uint(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.bits)
    }

    pub fn frac(&self, num: i64, den: i64) -> BigFloat {
        self.div(&self.int(num), &self.int(den))
    }

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.bits)
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::new(self.bits)
    }

    pub fn one(&self) -> BigFloat {
        self.int(1)
    }

    /// Rounds `v` to this precision.
    pub fn round(&self, v: &BigFloat) -> BigFloat {
        let mut r = v.clone();
        // only fails for NaN/Inf, which are passed through unchanged
        let _ = r.set_precision(self.bits, RM);
        r
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn sqr(&self, a: &BigFloat) -> BigFloat {
        a.mul(a, self.bits, RM)
    }

    pub fn recip(&self, a: &BigFloat) -> BigFloat {
        a.reciprocal(self.bits, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    /// Natural logarithm. Returns NaN for negative arguments and -Inf at zero.
    pub fn ln(&self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn exp(&self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn sin(&self, a: &BigFloat) -> BigFloat {
        a.sin(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn cos(&self, a: &BigFloat) -> BigFloat {
        a.cos(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn atan(&self, a: &BigFloat) -> BigFloat {
        a.atan(self.bits, RM, &mut self.consts.borrow_mut())
    }

    /// `a` raised to a real power (`a > 0`).
    pub fn pow(&self, a: &BigFloat, e: &BigFloat) -> BigFloat {
        a.pow(e, self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.bits, RM)
    }

    pub fn pi(&self) -> BigFloat {
        self.consts.borrow_mut().pi(self.bits, RM)
    }

    pub fn ln2(&self) -> BigFloat {
        self.consts.borrow_mut().ln_2(self.bits, RM)
    }

    pub fn ln10(&self) -> BigFloat {
        self.ln(&self.int(10))
    }

    /// `pi^2`.
    pub fn pi_sq(&self) -> BigFloat {
        let pi = self.pi();
        self.sqr(&pi)
    }

    /// Unit roundoff `2^-bits`.
    pub fn epsilon(&self) -> BigFloat {
        let mut e = self.one();
        e.set_exponent(1 - self.bits as i32);
        e
    }

    /// `10^e` for an integer exponent.
    pub fn pow10(&self, e: i64) -> BigFloat {
        let p = self.powi(&self.int(10), e.unsigned_abs() as usize);
        if e < 0 {
            self.recip(&p)
        } else {
            p
        }
    }

    /// Larger of two values, preferring `a` on ties or NaN.
    pub fn max(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        if b > a {
            b.clone()
        } else {
            a.clone()
        }
    }

    pub fn min(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        if b < a {
            b.clone()
        } else {
            a.clone()
        }
    }

    /// Parses a plain decimal literal already validated by the caller.
    pub(crate) fn parse_decimal(&self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, self.bits, RM, &mut self.consts.borrow_mut())
    }

    /// Scientific decimal rendering of the exact binary value.
    pub(crate) fn raw_decimal(&self, v: &BigFloat) -> Option<alloc::string::String> {
        v.format(Radix::Dec, RM, &mut self.consts.borrow_mut()).ok()
    }

    /// Rejects NaN and infinities.
    pub fn finite(&self, v: BigFloat, what: &'static str) -> Result<BigFloat> {
        if v.is_nan() || v.is_inf() {
            Err(Error::NonFinite(what))
        } else {
            Ok(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_bit_conversion_round_trips_downward() {
        for d in [1usize, 10, 30, 44, 130, 1000] {
            assert!(bits_to_digits(digits_to_bits(d)) >= d);
        }
    }

    #[test]
    fn to_f64_matches_simple_values() {
        let ar = Arith::with_digits(30);
        assert_eq!(to_f64(&ar.int(1)), 1.0);
        assert_eq!(to_f64(&ar.frac(-3, 4)), -0.75);
        assert_eq!(to_f64(&ar.zero()), 0.0);
        let third = to_f64(&ar.frac(1, 3));
        assert!((third - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(to_f64(&ar.pow10(-400)), 0.0);
    }

    #[test]
    fn epsilon_is_a_power_of_two() {
        let ar = Arith::with_bits(128);
        assert_eq!(to_f64(&ar.epsilon()), libm::ldexp(1.0, -128));
    }

    #[test]
    fn pi_is_accurate() {
        let ar = Arith::with_digits(40);
        let pi = to_f64(&ar.pi());
        assert!((pi - core::f64::consts::PI).abs() < 1e-15);
    }
}
