use astro_float::BigFloat;

use super::arith::Arith;
use crate::error::{Error, Result};

/// Arbitrary-precision complex number.
///
/// Arithmetic goes through an [`Arith`], which fixes the precision of
/// every result.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexValue {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl ComplexValue {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        ComplexValue { re, im }
    }

    pub fn real(re: BigFloat) -> Self {
        let p = re.precision().unwrap_or(64);
        ComplexValue {
            re,
            im: BigFloat::new(p),
        }
    }

    pub fn zero(ar: &Arith) -> Self {
        ComplexValue::new(ar.zero(), ar.zero())
    }

    pub fn one(ar: &Arith) -> Self {
        ComplexValue::new(ar.one(), ar.zero())
    }

    pub fn from_int(v: i64, ar: &Arith) -> Self {
        ComplexValue::new(ar.int(v), ar.zero())
    }

    pub fn from_f64(re: f64, im: f64, ar: &Arith) -> Self {
        ComplexValue::new(ar.from_f64(re), ar.from_f64(im))
    }

    /// `modulus * e^{i arg}`.
    pub fn from_polar(modulus: &BigFloat, arg: &BigFloat, ar: &Arith) -> Self {
        ComplexValue::new(
            ar.mul(modulus, &ar.cos(arg)),
            ar.mul(modulus, &ar.sin(arg)),
        )
    }

    /// Primitive `m`-th root of unity raised to the `j`-th power.
    pub fn root_of_unity(j: i64, m: i64, ar: &Arith) -> Self {
        let arg = ar.div(&ar.mul(&ar.int(2 * j), &ar.pi()), &ar.int(m));
        ComplexValue::from_polar(&ar.one(), &arg, ar)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.re.is_inf() || self.im.is_nan() || self.im.is_inf())
    }

    /// Rounds both components to the precision of `ar`.
    pub fn rounded(&self, ar: &Arith) -> Self {
        ComplexValue::new(ar.round(&self.re), ar.round(&self.im))
    }

    pub fn add(&self, o: &Self, ar: &Arith) -> Self {
        ComplexValue::new(ar.add(&self.re, &o.re), ar.add(&self.im, &o.im))
    }

    pub fn sub(&self, o: &Self, ar: &Arith) -> Self {
        ComplexValue::new(ar.sub(&self.re, &o.re), ar.sub(&self.im, &o.im))
    }

    pub fn neg(&self) -> Self {
        ComplexValue::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        ComplexValue::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Self, ar: &Arith) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return ComplexValue::new(ar.mul(&self.re, &o.re), ar.zero());
        }
        let re = ar.sub(&ar.mul(&self.re, &o.re), &ar.mul(&self.im, &o.im));
        let im = ar.add(&ar.mul(&self.re, &o.im), &ar.mul(&self.im, &o.re));
        ComplexValue::new(re, im)
    }

    pub fn scale(&self, s: &BigFloat, ar: &Arith) -> Self {
        ComplexValue::new(ar.mul(&self.re, s), ar.mul(&self.im, s))
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self, ar: &Arith) -> BigFloat {
        if self.im.is_zero() {
            return ar.sqr(&self.re);
        }
        ar.add(&ar.sqr(&self.re), &ar.sqr(&self.im))
    }

    /// `|z|`.
    pub fn abs(&self, ar: &Arith) -> BigFloat {
        if self.im.is_zero() {
            return ar.round(&self.re.abs());
        }
        if self.re.is_zero() {
            return ar.round(&self.im.abs());
        }
        ar.sqrt(&self.norm_sqr(ar))
    }

    pub fn div(&self, o: &Self, ar: &Arith) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero("complex division"));
        }
        if o.im.is_zero() {
            return Ok(ComplexValue::new(
                ar.div(&self.re, &o.re),
                ar.div(&self.im, &o.re),
            ));
        }
        let d = o.norm_sqr(ar);
        let num = self.mul(&o.conj(), ar);
        Ok(ComplexValue::new(ar.div(&num.re, &d), ar.div(&num.im, &d)))
    }

    /// `1 - self`.
    pub fn one_minus(&self, ar: &Arith) -> Self {
        ComplexValue::new(ar.sub(&ar.one(), &self.re), self.im.neg())
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: usize, ar: &Arith) -> Self {
        let mut result = ComplexValue::one(ar);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base, ar);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, ar);
            }
        }
        result
    }

    /// `e^z`.
    pub fn exp(&self, ar: &Arith) -> Self {
        let m = ar.exp(&self.re);
        if self.im.is_zero() {
            return ComplexValue::new(m, ar.zero());
        }
        ComplexValue::from_polar(&m, &self.im, ar)
    }

    /// Argument in `(-pi, pi]`.
    pub fn arg(&self, ar: &Arith) -> BigFloat {
        let (x, y) = (&self.re, &self.im);
        if x.is_zero() {
            let half_pi = ar.div(&ar.pi(), &ar.int(2));
            return if y.is_negative() {
                half_pi.neg()
            } else if y.is_zero() {
                ar.zero()
            } else {
                half_pi
            };
        }
        let base = ar.atan(&ar.div(y, x));
        if x.is_positive() {
            base
        } else if y.is_negative() {
            ar.sub(&base, &ar.pi())
        } else {
            ar.add(&base, &ar.pi())
        }
    }

    /// Principal logarithm.
    pub fn ln(&self, ar: &Arith) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("logarithm of zero"));
        }
        let half = ar.frac(1, 2);
        let re = ar.mul(&half, &ar.ln(&self.norm_sqr(ar)));
        Ok(ComplexValue::new(re, self.arg(ar)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::arith::to_f64;

    fn c(re: f64, im: f64, ar: &Arith) -> ComplexValue {
        ComplexValue::from_f64(re, im, ar)
    }

    #[test]
    fn multiplication_and_division_invert() {
        let ar = Arith::with_digits(40);
        let a = c(0.3, -1.25, &ar);
        let b = c(-2.0, 0.5, &ar);
        let q = a.mul(&b, &ar).div(&b, &ar).unwrap();
        let err = to_f64(&q.sub(&a, &ar).abs(&ar));
        assert!(err < 1e-38);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let ar = Arith::with_digits(20);
        let a = c(1.0, 1.0, &ar);
        assert!(a.div(&ComplexValue::zero(&ar), &ar).is_err());
    }

    #[test]
    fn powi_matches_repeated_product() {
        let ar = Arith::with_digits(40);
        let z = c(0.6, 0.7, &ar);
        let mut direct = ComplexValue::one(&ar);
        for _ in 0..13 {
            direct = direct.mul(&z, &ar);
        }
        let err = to_f64(&z.powi(13, &ar).sub(&direct, &ar).abs(&ar));
        assert!(err < 1e-36);
    }

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let ar = Arith::with_digits(40);
        let z = ComplexValue::new(ar.zero(), ar.pi());
        let e = z.exp(&ar);
        assert!(to_f64(&e.add(&ComplexValue::one(&ar), &ar).abs(&ar)) < 1e-38);
    }

    #[test]
    fn cube_roots_of_unity_multiply_to_one() {
        let ar = Arith::with_digits(40);
        let w = ComplexValue::root_of_unity(1, 3, &ar);
        let cube = w.powi(3, &ar);
        assert!(to_f64(&cube.sub(&ComplexValue::one(&ar), &ar).abs(&ar)) < 1e-38);
    }

    #[test]
    fn log_inverts_exp() {
        let ar = Arith::with_digits(40);
        for (re, im) in [(0.5, 0.25), (-1.0, 0.5), (-1.0, -0.5), (0.0, -2.0)] {
            let z = c(re, im, &ar);
            let back = z.ln(&ar).unwrap().exp(&ar);
            assert!(to_f64(&back.sub(&z, &ar).abs(&ar)) < 1e-37, "{re} {im}");
        }
    }
}
