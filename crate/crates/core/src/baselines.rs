//! Reference algorithms for `R(t,x)`: the truncated product and its
//! first-order correction, the exponentiated Lambert series, Gatteschi's
//! iteration, and the reciprocal of the series for `1/R`.
//!
//! None of these carries a certificate. They are used for cross-checks and
//! convergence benchmarks.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{to_f64, Arith, BigFloat, ComplexValue};

/// `prod_{n=1}^{N} (1 - t x^n)`.
pub fn direct_product(t: &ComplexValue, x: &ComplexValue, n: usize, ar: &Arith) -> ComplexValue {
    let mut p = ComplexValue::one(ar);
    let mut xk = ComplexValue::one(ar);
    for _ in 0..n {
        xk = xk.mul(x, ar);
        p = p.mul(&t.mul(&xk, ar).one_minus(ar), ar);
    }
    p
}

/// Truncated product times `1 - t x^{N+1} / (1 - x)`.
pub fn corrected_product(t: &ComplexValue, x: &ComplexValue, n: usize, ar: &Arith) -> Result<ComplexValue> {
    let p = direct_product(t, x, n, ar);
    let tail = t.mul(&x.powi(n + 1, ar), ar).div(&x.one_minus(ar), ar)?;
    Ok(p.mul(&tail.one_minus(ar), ar))
}

/// Result of a series evaluation that stops on a tail bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub value: ComplexValue,
    pub terms: usize,
    /// Smallest `|partial sum|` seen (only tracked by [`slater_series`]).
    pub min_partial_modulus: Option<BigFloat>,
}

/// `exp(-sum_k t^k x^k / (k (1 - x^k)))`, truncated once the geometric tail
/// bound `|tx|^{K+1} / ((K+1)(1-|x|)(1-|tx|))` falls below `tol`.
pub fn lambert_log(t: &ComplexValue, x: &ComplexValue, tol: &BigFloat, ar: &Arith) -> Result<SeriesResult> {
    let one = ar.one();
    let xa = x.abs(ar);
    if xa >= one {
        return Err(Error::domain("x outside open unit disc"));
    }
    let txa = ar.mul(&t.abs(ar), &xa);
    if txa >= one {
        return Err(Error::domain("|tx| >= 1: the Lambert series does not apply"));
    }
    if t.is_zero() || x.is_zero() {
        return Ok(SeriesResult {
            value: ComplexValue::one(ar),
            terms: 0,
            min_partial_modulus: None,
        });
    }
    let scale = ar.mul(&ar.sub(&one, &xa), &ar.sub(&one, &txa));
    let mut sum = ComplexValue::zero(ar);
    let mut tk = ComplexValue::one(ar);
    let mut xk = ComplexValue::one(ar);
    let mut txk_abs = ar.one();
    let mut k: u64 = 0;
    loop {
        k += 1;
        tk = tk.mul(t, ar);
        xk = xk.mul(x, ar);
        txk_abs = ar.mul(&txk_abs, &txa);
        let term = tk
            .mul(&xk, ar)
            .div(&xk.one_minus(ar).scale(&ar.uint(k), ar), ar)?;
        sum = sum.add(&term, ar);
        let tail = ar.div(&ar.mul(&txk_abs, &txa), &ar.mul(&ar.uint(k + 1), &scale));
        if tail <= *tol {
            break;
        }
    }
    Ok(SeriesResult {
        value: sum.neg().exp(ar),
        terms: k as usize,
        min_partial_modulus: None,
    })
}

/// `1 / sum_m (tx)^m / ((1-x)...(1-x^m))`, stopping when the tail bound on the
/// series falls below `tol` relative to the partial sum.
pub fn slater_series(t: &ComplexValue, x: &ComplexValue, tol: &BigFloat, ar: &Arith) -> Result<SeriesResult> {
    let one = ar.one();
    let xa = x.abs(ar);
    if xa >= one {
        return Err(Error::domain("x outside open unit disc"));
    }
    let tx = t.mul(x, ar);
    let txa = tx.abs(ar);
    if txa >= one {
        return Err(Error::domain("|tx| >= 1: the reciprocal series diverges"));
    }
    let mut sum = ComplexValue::one(ar);
    let mut term = ComplexValue::one(ar);
    let mut xm = ComplexValue::one(ar);
    let mut xm_abs = ar.one();
    let mut min_mod = ar.one();
    let mut m: usize = 0;
    if tx.is_zero() {
        return Ok(SeriesResult {
            value: ComplexValue::one(ar),
            terms: 1,
            min_partial_modulus: Some(min_mod),
        });
    }
    loop {
        m += 1;
        xm = xm.mul(x, ar);
        xm_abs = ar.mul(&xm_abs, &xa);
        term = term.mul(&tx, ar).div(&xm.one_minus(ar), ar)?;
        sum = sum.add(&term, ar);
        let modulus = sum.abs(ar);
        if modulus < min_mod {
            min_mod = modulus.clone();
        }
        // later ratios are at most |tx| / (1 - |x|^{m+1})
        let r = ar.div(&txa, &ar.sub(&one, &ar.mul(&xm_abs, &xa)));
        if r < one {
            let tail = ar.div(&ar.mul(&term.abs(ar), &r), &ar.sub(&one, &r));
            if tail <= ar.mul(tol, &modulus) {
                if modulus <= tail || sum.is_zero() {
                    return Err(Error::ReciprocalInstability {
                        modulus: alloc::format!("{:e}", to_f64(&modulus)),
                    });
                }
                break;
            }
        }
    }
    if min_mod.is_zero() {
        return Err(Error::ReciprocalInstability {
            modulus: alloc::string::String::from("0"),
        });
    }
    let value = ComplexValue::one(ar).div(&sum, ar)?;
    Ok(SeriesResult {
        value,
        terms: m + 1,
        min_partial_modulus: Some(min_mod),
    })
}

/// Arithmetic needed by Gatteschi's iteration, so it can run over floating
/// complex values or exact rationals.
pub trait Scalar: Clone + PartialEq {
    type Ctx;
    fn zero(c: &Self::Ctx) -> Self;
    fn one(c: &Self::Ctx) -> Self;
    fn add(&self, o: &Self, c: &Self::Ctx) -> Self;
    fn sub(&self, o: &Self, c: &Self::Ctx) -> Self;
    fn mul(&self, o: &Self, c: &Self::Ctx) -> Self;
    /// `None` when `o` is zero.
    fn div(&self, o: &Self, c: &Self::Ctx) -> Option<Self>;
    fn is_zero(&self) -> bool;
}

impl Scalar for ComplexValue {
    type Ctx = Arith;
    fn zero(c: &Arith) -> Self {
        ComplexValue::zero(c)
    }
    fn one(c: &Arith) -> Self {
        ComplexValue::one(c)
    }
    fn add(&self, o: &Self, c: &Arith) -> Self {
        ComplexValue::add(self, o, c)
    }
    fn sub(&self, o: &Self, c: &Arith) -> Self {
        ComplexValue::sub(self, o, c)
    }
    fn mul(&self, o: &Self, c: &Arith) -> Self {
        ComplexValue::mul(self, o, c)
    }
    fn div(&self, o: &Self, c: &Arith) -> Option<Self> {
        ComplexValue::div(self, o, c).ok()
    }
    fn is_zero(&self) -> bool {
        ComplexValue::is_zero(self)
    }
}

impl Scalar for BigRational {
    type Ctx = ();
    fn zero(_: &()) -> Self {
        Zero::zero()
    }
    fn one(_: &()) -> Self {
        One::one()
    }
    fn add(&self, o: &Self, _: &()) -> Self {
        self + o
    }
    fn sub(&self, o: &Self, _: &()) -> Self {
        self - o
    }
    fn mul(&self, o: &Self, _: &()) -> Self {
        self * o
    }
    fn div(&self, o: &Self, _: &()) -> Option<Self> {
        (!Zero::is_zero(o)).then(|| self / o)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// State `(alpha_n, beta_n)` of Gatteschi's iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct GatteschiState<S> {
    pub n: usize,
    pub alpha: S,
    pub beta: S,
    pub sigma: S,
    /// `x^{n+1}`.
    x_next: S,
}

impl<S: Scalar> GatteschiState<S> {
    /// `alpha_0 = 1`, `beta_0 = sigma / (sigma - tx)`, for `sigma` outside `{0, tx}`.
    pub fn new(t: &S, x: &S, sigma: &S, c: &S::Ctx) -> Result<Self> {
        if sigma.is_zero() {
            return Err(Error::domain("sigma must be non-zero"));
        }
        let beta = sigma
            .div(&sigma.sub(&t.mul(x, c), c), c)
            .ok_or_else(|| Error::domain("sigma must differ from tx"))?;
        Ok(GatteschiState {
            n: 0,
            alpha: S::one(c),
            beta,
            sigma: sigma.clone(),
            x_next: x.clone(),
        })
    }
}

/// One step of the iteration.
pub fn gatteschi_step<S: Scalar>(state: &GatteschiState<S>, x: &S, c: &S::Ctx) -> Result<GatteschiState<S>> {
    let one = S::one(c);
    let GatteschiState {
        n,
        alpha,
        beta,
        sigma,
        x_next,
    } = state;
    let common = alpha.mul(&sigma.mul(alpha, c).add(&one.sub(sigma, c).mul(beta, c), c), c);
    let alpha_next = common.div(beta, c).ok_or(Error::Breakdown {
        n: *n,
        denominator: "beta_n",
    })?;
    let den = x.mul(alpha, c).add(&one.sub(x, c).mul(beta, c), c);
    let beta_next = common.div(&den, c).ok_or(Error::Breakdown {
        n: *n,
        denominator: "x alpha_n + (1 - x) beta_n",
    })?;
    Ok(GatteschiState {
        n: n + 1,
        alpha: alpha_next,
        beta: beta_next,
        sigma: sigma.clone(),
        x_next: x_next.mul(x, c),
    })
}

/// `lambda alpha_n + (1 - lambda) beta_n` with `lambda = 1 + sigma / (1 - x)`.
pub fn gatteschi_accelerated<S: Scalar>(state: &GatteschiState<S>, x: &S, c: &S::Ctx) -> Result<S> {
    let one = S::one(c);
    let shift = state
        .sigma
        .div(&one.sub(x, c), c)
        .ok_or_else(|| Error::domain("x must differ from 1"))?;
    let lambda = one.add(&shift, c);
    Ok(lambda
        .mul(&state.alpha, c)
        .add(&one.sub(&lambda, c).mul(&state.beta, c), c))
}

/// Closed form `[1 - sigma t x^{n+1} / ((1-x)(sigma - t x^{n+1}))] alpha_n` of the
/// accelerated combination.
pub fn gatteschi_accelerated_closed<S: Scalar>(state: &GatteschiState<S>, t: &S, x: &S, c: &S::Ctx) -> Result<S> {
    let one = S::one(c);
    let txn = t.mul(&state.x_next, c);
    let den = one.sub(x, c).mul(&state.sigma.sub(&txn, c), c);
    let frac = state.sigma.mul(&txn, c).div(&den, c).ok_or(Error::Breakdown {
        n: state.n,
        denominator: "sigma - t x^{n+1}",
    })?;
    Ok(one.sub(&frac, c).mul(&state.alpha, c))
}

/// Runs `n` steps from the initial state and returns the final state.
pub fn gatteschi_run<S: Scalar>(t: &S, x: &S, sigma: &S, n: usize, c: &S::Ctx) -> Result<GatteschiState<S>> {
    let mut st = GatteschiState::new(t, x, sigma, c)?;
    for _ in 0..n {
        st = gatteschi_step(&st, x, c)?;
    }
    Ok(st)
}

/// Truncation length for the product-type baselines to reach about
/// `digits` correct digits.
///
/// The plain product (and `alpha_n`) needs `|t x^{N+1}| / (1-|x|) <= 10^-digits`;
/// the corrected product and the accelerated combination only need the
/// square of that quantity to be small.
pub fn terms_for_digits(second_order: bool, t_abs: f64, x_abs: f64, digits: usize) -> usize {
    if t_abs == 0.0 || x_abs == 0.0 {
        return 0;
    }
    let gamma = -libm::log(x_abs);
    let mut target = digits as f64 * core::f64::consts::LN_10;
    if second_order {
        target /= 2.0;
    }
    let n = (target + libm::log(t_abs / (1.0 - x_abs)).max(0.0)) / gamma;
    libm::ceil(n).max(0.0) as usize + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn cx(re: f64, im: f64, ar: &Arith) -> ComplexValue {
        ComplexValue::from_f64(re, im, ar)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn direct_product_examples() {
        let ar = Arith::with_digits(30);
        let half = cx(0.5, 0.0, &ar);
        assert_eq!(direct_product(&half, &half, 0, &ar), ComplexValue::one(&ar));
        let p = direct_product(&cx(1.0, 0.0, &ar), &half, 3, &ar);
        assert_eq!(to_f64(&p.re), 0.328125);
        assert!(direct_product(&cx(2.0, 0.0, &ar), &half, 1, &ar).is_zero());
    }

    #[test]
    fn corrected_product_examples() {
        let ar = Arith::with_digits(30);
        let half = cx(0.5, 0.0, &ar);
        let c = corrected_product(&cx(0.0, 0.0, &ar), &half, 4, &ar).unwrap();
        assert_eq!(c, ComplexValue::one(&ar));
        let c = corrected_product(&cx(1.0, 0.0, &ar), &half, 0, &ar).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn lambert_examples() {
        let ar = Arith::with_digits(30);
        let tol = ar.pow10(-28);
        let r = lambert_log(&cx(0.0, 0.0, &ar), &cx(0.5, 0.0, &ar), &tol, &ar).unwrap();
        assert_eq!(r.value, ComplexValue::one(&ar));
        let r = lambert_log(&cx(1.0, 0.0, &ar), &cx(0.5, 0.0, &ar), &tol, &ar).unwrap();
        let s = crate::bounds::lambert_sums(&ar.frac(1, 2), &ar).unwrap().s;
        let expect = ar.exp(&s.neg());
        assert!(to_f64(&ar.sub(&r.value.re, &expect)).abs() < 1e-27);
        assert!(lambert_log(&cx(1.5, 0.0, &ar), &cx(0.8, 0.0, &ar), &tol, &ar).is_err());
    }

    #[test]
    fn slater_examples() {
        let ar = Arith::with_digits(30);
        let tol = ar.pow10(-28);
        let r = slater_series(&cx(0.0, 0.0, &ar), &cx(0.5, 0.0, &ar), &tol, &ar).unwrap();
        assert_eq!(r.value, ComplexValue::one(&ar));
        let r = slater_series(&cx(1.0, 0.0, &ar), &cx(0.5, 0.0, &ar), &tol, &ar).unwrap();
        let e = crate::engine::evaluate_to_digits(&cx(1.0, 0.0, &ar), &cx(0.5, 0.0, &ar), 30).unwrap();
        let rel = to_f64(&ar.div(&ar.sub(&r.value.re, &e.value.re), &e.value.re));
        assert!(rel.abs() < 1e-27);
        // positive terms: the partial sums only grow from 1, the first being 1 + x/(1-x) = 2
        assert_eq!(r.min_partial_modulus.map(|m| to_f64(&m)), Some(1.0));
    }

    #[test]
    fn gatteschi_first_step_and_beta0() {
        let ar = Arith::with_digits(30);
        let one = cx(1.0, 0.0, &ar);
        let half = cx(0.5, 0.0, &ar);
        let st = GatteschiState::new(&one, &half, &one, &ar).unwrap();
        let st1 = gatteschi_step(&st, &half, &ar).unwrap();
        assert_eq!(to_f64(&st1.alpha.re), 0.5);
        let st = GatteschiState::new(&one, &half, &cx(2.0, 0.0, &ar), &ar).unwrap();
        assert!((to_f64(&st.beta.re) - 4.0 / 3.0).abs() < 1e-16);
        assert!(GatteschiState::new(&one, &half, &ComplexValue::zero(&ar), &ar).is_err());
        assert!(GatteschiState::new(&one, &half, &half, &ar).is_err());
    }

    #[test]
    fn gatteschi_exact_rationals() {
        let t = q(1, 3);
        let x = q(1, 2);
        let sigma = q(1, 1);
        let mut st = GatteschiState::new(&t, &x, &sigma, &()).unwrap();
        let mut prod = q(1, 1);
        let mut xk = q(1, 1);
        for n in 1..=8 {
            st = gatteschi_step(&st, &x, &()).unwrap();
            xk = &xk * &x;
            prod = &prod * (q(1, 1) - &t * &xk);
            assert_eq!(st.alpha, prod, "alpha_{n}");
            let x_next = &xk * &x;
            assert_eq!(st.beta, &sigma / (&sigma - &t * x_next) * &prod, "beta_{n}");
        }
        let a = gatteschi_accelerated(&st, &x, &()).unwrap();
        let b = gatteschi_accelerated_closed(&st, &t, &x, &()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gatteschi_breakdown_is_reported() {
        // t = 1, x = 1/2, sigma = 1/4 makes sigma - t x^2 vanish at n = 1
        let st = gatteschi_run(&q(1, 1), &q(1, 2), &q(1, 4), 1, &());
        match st {
            Err(Error::Breakdown { n, .. }) => assert_eq!(n, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn accelerated_is_one_at_t_zero() {
        let ar = Arith::with_digits(30);
        let zero = ComplexValue::zero(&ar);
        let x = cx(0.3, 0.2, &ar);
        let st = gatteschi_run(&zero, &x, &cx(1.0, 0.0, &ar), 5, &ar).unwrap();
        let v = gatteschi_accelerated(&st, &x, &ar).unwrap();
        assert!(to_f64(&v.sub(&ComplexValue::one(&ar), &ar).abs(&ar)) < 1e-30);
    }
}
