//! Eta-function quantities on the imaginary axis.
//!
//! With `x = e^{-2 pi z}`,
//!
//! ```text
//! f(z) = log R(1, x) + pi/(12 z) - log(1 + 1/z^2)/4,     f(z) = f(1/z),
//! g(z) = f(sqrt(2) z) - f(z/sqrt(2)),                   g(z) = -g(1/z).
//! ```
//!
//! `f` measures how far `R(1,x)` is from its approximant `R0_plus(x)`, and
//! `g` does the same for `R(-1,x)` and `R0_minus(x)`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::race::OnceBox;

use crate::bounds::dilog_signed;
use crate::engine::evaluate_to_digits;
use crate::error::{Error, Result};
use crate::numeric::{Arith, BigFloat, ComplexValue};

/// A point `z > 0` of the modular variable together with a function value there.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaPoint {
    pub z: BigFloat,
    pub value: BigFloat,
}

fn positive(v: &BigFloat, what: &str) -> Result<()> {
    if v.is_nan() || v.is_inf() || !v.is_positive() || v.is_zero() {
        return Err(Error::domain(what));
    }
    Ok(())
}

fn open_unit_interval(x: &BigFloat, ar: &Arith) -> Result<()> {
    positive(x, "x must lie in (0, 1)")?;
    if *x >= ar.one() {
        return Err(Error::domain("x must lie in (0, 1)"));
    }
    Ok(())
}

/// `log R(t, x)` for real `t` and `0 < x < 1` where `R(t,x) > 0`.
pub(crate) fn log_r_real(t: &BigFloat, x: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    let c = evaluate_to_digits(&ComplexValue::real(t.clone()), &ComplexValue::real(x.clone()), ar.digits())?;
    if !c.value.re.is_positive() || c.value.re.is_zero() {
        return Err(Error::domain("R(t,x) is not positive"));
    }
    Ok(ar.ln(&c.value.re))
}

/// `e^{pi^2/(6 log x)} (1 + 4 pi^2/(log x)^2)^{1/4}`.
pub fn r0_plus(x: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    open_unit_interval(x, ar)?;
    let lx = ar.ln(x);
    let pi2 = ar.pi_sq();
    let e = ar.exp(&ar.div(&pi2, &ar.mul(&ar.int(6), &lx)));
    let base = ar.add(&ar.one(), &ar.div(&ar.mul(&ar.int(4), &pi2), &ar.sqr(&lx)));
    Ok(ar.mul(&e, &ar.sqrt(&ar.sqrt(&base))))
}

/// `e^{-pi^2/(12 log x)} ((1 + pi^2/(log x)^2) / (1 + 4 pi^2/(log x)^2))^{1/4}`.
pub fn r0_minus(x: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    open_unit_interval(x, ar)?;
    let lx = ar.ln(x);
    let pi2 = ar.pi_sq();
    let lx2 = ar.sqr(&lx);
    let e = ar.exp(&ar.div(&pi2, &ar.mul(&ar.int(12), &lx)).neg());
    let num = ar.add(&ar.one(), &ar.div(&pi2, &lx2));
    let den = ar.add(&ar.one(), &ar.div(&ar.mul(&ar.int(4), &pi2), &lx2));
    Ok(ar.mul(&e, &ar.sqrt(&ar.sqrt(&ar.div(&num, &den)))))
}

fn f_at(z: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    let pi = ar.pi();
    let x = ar.exp(&ar.mul(&ar.mul(&ar.int(-2), &pi), z));
    let log_r = log_r_real(&ar.one(), &x, ar)?;
    let inv = ar.recip(z);
    let corr = ar.div(&ar.ln(&ar.add(&ar.one(), &ar.sqr(&inv))), &ar.int(4));
    Ok(ar.sub(&ar.add(&log_r, &ar.div(&pi, &ar.mul(&ar.int(12), z))), &corr))
}

/// `f(z)`, evaluated on the side `max(z, 1/z)` where the series converges fastest.
pub fn f_of(z: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    positive(z, "z must be positive")?;
    if *z < ar.one() {
        f_at(&ar.recip(z), ar)
    } else {
        f_at(z, ar)
    }
}

/// `f(z)` evaluated literally at `x = e^{-2 pi z}`, without using the symmetry.
pub fn f_direct(z: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    positive(z, "z must be positive")?;
    f_at(z, ar)
}

/// `g(z) = f(sqrt(2) z) - f(z / sqrt(2))`.
pub fn g_of(z: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    positive(z, "z must be positive")?;
    let r2 = ar.sqrt(&ar.int(2));
    Ok(ar.sub(&f_of(&ar.mul(z, &r2), ar)?, &f_of(&ar.div(z, &r2), ar)?))
}

/// `eta(iy) = e^{-pi y/12} R(1, e^{-2 pi y})`, applying `eta(iy) = eta(i/y)/sqrt(y)` when `y < 1`.
pub fn eta_imag(y: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    positive(y, "y must be positive")?;
    if *y < ar.one() {
        let inv = ar.recip(y);
        return Ok(ar.div(&eta_imag(&inv, ar)?, &ar.sqrt(y)));
    }
    let pi = ar.pi();
    let x = ar.exp(&ar.mul(&ar.mul(&ar.int(-2), &pi), y));
    let c = evaluate_to_digits(&ComplexValue::one(ar), &ComplexValue::real(x), ar.digits())?;
    let pref = ar.exp(&ar.div(&ar.mul(&pi, y), &ar.int(12)).neg());
    Ok(ar.mul(&pref, &c.value.re))
}

/// A truncated asymptotic formula and the order of its neglected term.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpAsymptotic {
    pub value: BigFloat,
    /// Order of magnitude of the neglected term (not a certified bound).
    pub remainder_scale: BigFloat,
}

/// `log R(1, e^{-gamma}) ~ -pi^2/(6 gamma) - log(gamma)/2 + log(2 pi)/2 + gamma/24`,
/// neglecting a term of order `e^{-4 pi^2/gamma}`.
pub fn sharp_log_r1(gamma: &BigFloat, ar: &Arith) -> Result<SharpAsymptotic> {
    positive(gamma, "gamma must be positive")?;
    let pi = ar.pi();
    let pi2 = ar.sqr(&pi);
    let half = ar.frac(1, 2);
    let mut v = ar.div(&pi2, &ar.mul(&ar.int(6), gamma)).neg();
    v = ar.sub(&v, &ar.mul(&half, &ar.ln(gamma)));
    v = ar.add(&v, &ar.mul(&half, &ar.ln(&ar.mul(&ar.int(2), &pi))));
    v = ar.add(&v, &ar.div(gamma, &ar.int(24)));
    let remainder_scale = ar.exp(&ar.div(&ar.mul(&ar.int(4), &pi2), gamma).neg());
    Ok(SharpAsymptotic {
        value: v,
        remainder_scale,
    })
}

/// `log R(-1, e^{-gamma}) ~ pi^2/(12 gamma) - log(2)/2 + gamma/24`,
/// neglecting a term of order `e^{-pi^2/gamma}`.
pub fn sharp_log_rminus1(gamma: &BigFloat, ar: &Arith) -> Result<SharpAsymptotic> {
    positive(gamma, "gamma must be positive")?;
    let pi2 = ar.pi_sq();
    let mut v = ar.div(&pi2, &ar.mul(&ar.int(12), gamma));
    v = ar.sub(&v, &ar.div(&ar.ln2(), &ar.int(2)));
    v = ar.add(&v, &ar.div(gamma, &ar.int(24)));
    let remainder_scale = ar.exp(&ar.div(&pi2, gamma).neg());
    Ok(SharpAsymptotic {
        value: v,
        remainder_scale,
    })
}

const BERNOULLI_CACHED: usize = 128;

static BERNOULLI: OnceBox<Vec<BigRational>> = OnceBox::new();

fn bernoulli_table(len: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(len);
    for m in 0..len {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        if m > 1 && m % 2 == 1 {
            b.push(BigRational::zero());
            continue;
        }
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += BigRational::from_integer(binom.clone()) * bj;
            }
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Exact Bernoulli number `B_m` (with `B_1 = -1/2`).
pub fn bernoulli(m: usize) -> BigRational {
    let table = BERNOULLI.get_or_init(|| alloc::boxed::Box::new(bernoulli_table(BERNOULLI_CACHED)));
    if m < table.len() {
        return table[m].clone();
    }
    if m % 2 == 1 {
        return BigRational::zero();
    }
    bernoulli_table(m + 1).pop().expect("non-empty table")
}

fn bigint_to_float(v: &BigInt, ar: &Arith) -> BigFloat {
    ar.parse_decimal(&alloc::string::ToString::to_string(v))
}

pub(crate) fn rational_to_float(v: &BigRational, ar: &Arith) -> BigFloat {
    ar.div(&bigint_to_float(v.numer(), ar), &bigint_to_float(v.denom(), ar))
}

/// Numerator polynomials of `Li_{-s}(t) = P_s(t) / (1-t)^{s+1}`, coefficients
/// in increasing degree, from `P_0 = t` and `P_{s+1} = t(1-t) P_s' + (s+1) t P_s`.
pub fn negative_polylog_numerators(s_max: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(s_max + 1);
    out.push(alloc::vec![BigInt::zero(), BigInt::one()]);
    for s in 0..s_max {
        let p = &out[s];
        let mut next = alloc::vec![BigInt::zero(); p.len() + 1];
        for (d, c) in p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let dc = c * BigInt::from(d);
            // t P' contributes d c t^d, -t^2 P' contributes -d c t^{d+1}
            next[d] += &dc;
            next[d + 1] -= &dc;
            next[d + 1] += c * BigInt::from(s + 1);
        }
        while next.len() > 1 && next.last().is_some_and(Zero::is_zero) {
            next.pop();
        }
        out.push(next);
    }
    out
}

/// `Li_{-s}(t)` for real `t < 1`.
fn polylog_negative(s: usize, p: &[BigInt], t: &BigFloat, ar: &Arith) -> BigFloat {
    let mut acc = ar.zero();
    for c in p.iter().rev() {
        acc = ar.add(&ar.mul(&acc, t), &bigint_to_float(c, ar));
    }
    ar.div(&acc, &ar.powi(&ar.sub(&ar.one(), t), s + 1))
}

/// Distance from `|t| = 1` required by [`asymptotic_log_r`].
pub const ASYMPTOTIC_T_MARGIN: f64 = 1e-3;

/// Truncated asymptotic expansion of `log R(t, e^{-gamma})`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticLog {
    pub value: BigFloat,
    /// Magnitude of the last included term; a heuristic error scale only.
    pub last_term: BigFloat,
    /// Highest Bernoulli index included.
    pub order: usize,
}

/// `-log R(t, e^{-gamma}) ~ sum_{m=0}^{M} B_m/m! Li_{2-m}(t) gamma^{m-1}`, for real
/// `|t| <= 1 - ASYMPTOTIC_T_MARGIN`.
///
/// The series diverges, so summation also stops before the first term that
/// is larger in magnitude than the previous non-zero term.
pub fn asymptotic_log_r(t: &BigFloat, gamma: &BigFloat, m_max: usize, ar: &Arith) -> Result<AsymptoticLog> {
    positive(gamma, "gamma must be positive")?;
    if m_max < 1 {
        return Err(Error::domain("expansion order must be at least 1"));
    }
    let limit = ar.sub(&ar.one(), &ar.from_f64(ASYMPTOTIC_T_MARGIN));
    if t.is_nan() || t.is_inf() || t.abs() > limit {
        return Err(Error::domain("asymptotic expansion needs |t| <= 1 - 1e-3"));
    }
    let polys = negative_polylog_numerators(m_max.saturating_sub(2));
    let mut sum = ar.div(&dilog_signed(t, ar)?, gamma);
    let mut last = sum.abs();
    let mut order = 0;
    let mut gpow = ar.one();
    let mut fact = ar.one();
    for m in 1..=m_max {
        fact = ar.mul(&fact, &ar.uint(m as u64));
        gpow = if m == 1 { ar.one() } else { ar.mul(&gpow, gamma) };
        let b = bernoulli(m);
        if b.is_zero() {
            continue;
        }
        let li = if m == 1 {
            ar.ln(&ar.sub(&ar.one(), t)).neg()
        } else {
            polylog_negative(m - 2, &polys[m - 2], t, ar)
        };
        let term = ar.div(&ar.mul(&ar.mul(&rational_to_float(&b, ar), &li), &gpow), &fact);
        let mag = term.abs();
        if mag > last && !last.is_zero() {
            break;
        }
        sum = ar.add(&sum, &term);
        if !mag.is_zero() {
            last = mag;
        }
        order = m;
    }
    Ok(AsymptoticLog {
        value: sum.neg(),
        last_term: last,
        order,
    })
}

/// Central second difference `(f(z+h) - 2 f(z) + f(z-h)) / h^2`.
pub fn f_second_difference(z: &BigFloat, h: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    let up = f_of(&ar.add(z, h), ar)?;
    let mid = f_of(z, ar)?;
    let down = f_of(&ar.sub(z, h), ar)?;
    let num = ar.add(&ar.sub(&up, &ar.mul(&ar.int(2), &mid)), &down);
    Ok(ar.div(&num, &ar.sqr(h)))
}

/// Central first difference `(f(z+h) - f(z-h)) / (2h)`.
pub fn f_first_difference(z: &BigFloat, h: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    let up = f_of(&ar.add(z, h), ar)?;
    let down = f_of(&ar.sub(z, h), ar)?;
    Ok(ar.div(&ar.sub(&up, &down), &ar.mul(&ar.int(2), h)))
}

/// Step used by the finite-difference searches.
pub const SEARCH_STEP: f64 = 1e-4;

/// Bisects the sign change of the finite-difference `f''` on `[lo, hi]`
/// until the bracket is narrower than `tol`.
pub fn locate_inflection(lo: &BigFloat, hi: &BigFloat, tol: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    let h = ar.from_f64(SEARCH_STEP);
    let mut a = lo.clone();
    let mut b = hi.clone();
    let sa = f_second_difference(&a, &h, ar)?.is_negative();
    let sb = f_second_difference(&b, &h, ar)?.is_negative();
    if sa == sb {
        return Err(Error::domain("f'' does not change sign on the bracket"));
    }
    let half = ar.frac(1, 2);
    while ar.sub(&b, &a) > *tol {
        let m = ar.mul(&ar.add(&a, &b), &half);
        if f_second_difference(&m, &h, ar)?.is_negative() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(ar.mul(&ar.add(&a, &b), &half))
}

/// Golden-section search for the maximum of `|g|` on `[lo, hi]`.
pub fn locate_g_extremum(lo: &BigFloat, hi: &BigFloat, tol: &BigFloat, ar: &Arith) -> Result<EtaPoint> {
    let inv_phi = ar.div(&ar.sub(&ar.sqrt(&ar.int(5)), &ar.one()), &ar.int(2));
    let score = |z: &BigFloat| g_of(z, ar).map(|v| v.abs());
    let mut a = lo.clone();
    let mut b = hi.clone();
    let mut c = ar.sub(&b, &ar.mul(&inv_phi, &ar.sub(&b, &a)));
    let mut d = ar.add(&a, &ar.mul(&inv_phi, &ar.sub(&b, &a)));
    let mut fc = score(&c)?;
    let mut fd = score(&d)?;
    while ar.sub(&b, &a) > *tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = ar.sub(&b, &ar.mul(&inv_phi, &ar.sub(&b, &a)));
            fc = score(&c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = ar.add(&a, &ar.mul(&inv_phi, &ar.sub(&b, &a)));
            fd = score(&d)?;
        }
    }
    let z = ar.div(&ar.add(&a, &b), &ar.int(2));
    let value = g_of(&z, ar)?;
    Ok(EtaPoint { z, value })
}
