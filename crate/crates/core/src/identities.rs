//! Classical identities for `R(t,x)`, used as end-to-end checks.
//!
//! Each check computes its two sides along independent routes. The product
//! side goes through the Euler-series engine (or an explicit partial
//! product), and the sum side goes through a theta or `q`-series summed
//! directly. Sum exponents come from integer recurrences.

use alloc::vec::Vec;
use core::fmt;

use crate::engine::evaluate_to_digits;
use crate::error::{Error, Result};
use crate::numeric::{digits_to_bits, to_f64, Arith, BigFloat, ComplexValue, LN_10};

/// Extra decimal digits carried by the sum side beyond its cancellation estimate.
const SUM_GUARD_DIGITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityId {
    Pentagonal,
    ThetaCube,
    ThetaTriangular,
    ThetaSquares,
    ThetaAlternating,
    RogersRamanujan1,
    RogersRamanujan2,
    Minus1,
    RootOfUnity(u32),
    ResidueSplit(u32),
    TrivialBounds,
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityId::Pentagonal => f.write_str("pentagonal"),
            IdentityId::ThetaCube => f.write_str("theta_cube"),
            IdentityId::ThetaTriangular => f.write_str("theta_triangular"),
            IdentityId::ThetaSquares => f.write_str("theta_squares"),
            IdentityId::ThetaAlternating => f.write_str("theta_alternating"),
            IdentityId::RogersRamanujan1 => f.write_str("rogers_ramanujan_1"),
            IdentityId::RogersRamanujan2 => f.write_str("rogers_ramanujan_2"),
            IdentityId::Minus1 => f.write_str("minus1"),
            IdentityId::RootOfUnity(m) => write!(f, "root_of_unity_m{m}"),
            IdentityId::ResidueSplit(m) => write!(f, "residue_split_m{m}"),
            IdentityId::TrivialBounds => f.write_str("trivial_bounds"),
        }
    }
}

/// Both sides of one identity and how far apart they are.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub lhs: ComplexValue,
    pub rhs: ComplexValue,
    pub abs_discrepancy: BigFloat,
    pub rel_discrepancy: BigFloat,
    pub tolerance: BigFloat,
    pub pass: bool,
}

impl IdentityReport {
    fn compare(id: IdentityId, lhs: ComplexValue, rhs: ComplexValue, tolerance: BigFloat, ar: &Arith) -> Self {
        let abs = lhs.sub(&rhs, ar).abs(ar);
        let scale = ar.max(&lhs.abs(ar), &rhs.abs(ar));
        let rel = if scale.is_zero() { ar.zero() } else { ar.div(&abs, &scale) };
        Self::from_parts(id, lhs, rhs, abs, rel, tolerance)
    }

    fn from_parts(
        identity_id: IdentityId,
        lhs: ComplexValue,
        rhs: ComplexValue,
        abs_discrepancy: BigFloat,
        rel_discrepancy: BigFloat,
        tolerance: BigFloat,
    ) -> Self {
        let pass = abs_discrepancy <= tolerance || rel_discrepancy <= tolerance;
        IdentityReport {
            identity_id,
            lhs,
            rhs,
            abs_discrepancy,
            rel_discrepancy,
            tolerance,
            pass,
        }
    }
}

/// `10^{-(digits - 5)}`.
pub fn tolerance_for(digits: usize, ar: &Arith) -> BigFloat {
    ar.pow10(-(digits.saturating_sub(5) as i64))
}

/// Precision used to report both sides of an identity at `digits`.
fn report_arith(digits: usize) -> Arith {
    Arith::with_digits(digits + SUM_GUARD_DIGITS)
}

fn check_domain(x: &ComplexValue, ar: &Arith) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NonFinite("x"));
    }
    if x.norm_sqr(ar) >= ar.one() {
        return Err(Error::domain("x outside open unit disc"));
    }
    Ok(())
}

fn r(t: &ComplexValue, x: &ComplexValue, digits: usize) -> Result<ComplexValue> {
    Ok(evaluate_to_digits(t, x, digits)?.value)
}

fn r1(x: &ComplexValue, digits: usize, ar: &Arith) -> Result<ComplexValue> {
    r(&ComplexValue::one(ar), x, digits)
}

/// Sparse `q`-series `sum_j c_j x^{e_j}` with integer exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Theta {
    /// `sum_{m in Z} (-1)^m x^{m(3m+1)/2}`.
    Pentagonal,
    /// `sum_{m >= 0} (-1)^m (2m+1) x^{m(m+1)/2}`.
    Cube,
    /// `sum_{m >= 0} x^{m(m+1)/2}`.
    Triangular,
    /// `sum_{m in Z} x^{m^2}`.
    Squares,
    /// `sum_{m in Z} (-1)^m x^{m^2}`.
    Alternating,
}

/// Exponent and signed integer coefficient of every term with exponent at
/// most `max_exp`, in increasing exponent order.
fn theta_terms(kind: Theta, max_exp: u64) -> Vec<(u64, i64)> {
    let mut out = alloc::vec![(0u64, 1i64)];
    let mut m: u64 = 1;
    let mut e: u64 = 0;
    loop {
        let sign = if m % 2 == 1 { -1 } else { 1 };
        let pushed = match kind {
            Theta::Pentagonal => {
                // m(3m-1)/2 and m(3m+1)/2, from e = (m-1)(3m-2)/2
                e += 3 * m - 2;
                if e > max_exp {
                    false
                } else {
                    out.push((e, sign));
                    if e + m <= max_exp {
                        out.push((e + m, sign));
                    }
                    true
                }
            }
            Theta::Cube | Theta::Triangular => {
                e += m;
                if e > max_exp {
                    false
                } else {
                    let c = if kind == Theta::Cube { sign * (2 * m as i64 + 1) } else { 1 };
                    out.push((e, c));
                    true
                }
            }
            Theta::Squares | Theta::Alternating => {
                e += 2 * m - 1;
                if e > max_exp {
                    false
                } else {
                    let c = if kind == Theta::Alternating { 2 * sign } else { 2 };
                    out.push((e, c));
                    true
                }
            }
        };
        if !pushed {
            break;
        }
        m += 1;
    }
    out
}

/// Largest exponent whose term can still matter at `digits` decimal digits.
fn exponent_cutoff(x_abs: &BigFloat, digits: usize, ar: &Arith) -> u64 {
    let gamma = to_f64(&ar.ln(x_abs).neg());
    if !(gamma > 0.0) {
        return 0;
    }
    // coefficients grow at most linearly in m, i.e. like sqrt(exponent)
    let target = digits as f64 * LN_10 + 20.0;
    let e = libm::ceil(target / gamma);
    if e.is_finite() && e < 1e15 {
        e as u64
    } else {
        u64::MAX / 4
    }
}

fn theta_sum_at(kind: Theta, x: &ComplexValue, digits: usize, sign_fault: bool, ar: &Arith) -> ComplexValue {
    if x.is_zero() {
        return ComplexValue::one(ar);
    }
    let cutoff = exponent_cutoff(&x.abs(ar), digits, ar);
    let mut sum = ComplexValue::zero(ar);
    for (i, (e, c)) in theta_terms(kind, cutoff).into_iter().enumerate() {
        let c = if sign_fault && i == 1 { -c } else { c };
        let term = x.powi(e as usize, ar).scale(&ar.int(c), ar);
        sum = sum.add(&term, ar);
    }
    sum
}

/// `log10` of a positive value.
fn log10_of(v: &BigFloat, ar: &Arith) -> f64 {
    to_f64(&ar.ln(v)) / LN_10
}

/// Decimal digits needed so a sum whose terms are majorised by `majorant`
/// resolves a result of modulus `result_abs` to `digits` digits.
fn cancellation_digits(digits: usize, majorant: &BigFloat, result_abs: &BigFloat, ar: &Arith) -> usize {
    let loss = log10_of(majorant, ar) - log10_of(result_abs, ar);
    digits + SUM_GUARD_DIGITS + libm::ceil(loss.max(0.0)) as usize
}

fn theta_sum(kind: Theta, x: &ComplexValue, digits: usize, lhs_abs: &BigFloat, fault: bool) -> ComplexValue {
    if x.is_zero() {
        return ComplexValue::one(&Arith::with_digits(digits));
    }
    // majorant: the same series with |x| and |coefficients|, at low precision
    let low = Arith::with_bits(128);
    let xa = ComplexValue::real(x.abs(&low));
    let maj_kind = if kind == Theta::Alternating { Theta::Squares } else { kind };
    let maj = theta_majorant(maj_kind, &xa, digits, &low);
    let work = Arith::with_bits(digits_to_bits(cancellation_digits(digits, &maj, lhs_abs, &low)));
    theta_sum_at(kind, &x.rounded(&work), work.digits(), fault, &work)
}

fn theta_majorant(kind: Theta, xa: &ComplexValue, digits: usize, ar: &Arith) -> BigFloat {
    let cutoff = exponent_cutoff(&xa.re, digits, ar);
    let mut sum = ar.zero();
    for (e, c) in theta_terms(kind, cutoff) {
        let term = ar.mul(&ar.powi(&xa.re, e as usize), &ar.int(c.abs()));
        sum = ar.add(&sum, &term);
    }
    sum
}

/// `R(1,x) = sum_{m in Z} (-1)^m x^{m(3m+1)/2}`.
pub fn check_pentagonal(x: &ComplexValue, digits: usize) -> Result<IdentityReport> {
    let ar = report_arith(digits);
    check_domain(x, &ar)?;
    let lhs = r1(x, digits, &ar)?;
    let rhs = theta_sum(Theta::Pentagonal, x, digits, &lhs.abs(&ar), false);
    Ok(IdentityReport::compare(
        IdentityId::Pentagonal,
        lhs.rounded(&ar),
        rhs.rounded(&ar),
        tolerance_for(digits, &ar),
        &ar,
    ))
}

/// The four theta-function identities, in the order cube, triangular,
/// squares, alternating.
pub fn check_theta_identities(x: &ComplexValue, digits: usize) -> Result<Vec<IdentityReport>> {
    check_theta_identities_with(x, digits, false)
}

/// As [`check_theta_identities`]; `sign_fault` negates the second term of
/// the triangular-number sum, which must make that check fail.
pub fn check_theta_identities_with(x: &ComplexValue, digits: usize, sign_fault: bool) -> Result<Vec<IdentityReport>> {
    let ar = report_arith(digits);
    check_domain(x, &ar)?;
    let x2 = x.mul(x, &ar);
    let x4 = x2.mul(&x2, &ar);
    let a = r1(x, digits, &ar)?;
    let b = r1(&x2, digits, &ar)?;
    let d = r1(&x4, digits, &ar)?;
    let tol = tolerance_for(digits, &ar);

    let cube = a.powi(3, &ar);
    let tri = b.powi(2, &ar).div(&a, &ar)?;
    let squares = b.powi(5, &ar).div(&a.powi(2, &ar).mul(&d.powi(2, &ar), &ar), &ar)?;
    let alt = a.powi(2, &ar).div(&b, &ar)?;

    let cases = [
        (IdentityId::ThetaCube, Theta::Cube, cube, false),
        (IdentityId::ThetaTriangular, Theta::Triangular, tri, sign_fault),
        (IdentityId::ThetaSquares, Theta::Squares, squares, false),
        (IdentityId::ThetaAlternating, Theta::Alternating, alt, false),
    ];
    let mut out = Vec::with_capacity(4);
    for (id, kind, lhs, fault) in cases {
        let rhs = theta_sum(kind, x, digits, &lhs.abs(&ar), fault);
        out.push(IdentityReport::compare(id, lhs, rhs.rounded(&ar), tol.clone(), &ar));
    }
    Ok(out)
}

/// `prod_{n >= 1, n mod 5 in classes} (1 - x^n)^{-1}` truncated at `n_max`,
/// together with a bound on the relative effect of the omitted factors.
fn residue_product(x: &ComplexValue, classes: [u64; 2], n_max: u64, ar: &Arith) -> Result<(ComplexValue, BigFloat)> {
    let mut p = ComplexValue::one(ar);
    let mut xn = ComplexValue::one(ar);
    for n in 1..=n_max {
        xn = xn.mul(x, ar);
        if classes.contains(&(n % 5)) {
            p = p.mul(&xn.one_minus(ar), ar);
        }
    }
    // |log prod_{n > n_max} (1 - x^n)| <= -log(1 - |x|^{n_max+1}) / (1 - |x|)
    let low = Arith::with_bits(128);
    let xa = x.abs(&low);
    let one = low.one();
    let q = low.powi(&xa, n_max as usize + 1);
    let tail_log = low.div(&low.ln(&low.sub(&one, &q)).neg(), &low.sub(&one, &xa));
    let tail_rel = low.sub(&low.exp(&tail_log), &one);
    Ok((ComplexValue::one(ar).div(&p, ar)?, tail_rel))
}

/// `sum_{m >= 0} x^{m^2 + shift m} / ((1-x)...(1-x^m))`.
fn rr_sum(x: &ComplexValue, shift: u64, digits: usize, ar: &Arith) -> Result<ComplexValue> {
    let mut sum = ComplexValue::one(ar);
    if x.is_zero() {
        return Ok(sum);
    }
    let low = Arith::with_bits(128);
    let xa = x.abs(&low);
    let one = low.one();
    // |(x;x)_m| >= (|x|;|x|)_m, so the real series majorises the terms
    let mut maj_den = low.one();
    let mut den = ComplexValue::one(ar);
    let mut xm = ComplexValue::one(ar);
    let mut xa_m = low.one();
    let threshold = low.pow10(-(digits as i64) - 5);
    let mut m: u64 = 0;
    loop {
        m += 1;
        xm = xm.mul(x, ar);
        xa_m = low.mul(&xa_m, &xa);
        den = den.mul(&xm.one_minus(ar), ar);
        maj_den = low.mul(&maj_den, &low.sub(&one, &xa_m));
        let e = m * m + shift * m;
        let maj = low.div(&low.powi(&xa, e as usize), &maj_den);
        let term = x.powi(e as usize, ar).div(&den, ar)?;
        sum = sum.add(&term, ar);
        // ratio of successive majorant terms is |x|^{2m+1+shift} / (1 - |x|^{m+1})
        let ratio = low.div(
            &low.powi(&xa, (2 * m + 1 + shift) as usize),
            &low.sub(&one, &low.mul(&xa_m, &xa)),
        );
        if maj <= threshold && ratio <= low.frac(1, 2) {
            break;
        }
    }
    Ok(sum)
}

/// The two Rogers-Ramanujan identities: residue classes `{1,4}` against
/// exponents `m^2`, and classes `{2,3}` against exponents `m(m+1)`.
pub fn check_rogers_ramanujan(x: &ComplexValue, digits: usize) -> Result<(IdentityReport, IdentityReport)> {
    let ar = report_arith(digits);
    check_domain(x, &ar)?;
    let tol = tolerance_for(digits, &ar);
    if x.is_zero() {
        let one = ComplexValue::one(&ar);
        return Ok((
            IdentityReport::compare(IdentityId::RogersRamanujan1, one.clone(), one.clone(), tol.clone(), &ar),
            IdentityReport::compare(IdentityId::RogersRamanujan2, one.clone(), one, tol, &ar),
        ));
    }
    let low = Arith::with_bits(128);
    let gamma = to_f64(&low.ln(&x.abs(&low)).neg());
    let work_digits = digits + SUM_GUARD_DIGITS;
    let n_max = libm::ceil(work_digits as f64 * LN_10 / gamma).max(1.0) as u64;
    let work = Arith::with_digits(work_digits + libm::ceil(libm::log10(n_max as f64)) as usize);
    let xw = x.rounded(&work);

    let mut reports = Vec::with_capacity(2);
    for (id, classes, shift) in [
        (IdentityId::RogersRamanujan1, [1u64, 4], 0u64),
        (IdentityId::RogersRamanujan2, [2u64, 3], 1u64),
    ] {
        let (prod, tail) = residue_product(&xw, classes, n_max, &work)?;
        let sum = rr_sum(&xw, shift, work.digits(), &work)?;
        let widened = ar.add(&tol, &ar.round(&ar.mul(&ar.int(2), &tail)));
        reports.push(IdentityReport::compare(id, prod.rounded(&ar), sum.rounded(&ar), widened, &ar));
    }
    let second = reports.pop().expect("two reports");
    let first = reports.pop().expect("two reports");
    Ok((first, second))
}

/// `R(-1,x) = R(1,x^2) / R(1,x)`.
pub fn check_minus1(x: &ComplexValue, digits: usize) -> Result<IdentityReport> {
    let ar = report_arith(digits);
    check_domain(x, &ar)?;
    let lhs = r(&ComplexValue::from_int(-1, &ar), x, digits)?;
    let rhs = r1(&x.mul(x, &ar), digits, &ar)?.div(&r1(x, digits, &ar)?, &ar)?;
    Ok(IdentityReport::compare(IdentityId::Minus1, lhs, rhs, tolerance_for(digits, &ar), &ar))
}

/// `prod_{j=0}^{m-1} R(w^j t, x) = R(t^m, x^m)` for a primitive `m`-th root of unity `w`.
pub fn check_root_of_unity(t: &ComplexValue, x: &ComplexValue, m: u32, digits: usize) -> Result<IdentityReport> {
    let ar = report_arith(digits);
    check_domain(x, &ar)?;
    if m < 2 {
        return Err(Error::domain("root-of-unity check needs m >= 2"));
    }
    let mut lhs = ComplexValue::one(&ar);
    for j in 0..m {
        let w = ComplexValue::root_of_unity(j as i64, m as i64, &ar);
        lhs = lhs.mul(&r(&w.mul(t, &ar), x, digits)?, &ar);
    }
    let rhs = r(&t.powi(m as usize, &ar), &x.powi(m as usize, &ar), digits)?;
    Ok(IdentityReport::compare(
        IdentityId::RootOfUnity(m),
        lhs,
        rhs,
        tolerance_for(digits, &ar),
        &ar,
    ))
}

/// `R(t,x) = prod_{j=1}^{m} R(t x^{j-m}, x^m)`.
pub fn check_residue_split(t: &ComplexValue, x: &ComplexValue, m: u32, digits: usize) -> Result<IdentityReport> {
    let ar = report_arith(digits);
    check_domain(x, &ar)?;
    if m < 1 {
        return Err(Error::domain("residue split needs m >= 1"));
    }
    if x.is_zero() {
        let one = ComplexValue::one(&ar);
        return Ok(IdentityReport::compare(
            IdentityId::ResidueSplit(m),
            one.clone(),
            one,
            tolerance_for(digits, &ar),
            &ar,
        ));
    }
    let lhs = r(t, x, digits)?;
    let xm = x.powi(m as usize, &ar);
    let mut rhs = ComplexValue::one(&ar);
    for j in 1..=m {
        // t x^{j-m} = t / x^{m-j}
        let shift = t.div(&x.powi((m - j) as usize, &ar), &ar)?;
        rhs = rhs.mul(&r(&shift, &xm, digits)?, &ar);
    }
    Ok(IdentityReport::compare(
        IdentityId::ResidueSplit(m),
        lhs,
        rhs,
        tolerance_for(digits, &ar),
        &ar,
    ))
}

/// `R(|t|,|x|) <= |R(t,x)| <= R(-|t|,|x|)`, the lower bound only when `|t| <= |x|^{-1}`.
///
/// `lhs` is `|R(t,x)|` and `rhs` the upper bound; the discrepancy is the
/// amount by which either inequality is violated.
pub fn check_trivial_bounds(t: &ComplexValue, x: &ComplexValue, digits: usize) -> Result<IdentityReport> {
    let ar = report_arith(digits);
    check_domain(x, &ar)?;
    let ta = ComplexValue::real(t.abs(&ar));
    let xa = ComplexValue::real(x.abs(&ar));
    let value = ComplexValue::real(r(t, x, digits)?.abs(&ar));
    let upper = r(&ta.neg(), &xa, digits)?;
    let mut violation = ar.zero();
    let over = ar.sub(&value.re, &upper.re);
    if over.is_positive() {
        violation = over;
    }
    if ar.mul(&ta.re, &xa.re) <= ar.one() {
        let lower = r(&ta, &xa, digits)?;
        let under = ar.sub(&lower.re, &value.re);
        if under > violation {
            violation = under;
        }
    }
    let scale = ar.max(&value.re, &upper.re);
    let rel = if scale.is_zero() { ar.zero() } else { ar.div(&violation, &scale) };
    Ok(IdentityReport::from_parts(
        IdentityId::TrivialBounds,
        value,
        upper,
        violation,
        rel,
        tolerance_for(digits, &ar),
    ))
}

/// Every check at one sample point: pentagonal, the four theta identities,
/// both Rogers-Ramanujan identities, `R(-1,x)`, roots of unity and residue
/// splits for `m = 2, 3`, and the trivial bounds.
pub fn check_all(t: &ComplexValue, x: &ComplexValue, digits: usize, theta_fault: bool) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::with_capacity(14);
    out.push(check_pentagonal(x, digits)?);
    out.extend(check_theta_identities_with(x, digits, theta_fault)?);
    let (a, b) = check_rogers_ramanujan(x, digits)?;
    out.push(a);
    out.push(b);
    out.push(check_minus1(x, digits)?);
    for m in [2, 3] {
        out.push(check_root_of_unity(t, x, m, digits)?);
    }
    for m in [2, 3] {
        out.push(check_residue_split(t, x, m, digits)?);
    }
    out.push(check_trivial_bounds(t, x, digits)?);
    Ok(out)
}
