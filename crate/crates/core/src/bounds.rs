//! Quantitative bounds on `R(t,x)`, its logarithm and the truncation error
//! of Euler's series.
//!
//! Every bound checks its own hypotheses. A bound whose hypotheses fail
//! reports `hypotheses_met = false` and carries no value, so certificates
//! are never assembled from out-of-range estimates.

use astro_float::BigFloat;

use crate::error::{Error, Result};
use crate::numeric::{Arith, ComplexValue};

/// Which bound a [`BoundReport`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundId {
    /// `|log R| <= -log(1-|tx|)/(1-|x|)`.
    CrudeLog,
    /// A priori tail bound on the absolute error.
    AprioriAbs,
    /// A priori relative bound for `|t| <= 1`.
    AprioriRelUnit,
    /// A priori relative bound for `1 < |t| < e^gamma`.
    AprioriRelNearUnit,
    /// A posteriori absolute bound from the last included term.
    APosterioriAbs,
    /// A posteriori bound relative to the partial sum.
    APosterioriRel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub bound_id: BoundId,
    /// Present exactly when `hypotheses_met`.
    pub value: Option<BigFloat>,
    pub hypotheses_met: bool,
}

impl BoundReport {
    fn met(bound_id: BoundId, value: BigFloat) -> Self {
        BoundReport {
            bound_id,
            value: Some(value),
            hypotheses_met: true,
        }
    }

    fn unmet(bound_id: BoundId) -> Self {
        BoundReport {
            bound_id,
            value: None,
            hypotheses_met: false,
        }
    }
}

fn gamma_from_abs(x_abs: &BigFloat, ar: &Arith) -> BigFloat {
    ar.ln(x_abs).neg()
}

/// Crude bound on `|log R(t,x)|` valid for `|x| < 1`, `|tx| < 1`.
pub fn crude_log_bound(t: &ComplexValue, x: &ComplexValue, ar: &Arith) -> BoundReport {
    let xa = x.abs(ar);
    let txa = ar.mul(&t.abs(ar), &xa);
    let one = ar.one();
    if xa >= one || txa >= one {
        return BoundReport::unmet(BoundId::CrudeLog);
    }
    let num = ar.ln(&ar.sub(&one, &txa)).neg();
    BoundReport::met(BoundId::CrudeLog, ar.round(&ar.div(&num, &ar.sub(&one, &xa))))
}

/// `S(x) = -log R(1,x)` and its first two derivatives for real `0 <= x < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambertSums {
    pub s: BigFloat,
    pub s1: BigFloat,
    pub s2: BigFloat,
}

impl LambertSums {
    /// Whether the elementary two-sided bounds on `S`, `S'` and `S''` hold at `x`.
    pub fn sandwich_holds(&self, x: &BigFloat, ar: &Arith) -> bool {
        let one = ar.one();
        let omx = ar.sub(&one, x);
        let lg = ar.ln(&omx).neg();
        let s_ok = lg <= self.s && self.s <= ar.div(&lg, &omx);
        let s1_ok = ar.recip(&omx) <= self.s1 && self.s1 <= ar.recip(&ar.powi(&omx, 3));
        let x2 = ar.sqr(x);
        let omx2 = ar.sub(&one, &x2);
        let two_m = ar.sub(&ar.int(2), &x2);
        let lower = ar.add(
            &ar.recip(&ar.sqr(&omx)),
            &ar.div(&two_m, &ar.sqr(&omx2)),
        );
        let upper = ar.add(
            &ar.recip(&ar.powi(&omx, 5)),
            &ar.div(&two_m, &ar.mul(&ar.powi(&omx, 3), &ar.sqr(&omx2))),
        );
        s_ok && s1_ok && lower <= self.s2 && self.s2 <= upper
    }
}

/// Direct summation of the Lambert series for `S`, `S'`, `S''`.
pub fn lambert_sums(x: &BigFloat, ar: &Arith) -> Result<LambertSums> {
    let one = ar.one();
    if x.is_negative() || *x >= one {
        return Err(Error::domain("lambert sums need 0 <= x < 1"));
    }
    let eps = ar.epsilon();
    let tail_factor = ar.recip(&ar.sub(&one, x));
    let mut s = ar.zero();
    let mut s1 = ar.zero();
    let mut s2 = ar.zero();
    // x^(k-2), x^(k-1), x^k
    let mut p_km2 = ar.zero();
    let mut p_km1 = ar.one();
    let mut p_k = ar.round(x);
    let mut k: i64 = 1;
    loop {
        let den = ar.sub(&one, &p_k);
        let kk = ar.int(k);
        let ts = ar.div(&p_k, &ar.mul(&kk, &den));
        let den2 = ar.sqr(&den);
        let ts1 = ar.div(&p_km1, &den2);
        let lead = if k >= 2 {
            ar.mul(&ar.int(k - 1), &p_km2)
        } else {
            ar.zero()
        };
        let ts2 = ar.div(
            &ar.add(&lead, &ar.mul(&ar.int(k + 1), &ar.sqr(&p_km1))),
            &ar.mul(&den2, &den),
        );
        s = ar.add(&s, &ts);
        s1 = ar.add(&s1, &ts1);
        s2 = ar.add(&s2, &ts2);

        let small = |term: &BigFloat, sum: &BigFloat| {
            ar.mul(term, &tail_factor) <= ar.mul(&eps, sum) || term.is_zero()
        };
        if k >= 3 && small(&ts, &s) && small(&ts1, &s1) && small(&ts2, &s2) {
            break;
        }
        p_km2 = if k == 1 { ar.one() } else { ar.mul(&p_km2, x) };
        p_km1 = p_k.clone();
        p_k = ar.mul(&p_k, x);
        k += 1;
    }
    Ok(LambertSums { s, s1, s2 })
}

/// A priori bound on `Delta_N = |sum_{n >= N} a_n|`, valid for `|t| |x|^{N+1} < 1`.
pub fn apriori_abs(t: &ComplexValue, x: &ComplexValue, n: usize, ar: &Arith) -> BoundReport {
    let ta = t.abs(ar);
    let xa = x.abs(ar);
    let one = ar.one();
    if xa >= one {
        return BoundReport::unmet(BoundId::AprioriAbs);
    }
    let q = ar.mul(&ta, &ar.powi(&xa, n + 1));
    if q >= one {
        return BoundReport::unmet(BoundId::AprioriAbs);
    }
    if ta.is_zero() && n > 0 || xa.is_zero() && n > 0 {
        return BoundReport::met(BoundId::AprioriAbs, ar.zero());
    }
    if xa.is_zero() {
        return BoundReport::met(BoundId::AprioriAbs, one);
    }
    let gamma = gamma_from_abs(&xa, ar);
    let expo = ar.sub(
        &ar.div(&ar.pi_sq(), &ar.mul(&ar.int(6), &gamma)),
        &ar.mul(&ar.frac((n * (n + 1)) as i64, 2), &gamma),
    );
    let v = ar.div(
        &ar.mul(&ar.powi(&ta, n), &ar.exp(&expo)),
        &ar.sub(&one, &q),
    );
    BoundReport::met(BoundId::AprioriAbs, v)
}

/// A priori bound on `delta_N = Delta_N / |R(t,x)|`.
///
/// Uses the `|t| <= 1` form when it applies and the `|t| < e^gamma` form
/// otherwise (an extra factor `1/(1 - |t||x|)`).
pub fn apriori_rel(t: &ComplexValue, x: &ComplexValue, n: usize, ar: &Arith) -> BoundReport {
    let ta = t.abs(ar);
    let xa = x.abs(ar);
    let one = ar.one();
    let unit = ta <= one;
    let id = if unit {
        BoundId::AprioriRelUnit
    } else {
        BoundId::AprioriRelNearUnit
    };
    if xa >= one {
        return BoundReport::unmet(id);
    }
    let txa = ar.mul(&ta, &xa);
    if !unit && txa >= one {
        return BoundReport::unmet(id);
    }
    if xa.is_zero() || ta.is_zero() {
        let v = if n == 0 && !xa.is_zero() { one } else { ar.zero() };
        return BoundReport::met(id, v);
    }
    let gamma = gamma_from_abs(&xa, ar);
    let expo = ar.sub(
        &ar.div(&ar.pi_sq(), &ar.mul(&ar.int(3), &gamma)),
        &ar.mul(&ar.frac((n * (n + 1)) as i64, 2), &gamma),
    );
    let mut v = ar.div(&ar.exp(&expo), &ar.sub(&one, &ar.powi(&xa, n + 1)));
    if !unit {
        v = ar.div(&v, &ar.sub(&one, &txa));
    }
    BoundReport::met(id, v)
}

/// A posteriori bounds from the last included term `a_{N-1}` and the
/// partial sum `S_N`; valid when `N > log(1+|t|)/gamma`.
///
/// Returns `(absolute, relative-to-S_N)`. The relative report is unmet
/// when `S_N = 0`.
pub fn aposteriori(
    t: &ComplexValue,
    x: &ComplexValue,
    n: usize,
    a_prev: &ComplexValue,
    s_n: &ComplexValue,
    ar: &Arith,
) -> (BoundReport, BoundReport) {
    let ta = t.abs(ar);
    let xa = x.abs(ar);
    let one = ar.one();
    let unmet = || {
        (
            BoundReport::unmet(BoundId::APosterioriAbs),
            BoundReport::unmet(BoundId::APosterioriRel),
        )
    };
    if xa >= one || n == 0 {
        return unmet();
    }
    let q = ar.powi(&xa, n);
    // N > log(1+|t|)/gamma  <=>  (1+|t|) |x|^N < 1
    let growth = ar.mul(&ar.add(&one, &ta), &q);
    if growth >= one {
        return unmet();
    }
    let abs = ar.div(
        &ar.mul(&a_prev.abs(ar), &ar.mul(&ta, &q)),
        &ar.sub(&one, &growth),
    );
    let rel = if s_n.is_zero() {
        BoundReport::unmet(BoundId::APosterioriRel)
    } else {
        BoundReport::met(BoundId::APosterioriRel, ar.div(&abs, &s_n.abs(ar)))
    };
    (BoundReport::met(BoundId::APosterioriAbs, abs), rel)
}

/// `Li_2(u) = sum u^k / k^2` by direct summation, for `0 <= u <= 1/2`.
fn dilog_series(u: &BigFloat, ar: &Arith) -> BigFloat {
    let eps = ar.epsilon();
    let mut sum = ar.zero();
    let mut p = ar.round(u);
    let mut k: u64 = 1;
    loop {
        let term = ar.div(&p, &ar.uint(k * k));
        sum = ar.add(&sum, &term);
        // u <= 1/2 makes the remaining tail at most one more term
        if term <= ar.mul(&eps, &sum) || term.is_zero() {
            break;
        }
        p = ar.mul(&p, u);
        k += 1;
    }
    sum
}

/// Real dilogarithm on `[0, 1]`.
///
/// Arguments above `1/2` go through the reflection
/// `Li_2(u) + Li_2(1-u) = pi^2/6 - log(u) log(1-u)`.
pub fn dilog(u: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    let one = ar.one();
    if u.is_nan() || u.is_negative() || *u > one {
        return Err(Error::domain("dilog needs 0 <= u <= 1"));
    }
    let zeta2 = ar.div(&ar.pi_sq(), &ar.int(6));
    if *u == one {
        return Ok(zeta2);
    }
    if u.is_zero() {
        return Ok(ar.zero());
    }
    if *u <= ar.frac(1, 2) {
        return Ok(dilog_series(u, ar));
    }
    let v = ar.sub(&one, u);
    let reflected = ar.sub(&zeta2, &ar.mul(&ar.ln(u), &ar.ln(&v)));
    Ok(ar.sub(&reflected, &dilog_series(&v, ar)))
}

/// Real dilogarithm on `[-1, 1]`, using `Li_2(-u) = Li_2(u^2)/2 - Li_2(u)`
/// for negative arguments.
pub(crate) fn dilog_signed(t: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    if t.is_negative() {
        let u = t.abs();
        let half_sq = ar.div(&dilog(&ar.sqr(&u), ar)?, &ar.int(2));
        return Ok(ar.sub(&half_sq, &dilog(&u, ar)?));
    }
    dilog(t, ar)
}

/// Growth exponent `C(t)` of the largest term: `max_n b_n = exp(C(|t|)/gamma + O(1))`,
/// attained near `n = log(1+t)/gamma`, with
/// `C(t) = log(1+t) log(t^2/(1+t))/2 - Li_2(1/(1+t)) + pi^2/6`.
pub fn largest_term_exponent(t_mod: &BigFloat, ar: &Arith) -> Result<BigFloat> {
    if t_mod.is_nan() || !t_mod.is_positive() || t_mod.is_zero() {
        return Err(Error::domain("largest-term exponent needs t > 0"));
    }
    let opt = ar.add(&ar.one(), t_mod);
    let half = ar.frac(1, 2);
    let l1 = ar.ln(&opt);
    let l2 = ar.ln(&ar.div(&ar.sqr(t_mod), &opt));
    let li = dilog(&ar.recip(&opt), ar)?;
    let zeta2 = ar.div(&ar.pi_sq(), &ar.int(6));
    Ok(ar.add(&ar.sub(&ar.mul(&half, &ar.mul(&l1, &l2)), &li), &zeta2))
}

/// Interval `(lower, upper)` containing `log R(t, e^{-gamma})` for real
/// `0 <= t <= 1`, `gamma > 0`.
pub fn sandwich_log_r_real(t: &BigFloat, gamma: &BigFloat, ar: &Arith) -> Result<(BigFloat, BigFloat)> {
    let one = ar.one();
    if t.is_nan() || t.is_negative() || *t > one {
        return Err(Error::domain("sandwich needs 0 <= t <= 1"));
    }
    if gamma.is_nan() || gamma.is_inf() || !gamma.is_positive() || gamma.is_zero() {
        return Err(Error::domain("sandwich needs gamma > 0"));
    }
    if t.is_zero() {
        return Ok((ar.zero(), ar.zero()));
    }
    let e_half = ar.exp(&ar.div(gamma, &ar.int(2)).neg());
    let e_full = ar.exp(&gamma.neg());
    // -log R <= Li2(t e^{-gamma/2}) / gamma
    let upper_neg = ar.div(&dilog(&ar.mul(t, &e_half), ar)?, gamma);
    // -log R >= Li2(t e^{-gamma}) / gamma - log(1 - t e^{-gamma}) / 2
    let te = ar.mul(t, &e_full);
    let lower_neg = ar.sub(
        &ar.div(&dilog(&te, ar)?, gamma),
        &ar.div(&ar.ln(&ar.sub(&one, &te)), &ar.int(2)),
    );
    Ok((upper_neg.neg(), lower_neg.neg()))
}

/// Lower bounds on `prod_{k=1}^n (1 - e^{-k gamma})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialProductLower {
    /// Dilogarithm form, valid for every `n >= 1`.
    pub general: BigFloat,
    /// Closed form, present when `n gamma <= log 2`.
    pub specialized: Option<BigFloat>,
}

pub fn partial_product_lower(n: usize, gamma: &BigFloat, ar: &Arith) -> Result<PartialProductLower> {
    if n == 0 {
        return Err(Error::domain("partial product bound needs n >= 1"));
    }
    if gamma.is_nan() || gamma.is_inf() || !gamma.is_positive() || gamma.is_zero() {
        return Err(Error::domain("partial product bound needs gamma > 0"));
    }
    let ng = ar.mul(&ar.uint(n as u64), gamma);
    let q = ar.exp(&ng.neg());
    let root = ar.sqrt(&ar.sub(&ar.one(), &q));
    let zeta2 = ar.div(&ar.pi_sq(), &ar.int(6));
    let general = ar.mul(
        &ar.exp(&ar.div(&ar.sub(&dilog(&q, ar)?, &zeta2), gamma)),
        &root,
    );
    let ln2 = ar.ln2();
    let specialized = (ng <= ln2).then(|| {
        let c = ar.add(
            &ar.div(&ar.sqr(&ln2), &ar.int(2)),
            &ar.div(&ar.pi_sq(), &ar.int(12)),
        );
        ar.mul(&ar.exp(&ar.div(&c, gamma).neg()), &root)
    });
    Ok(PartialProductLower { general, specialized })
}
