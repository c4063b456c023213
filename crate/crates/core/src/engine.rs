//! Certified evaluation of `R(t,x) = prod_{n>=1} (1 - t x^n)` by Euler's series
//!
//! ```text
//! R(t,x) = sum_{n>=0} a_n,   a_0 = 1,   a_n = a_{n-1} (-t x^n) / (1 - x^n).
//! ```
//!
//! Inputs with `|t| > 1` are first moved into the unit disc with the
//! functional equation `R(t,x) = (1 - tx) R(tx, x)`. The series is then
//! summed until the a posteriori tail bound certifies the requested
//! relative accuracy `e^{-K}`, with the a priori term count as a hard cap.

use astro_float::BigFloat;

use crate::bounds::{aposteriori, apriori_rel};
use crate::error::{Error, Result};
use crate::method::Method;
use crate::numeric::{gamma_of, plan_precision, to_f64, Arith, ComplexValue, PrecisionContext};

/// Precision used for bound arithmetic; bounds need few correct digits.
const BOUND_BITS: usize = 128;

/// Term counts for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPlan {
    /// Terms after which the a priori bound guarantees `delta_N <= e^{-K}`.
    pub n_apriori: usize,
    /// First `N` at which the a posteriori bound is consulted.
    pub n_posteriori_min: usize,
    pub target_k: f64,
}

/// `ceil(sqrt(2 pi^2 / (3 gamma^2) + 2K / gamma))`, at least 1.
pub fn apriori_term_count(gamma: f64, k: f64) -> usize {
    let pi2 = core::f64::consts::PI * core::f64::consts::PI;
    let v = libm::sqrt(2.0 * pi2 / (3.0 * gamma * gamma) + 2.0 * k.max(0.0) / gamma);
    let n = libm::ceil(v);
    if n.is_finite() {
        (n as usize).max(1)
    } else {
        usize::MAX
    }
}

/// `ceil(log(1 + 2|t|) / gamma)`.
pub fn posteriori_min_terms(gamma: f64, t_abs: f64) -> usize {
    let n = libm::ceil(libm::log1p(2.0 * t_abs) / gamma);
    if n.is_finite() {
        n.max(0.0) as usize
    } else {
        usize::MAX
    }
}

/// Plans the truncation for `|x| < 1`; `t` should already be reduced to `|t| <= 1`.
pub fn plan_truncation(t: &ComplexValue, x: &ComplexValue, k: f64, ar: &Arith) -> Result<TruncationPlan> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::domain("K must be a non-negative finite real"));
    }
    let gamma = gamma_of(x, ar)?.as_f64();
    let t_abs = to_f64(&t.abs(ar));
    Ok(TruncationPlan {
        n_apriori: apriori_term_count(gamma, k),
        n_posteriori_min: posteriori_min_terms(gamma, t_abs),
        target_k: k,
    })
}

/// Outcome of moving `t` into the closed unit disc.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    /// `prod_{j=1}^{k} (1 - t x^j)`.
    pub prefix: ComplexValue,
    /// `t x^k`, with `|t x^k| <= 1`.
    pub t_reduced: ComplexValue,
    pub steps: usize,
    /// Heuristic bound on the relative rounding error in `prefix`.
    pub prefix_rounding: BigFloat,
}

/// Applies the functional equation until `|t| <= 1`.
pub fn reduce_t(t: &ComplexValue, x: &ComplexValue, ar: &Arith) -> Result<Reduction> {
    let one = ar.one();
    if x.norm_sqr(ar) >= one {
        return Err(Error::domain("x outside open unit disc"));
    }
    let br = Arith::with_bits(BOUND_BITS.min(ar.bits()));
    let u = ar.epsilon();
    let mut prefix = ComplexValue::one(ar);
    let mut cur = t.rounded(ar);
    let mut steps = 0usize;
    let mut rounding = br.zero();
    if x.is_zero() {
        return Ok(Reduction {
            prefix,
            t_reduced: cur,
            steps,
            prefix_rounding: rounding,
        });
    }
    while cur.norm_sqr(ar) > one {
        cur = cur.mul(x, ar);
        let factor = cur.one_minus(ar);
        steps += 1;
        prefix = prefix.mul(&factor, ar);
        if prefix.is_zero() {
            break;
        }
        // j roundings in t x^j, amplified by cancellation in 1 - t x^j
        let amp = br.div(&cur.abs(&br), &factor.abs(&br));
        let step = br.mul(&u, &br.add(&br.int(4), &br.mul(&br.uint(steps as u64), &amp)));
        rounding = br.add(&rounding, &step);
    }
    Ok(Reduction {
        prefix,
        t_reduced: cur,
        steps,
        prefix_rounding: rounding,
    })
}

/// `a_n / a_{n-1} = -t x^n / (1 - x^n)`.
pub fn term_ratio(t: &ComplexValue, x: &ComplexValue, n: usize, ar: &Arith) -> Result<ComplexValue> {
    if n == 0 {
        return Err(Error::domain("term ratio needs n >= 1"));
    }
    let xn = x.powi(n, ar);
    t.mul(&xn, ar).neg().div(&xn.one_minus(ar), ar)
}

/// Running state of the series: `a_n`, `S_{n+1} = a_0 + ... + a_n` and the
/// largest `|a_k|` seen so far.
#[derive(Debug, Clone)]
pub struct SeriesState {
    pub n: usize,
    pub a_n: ComplexValue,
    pub s_n: ComplexValue,
    pub max_abs_term: BigFloat,
    x_pow: ComplexValue,
    max_norm: BigFloat,
}

impl SeriesState {
    pub fn new(ar: &Arith) -> Self {
        SeriesState {
            n: 0,
            a_n: ComplexValue::one(ar),
            s_n: ComplexValue::one(ar),
            max_abs_term: ar.one(),
            x_pow: ComplexValue::one(ar),
            max_norm: ar.one(),
        }
    }

    /// Number of terms in `s_n`.
    pub fn terms(&self) -> usize {
        self.n + 1
    }

    /// Computes the next term and adds it to the partial sum.
    pub fn advance(&mut self, t: &ComplexValue, x: &ComplexValue, ar: &Arith) -> Result<()> {
        self.n += 1;
        self.x_pow = self.x_pow.mul(x, ar);
        let den = self.x_pow.one_minus(ar);
        if den.is_zero() {
            return Err(Error::DivisionByZero("term ratio"));
        }
        let ratio = t.mul(&self.x_pow, ar).neg().div(&den, ar)?;
        self.a_n = self.a_n.mul(&ratio, ar);
        self.s_n = self.s_n.add(&self.a_n, ar);
        if !self.s_n.is_finite() {
            return Err(Error::NonFinite("series term"));
        }
        let norm = self.a_n.norm_sqr(ar);
        if norm > self.max_norm {
            self.max_norm = norm;
            self.max_abs_term = self.a_n.abs(ar);
        }
        Ok(())
    }
}

/// When to stop summing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stopping {
    /// First `N >= N_posteriori_min` whose a posteriori bound certifies `e^{-K}`,
    /// capped at `N_apriori`.
    #[default]
    Adaptive,
    /// Exactly `N_apriori` terms.
    Apriori,
    /// Exactly the given number of terms (at least one), with no accuracy check.
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// `t = 0` or `x = 0`.
    Trivial,
    /// The reduction prefix vanished.
    ExactZero,
    Posteriori,
    Apriori,
    Fixed,
}

/// Which error bound a certificate should be read by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Authority {
    Relative,
    Absolute,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalCertificate {
    pub value: ComplexValue,
    /// Bound on `|value - R| / |R|`.
    pub rel_error_bound: BigFloat,
    /// Bound on `|value - R|`.
    pub abs_error_bound: BigFloat,
    pub terms_used: usize,
    pub max_abs_term: BigFloat,
    pub method: Method,
    pub t_reduction_steps: usize,
    pub authority: Authority,
    pub stop: StopReason,
    pub working_digits: usize,
    /// Truncation part of `rel_error_bound`.
    pub truncation_bound: BigFloat,
    /// Rounding part of `rel_error_bound`.
    pub rounding_allowance: BigFloat,
    pub plan: Option<TruncationPlan>,
}

impl EvalCertificate {
    fn exact(value: ComplexValue, ctx: &PrecisionContext, stop: StopReason, steps: usize, ar: &Arith) -> Self {
        let authority = if value.is_zero() {
            Authority::Absolute
        } else {
            Authority::Relative
        };
        EvalCertificate {
            value,
            rel_error_bound: ar.zero(),
            abs_error_bound: ar.zero(),
            terms_used: 0,
            max_abs_term: ar.zero(),
            method: Method::Euler,
            t_reduction_steps: steps,
            authority,
            stop,
            working_digits: ctx.working_digits,
            truncation_bound: ar.zero(),
            rounding_allowance: ar.zero(),
            plan: None,
        }
    }
}

/// Evaluates `R(t,x)` with adaptive stopping.
pub fn evaluate(t: &ComplexValue, x: &ComplexValue, ctx: &PrecisionContext, k: f64) -> Result<EvalCertificate> {
    evaluate_with(t, x, ctx, k, Stopping::Adaptive)
}

/// Evaluates `R(t,x)` to `digits` correct digits with a planned precision
/// and `K = (digits + 2) ln 10`.
pub fn evaluate_to_digits(t: &ComplexValue, x: &ComplexValue, digits: usize) -> Result<EvalCertificate> {
    let ctx = plan_evaluation(t, x, digits)?;
    evaluate(t, x, &ctx, ctx.default_k())
}

/// The precision [`evaluate_to_digits`] would use for these arguments.
pub fn plan_evaluation(t: &ComplexValue, x: &ComplexValue, digits: usize) -> Result<PrecisionContext> {
    let probe = Arith::with_bits(BOUND_BITS);
    match gamma_of(x, &probe) {
        Ok(g) => Ok(plan_precision_for(digits, &g, t, &probe)),
        Err(Error::Degenerate) => PrecisionContext::with_working(digits.max(1), digits.max(1) + 10),
        Err(e) => Err(e),
    }
}

fn plan_precision_for(digits: usize, g: &crate::numeric::GammaParam, t: &ComplexValue, ar: &Arith) -> PrecisionContext {
    let mut ctx = plan_precision(digits, g);
    // digits of |t| that the reduction prefix moves into the product
    let t_digits = libm::log10(to_f64(&t.abs(ar)).max(1.0));
    if t_digits.is_finite() {
        ctx.working_digits += libm::ceil(t_digits) as usize;
    }
    ctx
}

/// Evaluates `R(t,x)` at the precision of `ctx`, certifying `e^{-K}`.
pub fn evaluate_with(
    t: &ComplexValue,
    x: &ComplexValue,
    ctx: &PrecisionContext,
    k: f64,
    stopping: Stopping,
) -> Result<EvalCertificate> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::domain("K must be a non-negative finite real"));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("t"));
    }
    if !x.is_finite() {
        return Err(Error::NonFinite("x"));
    }
    let ar = ctx.arith();
    if x.norm_sqr(&ar) >= ar.one() {
        return Err(Error::domain("x outside open unit disc"));
    }
    if t.is_zero() || x.is_zero() {
        return Ok(EvalCertificate::exact(ComplexValue::one(&ar), ctx, StopReason::Trivial, 0, &ar));
    }
    let x = x.rounded(&ar);
    let red = reduce_t(t, &x, &ar)?;
    if red.prefix.is_zero() {
        return Ok(EvalCertificate::exact(
            ComplexValue::zero(&ar),
            ctx,
            StopReason::ExactZero,
            red.steps,
            &ar,
        ));
    }
    let tr = &red.t_reduced;
    let plan = plan_truncation(tr, &x, k, &ar)?;
    let br = Arith::with_bits(BOUND_BITS.min(ar.bits()));
    let target = br.exp(&br.from_f64(-k));
    let u = ar.epsilon();

    let rounding_of = |state: &SeriesState| -> BigFloat {
        let n = br.uint(state.terms() as u64);
        let growth = br.div(&state.max_abs_term, &state.s_n.abs(&br));
        let series = br.mul(&br.mul(&u, &br.mul(&br.int(8), &br.sqr(&n))), &growth);
        br.add(&series, &red.prefix_rounding)
    };
    // delta <= delta' / (1 - delta')
    let converted = |d: &BigFloat| -> Option<BigFloat> {
        let one = br.one();
        let rest = br.sub(&one, d);
        if rest.is_positive() && !rest.is_zero() {
            Some(br.div(d, &rest))
        } else {
            None
        }
    };
    // a_{N-1} is the last term included in S_N
    let posteriori_rel = |state: &SeriesState| -> Option<BigFloat> {
        let (_, rel) = aposteriori(tr, &x, state.terms(), &state.a_n, &state.s_n, &br);
        rel.value.as_ref().and_then(converted)
    };

    let cap = match stopping {
        Stopping::Adaptive | Stopping::Apriori => plan.n_apriori,
        Stopping::Fixed(n) => n.max(1),
    };
    let mut state = SeriesState::new(&ar);
    let mut stop = match stopping {
        Stopping::Fixed(_) => StopReason::Fixed,
        _ => StopReason::Apriori,
    };
    let mut post_bound: Option<BigFloat> = None;
    while state.terms() < cap {
        state.advance(tr, &x, &ar)?;
        if stopping == Stopping::Adaptive && state.terms() >= plan.n_posteriori_min {
            if let Some(b) = posteriori_rel(&state) {
                let total = br.add(&b, &rounding_of(&state));
                if total <= target {
                    post_bound = Some(b);
                    stop = StopReason::Posteriori;
                    break;
                }
            }
        }
    }
    if post_bound.is_none() {
        post_bound = posteriori_rel(&state);
    }

    let n_used = state.terms();
    let pri = apriori_rel(tr, &x, n_used, &br).value;
    let truncation = match (pri, post_bound) {
        (Some(a), Some(b)) => br.min(&a, &b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => BigFloat::from_f64(f64::INFINITY, BOUND_BITS),
    };
    let rounding = rounding_of(&state);
    let rel = br.add(&truncation, &rounding);
    if !matches!(stopping, Stopping::Fixed(_)) && rel > target {
        return Err(Error::Inconsistent(alloc::format!(
            "relative bound {:e} exceeds e^-K after {} terms at {} working digits",
            to_f64(&rel),
            n_used,
            ctx.working_digits
        )));
    }

    let value = red.prefix.mul(&state.s_n, &ar);
    let value_abs = value.abs(&br);
    let one = br.one();
    let abs = if rel < one {
        br.div(&br.mul(&rel, &value_abs), &br.sub(&one, &rel))
    } else {
        BigFloat::from_f64(f64::INFINITY, BOUND_BITS)
    };
    let max_abs_term = br.round(&state.max_abs_term);
    Ok(EvalCertificate {
        value,
        rel_error_bound: rel,
        abs_error_bound: abs,
        terms_used: n_used,
        max_abs_term,
        method: Method::Euler,
        t_reduction_steps: red.steps,
        authority: Authority::Relative,
        stop,
        working_digits: ctx.working_digits,
        truncation_bound: truncation,
        rounding_allowance: rounding,
        plan: Some(plan),
    })
}
