use std::process::ExitCode;

use clap::Args;
use qprod_core::baselines::{
    corrected_product, direct_product, gatteschi_accelerated, gatteschi_run, lambert_log, slater_series,
    terms_for_digits,
};
use qprod_core::numeric::{format_real, to_f64};
use qprod_core::{evaluate, plan_evaluation, Arith, BigFloat, ComplexValue, Method};
use serde::Serialize;

use crate::common::{check_working_digits, complex_at, CliError, CliResult, PROBE_EXTRA_DIGITS};

#[derive(Args)]
pub struct EvalArgs {
    /// Complex t, e.g. `1`, `-0.5+2i`, `1e-3i`.
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    /// Complex x with |x| < 1.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Requested significant digits.
    #[arg(long, default_value_t = 30)]
    pub digits: usize,
    #[arg(long, default_value = "euler", value_parser = parse_method)]
    pub method: Method,
    /// Gatteschi parameter sigma.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub sigma: String,
    /// Truncation length for product and gatteschi (planned from --digits if absent).
    #[arg(long)]
    pub terms: Option<usize>,
}

pub fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

/// Result of running any method.
pub struct Computed {
    pub value: ComplexValue,
    pub rel_error_bound: Option<BigFloat>,
    pub terms_used: usize,
    pub working_digits: usize,
    pub t_reduction_steps: usize,
    pub min_partial_modulus: Option<BigFloat>,
    pub arith: Arith,
}

/// How the arguments are materialised at a given precision.
pub trait Inputs {
    fn t(&self, digits: usize) -> CliResult<ComplexValue>;
    fn x(&self, digits: usize) -> CliResult<ComplexValue>;
}

pub struct TextInputs<'a> {
    pub t: &'a str,
    pub x: &'a str,
}

impl Inputs for TextInputs<'_> {
    fn t(&self, digits: usize) -> CliResult<ComplexValue> {
        complex_at(self.t, digits)
    }
    fn x(&self, digits: usize) -> CliResult<ComplexValue> {
        complex_at(self.x, digits)
    }
}

fn ceil_log10(v: f64) -> usize {
    if v > 1.0 && v.is_finite() {
        v.log10().ceil() as usize
    } else {
        0
    }
}

pub fn compute(
    method: Method,
    inputs: &dyn Inputs,
    digits: usize,
    sigma: &str,
    terms: Option<usize>,
) -> CliResult<Computed> {
    if digits == 0 {
        return Err(CliError::usage("--digits must be at least 1"));
    }
    let probe = digits + PROBE_EXTRA_DIGITS;
    let t0 = inputs.t(probe)?;
    let x0 = inputs.x(probe)?;
    let pa = Arith::with_digits(probe);
    if x0.norm_sqr(&pa) >= pa.one() {
        return Err(qprod_core::Error::Domain("x outside open unit disc".into()).into());
    }
    let t_abs = to_f64(&t0.abs(&pa));
    let x_abs = to_f64(&x0.abs(&pa));
    let gamma = -x_abs.ln();

    if method == Method::Euler {
        let ctx = plan_evaluation(&t0, &x0, digits)?;
        check_working_digits(ctx.working_digits)?;
        let t = inputs.t(ctx.working_digits)?;
        let x = inputs.x(ctx.working_digits)?;
        let cert = evaluate(&t, &x, &ctx, ctx.default_k())?;
        return Ok(Computed {
            value: cert.value,
            rel_error_bound: Some(cert.rel_error_bound),
            terms_used: cert.terms_used,
            working_digits: cert.working_digits,
            t_reduction_steps: cert.t_reduction_steps,
            min_partial_modulus: None,
            arith: ctx.arith(),
        });
    }

    let second_order = matches!(method, Method::Corrected | Method::Gatteschi);
    let planned = terms.unwrap_or_else(|| terms_for_digits(second_order, t_abs, x_abs, digits));
    let estimate = terms_for_digits(false, t_abs, x_abs, digits).max(planned);
    let mut working = digits + 10 + ceil_log10(estimate as f64 + 1.0);
    match method {
        Method::Lambert => working += ceil_log10(1.0 / gamma),
        Method::Slater => working += (1.07 / gamma).ceil() as usize,
        _ => {}
    }
    check_working_digits(working)?;
    let ar = Arith::with_digits(working);
    let t = inputs.t(working)?;
    let x = inputs.x(working)?;
    let tol = ar.pow10(-(digits as i64) - 2);
    let (value, terms_used, min_partial_modulus) = match method {
        Method::Product => (direct_product(&t, &x, planned, &ar), planned, None),
        Method::Corrected => (corrected_product(&t, &x, planned, &ar)?, planned, None),
        Method::Lambert => {
            let r = lambert_log(&t, &x, &tol, &ar)?;
            (r.value, r.terms, None)
        }
        Method::Slater => {
            let r = slater_series(&t, &x, &tol, &ar)?;
            (r.value, r.terms, r.min_partial_modulus)
        }
        Method::Gatteschi => {
            let s = complex_at(sigma, working)?;
            let state = gatteschi_run(&t, &x, &s, planned, &ar)?;
            (gatteschi_accelerated(&state, &x, &ar)?, planned, None)
        }
        Method::Euler => unreachable!("handled above"),
    };
    Ok(Computed {
        value,
        rel_error_bound: None,
        terms_used,
        working_digits: working,
        t_reduction_steps: 0,
        min_partial_modulus,
        arith: ar,
    })
}

#[derive(Serialize)]
struct EvalJson {
    value_re: String,
    value_im: String,
    rel_error_bound: String,
    terms_used: usize,
    working_digits: usize,
    method: &'static str,
    t_reduction_steps: usize,
}

pub fn run(a: &EvalArgs) -> CliResult<ExitCode> {
    let inputs = TextInputs { t: &a.t, x: &a.x };
    let c = compute(a.method, &inputs, a.digits, &a.sigma, a.terms)?;
    let ar = &c.arith;
    let out = EvalJson {
        value_re: format_real(&c.value.re, a.digits, ar),
        value_im: format_real(&c.value.im, a.digits, ar),
        rel_error_bound: c
            .rel_error_bound
            .as_ref()
            .map_or_else(|| "none".to_string(), |b| format_real(b, 6, ar)),
        terms_used: c.terms_used,
        working_digits: c.working_digits,
        method: a.method.as_str(),
        t_reduction_steps: c.t_reduction_steps,
    };
    println!("{}", serde_json::to_string(&out).expect("plain struct serializes"));
    Ok(ExitCode::SUCCESS)
}
