use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Args;
use qprod_core::numeric::format_real;
use qprod_core::{Arith, BigFloat, ComplexValue, Method};
use rayon::prelude::*;
use serde::Serialize;

use crate::common::{complex_at, real_at, write_csv, CliError, CliResult};
use crate::eval::{compute, parse_method, Inputs};

pub const HEADER: [&str; 6] = [
    "method",
    "gamma",
    "terms",
    "wall_time_ns",
    "rel_err_vs_reference",
    "min_denominator_modulus",
];

/// Digits added to the reference evaluation.
const REFERENCE_EXTRA_DIGITS: usize = 10;

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated gamma values; each runs at x = exp(-gamma).
    #[arg(long)]
    pub gamma_list: String,
    #[arg(long, default_value_t = 30)]
    pub digits: usize,
    /// Comma-separated methods: euler, product, corrected, log, gatteschi, slater.
    #[arg(long)]
    pub methods: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub t: String,
    /// Gatteschi parameter sigma.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub sigma: String,
    /// Output path (standard output if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall-clock times; otherwise the column is 0 so output is reproducible.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Serialize)]
struct BenchRecord {
    method: &'static str,
    gamma: String,
    terms: usize,
    wall_time_ns: u128,
    rel_err_vs_reference: String,
    min_denominator_modulus: String,
}

struct GammaInputs<'a> {
    t: &'a str,
    gamma: &'a str,
}

impl Inputs for GammaInputs<'_> {
    fn t(&self, digits: usize) -> CliResult<ComplexValue> {
        complex_at(self.t, digits)
    }
    fn x(&self, digits: usize) -> CliResult<ComplexValue> {
        let ar = Arith::with_digits(digits);
        let g = real_at(self.gamma, digits)?;
        if g <= ar.zero() {
            return Err(qprod_core::Error::Domain("gamma must be positive".into()).into());
        }
        Ok(ComplexValue::real(ar.exp(&g.neg())))
    }
}

fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect()
}

fn rel_error(v: &ComplexValue, reference: &ComplexValue, ar: &Arith) -> BigFloat {
    let d = v.sub(reference, ar).abs(ar);
    let r = reference.abs(ar);
    if r.is_zero() {
        d
    } else {
        ar.div(&d, &r)
    }
}

pub fn run(a: &BenchArgs) -> CliResult<ExitCode> {
    let methods: Vec<Method> = split_list(&a.methods)
        .into_iter()
        .map(|m| parse_method(m).map_err(CliError::usage))
        .collect::<CliResult<_>>()?;
    if methods.is_empty() {
        return Err(CliError::usage("--methods must name at least one method"));
    }
    let gammas = split_list(&a.gamma_list);
    if gammas.is_empty() {
        return Err(CliError::usage("--gamma-list must contain at least one value"));
    }
    if a.digits == 0 {
        return Err(CliError::usage("--digits must be at least 1"));
    }
    let sig = a.digits + 5;

    let references: Vec<ComplexValue> = gammas
        .par_iter()
        .map(|g| {
            let inputs = GammaInputs { t: &a.t, gamma: g };
            compute(Method::Euler, &inputs, a.digits + REFERENCE_EXTRA_DIGITS, &a.sigma, None).map(|c| c.value)
        })
        .collect::<CliResult<_>>()?;

    let jobs: Vec<(usize, Method)> = (0..gammas.len())
        .flat_map(|g| methods.iter().map(move |m| (g, *m)))
        .collect();
    let rows: Vec<BenchRecord> = jobs
        .par_iter()
        .map(|&(gi, method)| {
            let inputs = GammaInputs { t: &a.t, gamma: gammas[gi] };
            let start = Instant::now();
            let c = compute(method, &inputs, a.digits, &a.sigma, None)?;
            let elapsed = start.elapsed().as_nanos();
            let ar = Arith::with_digits(sig + 5);
            let gamma = real_at(gammas[gi], sig)?;
            Ok(BenchRecord {
                method: method.as_str(),
                gamma: format_real(&gamma, sig, &ar),
                terms: c.terms_used,
                wall_time_ns: if a.timing { elapsed } else { 0 },
                rel_err_vs_reference: format_real(&rel_error(&c.value, &references[gi], &ar), sig, &ar),
                min_denominator_modulus: c
                    .min_partial_modulus
                    .as_ref()
                    .map_or_else(String::new, |m| format_real(m, sig, &ar)),
            })
        })
        .collect::<CliResult<_>>()?;
    write_csv(a.out.as_deref(), &HEADER, &rows)?;
    Ok(ExitCode::SUCCESS)
}
