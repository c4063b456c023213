use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, ValueEnum};
use qprod_core::eta::{f_of, g_of, r0_plus};
use qprod_core::numeric::format_real;
use qprod_core::{evaluate_to_digits, Arith, BigFloat, ComplexValue, Error};
use rayon::prelude::*;
use serde::Serialize;

use crate::common::{check_working_digits, real_at, write_csv, CliError, CliResult};

pub const HEADER: [&str; 3] = ["z", "log_z", "value"];

#[derive(Clone, Copy, ValueEnum)]
pub enum PlotFunction {
    F,
    G,
    #[value(name = "R0ratio")]
    R0Ratio,
}

#[derive(Args)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub function: PlotFunction,
    #[arg(long, default_value = "0.1", allow_hyphen_values = true)]
    pub z_min: String,
    #[arg(long, default_value = "10", allow_hyphen_values = true)]
    pub z_max: String,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[arg(long, default_value_t = 20)]
    pub digits: usize,
    /// Output path (standard output if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct PlotRow {
    z: String,
    log_z: String,
    value: String,
}

fn ratio(z: &BigFloat, digits: usize, ar: &Arith) -> CliResult<BigFloat> {
    let x = ar.exp(&ar.mul(&ar.mul(&ar.int(-2), &ar.pi()), z));
    let r = evaluate_to_digits(&ComplexValue::one(ar), &ComplexValue::real(x.clone()), digits)?;
    Ok(ar.div(&r.value.re, &r0_plus(&x, ar)?))
}

pub fn run(a: &PlotArgs) -> CliResult<ExitCode> {
    if a.points == 0 {
        return Err(CliError::usage("--points must be at least 1"));
    }
    if a.digits == 0 {
        return Err(CliError::usage("--digits must be at least 1"));
    }
    let working = a.digits + 10;
    check_working_digits(working)?;
    let ar = Arith::with_digits(working);
    let lo = real_at(&a.z_min, working)?;
    let hi = real_at(&a.z_max, working)?;
    if lo <= ar.zero() || hi <= ar.zero() {
        return Err(Error::Domain("z-min and z-max must be positive".into()).into());
    }
    if hi < lo {
        return Err(CliError::usage("--z-max must not be below --z-min"));
    }
    let log_lo = ar.ln(&lo);
    let log_hi = ar.ln(&hi);
    let step = if a.points > 1 {
        ar.div(&ar.sub(&log_hi, &log_lo), &ar.uint(a.points as u64 - 1))
    } else {
        ar.zero()
    };
    let sig = a.digits + 5;
    let rows: Vec<PlotRow> = (0..a.points)
        .into_par_iter()
        .map(|i| {
            let ar = Arith::with_digits(working);
            // endpoints are taken verbatim so that e.g. z = 1 is hit exactly
            let (z, log_z) = if i == 0 {
                (lo.clone(), log_lo.clone())
            } else if i + 1 == a.points {
                (hi.clone(), log_hi.clone())
            } else {
                let l = ar.add(&log_lo, &ar.mul(&step, &ar.uint(i as u64)));
                (ar.exp(&l), l)
            };
            let value = match a.function {
                PlotFunction::F => f_of(&z, &ar)?,
                PlotFunction::G => g_of(&z, &ar)?,
                PlotFunction::R0Ratio => ratio(&z, a.digits + 5, &ar)?,
            };
            Ok(PlotRow {
                z: format_real(&z, sig, &ar),
                log_z: format_real(&log_z, sig, &ar),
                value: format_real(&value, sig, &ar),
            })
        })
        .collect::<CliResult<_>>()?;
    write_csv(a.out.as_deref(), &HEADER, &rows)?;
    Ok(ExitCode::SUCCESS)
}
