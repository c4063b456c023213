use std::process::ExitCode;

use clap::Args;
use qprod_core::identities::{check_all, IdentityReport};
use qprod_core::numeric::{format_complex, format_real};
use qprod_core::Arith;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::common::{complex_at, CliResult};

/// Samples with `|x| <= 0.9`.
pub const RANDOM_SAMPLES: usize = 20;
/// Modulus bound of the random samples.
const MAX_MODULUS: f64 = 0.9;
/// Modulus bound under `--quick`.
const QUICK_MODULUS: f64 = 0.8;
const MAX_T_MODULUS: f64 = 1.5;

#[derive(Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 25)]
    pub digits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Only samples with |x| <= 0.8.
    #[arg(long)]
    pub quick: bool,
    /// Negates one term of a theta sum so the suite must fail.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

/// One point of the sample plan.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub label: String,
    pub t: String,
    pub x: String,
    pub digits: usize,
    pub modulus: f64,
}

fn decimal(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

fn complex_text(re: f64, im: f64) -> (String, f64) {
    let (r, i) = (decimal(re), decimal(im));
    let modulus = r.parse::<f64>().unwrap().hypot(i.parse::<f64>().unwrap());
    let text = if i.starts_with('-') {
        format!("{r}{i}i")
    } else {
        format!("{r}+{i}i")
    };
    (text, modulus)
}

/// Twenty seeded samples with `|x| <= 0.9` (real positive, real negative
/// and complex phases in rotation) followed by real `x = 0.99` at a
/// 15-digit tolerance.
pub fn sample_plan(seed: u64, digits: usize, quick: bool) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(RANDOM_SAMPLES + 1);
    for i in 0..RANDOM_SAMPLES {
        let r = rng.gen_range(0.05..MAX_MODULUS - 1e-3);
        let phase = match i % 4 {
            0 => 0.0,
            1 => std::f64::consts::PI,
            _ => rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        };
        let tm = rng.gen_range(0.0..MAX_T_MODULUS);
        let ta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let (x, modulus) = complex_text(r * phase.cos(), r * phase.sin());
        let (t, _) = complex_text(tm * ta.cos(), tm * ta.sin());
        out.push(Sample {
            label: format!("s{i:02}"),
            t,
            x,
            digits,
            modulus,
        });
    }
    out.push(Sample {
        label: "near1".into(),
        t: "0.7+0.3i".into(),
        x: "0.99".into(),
        digits: digits.min(15),
        modulus: 0.99,
    });
    if quick {
        out.retain(|s| s.modulus <= QUICK_MODULUS);
    }
    out
}

#[derive(Serialize)]
pub struct ReportJson {
    sample: String,
    t: String,
    x: String,
    identity_id: String,
    lhs: String,
    rhs: String,
    abs_discrepancy: String,
    rel_discrepancy: String,
    tolerance: String,
    pass: bool,
}

impl ReportJson {
    fn new(s: &Sample, r: &IdentityReport) -> Self {
        let ar = Arith::with_digits(s.digits + 10);
        let sig = s.digits + 5;
        ReportJson {
            sample: s.label.clone(),
            t: s.t.clone(),
            x: s.x.clone(),
            identity_id: r.identity_id.to_string(),
            lhs: format_complex(&r.lhs, sig, &ar),
            rhs: format_complex(&r.rhs, sig, &ar),
            abs_discrepancy: format_real(&r.abs_discrepancy, 6, &ar),
            rel_discrepancy: format_real(&r.rel_discrepancy, 6, &ar),
            tolerance: format_real(&r.tolerance, 6, &ar),
            pass: r.pass,
        }
    }
}

#[derive(Serialize)]
struct FailureJson<'a> {
    error: &'static str,
    failures: &'a [ReportJson],
}

fn run_sample(s: &Sample, fault: bool) -> CliResult<Vec<IdentityReport>> {
    let work = s.digits + 10;
    let t = complex_at(&s.t, work)?;
    let x = complex_at(&s.x, work)?;
    Ok(check_all(&t, &x, s.digits, fault)?)
}

pub fn run(a: &ValidateArgs) -> CliResult<ExitCode> {
    let plan = sample_plan(a.seed, a.digits, a.quick);
    let results: Vec<CliResult<Vec<IdentityReport>>> =
        plan.par_iter().map(|s| run_sample(s, a.inject_fault)).collect();

    let mut failures = Vec::new();
    let mut total = 0usize;
    println!(
        "{:<6} {:<20} {:<20} {:<22} {:>12} {:>10}  result",
        "sample", "t", "x", "identity", "rel_disc", "tolerance"
    );
    for (s, res) in plan.iter().zip(results) {
        match res {
            Ok(reports) => {
                for r in &reports {
                    total += 1;
                    let j = ReportJson::new(s, r);
                    println!(
                        "{:<6} {:<20} {:<20} {:<22} {:>12} {:>10}  {}",
                        s.label,
                        s.t,
                        s.x,
                        j.identity_id,
                        j.rel_discrepancy,
                        j.tolerance,
                        if r.pass { "PASS" } else { "FAIL" }
                    );
                    if !r.pass {
                        failures.push(j);
                    }
                }
            }
            Err(e) => {
                println!("{:<6} {:<20} {:<20} error: {}", s.label, s.t, s.x, e.to_json());
                return Err(e);
            }
        }
    }
    println!("{} checks, {} failed", total, failures.len());
    if failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        let body = FailureJson {
            error: "validation",
            failures: &failures,
        };
        eprintln!("{}", serde_json::to_string(&body).expect("plain struct serializes"));
        Ok(ExitCode::from(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_is_seeded_and_bounded() {
        let a = sample_plan(0, 25, false);
        assert_eq!(a, sample_plan(0, 25, false));
        assert_ne!(a, sample_plan(1, 25, false));
        assert_eq!(a.len(), RANDOM_SAMPLES + 1);
        assert!(a[..RANDOM_SAMPLES].iter().all(|s| s.modulus <= MAX_MODULUS && s.digits == 25));
        assert!(a.iter().filter(|s| !s.x.ends_with("+0.0000i")).count() >= 10);
        let last = a.last().unwrap();
        assert_eq!((last.x.as_str(), last.digits), ("0.99", 15));
        let q = sample_plan(0, 25, true);
        assert!(!q.is_empty() && q.iter().all(|s| s.modulus <= QUICK_MODULUS));
    }
}
