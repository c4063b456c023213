use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use qprod_core::numeric::{parse_complex, parse_real};
use qprod_core::{Arith, BigFloat, ComplexValue, Error};
use serde::Serialize;

pub const MAX_DIGITS_VAR: &str = "QPROD_MAX_WORKING_DIGITS";
pub const DEFAULT_MAX_DIGITS: usize = 10_000;

/// Failure that ends a subcommand.
#[derive(Debug)]
pub struct CliError {
    kind: String,
    message: String,
    code: u8,
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: &'a str,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: "usage".into(),
            message: message.into(),
            code: 2,
        }
    }

    pub fn io(path: &Path, err: io::Error) -> Self {
        CliError {
            kind: "io".into(),
            message: format!("{}: {err}", path.display()),
            code: 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorJson {
            error: &self.kind,
            message: &self.message,
        })
        .expect("string fields serialize")
    }

    pub fn exit_code(&self) -> u8 {
        self.code
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            kind: e.kind().into(),
            message: e.to_string(),
            code: 2,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError {
            kind: "io".into(),
            message: e.to_string(),
            code: 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Upper limit on working precision, from the environment.
pub fn max_working_digits() -> CliResult<usize> {
    match std::env::var(MAX_DIGITS_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::usage(format!("{MAX_DIGITS_VAR} must be a non-negative integer"))),
        Err(_) => Ok(DEFAULT_MAX_DIGITS),
    }
}

pub fn check_working_digits(working: usize) -> CliResult<()> {
    let cap = max_working_digits()?;
    if working > cap {
        return Err(Error::Domain(format!("working precision {working} digits exceeds {MAX_DIGITS_VAR} = {cap}")).into());
    }
    Ok(())
}

pub fn complex_at(s: &str, digits: usize) -> CliResult<ComplexValue> {
    Ok(parse_complex(s, &Arith::with_digits(digits))?)
}

pub fn real_at(s: &str, digits: usize) -> CliResult<BigFloat> {
    Ok(parse_real(s, &Arith::with_digits(digits))?)
}

/// Extra precision used when inputs are first read, before a plan exists.
pub const PROBE_EXTRA_DIGITS: usize = 30;

/// Writes CSV rows to `out`, or to standard output when `out` is `None`.
pub fn write_csv<R: Serialize>(out: Option<&Path>, header: &[&str], rows: &[R]) -> CliResult<()> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(File::create(p).map_err(|e| CliError::io(p, e))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| CliError::io(out.unwrap_or(Path::new("<stdout>")), e))?;
    Ok(())
}
