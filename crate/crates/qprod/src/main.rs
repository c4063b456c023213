mod bench;
mod common;
mod eval;
mod plot;
mod validate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Arbitrary-precision evaluation of R(t,x) = prod_{n>=1} (1 - t x^n).
///
/// Certificates target K = (digits + 2) ln 10, i.e. a relative error of
/// 10^-(digits+2). QPROD_MAX_WORKING_DIGITS caps the working precision
/// (default 10000).
#[derive(Parser)]
#[command(name = "qprod", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate R(t,x) and print a JSON certificate.
    Eval(eval::EvalArgs),
    /// Compare methods over a list of gamma = -log x values and write CSV.
    Bench(bench::BenchArgs),
    /// Emit figure data for f, g or R(1,e^{-2 pi z}) / R0_plus as CSV.
    Plot(plot::PlotArgs),
    /// Run the identity suite over a seeded sample plan.
    Validate(validate::ValidateArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(a) => eval::run(&a),
        Command::Bench(a) => bench::run(&a),
        Command::Plot(a) => plot::run(&a),
        Command::Validate(a) => validate::run(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
