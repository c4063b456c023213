#![no_std]

extern crate alloc;

pub mod baselines;
pub mod bounds;
pub mod engine;
pub mod eta;
pub mod identities;
pub mod error;
pub mod method;
pub mod numeric;

pub use engine::{evaluate, evaluate_to_digits, evaluate_with, plan_evaluation, EvalCertificate, Stopping};
pub use error::{Error, Result};
pub use method::Method;
pub use numeric::{Arith, BigFloat, ComplexValue, PrecisionContext};
