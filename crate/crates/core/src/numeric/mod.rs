//! Arbitrary-precision real and complex arithmetic, precision planning and
//! decimal text I/O.

mod arith;
mod complex;
mod precision;
mod text;

pub use arith::{bits_to_digits, digits_to_bits, to_f64, Arith};
pub use astro_float::BigFloat;
pub use complex::ComplexValue;
pub use precision::{gamma_of, plan_precision, GammaParam, PrecisionContext, LN_10, MIN_GUARD_DIGITS};
pub use text::{format_complex, format_real, parse_complex, parse_real};
