use proptest::prelude::*;
use qprod_core::numeric::{
    format_complex, format_real, gamma_of, parse_complex, parse_real, plan_precision, to_f64, GammaParam,
};
use qprod_core::{Arith, ComplexValue, Error, PrecisionContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn decimal_literal() -> impl Strategy<Value = String> {
    (
        prop::bool::ANY,
        0u64..1_000_000_000,
        0u32..12,
        prop::option::of(-40i32..40),
    )
        .prop_map(|(neg, mant, scale, exp)| {
            let digits = mant.to_string();
            let body = if scale as usize >= digits.len() {
                format!("0.{}{digits}", "0".repeat(scale as usize - digits.len()))
            } else if scale == 0 {
                digits
            } else {
                let (a, b) = digits.split_at(digits.len() - scale as usize);
                format!("{a}.{b}")
            };
            let sign = if neg { "-" } else { "" };
            match exp {
                Some(e) => format!("{sign}{body}e{e}"),
                None => format!("{sign}{body}"),
            }
        })
}

/// Significant digits that pin down every mantissa bit.
fn lossless_digits(ar: &Arith) -> usize {
    ((ar.bits().div_ceil(64) * 64) as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn real_round_trip(s in decimal_literal()) {
        let ar = Arith::with_digits(40);
        let v = parse_real(&s, &ar).unwrap();
        let text = format_real(&v, lossless_digits(&ar), &ar);
        let back = parse_real(&text, &ar).unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn complex_round_trip(a in decimal_literal(), b in decimal_literal(), form in 0u8..3) {
        let ar = Arith::with_digits(40);
        let s = match form {
            0 => format!("{a}{}{}i", if b.starts_with('-') { "" } else { "+" }, b),
            1 => format!("{}@{b}", a.trim_start_matches('-')),
            _ => format!("{b}i"),
        };
        let z = parse_complex(&s, &ar).unwrap();
        let text = format_complex(&z, lossless_digits(&ar), &ar);
        let back = parse_complex(&text, &ar).unwrap();
        if form == 1 {
            // components come from transcendental functions and fill the mantissa
            let scale = z.abs(&ar);
            let diff = back.sub(&z, &ar).abs(&ar);
            prop_assert!(diff <= ar.mul(&scale, &ar.pow10(-(ar.digits() as i64))));
        } else {
            prop_assert_eq!(back, z);
        }
    }

    #[test]
    fn plan_precision_is_monotone(g in 1e-4f64..5.0, shrink in 0.05f64..1.0, d in 1usize..300, extra in 0usize..100) {
        let probe = Arith::with_digits(30);
        let g1 = GammaParam::from_f64(g, &probe).unwrap();
        let g2 = GammaParam::from_f64(g * shrink, &probe).unwrap();
        let base = plan_precision(d, &g1);
        prop_assert!(plan_precision(d, &g2).working_digits >= base.working_digits);
        prop_assert!(plan_precision(d + extra, &g1).working_digits >= base.working_digits);
        prop_assert!(base.guard_digits >= 10);
        prop_assert!(base.working_digits >= base.requested_digits + base.guard_digits);
    }
}

#[test]
fn gamma_matches_log_modulus() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ar = Arith::with_digits(40);
    for _ in 0..1000 {
        // log-uniform modulus in [1e-6, 1 - 1e-6]
        let m = if rng.gen_bool(0.5) {
            10f64.powf(rng.gen_range(-6.0..0.0)).min(1.0 - 1e-6)
        } else {
            1.0 - 10f64.powf(rng.gen_range(-6.0..-0.3))
        };
        let th = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let x = ComplexValue::from_f64(m * th.cos(), m * th.sin(), &ar);
        let g = gamma_of(&x, &ar).unwrap();
        let lhs = ar.ln(&x.abs(&ar));
        let diff = to_f64(&ar.add(&lhs, g.value()).abs());
        let scale = to_f64(&lhs.abs()).max(1e-300);
        assert!(diff <= 1e-36 * scale.max(1.0), "x modulus {m}: {diff}");
        assert!(to_f64(g.value()) > 0.0);
    }
}

#[test]
fn gamma_positive_exactly_inside_disc() {
    let ar = Arith::with_digits(30);
    assert!(matches!(gamma_of(&ComplexValue::one(&ar), &ar), Err(Error::Domain(_))));
    assert!(matches!(gamma_of(&ComplexValue::from_f64(0.0, 1.5, &ar), &ar), Err(Error::Domain(_))));
    assert!(matches!(gamma_of(&ComplexValue::zero(&ar), &ar), Err(Error::Degenerate)));
    assert!(gamma_of(&ComplexValue::from_f64(0.6, -0.79, &ar), &ar).is_ok());
}

#[test]
fn precision_context_invariants() {
    assert!(PrecisionContext::new(20, 25, 10).is_err());
    assert!(PrecisionContext::new(20, 30, 9).is_err());
    let c = PrecisionContext::new(20, 30, 10).unwrap();
    assert_eq!((c.requested_digits, c.working_digits, c.guard_digits), (20, 30, 10));
}

#[test]
fn non_finite_components_are_rejected() {
    let ar = Arith::with_digits(30);
    for s in ["inf", "nan", "1e99999999999", "1+nani", ""] {
        assert!(parse_complex(s, &ar).is_err(), "{s}");
    }
}
