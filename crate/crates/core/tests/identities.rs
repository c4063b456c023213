use proptest::prelude::*;
use qprod_core::identities::{check_all, check_theta_identities_with, tolerance_for, IdentityId};
use qprod_core::numeric::to_f64;
use qprod_core::{Arith, ComplexValue};

fn polar(m: f64, th: f64, ar: &Arith) -> ComplexValue {
    ComplexValue::from_f64(m * th.cos(), m * th.sin(), ar)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn every_identity_holds_inside_the_disc(
        xm in 0.05f64..0.9,
        xa in -3.2f64..3.2,
        tm in 0.0f64..1.5,
        ta in -3.2f64..3.2,
    ) {
        let ar = Arith::with_digits(40);
        let x = polar(xm, xa, &ar);
        let t = polar(tm, ta, &ar);
        let reports = check_all(&t, &x, 25, false).unwrap();
        prop_assert_eq!(reports.len(), 13);
        for r in &reports {
            prop_assert!(r.pass, "{} failed: rel {:e}", r.identity_id, to_f64(&r.rel_discrepancy));
        }
    }

    #[test]
    fn pass_flag_matches_discrepancies(xm in 0.05f64..0.9, xa in -3.2f64..3.2, fault in any::<bool>()) {
        let ar = Arith::with_digits(40);
        let x = polar(xm, xa, &ar);
        for r in check_all(&ComplexValue::from_f64(0.5, 0.25, &ar), &x, 20, fault).unwrap() {
            let within = r.abs_discrepancy <= r.tolerance || r.rel_discrepancy <= r.tolerance;
            prop_assert_eq!(r.pass, within);
            prop_assert!(!r.abs_discrepancy.is_negative());
        }
    }
}

#[test]
fn near_boundary_at_lower_precision() {
    let ar = Arith::with_digits(30);
    let x = ComplexValue::from_f64(0.99, 0.0, &ar);
    let t = ComplexValue::from_f64(0.7, 0.3, &ar);
    for r in check_all(&t, &x, 15, false).unwrap() {
        assert!(r.pass, "{}", r.identity_id);
    }
}

#[test]
fn sign_fault_breaks_only_the_triangular_sum() {
    let ar = Arith::with_digits(40);
    let x = ComplexValue::from_f64(0.3, 0.0, &ar);
    let reports = check_theta_identities_with(&x, 25, true).unwrap();
    for r in reports {
        assert_eq!(r.pass, r.identity_id != IdentityId::ThetaTriangular, "{}", r.identity_id);
    }
}

#[test]
fn tolerance_keeps_five_digits_of_margin() {
    let ar = Arith::with_digits(40);
    assert_eq!(tolerance_for(25, &ar), ar.pow10(-20));
}
