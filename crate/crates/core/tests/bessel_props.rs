use dropsim_core::bessel::{bessel_j, bessel_j_signed};
use proptest::prelude::*;

// Reference values computed with 30-digit arithmetic, rounded to f64.
const REFERENCE: &[(u32, f64, f64)] = &[
    (0, 1.0, 7.65197686557966605e-01),
    (0, 5.2, -1.10290439790986475e-01),
    (0, 24.0, -5.62302741668592662e-02),
    (1, 1.0, 4.40050585744933498e-01),
    (1, 13.7, 7.91427651001145177e-02),
    (2, 3.83, 4.03117685888837951e-01),
    (5, 40.0, 1.22573465977117782e-01),
    (3, 0.05, 2.60375979105543269e-06),
];

#[test]
fn reference_values_reproduced() {
    for &(m, x, want) in REFERENCE {
        let got = bessel_j(m, x).unwrap();
        assert!(
            (got - want).abs() < 1e-12,
            "J_{m}({x}) = {got}, reference {want}"
        );
    }
}

#[test]
fn wronskian_like_sum_is_unity() {
    // J_0(x)^2 + 2 sum_{k>=1} J_k(x)^2 = 1 for all x
    for &x in &[0.3, 2.0, 7.7, 19.4, 45.0] {
        let mut sum = bessel_j(0, x).unwrap().powi(2);
        for m in 1..80u32 {
            sum += 2.0 * bessel_j(m, x).unwrap().powi(2);
        }
        assert!((sum - 1.0).abs() < 1e-11, "sum rule off at x={x}: {sum}");
    }
}

proptest! {
    #[test]
    fn three_term_recurrence(m in 1u32..8, x in 0.05f64..50.0) {
        // J_{m-1}(x) + J_{m+1}(x) = (2m/x) J_m(x)
        let lhs = bessel_j(m - 1, x).unwrap() + bessel_j(m + 1, x).unwrap();
        let rhs = 2.0 * m as f64 / x * bessel_j(m, x).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10, "recurrence gap {} at m={m} x={x}", lhs - rhs);
    }

    #[test]
    fn values_stay_bounded(m in 0u32..12, x in -50.0f64..50.0) {
        let v = bessel_j(m, x).unwrap();
        prop_assert!(v.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn argument_parity_everywhere(m in 0u32..8, x in 0.0f64..50.0) {
        let plus = bessel_j(m, x).unwrap();
        let minus = bessel_j(m, -x).unwrap();
        let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
        prop_assert_eq!(minus, sign * plus);
    }

    #[test]
    fn negative_order_mirror(m in 1i32..8, x in 0.0f64..50.0) {
        let pos = bessel_j_signed(m, x).unwrap();
        let neg = bessel_j_signed(-m, x).unwrap();
        let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
        prop_assert_eq!(neg, sign * pos);
    }

    #[test]
    fn derivative_identity(x in 0.1f64..45.0) {
        // J_0'(x) = -J_1(x), checked against a centered difference
        let h = 1e-5;
        let num = (bessel_j(0, x + h).unwrap() - bessel_j(0, x - h).unwrap()) / (2.0 * h);
        let closed = -bessel_j(1, x).unwrap();
        prop_assert!((num - closed).abs() < 1e-8, "J0' mismatch {} at x={x}", num - closed);
    }
}
