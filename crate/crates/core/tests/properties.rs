use num_complex::Complex64;
use proptest::prelude::*;

use tau3_core::arith::{divisors, mod_inverse, r3_counts, sieve_divisor_tables, R3Mode};
use tau3_core::expsum::{gauss_sum, gauss_sum_closed, kloosterman, weil_bound};
use tau3_core::voronoi::{make_bump, ramp};

fn tau3_by_divisors(n: u64) -> u32 {
    divisors(n).into_iter().map(|d| divisors(n / d).len() as u32).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gauss_closed_form_matches_direct_sum(q in (0u64..60).prop_map(|k| 2 * k + 1), a in -200i64..200, b in -200i64..200) {
        prop_assume!(mod_inverse(a, q).is_ok());
        let direct = gauss_sum(a, b, q);
        let closed = gauss_sum_closed(a, b, q).unwrap();
        prop_assert!((direct - closed).norm() <= 1e-9 * (q as f64).sqrt().max(1.0));
    }

    #[test]
    fn kloosterman_is_real_and_within_weil(a in -500i64..500, b in -500i64..500, c in 1u64..200) {
        let s: Complex64 = kloosterman(a, b, c);
        prop_assert!(s.im.abs() <= 1e-9 * c as f64);
        prop_assert!(s.re.abs() <= weil_bound(a, b, c) + 1e-9);
        // S(a, b; c) = S(b, a; c)
        prop_assert!((s - kloosterman(b, a, c)).norm() <= 1e-9 * c as f64);
    }

    #[test]
    fn sieve_agrees_with_divisor_counts(n in 1u64..5000) {
        let t = sieve_divisor_tables(5000).unwrap();
        prop_assert_eq!(t.tau(n), divisors(n).len() as u32);
        prop_assert_eq!(t.tau3(n), tau3_by_divisors(n));
    }

    #[test]
    fn positive_box_counts_bounded_by_all_integers(n in 1u64..3000) {
        let all = r3_counts(n, R3Mode::AllIntegers);
        let boxed = r3_counts(n, R3Mode::PositiveBox { bound: (n as f64).sqrt() });
        prop_assert!(8 * boxed <= all);
    }

    #[test]
    fn ramp_is_a_partition_of_unity(t in 0.0f64..=1.0) {
        let r = ramp(t);
        prop_assert!((0.0..=1.0).contains(&r));
        prop_assert!((r + ramp(1.0 - t) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn window_is_supported_on_the_dyadic_interval(scale in 10.0f64..1e4, sharpness in 4.5f64..20.0, v in -0.5f64..1.5) {
        let w = make_bump(scale, sharpness).unwrap();
        let u = w.unit(v);
        prop_assert!((0.0..=1.0).contains(&u));
        if !(0.5..=1.0).contains(&v) {
            prop_assert_eq!(u, 0.0);
        }
    }
}
