// SPDX-License-Identifier: Apache-2.0

use formclass::{cx_exp2pii, round_to_int, BigComplex, BigReal, PrecCtx};
use num_bigint::BigInt;
use proptest::prelude::*;

fn ctx() -> PrecCtx {
    PrecCtx::default()
}

fn big_int() -> impl Strategy<Value = BigInt> {
    ("-?[1-9][0-9]{0,59}").prop_map(|s| s.parse().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(1000) })]

    #[test]
    fn exp_modulus_matches_real_exponential(re in -3.0f64..3.0, im in 0.1f64..10.0) {
        let c = ctx();
        let tau = BigComplex::from_f64(re, im, c.bits());
        let lhs = cx_exp2pii(&tau, &c).abs();
        let expo = BigComplex::from_real(-&(&tau.im * &c.pi().shl(1))).exp();
        let diff = (&lhs - &expo.re).abs();
        let rel = diff.log10_abs() - expo.re.log10_abs();
        prop_assert!(diff.is_zero() || rel < c.guard() as f64 - c.digits() as f64, "relative error 1e{rel}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(300) })]

    #[test]
    fn rounding_recovers_integers(n in big_int(), eps in -4.9e-11f64..4.9e-11) {
        let c = ctx();
        let bits = c.bits();
        let x = BigComplex::from_real(&BigReal::from_int(&n, bits) + &BigReal::from_f64(eps, bits));
        let tol = BigReal::pow10(-10, bits);
        let r = round_to_int(&x, &tol).unwrap();
        prop_assert_eq!(r.value, n);
    }

    #[test]
    fn doubling_keeps_rounded_values(n in 2u64..1_000_000_000, k in 1u32..6) {
        // (√n)^(2k) = n^k at two precisions
        let round_at = |c: &PrecCtx| {
            let bits = c.bits();
            let root = BigReal::from_int(&BigInt::from(n), bits).sqrt();
            let x = BigComplex::from_real(root).pow_u(2 * k as u64);
            round_to_int(&x, &BigReal::pow10(-10, bits)).map(|r| r.value)
        };
        let c = PrecCtx::new(60, 20).unwrap();
        if let Ok(v) = round_at(&c) {
            prop_assert_eq!(round_at(&c.doubled().unwrap()).unwrap(), v);
        }
    }
}
