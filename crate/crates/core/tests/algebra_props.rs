// SPDX-License-Identifier: Apache-2.0

use formclass::exact_algebra::resultant_sylvester;
use formclass::{
    factor_int, find_split, is_prime, kronecker_symbol, poly_disc, BigComplex, BigReal, IdealLat, IntPoly, Order,
    PrecCtx,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Durand–Kerner iteration for all complex roots of a squarefree polynomial.
fn roots(f: &IntPoly, ctx: &PrecCtx) -> Vec<BigComplex> {
    let bits = ctx.bits();
    let d = f.degree().unwrap();
    let lc = BigReal::from_int(f.leading().unwrap(), bits);
    let coeffs: Vec<BigComplex> = f
        .coeffs()
        .iter()
        .map(|c| BigComplex::from_real(BigReal::from_int(c, bits).checked_div(&lc).unwrap()))
        .collect();
    let eval = |z: &BigComplex| {
        let mut acc = BigComplex::from_i64(0, 0, bits);
        for c in coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    };
    let seed = BigComplex::from_f64(0.4, 0.9, bits);
    let mut zs: Vec<BigComplex> = (0..d).map(|k| seed.pow_u(k as u64)).collect();
    let radius = 1.0
        + f.coeffs().iter().map(|c| num_traits::ToPrimitive::to_f64(c).unwrap().abs()).fold(0.0, f64::max)
            / num_traits::ToPrimitive::to_f64(f.leading().unwrap()).unwrap().abs();
    for z in zs.iter_mut() {
        *z = z.mul_real(&BigReal::from_f64(radius.sqrt(), bits));
    }
    for _ in 0..2000 {
        let mut moved = false;
        for i in 0..d {
            let mut den = BigComplex::from_i64(1, 0, bits);
            for j in 0..d {
                if i != j {
                    den = &den * &(&zs[i] - &zs[j]);
                }
            }
            let step = eval(&zs[i]).checked_div(&den).unwrap_or_else(|_| BigComplex::from_f64(1e-3, 1e-3, bits));
            if step.log10_abs() > -(ctx.digits() as f64) + 5.0 {
                moved = true;
            }
            zs[i] = &zs[i] - &step;
        }
        if !moved {
            break;
        }
    }
    zs
}

fn poly() -> impl Strategy<Value = IntPoly> {
    (2usize..=6).prop_flat_map(|d| (prop::collection::vec(-1000i64..=1000, d), 1i64..=1000, any::<bool>())).prop_map(
        |(mut c, lc, neg)| {
            c.push(if neg { -lc } else { lc });
            IntPoly::from_i64(&c)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(200) })]

    #[test]
    fn discriminant_matches_root_product(f in poly()) {
        let disc = poly_disc(&f).unwrap();
        prop_assume!(!disc.is_zero());
        let ctx = PrecCtx::new(100, 20).unwrap();
        let bits = ctx.bits();
        let rs = roots(&f, &ctx);
        let d = f.degree().unwrap();
        let mut acc = BigComplex::from_real(BigReal::from_int(&num_traits::pow(f.leading().unwrap().clone(), 2 * d - 2), bits));
        for i in 0..d {
            for j in i + 1..d {
                acc = &acc * &(&rs[i] - &rs[j]).square();
            }
        }
        let tol = BigReal::pow10(-10, bits);
        let r = formclass::round_to_int(&acc, &tol).unwrap();
        prop_assert_eq!(r.value, disc);
    }

    #[test]
    fn crt_resultant_matches_sylvester(f in poly(), g in poly()) {
        prop_assert_eq!(formclass::exact_algebra::resultant(&f, &g), resultant_sylvester(&f, &g));
    }

    #[test]
    fn factorization_reassembles(s in "[1-9][0-9]{0,29}", neg in any::<bool>()) {
        let n: BigInt = s.parse().unwrap();
        let n = if neg { -n } else { n };
        let fac = factor_int(&n, None);
        prop_assert!(fac.complete);
        let mut prod = BigInt::one();
        for (p, e) in &fac.factors {
            prop_assert!(is_prime(p));
            prod *= num_traits::pow(p.clone(), *e as usize);
        }
        prop_assert_eq!(prod, n.magnitude().clone().into());
    }
}

fn small_primes(bound: u64) -> Vec<u64> {
    (2..bound).filter(|&p| is_prime(&BigInt::from(p))).collect()
}

#[test]
fn split_search_is_sound_and_complete() {
    for d in [-20i64, -23, -27, -56, -180, -200, -4, -3, -7] {
        let db = BigInt::from(d);
        for p in small_primes(1000) {
            if db.is_multiple_of(&BigInt::from(p)) {
                continue;
            }
            let exhaustive = (0..2 * p).find(|&s| (BigInt::from(s) * s - &db).is_multiple_of(&BigInt::from(4 * p)));
            let got = find_split(&db, p).unwrap();
            assert_eq!(got.as_ref().map(|x| x.s.clone()), exhaustive.map(BigInt::from), "D = {d}, p = {p}");
            if let Some(split) = got {
                assert_eq!(split.split_form.disc(), db);
                let o = Order::from_disc(&db).unwrap();
                let ideal = IdealLat::from_form(&split.split_form, &o).unwrap();
                let integral = ideal.mul(&IdealLat::rational(BigRational::from_integer(p.into()), &o), &o);
                assert_eq!(integral.norm(), BigRational::from_integer(p.into()));
            }
        }
    }
}

#[test]
fn kronecker_matches_split_search() {
    for n in 1u64..=50 {
        let d = -BigInt::from(4 * n);
        for p in small_primes(1000) {
            if p == 2 || n % p == 0 {
                continue;
            }
            let k = kronecker_symbol(&-BigInt::from(n), &BigInt::from(p));
            assert_eq!(k == 1, find_split(&d, p).unwrap().is_some(), "n = {n}, p = {p}");
        }
    }
}
