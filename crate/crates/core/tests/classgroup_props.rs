// SPDX-License-Identifier: Apache-2.0

use std::sync::OnceLock;

use formclass::exact_algebra::Parity;
use formclass::{
    conjugate_values, enumerate_classes, gamma_g_contains, gamma_g_equivalent, minpoly_over_q, ClassGroup,
    InvariantSpec, LevelStructure, Order, PgTester, PrecCtx, UniMat,
};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

const CONFIGS: [(i64, u64, &[u64]); 6] =
    [(-27, 2, &[1]), (-180, 2, &[1]), (-200, 3, &[1]), (-200, 3, &[1, 2]), (-20, 5, &[1, 4]), (-56, 4, &[1])];

fn groups() -> &'static Vec<ClassGroup> {
    static CELL: OnceLock<Vec<ClassGroup>> = OnceLock::new();
    CELL.get_or_init(|| {
        CONFIGS
            .iter()
            .map(|&(d, n, g)| {
                let o = Order::from_disc(&BigInt::from(d)).unwrap();
                enumerate_classes(&o, &LevelStructure::new(n, g).unwrap()).unwrap().with_table().unwrap()
            })
            .collect()
    })
}

/// Random `γ ≡ [[t, *], [0, t⁻¹]] (mod N)` with `t ∈ G`.
fn gamma_in(level: LevelStructure) -> impl Strategy<Value = UniMat> {
    let n = level.n() as i64;
    let g = level.g().to_vec();
    (0..g.len(), -5i64..=5, -5i64..=5, -3i64..=3).prop_filter_map("coprime", move |(i, ka, kc, k)| {
        let a = g[i] as i64 + n * ka;
        let c = n * kc;
        let e = a.extended_gcd(&c);
        if e.gcd != 1 {
            return None;
        }
        Some(UniMat::new(a, -e.y + k * a, c, e.x + k * c).unwrap())
    })
}

fn config_and_gamma() -> impl Strategy<Value = (usize, UniMat, usize)> {
    (0..CONFIGS.len()).prop_flat_map(|k| {
        let cg = &groups()[k];
        (Just(k), gamma_in(cg.level().clone()), 0..cg.len())
    })
}

fn unimat() -> impl Strategy<Value = UniMat> {
    (-30i64..30, -30i64..30).prop_filter_map("coprime", |(a, c)| {
        let e = a.extended_gcd(&c);
        (e.gcd == 1).then(|| UniMat::new(a, -e.y, c, e.x).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(300) })]

    #[test]
    fn classes_are_orbit_stable((k, gamma, i) in config_and_gamma()) {
        let cg = &groups()[k];
        let moved = cg.reps()[i].apply(&gamma);
        prop_assume!(moved.in_level_set(&cg.order().d, cg.level().n()));
        prop_assert_eq!(cg.class_of(&moved).unwrap(), i);
        prop_assert!(gamma_g_equivalent(&cg.reps()[i], &moved, cg.level()));
    }

    #[test]
    fn full_subgroup_is_gamma_zero(g in unimat(), n in 2u64..20) {
        let full = LevelStructure::full(n).unwrap();
        let lower_left = g.mod_n(n)[2];
        prop_assert_eq!(gamma_g_contains(&g, &full), lower_left == 0);
    }
}

#[test]
fn representatives_are_pairwise_inequivalent() {
    for cg in groups() {
        let pg = PgTester::new(cg.order(), cg.level().n(), cg.level().g());
        for i in 0..cg.len() {
            for j in 0..cg.len() {
                let q = cg.ideal(i).mul(&cg.ideal(j).inv(), cg.order());
                assert_eq!(pg.contains(&q).unwrap(), i == j, "classes {i} and {j}");
                assert_eq!(gamma_g_equivalent(&cg.reps()[i], &cg.reps()[j], cg.level()), i == j);
            }
        }
    }
}

#[test]
fn identity_and_inverse() {
    for cg in groups() {
        for j in 0..cg.len() {
            assert_eq!(cg.compose(0, j).unwrap(), j);
            let inv = cg.inverse(j).unwrap();
            assert_eq!(cg.compose(j, inv).unwrap(), 0);
            assert_eq!(cg.inverse(inv).unwrap(), j);
        }
    }
}

#[test]
fn signed_law_is_a_group() {
    for cg in groups() {
        let s = formclass::signed_classes(cg);
        let els = s.elements();
        assert_eq!(els.len(), 2 * cg.len());
        let c = s.conjugation();
        assert_eq!(s.compose(cg, c, c).unwrap(), (0, 1));
        for &x in &els {
            for &y in &els {
                for &z in &els {
                    let l = s.compose(cg, s.compose(cg, x, y).unwrap(), z).unwrap();
                    let r = s.compose(cg, x, s.compose(cg, y, s.compose(cg, z, (0, 1)).unwrap()).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }
}

#[test]
fn minpoly_degree_and_parity() {
    let ctx = PrecCtx::default();
    for cg in groups().iter().take(4) {
        let spec = InvariantSpec::for_level(cg.level()).unwrap();
        let v = minpoly_over_q(cg, &spec, &ctx).unwrap();
        assert_eq!(v.degree, 2 * cg.len());
        assert!(v.residual < formclass::BigReal::pow10(-10, v.residual.bits()));
        // symmetric under negation ⟺ even polynomial
        let c = PrecCtx::new(v.digits_used, 20).unwrap();
        let symmetric =
            v.conjugates.iter().all(|r| v.conjugates.iter().any(|s| (r + s).log10_abs() < -(c.digits() as f64) / 2.0));
        assert_eq!(symmetric, v.minpoly.parity() == Some(Parity::Even));
    }
}

#[test]
fn principal_class_value_is_the_invariant() {
    let ctx = PrecCtx::new(80, 20).unwrap();
    for cg in groups().iter().take(4) {
        let spec = InvariantSpec::for_level(cg.level()).unwrap();
        let vals = conjugate_values(cg, &spec, &ctx).unwrap();
        let tau = cg.reps()[0].root(&ctx);
        let direct = formclass::invariant_value(&spec, &tau, &ctx);
        assert!((&vals[0] - &direct).log10_abs() - direct.log10_abs() < -75.0);
    }
}
