// SPDX-License-Identifier: Apache-2.0

//! Positive definite binary quadratic forms `ax² + bxy + cy²`, the right
//! action of SL2(Z), Gauss reduction and CM roots.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{sqrt_negative, BigComplex, BigReal, PrecCtx};

/// Integer binary quadratic form `ax² + bxy + cy²`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Form {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Form { a: a.into(), b: b.into(), c: c.into() }
    }

    /// The principal form `(1, b_O, c_O)` of discriminant `d`.
    pub fn principal(d: &BigInt) -> Result<Self> {
        check_disc(d)?;
        if d.is_odd() {
            Ok(Form::new(1, 1, (BigInt::one() - d) / 4))
        } else {
            Ok(Form::new(1, 0, -d / 4))
        }
    }

    /// Build `(a, b, (b² − d)/4a)`, failing when `c` would not be integral.
    pub fn from_disc(a: impl Into<BigInt>, b: impl Into<BigInt>, d: &BigInt) -> Option<Self> {
        let (a, b) = (a.into(), b.into());
        if a.is_zero() {
            return None;
        }
        let num = &b * &b - d;
        let den = &a * 4;
        if !num.is_multiple_of(&den) {
            return None;
        }
        Some(Form { c: num / den, a, b })
    }

    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - (&self.a * &self.c) * 4
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a.is_positive() && self.disc().is_negative()
    }

    /// `−a < b ≤ a ≤ c`, with `b ≥ 0` when `a = c`.
    pub fn is_reduced(&self) -> bool {
        let abs_b = self.b.abs();
        if abs_b > self.a || self.a > self.c || self.b == -&self.a {
            return false;
        }
        !(self.a == self.c && self.b.is_negative())
    }

    /// Membership in the level set: discriminant `d`, primitive, `a > 0`, `gcd(a, n) = 1`.
    pub fn in_level_set(&self, d: &BigInt, n: u64) -> bool {
        self.a.is_positive() && &self.disc() == d && self.is_primitive() && self.a.gcd(&BigInt::from(n)).is_one()
    }

    /// Right action `Q^γ(x, y) = Q(γ·(x, y)ᵀ)`.
    pub fn apply(&self, g: &UniMat) -> Form {
        let (p, q, r, s) = (&g.p, &g.q, &g.r, &g.s);
        let a = self.eval(p, r);
        let c = self.eval(q, s);
        let b = (&self.a * p * q) * 2 + &self.b * (p * s + q * r) + (&self.c * r * s) * 2;
        Form { a, b, c }
    }

    /// Gauss reduction. Returns `(R, γ)` with `self.apply(γ) == R`.
    pub fn reduce(&self) -> (Form, UniMat) {
        assert!(self.is_positive_definite(), "reduce needs a positive definite form");
        let mut f = self.clone();
        let mut g = UniMat::identity();
        loop {
            // translate b into (−a, a]
            let two_a = &f.a * 2;
            let k = (&f.a - &f.b).div_floor(&two_a);
            if !k.is_zero() {
                let t = UniMat::translation(k);
                f = f.apply(&t);
                g = &g * &t;
            }
            if f.a > f.c || (f.a == f.c && f.b.is_negative()) {
                let s = UniMat::flip();
                f = f.apply(&s);
                g = &g * &s;
            } else {
                break;
            }
        }
        (f, g)
    }

    /// Stabilizer of a reduced form in SL2(Z).
    pub fn automorphs(&self) -> Vec<UniMat> {
        debug_assert!(self.is_reduced());
        // Automorphs of a reduced form have entries in [−1, 1].
        let mut out = Vec::new();
        for p in -1i64..=1 {
            for q in -1i64..=1 {
                for r in -1i64..=1 {
                    for s in -1i64..=1 {
                        if p * s - q * r != 1 {
                            continue;
                        }
                        let g = UniMat::new(p, q, r, s).expect("det 1");
                        if &self.apply(&g) == self {
                            out.push(g);
                        }
                    }
                }
            }
        }
        out
    }

    /// The CM root `ω_Q = (−b + √D)/2a` in the upper half-plane.
    pub fn root(&self, ctx: &PrecCtx) -> BigComplex {
        let sq = sqrt_negative(&self.disc(), ctx).expect("definite form");
        let two_a = &self.a * 2;
        let bits = ctx.bits();
        BigComplex::new(BigReal::from_ratio(&-&self.b, &two_a, bits), sq.im.div_int(&two_a))
    }

    /// `−conj(ω_Q) = (b + √D)/2a`.
    pub fn neg_conj_root(&self, ctx: &PrecCtx) -> BigComplex {
        let w = self.root(ctx);
        BigComplex::new(-&w.re, w.im)
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Integers are written as decimal strings so JSON stays lossless.
pub(crate) fn int_to_json(x: &BigInt) -> serde_json::Value {
    serde_json::Value::from(x.to_string())
}

pub(crate) fn int_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for Form {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        vec![int_to_json(&self.a), int_to_json(&self.b), int_to_json(&self.c)].serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Form {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<serde_json::Value> = Vec::deserialize(de)?;
        let parse = |i: usize| {
            v.get(i)
                .and_then(int_from_json)
                .ok_or_else(|| serde::de::Error::custom("form must be a triple of integers"))
        };
        if v.len() != 3 {
            return Err(serde::de::Error::custom("form must be a triple of integers"));
        }
        Ok(Form { a: parse(0)?, b: parse(1)?, c: parse(2)? })
    }
}

pub fn check_disc(d: &BigInt) -> Result<()> {
    let r = d.mod_floor(&BigInt::from(4));
    if !d.is_negative() || !(r.is_zero() || r.is_one()) {
        return Err(Error::BadDiscriminant(d.to_string()));
    }
    Ok(())
}

/// All primitive reduced forms of discriminant `d`, sorted lexicographically.
pub fn reduced_reps(d: &BigInt) -> Result<Vec<Form>> {
    check_disc(d)?;
    let mut out = Vec::new();
    let mut a = BigInt::one();
    // reduced ⇒ 3a² ≤ |D|
    while &a * &a * 3 <= -d.clone() {
        let mut b: BigInt = -&a + 1;
        while b <= a {
            if let Some(f) = Form::from_disc(a.clone(), b.clone(), d) {
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
            b += 1;
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// Element of SL2(Z), `[[p, q], [r, s]]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniMat {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
    pub s: BigInt,
}

impl UniMat {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, r: impl Into<BigInt>, s: impl Into<BigInt>) -> Result<Self> {
        let m = UniMat { p: p.into(), q: q.into(), r: r.into(), s: s.into() };
        if !m.det().is_one() {
            return Err(Error::InvalidArgument(format!("determinant of {m:?} is not 1")));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        UniMat { p: BigInt::one(), q: BigInt::zero(), r: BigInt::zero(), s: BigInt::one() }
    }

    pub fn translation(k: BigInt) -> Self {
        UniMat { p: BigInt::one(), q: k, r: BigInt::zero(), s: BigInt::one() }
    }

    /// `[[0, −1], [1, 0]]`.
    pub fn flip() -> Self {
        UniMat { p: BigInt::zero(), q: -BigInt::one(), r: BigInt::one(), s: BigInt::zero() }
    }

    pub fn neg(&self) -> Self {
        UniMat { p: -&self.p, q: -&self.q, r: -&self.r, s: -&self.s }
    }

    pub fn det(&self) -> BigInt {
        &self.p * &self.s - &self.q * &self.r
    }

    pub fn inverse(&self) -> Self {
        UniMat { p: self.s.clone(), q: -&self.q, r: -&self.r, s: self.p.clone() }
    }

    /// Automorphy factor `j(γ, τ) = rτ + s`.
    pub fn automorphy(&self, tau: &BigComplex) -> BigComplex {
        let bits = tau.bits();
        &tau.mul_int(&self.r) + &BigComplex::from_real(BigReal::from_int(&self.s, bits))
    }

    /// Möbius action `(pτ + q)/(rτ + s)`.
    pub fn mobius(&self, tau: &BigComplex) -> Result<BigComplex> {
        let bits = tau.bits();
        let num = &tau.mul_int(&self.p) + &BigComplex::from_real(BigReal::from_int(&self.q, bits));
        num.checked_div(&self.automorphy(tau))
    }

    /// Entries reduced into `[0, n)`.
    pub fn mod_n(&self, n: u64) -> [u64; 4] {
        let m = BigInt::from(n);
        let red = |x: &BigInt| -> u64 { u64::try_from(&x.mod_floor(&m)).expect("reduced") };
        [red(&self.p), red(&self.q), red(&self.r), red(&self.s)]
    }
}

impl Mul for &UniMat {
    type Output = UniMat;
    fn mul(self, o: &UniMat) -> UniMat {
        UniMat {
            p: &self.p * &o.p + &self.q * &o.r,
            q: &self.p * &o.q + &self.q * &o.s,
            r: &self.r * &o.p + &self.s * &o.r,
            s: &self.r * &o.q + &self.s * &o.s,
        }
    }
}

impl fmt::Debug for UniMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.p, self.q, self.r, self.s)
    }
}

/// A form together with a sign; `sign = −1` stands for the negative definite `−Q`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignedForm {
    pub form: Form,
    pub sign: i8,
}

impl SignedForm {
    pub fn positive(form: Form) -> Self {
        SignedForm { form, sign: 1 }
    }

    pub fn negative(form: Form) -> Self {
        SignedForm { form, sign: -1 }
    }

    /// Coefficients as read, i.e. negated when `sign = −1`.
    pub fn coefficients(&self) -> (BigInt, BigInt, BigInt) {
        let k = BigInt::from(self.sign);
        (&self.form.a * &k, &self.form.b * &k, &self.form.c * &k)
    }

    pub fn apply(&self, g: &UniMat) -> Self {
        SignedForm { form: self.form.apply(g), sign: self.sign }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64) -> Form {
        Form::new(a, b, c)
    }

    #[test]
    fn discriminants() {
        assert_eq!(f(1, 1, 7).disc(), BigInt::from(-27));
        assert_eq!(f(2, 0, 25).disc(), BigInt::from(-200));
        assert_eq!(f(7, 4, 7).disc(), BigInt::from(-180));
    }

    #[test]
    fn level_set_membership() {
        let d = BigInt::from(-27);
        assert!(f(9, -3, 1).in_level_set(&d, 2));
        assert!(!f(2, 0, 25).in_level_set(&BigInt::from(-200), 2));
        assert!(!f(3, 3, 3).in_level_set(&d, 2));
    }

    #[test]
    fn action_examples() {
        assert_eq!(f(1, 1, 7).apply(&UniMat::identity()), f(1, 1, 7));
        assert_eq!(f(1, 0, 1).apply(&UniMat::flip()), f(1, 0, 1));
        assert_eq!(f(1, 1, 7).apply(&UniMat::translation(BigInt::one())), f(1, 3, 9));
    }

    #[test]
    fn reduction_examples() {
        let (r, g) = f(1, 1, 7).reduce();
        assert_eq!(r, f(1, 1, 7));
        assert_eq!(g, UniMat::identity());
        for q in [f(7, -1, 1), f(9, -3, 1)] {
            let (r, g) = q.reduce();
            assert_eq!(r, f(1, 1, 7));
            assert_eq!(q.apply(&g), r);
        }
    }

    #[test]
    fn reduced_representatives() {
        assert_eq!(reduced_reps(&BigInt::from(-4)).unwrap(), vec![f(1, 0, 1)]);
        assert_eq!(reduced_reps(&BigInt::from(-20)).unwrap(), vec![f(1, 0, 5), f(2, 2, 3)]);
        assert_eq!(reduced_reps(&BigInt::from(-27)).unwrap(), vec![f(1, 1, 7)]);
        assert_eq!(reduced_reps(&BigInt::from(-200)).unwrap().len(), 6);
        assert!(matches!(reduced_reps(&BigInt::from(-5)), Err(Error::BadDiscriminant(_))));
        assert!(matches!(reduced_reps(&BigInt::from(8)), Err(Error::BadDiscriminant(_))));
    }

    #[test]
    fn automorph_counts() {
        assert_eq!(f(1, 1, 7).automorphs().len(), 2);
        assert_eq!(f(1, 0, 1).automorphs().len(), 4);
        assert_eq!(f(1, 1, 1).automorphs().len(), 6);
        assert!(f(1, 1, 7).automorphs().contains(&UniMat::identity().neg()));
    }

    #[test]
    fn cm_roots() {
        let ctx = PrecCtx::default();
        let w = f(1, 1, 7).root(&ctx);
        assert!(w.re.to_sci_string(3).starts_with("-5.00e-1"));
        assert!(w.im.to_sci_string(11).starts_with("2.5980762114"));
        assert!(f(2, 0, 25).root(&ctx).im.to_sci_string(11).starts_with("3.5355339059"));
        assert!(f(1, 0, 45).root(&ctx).im.to_sci_string(11).starts_with("6.7082039325"));
        // Q(ω, 1) ≈ 0
        let q = f(7, 4, 7);
        let w = q.root(&ctx);
        let bits = ctx.bits();
        let val =
            &(&w.square().mul_int(&q.a) + &w.mul_int(&q.b)) + &BigComplex::from_real(BigReal::from_int(&q.c, bits));
        assert!(val.log10_abs() < -200.0);
    }

    #[test]
    fn json_roundtrip_large_coefficients() {
        let q = Form::new(BigInt::from(1u64 << 60), 3, -5);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[\"1152921504606846976\",\"3\",\"-5\"]");
        assert_eq!(serde_json::from_str::<Form>("[1, 1, 7]").unwrap(), Form::new(1, 1, 7));
        let back: Form = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }
}
