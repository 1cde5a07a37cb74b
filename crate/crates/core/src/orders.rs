// SPDX-License-Identifier: Apache-2.0

//! Imaginary quadratic orders and their proper fractional ideals.
//!
//! An ideal is stored as `scale · (Z·a + Z·(−b + √D)/2)` with `−a < b ≤ a`
//! and `b² ≡ D (mod 4a)`. This representation is canonical, so two ideals
//! are equal exactly when their fields are equal.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::factor_int;
use crate::quadforms::{check_disc, Form};

/// Order of discriminant `D = cond² · d_K` in an imaginary quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Order {
    pub d: BigInt,
    pub dk: BigInt,
    pub cond: BigInt,
    /// `τ_O` is the root of `x² + b_o·x + c_o` in the upper half-plane.
    pub b_o: BigInt,
    pub c_o: BigInt,
}

impl Order {
    pub fn from_disc(d: &BigInt) -> Result<Self> {
        check_disc(d)?;
        // D = −s²·m with m squarefree
        let mut m = BigInt::one();
        let mut s = BigInt::one();
        let fac = factor_int(&-d, None);
        assert!(fac.complete, "discriminant factorization did not finish");
        for (p, e) in fac.factors {
            s *= num_traits::pow(p.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                m *= p;
            }
        }
        let m = -m;
        let (dk, cond) = if m.mod_floor(&BigInt::from(4)).is_one() { (m, s) } else { (m * 4, s / 2) };
        let (b_o, c_o) = if d.is_odd() { (BigInt::one(), (BigInt::one() - d) / 4) } else { (BigInt::zero(), -d / 4) };
        Ok(Order { d: d.clone(), dk, cond, b_o, c_o })
    }

    pub fn principal_form(&self) -> Form {
        Form::new(1, self.b_o.clone(), self.c_o.clone())
    }

    /// Units of the order in `{1, τ_O}` coordinates.
    pub fn units(&self) -> Vec<AlgInt> {
        let mut u = vec![AlgInt::new(1, 0), AlgInt::new(-1, 0)];
        if self.d == BigInt::from(-4) {
            u.extend([AlgInt::new(0, 1), AlgInt::new(0, -1)]);
        } else if self.d == BigInt::from(-3) {
            u.extend([AlgInt::new(0, 1), AlgInt::new(0, -1), AlgInt::new(-1, -1), AlgInt::new(1, 1)]);
        }
        u
    }

    pub fn one(&self) -> IdealLat {
        IdealLat { scale: BigRational::one(), a: BigInt::one(), b: self.b_o.clone() }
    }
}

/// Element `x + y·τ_O` of the order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgInt {
    pub x: BigInt,
    pub y: BigInt,
}

impl AlgInt {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        AlgInt { x: x.into(), y: y.into() }
    }

    pub fn mul(&self, o: &Self, order: &Order) -> Self {
        // τ² = −b_o τ − c_o
        let yy = &self.y * &o.y;
        AlgInt { x: &self.x * &o.x - &order.c_o * &yy, y: &self.x * &o.y + &self.y * &o.x - &order.b_o * &yy }
    }

    pub fn norm(&self, order: &Order) -> BigInt {
        &self.x * &self.x - &order.b_o * &self.x * &self.y + &order.c_o * &self.y * &self.y
    }

    pub fn conj(&self, order: &Order) -> Self {
        AlgInt { x: &self.x - &order.b_o * &self.y, y: -&self.y }
    }
}

/// A proper fractional ideal `scale · (Z·a + Z·(−b + √D)/2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IdealLat {
    pub scale: BigRational,
    pub a: BigInt,
    pub b: BigInt,
}

impl fmt::Debug for IdealLat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·[{}, (−{} + √D)/2]", self.scale, self.a, self.b)
    }
}

#[derive(Serialize, Deserialize)]
struct IdealJson {
    scale: String,
    a: String,
    b: String,
}

impl Serialize for IdealLat {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        IdealJson { scale: self.scale.to_string(), a: self.a.to_string(), b: self.b.to_string() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for IdealLat {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = IdealJson::deserialize(de)?;
        let bad = || serde::de::Error::custom("malformed ideal");
        Ok(IdealLat {
            scale: j.scale.parse().map_err(|_| bad())?,
            a: j.a.parse().map_err(|_| bad())?,
            b: j.b.parse().map_err(|_| bad())?,
        })
    }
}

fn normalize_b(a: &BigInt, b: &BigInt) -> BigInt {
    // representative of b mod 2a in (−a, a]
    let two_a = a * 2;
    let r = b.mod_floor(&two_a);
    if &r > a {
        r - two_a
    } else {
        r
    }
}

/// Z-lattice in `{1, τ}` coordinates spanned by `gens`, returned in
/// Hermite form as `(n1, m, n2)`: basis `(n1, 0)` and `(m, n2)`, `0 ≤ m < n1`.
fn hermite_basis(gens: &[(BigInt, BigInt)]) -> (BigInt, BigInt, BigInt) {
    let mut pivot: (BigInt, BigInt) = (BigInt::zero(), BigInt::zero());
    let mut n1 = BigInt::zero();
    for (x, y) in gens {
        if y.is_zero() {
            n1 = n1.gcd(x);
            continue;
        }
        if pivot.1.is_zero() {
            pivot = (x.clone(), y.clone());
            continue;
        }
        let e = pivot.1.extended_gcd(y);
        let (u, v) = (e.x, e.y);
        let g = e.gcd;
        let new_pivot = (&u * &pivot.0 + &v * x, &u * &pivot.1 + &v * y);
        // (y/g)·pivot − (pivot.y/g)·w has zero τ-coordinate
        let rest = (y / &g) * &pivot.0 - (&pivot.1 / &g) * x;
        n1 = n1.gcd(&rest);
        pivot = new_pivot;
    }
    if pivot.1.is_negative() {
        pivot = (-pivot.0, -pivot.1);
    }
    assert!(!n1.is_zero() && !pivot.1.is_zero(), "lattice is not of full rank");
    let m = pivot.0.mod_floor(&n1);
    (n1, m, pivot.1)
}

impl IdealLat {
    /// `[ω_Q, 1] = (1/a)·(Z·a + Z·(−b + √D)/2)`.
    pub fn from_form(q: &Form, order: &Order) -> Result<Self> {
        if q.disc() != order.d {
            return Err(Error::DiscMismatch { form: q.disc().to_string(), order: order.d.to_string() });
        }
        Ok(IdealLat { scale: BigRational::new(BigInt::one(), q.a.clone()), a: q.a.clone(), b: normalize_b(&q.a, &q.b) })
    }

    /// Build from an integral lattice given by generators in `{1, τ}` coordinates.
    fn from_generators(scale: BigRational, gens: &[(BigInt, BigInt)], order: &Order) -> Self {
        let (n1, m, n2) = hermite_basis(gens);
        debug_assert!(n1.is_multiple_of(&n2) && m.is_multiple_of(&n2), "not an O-ideal");
        let a = &n1 / &n2;
        let b = &order.b_o - (&m / &n2) * 2;
        IdealLat { scale: scale * BigRational::from_integer(n2), b: normalize_b(&a, &b), a }
    }

    /// `ν·O` for `ν = x + yτ`.
    pub fn principal(nu: &AlgInt, order: &Order) -> Self {
        let tau = AlgInt::new(0, 1);
        let g2 = nu.mul(&tau, order);
        Self::from_generators(BigRational::one(), &[(nu.x.clone(), nu.y.clone()), (g2.x, g2.y)], order)
    }

    /// `r·O` for a rational `r`.
    pub fn rational(r: BigRational, order: &Order) -> Self {
        IdealLat { scale: r.abs(), a: BigInt::one(), b: order.b_o.clone() }
    }

    /// Integral basis `{a, (−b + √D)/2}` in `{1, τ}` coordinates.
    fn basis(&self, order: &Order) -> [(BigInt, BigInt); 2] {
        [(self.a.clone(), BigInt::zero()), ((&order.b_o - &self.b) / 2, BigInt::one())]
    }

    pub fn mul(&self, other: &Self, order: &Order) -> Self {
        let x = self.basis(order);
        let y = other.basis(order);
        let mut gens = Vec::with_capacity(4);
        for u in &x {
            for v in &y {
                let p = AlgInt::new(u.0.clone(), u.1.clone()).mul(&AlgInt::new(v.0.clone(), v.1.clone()), order);
                gens.push((p.x, p.y));
            }
        }
        Self::from_generators(&self.scale * &other.scale, &gens, order)
    }

    pub fn conj(&self) -> Self {
        IdealLat { scale: self.scale.clone(), a: self.a.clone(), b: normalize_b(&self.a, &-&self.b) }
    }

    /// `x⁻¹ = conj(x)/N(x)`.
    pub fn inv(&self) -> Self {
        let scale = BigRational::one() / (&self.scale * BigRational::from_integer(self.a.clone()));
        IdealLat { scale, ..self.conj() }
    }

    pub fn norm(&self) -> BigRational {
        &self.scale * &self.scale * BigRational::from_integer(self.a.clone())
    }

    pub fn is_integral(&self) -> bool {
        // scale·a and scale·(−b+√D)/2 integral ⟺ scale integral for a primitive lattice
        self.scale.is_integer()
    }

    pub fn is_prime_to(&self, m: &BigInt) -> bool {
        let n = self.norm();
        n.numer().gcd(m).is_one() && n.denom().gcd(m).is_one()
    }

    /// Generator `ν` with `νO = self`, returned as `(r, μ)` meaning `ν = r·μ`.
    pub fn principal_gen(&self, order: &Order) -> Option<(BigRational, AlgInt)> {
        // N(a·u + v·(−b+√D)/2) = a·(a u² − b u v + c v²); need the form to represent 1.
        let c = (&self.b * &self.b - &order.d) / (&self.a * 4);
        let f = Form::new(self.a.clone(), -&self.b, c);
        let (r, g) = f.reduce();
        if r != order.principal_form() {
            return None;
        }
        let (u, v) = (g.p, g.r);
        let mu = AlgInt { x: &self.a * &u + &v * ((&order.b_o - &self.b) / 2), y: v };
        Some((self.scale.clone(), mu))
    }
}

/// `Some(x mod N)` when `ν = x + yτ ≡ x (mod NO)`, i.e. when `N | y`.
pub fn congruence_class_mod_no(nu: &AlgInt, n: u64) -> Option<u64> {
    let nn = BigInt::from(n);
    if !nu.y.is_multiple_of(&nn) {
        return None;
    }
    Some(nu.x.mod_floor(&nn).to_u64().expect("reduced"))
}

/// The subgroup of `(O/NO)^×` generated by the rational residues in `G`
/// and the units of `O`. Materialized once; read-only afterwards.
#[derive(Debug, Clone)]
pub struct PgTester {
    order: Order,
    n: u64,
    b_o: u64,
    c_o: u64,
    members: HashSet<(u64, u64)>,
}

impl PgTester {
    pub fn new(order: &Order, n: u64, g: &[u64]) -> Self {
        let nn = BigInt::from(n);
        let red = |x: &BigInt| x.mod_floor(&nn).to_u64().expect("reduced");
        let mut t =
            PgTester { order: order.clone(), n, b_o: red(&order.b_o), c_o: red(&order.c_o), members: HashSet::new() };
        let mut gens: Vec<(u64, u64)> = g.iter().map(|&t| (t % n, 0)).collect();
        gens.extend(order.units().iter().map(|u| (red(&u.x), red(&u.y))));
        let mut frontier = vec![(1 % n, 0)];
        t.members.insert((1 % n, 0));
        while let Some(e) = frontier.pop() {
            for g in &gens {
                let p = t.mul(e, *g);
                if t.members.insert(p) {
                    frontier.push(p);
                }
            }
        }
        t
    }

    fn mul(&self, u: (u64, u64), v: (u64, u64)) -> (u64, u64) {
        let n = self.n as u128;
        let (x1, y1, x2, y2) = (u.0 as u128, u.1 as u128, v.0 as u128, v.1 as u128);
        let yy = y1 * y2 % n;
        let x = (x1 * x2 + (n - self.c_o as u128) * yy) % n;
        let y = (x1 * y2 + x2 * y1 + (n - self.b_o as u128) * yy) % n;
        (x as u64, y as u64)
    }

    pub fn subgroup_size(&self) -> usize {
        self.members.len()
    }

    /// Membership of an ideal prime to `N` in `P_G(O, N)`.
    pub fn contains(&self, x: &IdealLat) -> Result<bool> {
        let nn = BigInt::from(self.n);
        if !x.is_prime_to(&nn) {
            return Err(Error::NotPrimeToN);
        }
        let Some((r, mu)) = x.principal_gen(&self.order) else {
            return Ok(false);
        };
        if !mu.norm(&self.order).gcd(&nn).is_one() {
            return Err(Error::NotPrimeToN);
        }
        if self.n == 1 {
            return Ok(true);
        }
        let inv = |z: &BigInt| -> Result<u64> {
            let z = z.mod_floor(&nn);
            let e = z.extended_gcd(&nn);
            if !e.gcd.is_one() {
                return Err(Error::NotPrimeToN);
            }
            Ok(e.x.mod_floor(&nn).to_u64().expect("reduced"))
        };
        let rn = r.numer().mod_floor(&nn).to_u64().expect("reduced");
        let rd = inv(r.denom())?;
        let k = (rn as u128 * rd as u128 % self.n as u128) as u64;
        let class = (
            (mu.x.mod_floor(&nn).to_u64().expect("reduced") as u128 * k as u128 % self.n as u128) as u64,
            (mu.y.mod_floor(&nn).to_u64().expect("reduced") as u128 * k as u128 % self.n as u128) as u64,
        );
        Ok(self.members.contains(&class))
    }
}

/// One-shot membership test in `P_G(O, N)`.
pub fn in_pg(x: &IdealLat, n: u64, g: &[u64], order: &Order) -> Result<bool> {
    PgTester::new(order, n, g).contains(x)
}
