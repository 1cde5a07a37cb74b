// SPDX-License-Identifier: Apache-2.0

//! Exact integer polynomial algebra: discriminants via modular resultants,
//! integer factorization, primality and root detection modulo a prime.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer polynomial, constant term first. The zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Parse decimal coefficients, constant term first.
    pub fn from_decimal(coeffs: &[&str]) -> Result<Self> {
        coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|_| Error::InvalidArgument(format!("bad integer {s:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// True when only even (resp. only odd) powers occur.
    pub fn parity(&self) -> Option<Parity> {
        let has = |odd: bool| self.coeffs.iter().enumerate().any(|(k, c)| (k % 2 == 1) == odd && !c.is_zero());
        match (has(false), has(true)) {
            (true, false) => Some(Parity::Even),
            (false, true) => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let pp = BigInt::from(p);
        let mut v: Vec<u64> = self.coeffs.iter().map(|c| c.mod_floor(&pp).to_u64().expect("reduced")).collect();
        trim(&mut v);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{a}*X")?,
                (_, true) => write!(f, "X^{k}")?,
                (_, false) => write!(f, "{a}*X^{k}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Word-size modular helpers

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Remainder of `a` modulo the nonzero polynomial `b` over F_p.
fn poly_rem_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv_lc = invmod(b[db], p);
    while r.len() > db {
        let k = r.len() - 1;
        let q = mulmod(r[k], inv_lc, p);
        if q != 0 {
            let off = k - db;
            for (i, &bi) in b.iter().enumerate() {
                r[off + i] = (r[off + i] + p - mulmod(q, bi, p)) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn poly_mulmod_p(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    poly_rem_p(&out, m, p)
}

fn poly_gcd_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = poly_rem_p(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Resultant of two polynomials over F_p with nonzero leading coefficients.
fn resultant_p(a: &[u64], b: &[u64], p: u64) -> u64 {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    let mut acc = 1u64;
    loop {
        let (da, db) = (a.len() - 1, b.len() - 1);
        if db == 0 {
            return mulmod(acc, powmod(b[0], da as u64, p), p);
        }
        let r = poly_rem_p(&a, &b, p);
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        if (da * db) % 2 == 1 {
            acc = (p - acc) % p;
        }
        acc = mulmod(acc, powmod(b[db], (da - dr) as u64, p), p);
        a = b;
        b = r;
    }
}

/// Whether `F` has a root in Z/pZ, via `deg gcd(F, X^p − X) > 0`.
pub fn has_root_mod_p(f: &IntPoly, p: u64) -> Result<bool> {
    let lc = f.leading().ok_or_else(|| Error::InvalidArgument("zero polynomial".into()))?;
    if lc.mod_floor(&BigInt::from(p)).is_zero() {
        return Err(Error::LeadingCoeffVanishes(p));
    }
    let fp = f.reduce_mod(p);
    if fp.len() <= 1 {
        return Ok(false);
    }
    // X^p mod F by square-and-multiply
    let x = poly_rem_p(&[0, 1 % p], &fp, p);
    let mut acc = vec![1u64];
    let mut base = x.clone();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod_p(&acc, &base, &fp, p);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mulmod_p(&base, &base, &fp, p);
        }
    }
    // acc − X
    let mut h = acc;
    if h.len() < 2 {
        h.resize(2, 0);
    }
    h[1] = (h[1] + p - 1 % p) % p;
    trim(&mut h);
    if h.is_empty() {
        // X^p ≡ X mod F: every root of F in the algebraic closure lies in F_p
        return Ok(true);
    }
    Ok(poly_gcd_p(&fp, &h, p).len() > 1)
}

// ---------------------------------------------------------------------------
// Resultants and discriminants

fn log2_l2_norm(p: &IntPoly) -> f64 {
    let s: BigInt = p.coeffs.iter().map(|c| c * c).sum();
    let bits = s.bits() as f64;
    bits / 2.0
}

/// Resultant `Res(F, G)` over Z, computed by CRT over 62-bit primes with a
/// Hadamard bound on the size of the result.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return BigInt::zero();
    };
    if df == 0 && dg == 0 {
        return BigInt::one();
    }
    let bound_bits = (dg as f64 * log2_l2_norm(f) + df as f64 * log2_l2_norm(g)).ceil() as u64 + 2;
    let lf = f.leading().expect("nonzero").clone();
    let lg = g.leading().expect("nonzero").clone();
    let mut modulus = BigInt::one();
    let mut value = BigInt::zero();
    let mut p: u64 = (1u64 << 62) - 1;
    while modulus.bits() <= bound_bits + 1 {
        p -= 2;
        while !is_prime_u64(p) {
            p -= 2;
        }
        let pp = BigInt::from(p);
        if lf.mod_floor(&pp).is_zero() || lg.mod_floor(&pp).is_zero() {
            continue;
        }
        let r = resultant_p(&f.reduce_mod(p), &g.reduce_mod(p), p);
        // CRT: value ≡ r (mod p), value ≡ value (mod modulus)
        let cur = value.mod_floor(&pp).to_u64().expect("reduced");
        let minv = invmod(modulus.mod_floor(&pp).to_u64().expect("reduced"), p);
        let t = mulmod((r + p - cur) % p, minv, p);
        value += &modulus * BigInt::from(t);
        modulus *= pp;
    }
    let half = &modulus >> 1u32;
    if value > half {
        value - modulus
    } else {
        value
    }
}

/// Fraction-free (Bareiss) determinant of the Sylvester matrix.
pub fn resultant_sylvester(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return BigInt::zero();
    };
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (k, c) in f.coeffs.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.coeffs.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Discriminant `(−1)^{d(d−1)/2} Res(F, F′)/lc(F)`.
pub fn poly_disc(f: &IntPoly) -> Result<BigInt> {
    let d = f.degree().unwrap_or(0);
    if d < 2 {
        return Err(Error::InvalidArgument("discriminant needs degree at least 2".into()));
    }
    let res = resultant(f, &f.derivative());
    let lc = f.leading().expect("nonzero");
    let (q, r) = res.div_rem(lc);
    debug_assert!(r.is_zero(), "lc does not divide the resultant");
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}

// ---------------------------------------------------------------------------
// Primality and factorization

const SMALL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn miller_rabin(n: &BigInt, a: u64) -> bool {
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().expect("n > 1");
    let d = &nm1 >> s;
    let mut x = BigInt::from(a).modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Miller–Rabin with the first 13 prime bases, which is deterministic below
/// 3.3·10²⁴; larger inputs additionally run 24 further prime bases.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    if let Some(m) = n.to_u64() {
        return is_prime_u64(m);
    }
    for p in SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    if !SMALL_PRIMES.iter().all(|&a| miller_rabin(n, a)) {
        return false;
    }
    let deterministic_limit: BigInt = "3317044064679887385961981".parse().expect("literal");
    if n < &deterministic_limit {
        return true;
    }
    let mut a = 43u64;
    let mut extra = 0;
    while extra < 24 {
        if is_prime_u64(a) {
            if !miller_rabin(n, a) {
                return false;
            }
            extra += 1;
        }
        a += 2;
    }
    true
}

pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;
pub const DEFAULT_FACTOR_BUDGET: Duration = Duration::from_secs(60);

/// Prime factorization of `|n|`. `complete = false` means the budget ran out;
/// the unfactored cofactors are then listed in `remaining`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(BigInt, u32)>,
    pub remaining: Vec<(BigInt, u32)>,
    pub complete: bool,
}

impl Factorization {
    pub fn into_result(self) -> Result<Vec<(BigInt, u32)>> {
        if self.complete {
            Ok(self.factors)
        } else {
            Err(Error::FactorTimeout)
        }
    }

    /// Product of all prime powers and unfactored cofactors.
    pub fn product(&self) -> BigInt {
        self.factors
            .iter()
            .chain(self.remaining.iter())
            .fold(BigInt::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }
}

fn sieve(limit: u64) -> Vec<u64> {
    let mut is = vec![true; limit as usize + 1];
    let mut out = Vec::new();
    for i in 2..=limit as usize {
        if is[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit as usize {
                is[j] = false;
                j += i;
            }
        }
    }
    out
}

/// Largest `k ≥ 2` and root `r` with `n = r^k`, if any.
fn perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    let bits = n.bits() as u32;
    let mut best: Option<(BigInt, u32)> = None;
    for k in 2..=bits.max(2) {
        if !is_prime_u64(k as u64) {
            continue;
        }
        let r = n.nth_root(k);
        if r <= BigInt::one() {
            break;
        }
        if num_traits::pow(r.clone(), k as usize) == *n {
            best = Some((r, k));
            break;
        }
    }
    let (r, k) = best?;
    match perfect_power(&r) {
        Some((r2, k2)) => Some((r2, k * k2)),
        None => Some((r, k)),
    }
}

/// Brent's variant of Pollard rho with batched gcds. Returns a nontrivial
/// factor, or `None` when the deadline passes.
fn pollard_brent(n: &BigInt, deadline: Instant) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let one = BigInt::one();
    for c in 1u64.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r: u64 = 1;
        let m: u64 = 128;
        let mut g = one.clone();
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            if Instant::now() > deadline {
                return None;
            }
        }
        if &g == n {
            // backtrack one step at a time
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    unreachable!()
}

/// Trial division to 10⁶, perfect-power detection, then Pollard–Brent with
/// Miller–Rabin certification. Deterministic (fixed rho seed schedule).
pub fn factor_int(n: &BigInt, budget: Option<Duration>) -> Factorization {
    assert!(!n.is_zero(), "cannot factor zero");
    let deadline = Instant::now() + budget.unwrap_or(DEFAULT_FACTOR_BUDGET);
    let mut n = n.abs();
    let mut found: Vec<(BigInt, u32)> = Vec::new();
    let limit =
        if n.bits() <= 40 { n.sqrt().to_u64().unwrap_or(0).min(TRIAL_DIVISION_LIMIT) } else { TRIAL_DIVISION_LIMIT };
    for p in sieve(limit.max(2)) {
        if n.is_one() {
            break;
        }
        let pp = BigInt::from(p);
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&pp);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            found.push((pp, e));
        }
    }
    let mut remaining = Vec::new();
    let mut stack: Vec<(BigInt, u32)> = if n.is_one() { vec![] } else { vec![(n, 1)] };
    while let Some((m, mult)) = stack.pop() {
        if is_prime(&m) {
            found.push((m, mult));
            continue;
        }
        if let Some((r, k)) = perfect_power(&m) {
            stack.push((r, mult * k));
            continue;
        }
        match pollard_brent(&m, deadline) {
            Some(d) => {
                let mut rest = m / &d;
                // pull out every copy of d before splitting further
                let mut e = 1;
                while (&rest % &d).is_zero() {
                    rest /= &d;
                    e += 1;
                }
                stack.push((d, mult * e));
                if !rest.is_one() {
                    stack.push((rest, mult));
                }
            }
            None => remaining.push((m, mult)),
        }
    }
    // Composite splits can yield the same prime twice; merge.
    found.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for (p, e) in found {
        match factors.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => factors.push((p, e)),
        }
    }
    let complete = remaining.is_empty();
    Factorization { factors, remaining, complete }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_examples() {
        assert_eq!(poly_disc(&IntPoly::from_i64(&[1, 0, 1])).unwrap(), BigInt::from(-4));
        assert_eq!(poly_disc(&IntPoly::from_i64(&[7, 1, 1])).unwrap(), BigInt::from(-27));
        // 2X^3 − 3X + 5
        let f = IntPoly::from_i64(&[5, -3, 0, 2]);
        let direct = resultant_sylvester(&f, &f.derivative()) / BigInt::from(2);
        assert_eq!(poly_disc(&f).unwrap(), -direct);
        assert!(poly_disc(&IntPoly::from_i64(&[1, 1])).is_err());
    }

    #[test]
    fn modular_and_bareiss_resultants_agree() {
        let f = IntPoly::from_i64(&[3, -1, 4, 1, -5, 9]);
        let g = IntPoly::from_i64(&[2, 6, -5, 3]);
        assert_eq!(resultant(&f, &g), resultant_sylvester(&f, &g));
        let h = IntPoly::from_i64(&[1, 2, 1]);
        assert_eq!(resultant(&h, &h.derivative()), BigInt::zero());
    }

    #[test]
    fn factorization_examples() {
        let f = factor_int(&BigInt::from(28), None);
        assert_eq!(f.factors, vec![(BigInt::from(2), 2), (BigInt::from(7), 1)]);
        assert!(f.complete);
        assert_eq!(factor_int(&BigInt::from(383), None).factors, vec![(BigInt::from(383), 1)]);
        let big: BigInt = "15630971591656081".parse().unwrap();
        assert!(is_prime(&big));
        assert_eq!(factor_int(&big, None).factors, vec![(big, 1)]);
        // product of two primes above the trial-division limit, to the 4th power
        let p: BigInt = "1532509721761".parse().unwrap();
        let q: BigInt = "27666986168641".parse().unwrap();
        let n = num_traits::pow(&p * &q, 4) * BigInt::from(-12);
        let f = factor_int(&n, None);
        assert!(f.complete);
        assert_eq!(f.factors, vec![(BigInt::from(2), 2), (BigInt::from(3), 1), (p, 4), (q, 4)]);
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&BigInt::from(181)));
        assert!(!is_prime(&BigInt::from(221)));
        assert!(is_prime(&"1459141468570561".parse().unwrap()));
        // Arnault-style strong pseudoprime to many bases: 3825123056546413051 = 149491·747451·34233211
        assert!(!is_prime(&"3825123056546413051".parse().unwrap()));
        let m61 = (BigInt::one() << 127u32) - 1;
        assert!(is_prime(&m61));
        assert!(!is_prime(&(&m61 * BigInt::from(3))));
    }

    #[test]
    fn roots_mod_p_examples() {
        let x2p1 = IntPoly::from_i64(&[1, 0, 1]);
        assert!(has_root_mod_p(&x2p1, 5).unwrap());
        assert!(!has_root_mod_p(&x2p1, 7).unwrap());
        assert!(has_root_mod_p(&IntPoly::from_i64(&[7, 1, 1]), 3).unwrap());
        assert!(matches!(has_root_mod_p(&IntPoly::from_i64(&[1, 0, 3]), 3), Err(Error::LeadingCoeffVanishes(3))));
        // X^p − X itself: every residue is a root
        assert!(has_root_mod_p(&IntPoly::from_i64(&[0, -1, 0, 1]), 3).unwrap());
    }

    #[test]
    fn display_and_parity() {
        let f = IntPoly::from_i64(&[452984832, 0, 1359124367081472, 0, -73725696, 0, 1]);
        assert_eq!(f.to_string(), "X^6 - 73725696*X^4 + 1359124367081472*X^2 + 452984832");
        assert_eq!(f.parity(), Some(Parity::Even));
        assert_eq!(IntPoly::from_i64(&[0, 1, 0, 1]).parity(), Some(Parity::Odd));
        assert_eq!(IntPoly::from_i64(&[1, 1]).parity(), None);
    }
}
