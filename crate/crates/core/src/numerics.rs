// SPDX-License-Identifier: Apache-2.0

//! Deterministic arbitrary-precision real and complex arithmetic.
//!
//! Values are stored in binary fixed point: a [`BigReal`] is an integer
//! mantissa `m` together with a number of fractional bits `b`, and denotes
//! `m / 2^b`. Every operation is a pure function of its inputs and of the
//! working precision, so results are bit-identical on every platform.
//! Each primitive operation truncates at most one unit in the last place.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_DIGITS: u32 = 200;
pub const DEFAULT_GUARD: u32 = 20;
pub const DEFAULT_MAX_DIGITS: u32 = 3200;
pub const MIN_DIGITS: u32 = 50;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision: decimal digits plus guard digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecCtx {
    digits: u32,
    guard: u32,
    max_digits: u32,
}

impl Default for PrecCtx {
    fn default() -> Self {
        PrecCtx { digits: DEFAULT_DIGITS, guard: DEFAULT_GUARD, max_digits: DEFAULT_MAX_DIGITS }
    }
}

impl PrecCtx {
    pub fn new(digits: u32, guard: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::InvalidArgument(format!("digits must be at least {MIN_DIGITS}, got {digits}")));
        }
        Ok(PrecCtx { digits, guard, max_digits: DEFAULT_MAX_DIGITS.max(digits) })
    }

    /// Cap for adaptive precision doubling.
    pub fn with_max_digits(mut self, max_digits: u32) -> Self {
        self.max_digits = max_digits.max(self.digits);
        self
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    pub fn max_digits(&self) -> u32 {
        self.max_digits
    }

    /// Same guard and cap, different digit count (clamped to the cap).
    pub fn with_digits(&self, digits: u32) -> Self {
        PrecCtx { digits: digits.clamp(MIN_DIGITS, self.max_digits), ..*self }
    }

    /// The next context in the doubling schedule, or `None` once the cap is reached.
    pub fn doubled(&self) -> Option<Self> {
        if self.digits >= self.max_digits {
            None
        } else {
            Some(self.with_digits(self.digits.saturating_mul(2)))
        }
    }

    /// Fractional bits used for fixed-point values in this context.
    pub fn bits(&self) -> u64 {
        ((self.digits + self.guard) as f64 * LOG2_10).ceil() as u64 + 32
    }

    /// `10^(guard - digits)`, the relative accuracy promised to callers.
    pub fn epsilon(&self) -> BigReal {
        BigReal::pow10(self.guard as i64 - self.digits as i64, self.bits())
    }

    pub fn pi(&self) -> BigReal {
        BigReal::pi(self.bits())
    }

    pub fn zero(&self) -> BigComplex {
        BigComplex::from_i64(0, 0, self.bits())
    }

    pub fn one(&self) -> BigComplex {
        BigComplex::from_i64(1, 0, self.bits())
    }
}

/// Signed binary fixed-point real number `mantissa / 2^bits`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigReal {
    m: BigInt,
    bits: u64,
}

impl BigReal {
    pub fn from_mantissa(m: BigInt, bits: u64) -> Self {
        BigReal { m, bits }
    }

    pub fn zero(bits: u64) -> Self {
        BigReal { m: BigInt::zero(), bits }
    }

    pub fn from_int(n: &BigInt, bits: u64) -> Self {
        BigReal { m: n << bits, bits }
    }

    pub fn from_i64(n: i64, bits: u64) -> Self {
        Self::from_int(&BigInt::from(n), bits)
    }

    /// `num / den`, truncated toward zero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u64) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        BigReal { m: (num << bits) / den, bits }
    }

    /// `10^k` for any integer `k`.
    pub fn pow10(k: i64, bits: u64) -> Self {
        let p = num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_int(&p, bits)
        } else {
            Self::from_ratio(&BigInt::one(), &p, bits)
        }
    }

    /// Best effort conversion of an `f64` (exact for the binary value).
    pub fn from_f64(x: f64, bits: u64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Self::zero(bits);
        }
        let (mant, exp) = decompose_f64(x);
        let m = BigInt::from(mant);
        let shift = exp + bits as i64;
        let m = if shift >= 0 { m << shift as u64 } else { m >> (-shift) as u64 };
        BigReal { m, bits }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigReal { m: self.m.abs(), bits: self.bits }
    }

    /// Re-express at a different number of fractional bits.
    pub fn with_bits(&self, bits: u64) -> Self {
        let m = match bits.cmp(&self.bits) {
            Ordering::Equal => self.m.clone(),
            Ordering::Greater => &self.m << (bits - self.bits),
            Ordering::Less => &self.m >> (self.bits - bits),
        };
        BigReal { m, bits }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        BigReal { m: &self.m * k, bits: self.bits }
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        BigReal { m: &self.m / k, bits: self.bits }
    }

    /// Multiply by `2^k` (k may be negative).
    pub fn shl(&self, k: i64) -> Self {
        let m = if k >= 0 { &self.m << k as u64 } else { &self.m >> (-k) as u64 };
        BigReal { m, bits: self.bits }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        debug_assert_eq!(self.bits, other.bits);
        if other.m.is_zero() {
            return Err(Error::DivideByZero);
        }
        Ok(BigReal { m: (&self.m << self.bits) / &other.m, bits: self.bits })
    }

    /// Square root of a non-negative value, truncated.
    pub fn sqrt(&self) -> Self {
        assert!(!self.m.is_negative(), "sqrt of a negative value");
        BigReal { m: (&self.m << self.bits).sqrt(), bits: self.bits }
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> BigInt {
        if self.bits == 0 {
            return self.m.clone();
        }
        let half = BigInt::one() << (self.bits - 1);
        if self.m.is_negative() {
            -((-&self.m + half) >> self.bits)
        } else {
            (&self.m + half) >> self.bits
        }
    }

    pub fn floor(&self) -> BigInt {
        &self.m >> self.bits
    }

    /// Approximation as `f64`; saturates to 0 or ±inf outside its range.
    pub fn to_f64(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let len = self.m.bits() as i64;
        let shift = (len - 62).max(0);
        let top = (&self.m >> shift as u64).to_f64().unwrap_or(0.0);
        let exp = shift - self.bits as i64;
        top * pow2_f64(exp)
    }

    /// `log2 |x|` as an `f64`, valid far outside the `f64` exponent range.
    pub fn log2_abs(&self) -> f64 {
        if self.m.is_zero() {
            return f64::NEG_INFINITY;
        }
        let len = self.m.bits() as i64;
        let shift = (len - 62).max(0);
        let top = (self.m.abs() >> shift as u64).to_f64().unwrap_or(1.0);
        top.log2() + (shift - self.bits as i64) as f64
    }

    pub fn log10_abs(&self) -> f64 {
        self.log2_abs() / LOG2_10
    }

    /// Scientific notation with `sig` significant digits, e.g. `1.25e-31`.
    pub fn to_sci_string(&self, sig: usize) -> String {
        if self.m.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1);
        let neg = self.m.is_negative();
        let e10 = self.log10_abs().floor() as i64;
        // scaled = |x| * 10^(sig - 1 - e10), rounded to an integer
        let k = sig as i64 - 1 - e10;
        let scaled = if k >= 0 {
            self.abs().mul_int(&num_traits::pow(BigInt::from(10), k as usize)).round()
        } else {
            self.abs().div_int(&num_traits::pow(BigInt::from(10), (-k) as usize)).round()
        };
        let mut digits = scaled.to_string();
        let mut e10 = e10;
        if digits.len() > sig {
            digits.truncate(sig);
            e10 += 1;
        }
        while digits.len() < sig {
            digits.push('0');
        }
        let (head, tail) = digits.split_at(1);
        let sign = if neg { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }

    /// π to `bits` fractional bits (Machin's formula).
    pub fn pi(bits: u64) -> Self {
        let wp = bits + 32;
        let a = atan_inv(5, wp);
        let b = atan_inv(239, wp);
        let m = (a * 16) - (b * 4);
        BigReal { m: m >> 32u64, bits }
    }
}

fn decompose_f64(x: f64) -> (i64, i64) {
    let raw = x.to_bits();
    let sign = if raw >> 63 == 1 { -1 } else { 1 };
    let exp = ((raw >> 52) & 0x7ff) as i64;
    let frac = (raw & ((1u64 << 52) - 1)) as i64;
    if exp == 0 {
        (sign * frac, -1074)
    } else {
        (sign * (frac | (1 << 52)), exp - 1075)
    }
}

fn pow2_f64(e: i64) -> f64 {
    if e > 1100 {
        f64::INFINITY
    } else if e < -1100 {
        0.0
    } else {
        (2.0f64).powi(e as i32)
    }
}

/// `atan(1/k) * 2^wp` by the alternating Taylor series.
fn atan_inv(k: u64, wp: u64) -> BigInt {
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut term = (BigInt::one() << wp) / &k;
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * n + 1);
        if n.is_even() {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &k2;
        n += 1;
    }
    sum
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(20))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(f.precision().unwrap_or(20)))
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigReal {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.bits == other.bits {
            self.m.cmp(&other.m)
        } else {
            let b = self.bits.max(other.bits);
            self.with_bits(b).m.cmp(&other.with_bits(b).m)
        }
    }
}

macro_rules! real_binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl<'a> $tr<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $f(self, rhs: &'a BigReal) -> BigReal {
                debug_assert_eq!(self.bits, rhs.bits, "mixed precision");
                let g: fn(&BigReal, &BigReal) -> BigReal = $body;
                g(self, rhs)
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $f(self, rhs: BigReal) -> BigReal {
                (&self).$f(&rhs)
            }
        }
    };
}

real_binop!(Add, add, |a, b| BigReal { m: &a.m + &b.m, bits: a.bits });
real_binop!(Sub, sub, |a, b| BigReal { m: &a.m - &b.m, bits: a.bits });
real_binop!(Mul, mul, |a, b| BigReal { m: (&a.m * &b.m) >> a.bits, bits: a.bits });

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal { m: -&self.m, bits: self.bits }
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal { m: -self.m, bits: self.bits }
    }
}

/// Complex number with fixed-point real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        debug_assert_eq!(re.bits, im.bits);
        BigComplex { re, im }
    }

    pub fn from_i64(re: i64, im: i64, bits: u64) -> Self {
        BigComplex { re: BigReal::from_i64(re, bits), im: BigReal::from_i64(im, bits) }
    }

    pub fn from_real(re: BigReal) -> Self {
        let bits = re.bits;
        BigComplex { re, im: BigReal::zero(bits) }
    }

    pub fn from_f64(re: f64, im: f64, bits: u64) -> Self {
        BigComplex { re: BigReal::from_f64(re, bits), im: BigReal::from_f64(im, bits) }
    }

    pub fn bits(&self) -> u64 {
        self.re.bits
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn with_bits(&self, bits: u64) -> Self {
        BigComplex { re: self.re.with_bits(bits), im: self.im.with_bits(bits) }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> BigReal {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigReal {
        // squaring halves the fixed-point resolution of small values
        let bits = self.bits();
        let scale = self.re.log2_abs().max(self.im.log2_abs());
        if scale == f64::NEG_INFINITY {
            return BigReal::zero(bits);
        }
        let extra = (-scale).max(0.0) as u64 + 8;
        self.with_bits(bits + extra).norm_sqr().sqrt().with_bits(bits)
    }

    pub fn abs_f64(&self) -> f64 {
        let r = self.re.to_f64();
        let i = self.im.to_f64();
        r.hypot(i)
    }

    /// `log10 |z|` without overflow.
    pub fn log10_abs(&self) -> f64 {
        let a = self.re.log2_abs();
        let b = self.im.log2_abs();
        let hi = a.max(b);
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        let lo = a.min(b);
        (hi + (1.0 + (2.0f64).powf(2.0 * (lo - hi))).log2() / 2.0) / LOG2_10
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        BigComplex { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    pub fn mul_real(&self, r: &BigReal) -> Self {
        BigComplex { re: &self.re * r, im: &self.im * r }
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        BigComplex { re: self.re.div_int(k), im: self.im.div_int(k) }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        BigComplex { re: -&self.im, im: self.re.clone() }
    }

    pub fn square(&self) -> Self {
        let re = &(&self.re * &self.re) - &(&self.im * &self.im);
        let im = (&self.re * &self.im).shl(1);
        BigComplex { re, im }
    }

    /// Division; fails when `|rhs| <= 2^(-bits/2)`.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let bits = self.bits();
        // (a+bi)/(c+di) = ((ac+bd) + (bc-ad)i)/(c²+d²), computed on raw
        // mantissas to avoid an intermediate truncation.
        let (a, b, c, d) = (&self.re.m, &self.im.m, &rhs.re.m, &rhs.im.m);
        let den_raw = c * c + d * d;
        // |rhs|² = den_raw / 2^(2·bits) must exceed 2^(-bits)
        if den_raw <= (BigInt::one() << bits) {
            return Err(Error::DivideByZero);
        }
        let re = ((a * c + b * d) << bits) / &den_raw;
        let im = ((b * c - a * d) << bits) / &den_raw;
        Ok(BigComplex { re: BigReal { m: re, bits }, im: BigReal { m: im, bits } })
    }

    pub fn inv(&self) -> Result<Self> {
        BigComplex::from_i64(1, 0, self.bits()).checked_div(self)
    }

    /// Integer power by square-and-multiply; negative exponents invert.
    pub fn powi(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok(base.pow_u(k.unsigned_abs()))
    }

    pub fn pow_u(&self, mut k: u64) -> Self {
        let bits = self.bits();
        let mut acc = BigComplex::from_i64(1, 0, bits);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// `e^z`: argument halving, Taylor series, repeated squaring. The
    /// intermediate precision is raised so the final absolute error stays
    /// within a couple of units in the last place.
    pub fn exp(&self) -> Self {
        let bits = self.bits();
        let mag = self.abs_f64();
        let halvings = (mag.max(1.0).log2().ceil() as u64) + ((bits as f64).sqrt() / 2.0) as u64;
        let growth = if self.re.to_f64() > 0.0 { (self.re.to_f64() / std::f64::consts::LN_2).ceil() as u64 } else { 0 };
        let wp = bits + halvings + growth + 48;
        let r = self.with_bits(wp);
        let r = BigComplex { re: r.re.shl(-(halvings as i64)), im: r.im.shl(-(halvings as i64)) };
        let mut sum = BigComplex::from_i64(1, 0, wp);
        let mut term = sum.clone();
        let mut n: i64 = 1;
        loop {
            term = (&term * &r).div_int(&BigInt::from(n));
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
            n += 1;
        }
        for _ in 0..halvings {
            sum = sum.square();
        }
        sum.with_bits(bits)
    }

    pub fn to_pair_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(20);
        write!(f, "{} + {}i", self.re.to_sci_string(p), self.im.to_sci_string(p))
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &'a BigComplex) -> BigComplex {
        BigComplex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &'a BigComplex) -> BigComplex {
        BigComplex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &'a BigComplex) -> BigComplex {
        let bits = self.bits();
        let (a, b, c, d) = (&self.re.m, &self.im.m, &rhs.re.m, &rhs.im.m);
        let re = (a * c - b * d) >> bits;
        let im = (a * d + b * c) >> bits;
        BigComplex { re: BigReal { m: re, bits }, im: BigReal { m: im, bits } }
    }
}

impl Add for BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: BigComplex) -> BigComplex {
        &self + &rhs
    }
}

impl Sub for BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: BigComplex) -> BigComplex {
        &self - &rhs
    }
}

impl Mul for BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: BigComplex) -> BigComplex {
        &self * &rhs
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -&self.re, im: -&self.im }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

/// `e^{2πiτ}`. Also serves fractional nome powers: pass `τ·x` to get `q^x`.
pub fn cx_exp2pii(tau: &BigComplex, ctx: &PrecCtx) -> BigComplex {
    let bits = ctx.bits();
    let tau = tau.with_bits(bits);
    let two_pi = ctx.pi().shl(1);
    tau.mul_real(&two_pi).mul_i().exp()
}

/// `e^{2πi·num/den}` for a rational angle, reduced mod 1 first.
pub fn root_of_unity(num: &BigInt, den: &BigInt, ctx: &PrecCtx) -> BigComplex {
    let r = num.mod_floor(den);
    let bits = ctx.bits();
    let x = BigComplex::from_real(BigReal::from_ratio(&r, den, bits));
    cx_exp2pii(&x, ctx)
}

/// `√D = i·√|D|` for `D < 0`.
pub fn sqrt_negative(d: &BigInt, ctx: &PrecCtx) -> Result<BigComplex> {
    if !d.is_negative() {
        return Err(Error::NonNegativeInput(d.to_string()));
    }
    let bits = ctx.bits();
    let root = BigReal::from_int(&-d, bits).sqrt();
    Ok(BigComplex { re: BigReal::zero(bits), im: root })
}

/// Result of recognising a complex value as an integer.
#[derive(Debug, Clone)]
pub struct Rounded {
    pub value: BigInt,
    /// `max(|Re x − n|, |Im x|)`.
    pub residual: BigReal,
}

/// Nearest integer to `x`, provided both `|x − n|` and `|Im x|` are below `tol`.
pub fn round_to_int(x: &BigComplex, tol: &BigReal) -> Result<Rounded> {
    let bits = x.bits();
    let tol = tol.with_bits(bits);
    let half = BigReal::from_ratio(&BigInt::one(), &BigInt::from(2), bits);
    if tol.is_negative() || tol.is_zero() || tol >= half {
        return Err(Error::InvalidArgument("tolerance must lie in (0, 1/2)".into()));
    }
    let n = x.re.round();
    let dr = (&x.re - &BigReal::from_int(&n, bits)).abs();
    let di = x.im.abs();
    let residual = if dr > di { dr } else { di };
    if residual >= tol {
        return Err(Error::ResidualTooLarge { residual: residual.to_sci_string(3) });
    }
    Ok(Rounded { value: n, residual })
}
