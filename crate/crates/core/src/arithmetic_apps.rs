// SPDX-License-Identifier: Apache-2.0

//! Split primes, the Kronecker-type congruence checker and the engine for
//! primes of the form `x² + ny²` with congruence conditions.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classgroups::{enumerate_classes, ClassGroup, LevelStructure};
use crate::error::{Condition, Error, Result};
use crate::exact_algebra::{has_root_mod_p, is_prime_u64, poly_disc, IntPoly};
use crate::modfuncs::{conjugate_values, minpoly_over_q, AlgebraicValue, InvariantSpec};
use crate::numerics::{round_to_int, sqrt_negative, BigComplex, BigReal, PrecCtx};
use crate::orders::Order;
use crate::quadforms::Form;

/// Data attached to a prime `p` that splits in the order of discriminant `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPrimeData {
    pub p: u64,
    /// Least `s ≥ 0` with `s² ≡ D (mod 4p)`.
    pub s: BigInt,
    /// `(p, s, (s² − D)/4p)`.
    pub split_form: Form,
    pub d: BigInt,
}

impl SplitPrimeData {
    /// `ω = (s + √D)/2`.
    pub fn omega(&self, ctx: &PrecCtx) -> Result<BigComplex> {
        let bits = ctx.bits();
        let sq = sqrt_negative(&self.d, ctx)?;
        Ok(BigComplex::new(BigReal::from_ratio(&self.s, &BigInt::from(2), bits), sq.im.div_int(&BigInt::from(2))))
    }
}

/// Kronecker symbol `(a/n)`.
pub fn kronecker_symbol(a: &BigInt, n: &BigInt) -> i32 {
    assert!(!n.is_zero(), "kronecker symbol needs n ≠ 0");
    let mut a = a.clone();
    let mut n = n.clone();
    let mut sign = 1;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            sign = -sign;
        }
    }
    let eight = BigInt::from(8);
    while n.is_even() {
        if a.is_even() {
            return 0;
        }
        let r = a.mod_floor(&eight);
        if r == BigInt::from(3) || r == BigInt::from(5) {
            sign = -sign;
        }
        n >>= 1;
    }
    // Jacobi symbol for odd n
    a = a.mod_floor(&n);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == BigInt::from(3) || r == BigInt::from(5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        let four = BigInt::from(4);
        if a.mod_floor(&four) == BigInt::from(3) && n.mod_floor(&four) == BigInt::from(3) {
            sign = -sign;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        sign
    } else {
        0
    }
}

/// Square root of `a` modulo an odd prime `p` (Tonelli–Shanks), if it exists.
fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    let pw = |b: u64, e: u64| BigInt::from(b).modpow(&BigInt::from(e), &BigInt::from(p)).to_u64().expect("reduced");
    if pw(a, (p - 1) / 2) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pw(z, (p - 1) / 2) == p - 1).expect("non-residue exists");
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let (mut m, mut c, mut t, mut r) = (s, pw(z, q), pw(a, q), pw(a, q.div_ceil(2)));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul(tt, tt);
            i += 1;
        }
        let mut b = c;
        for _ in 0..m - i - 1 {
            b = mul(b, b);
        }
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}

/// The least `s ≥ 0` with `s² ≡ D (mod 4p)`, or `None` when `p` does not split.
pub fn find_split(d: &BigInt, p: u64) -> Result<Option<SplitPrimeData>> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let pb = BigInt::from(p);
    if d.is_multiple_of(&pb) {
        return Err(Error::PDividesD(p));
    }
    let four_p = &pb * 4;
    let works = |s: u64| (BigInt::from(s) * s - d).is_multiple_of(&four_p);
    let s = if p == 2 {
        (0..4).find(|&s| works(s))
    } else {
        let dm = d.mod_floor(&pb).to_u64().expect("reduced");
        sqrt_mod_prime(dm, p).and_then(|r| {
            let mut cands = [r, r + p, p - r, 2 * p - r];
            cands.sort_unstable();
            cands.into_iter().find(|&s| s < 2 * p && works(s))
        })
    };
    Ok(s.map(|s| {
        let s = BigInt::from(s);
        let split_form = Form::from_disc(p, s.clone(), d).expect("4p divides s² − D");
        SplitPrimeData { p, s, split_form, d: d.clone() }
    }))
}

/// Outcome of checking `(f(ω)^p − f(ω/p))(f(ω) − f(ω/p)^p) ≡ 0 (mod p)`.
#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub d: BigInt,
    pub level: LevelStructure,
    pub p: u64,
    pub s: BigInt,
    /// `f(ω)`.
    pub a: BigComplex,
    /// `f(ω/p)`.
    pub b: BigComplex,
    /// Characteristic polynomial over Q of the congruence element.
    pub charpoly: IntPoly,
    pub verdict: bool,
    pub residual: BigReal,
    pub digits_used: u32,
}

impl CongruenceReport {
    pub fn to_json(&self) -> Value {
        let cx = |z: &BigComplex| json!([z.re.to_sci_string(30), z.im.to_sci_string(30)]);
        json!({
            "disc": self.d.to_string(),
            "N": self.level.n().to_string(),
            "G": self.level.g().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "p": self.p.to_string(),
            "s": self.s.to_string(),
            "A": cx(&self.a),
            "B": cx(&self.b),
            "charpoly": self.charpoly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "verdict": self.verdict,
            "residual": self.residual.to_sci_string(2),
            "digits_used": self.digits_used.to_string(),
        })
    }
}

/// Checks hypotheses (i)–(iii) and returns the split data for `p`.
pub fn check_conditions(d: &BigInt, level: &LevelStructure, p: u64) -> Result<SplitPrimeData> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let dn = d * BigInt::from(level.n());
    if dn.is_multiple_of(&BigInt::from(p)) {
        return Err(Error::ConditionViolated(Condition::CoprimeToDiscLevel));
    }
    let split = find_split(d, p)?.ok_or(Error::ConditionViolated(Condition::Decomposed))?;
    let n = level.n();
    if !level.contains(p % n) && !level.contains((n - p % n) % n) {
        return Err(Error::ConditionViolated(Condition::ResidueInSubgroup));
    }
    Ok(split)
}

/// Pairs `(A_i, B_i)` over `C^±`: `A_i` is the value at class `i`, `B_i` the value at
/// `[𝔭]·i`, and the negative half carries complex conjugates.
fn conjugate_pairs(
    cg: &ClassGroup,
    values: &[BigComplex],
    split: &SplitPrimeData,
) -> Result<Vec<(BigComplex, BigComplex)>> {
    let kp = cg.class_of(&split.split_form)?;
    let mut pairs = Vec::with_capacity(2 * values.len());
    for (i, a) in values.iter().enumerate() {
        pairs.push((a.clone(), values[cg.compose(kp, i)?].clone()));
    }
    let conj: Vec<_> = pairs.iter().map(|(a, b)| (a.conj(), b.conj())).collect();
    pairs.extend(conj);
    Ok(pairs)
}

/// Product of `X − e_i` as real coefficients, constant term first.
fn charpoly_from_roots(roots: &[BigComplex], bits: u64) -> Vec<BigComplex> {
    let mut poly = vec![BigComplex::from_i64(1, 0, bits)];
    for r in roots {
        let mut next = vec![BigComplex::from_i64(0, 0, bits); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k] = &next[k] - &(c * r);
            next[k + 1] = &next[k + 1] + c;
        }
        poly = next;
    }
    poly
}

fn congruence_elements(pairs: &[(BigComplex, BigComplex)], p: u64) -> Vec<BigComplex> {
    pairs.iter().map(|(a, b)| &(&a.pow_u(p) - b) * &(a - &b.pow_u(p))).collect()
}

/// Rough `Σ log10 max(1, |e_i|)` from low-precision values.
fn element_scale(pairs: &[(BigComplex, BigComplex)], p: u64) -> f64 {
    let pf = p as f64;
    pairs
        .iter()
        .map(|(a, b)| {
            let (la, lb) = (a.log10_abs(), b.log10_abs());
            let left = (pf * la).max(lb) + 0.31;
            let right = la.max(pf * lb) + 0.31;
            left.max(0.0) + right.max(0.0)
        })
        .sum()
}

/// `p^k` divides the coefficient of `X^{deg−k}` for every `k ≥ 1`.
pub fn charpoly_divisible(charpoly: &IntPoly, p: u64) -> bool {
    let deg = charpoly.degree().unwrap_or(0);
    let pb = BigInt::from(p);
    let mut pk = BigInt::one();
    for k in 1..=deg {
        pk *= &pb;
        if !charpoly.coeff(deg - k).is_multiple_of(&pk) {
            return false;
        }
    }
    true
}

/// Verifies the congruence relation for one admissible prime.
pub fn verify_kronecker(order: &Order, level: &LevelStructure, p: u64, ctx: &PrecCtx) -> Result<CongruenceReport> {
    let split = check_conditions(&order.d, level, p)?;
    let cg = enumerate_classes(order, level)?.with_table()?;
    let spec = InvariantSpec::for_level(level)?;
    verify_kronecker_with(&cg, &spec, &split, ctx)
}

/// As [`verify_kronecker`] with a prebuilt class group and invariant.
pub fn verify_kronecker_with(
    cg: &ClassGroup,
    spec: &InvariantSpec,
    split: &SplitPrimeData,
    ctx: &PrecCtx,
) -> Result<CongruenceReport> {
    let p = split.p;
    let probe = ctx.with_digits(50);
    let probe_pairs = conjugate_pairs(cg, &conjugate_values(cg, spec, &probe)?, split)?;
    let needed = (element_scale(&probe_pairs, p) + 30.0).ceil() as u32;
    if needed > ctx.max_digits() {
        return Err(Error::PrecisionExhausted { digits: needed });
    }
    let mut cur = ctx.with_digits(ctx.digits().max(needed.div_ceil(10) * 10));
    loop {
        let bits = cur.bits();
        let pairs = conjugate_pairs(cg, &conjugate_values(cg, spec, &cur)?, split)?;
        let elems = congruence_elements(&pairs, p);
        let tol = BigReal::pow10(-10, bits);
        let mut residual = BigReal::zero(bits);
        let mut coeffs = Vec::new();
        let mut ok = true;
        for c in charpoly_from_roots(&elems, bits) {
            match round_to_int(&c, &tol) {
                Ok(r) => {
                    if r.residual > residual {
                        residual = r.residual;
                    }
                    coeffs.push(r.value);
                }
                Err(Error::ResidualTooLarge { .. }) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if ok {
            let charpoly = IntPoly::new(coeffs);
            let verdict = charpoly_divisible(&charpoly, p);
            let (a, b) = pairs[0].clone();
            return Ok(CongruenceReport {
                d: cg.order().d.clone(),
                level: cg.level().clone(),
                p,
                s: split.s.clone(),
                a,
                b,
                charpoly,
                verdict,
                residual,
                digits_used: cur.digits(),
            });
        }
        cur = cur.doubled().ok_or(Error::PrecisionExhausted { digits: cur.digits() })?;
    }
}

/// `p = x² + ny²` with `±x mod N ∈ G` and `N | y`, scanning `x = 0, 1, …`.
pub fn brute_force_rep(p: u64, n: u64, level: &LevelStructure) -> Option<(u64, u64)> {
    let m = level.n();
    let mut x: u64 = 0;
    while x.checked_mul(x).is_some_and(|x2| x2 <= p) {
        let xm = x % m;
        if level.contains(xm) || level.contains((m - xm) % m) {
            let rest = p - x * x;
            if rest.is_multiple_of(n) {
                let y2 = rest / n;
                let y = y2.sqrt();
                if y * y == y2 && y.is_multiple_of(m) {
                    return Some((x, y));
                }
            }
        }
        x += 1;
    }
    None
}

/// The root test with exclusions precomputed for a fixed polynomial.
#[derive(Debug, Clone)]
pub struct RepCriterion {
    f: IntPoly,
    n: u64,
    excluded: BigInt,
}

impl RepCriterion {
    /// Excluded primes divide `2·n·N·disc(F)·lc(F)`.
    pub fn new(f: IntPoly, n: u64, level_n: u64) -> Result<Self> {
        let disc = poly_disc(&f)?;
        let lc = f.leading().cloned().unwrap_or_default();
        let excluded = BigInt::from(2u64) * n * level_n * disc * lc;
        Ok(RepCriterion { f, n, excluded })
    }

    pub fn is_excluded(&self, p: u64) -> bool {
        self.excluded.is_multiple_of(&BigInt::from(p))
    }

    /// `(−n/p) = 1` and `F` has a root modulo `p`.
    pub fn check(&self, p: u64) -> Result<bool> {
        if self.is_excluded(p) {
            return Err(Error::ExcludedPrime(p));
        }
        if kronecker_symbol(&-BigInt::from(self.n), &BigInt::from(p)) != 1 {
            return Ok(false);
        }
        has_root_mod_p(&self.f, p)
    }
}

/// One-shot form of [`RepCriterion::check`].
pub fn criterion_rep(p: u64, f: &IntPoly, n: u64, level_n: u64) -> Result<bool> {
    RepCriterion::new(f.clone(), n, level_n)?.check(p)
}

/// Agreement of the brute-force and polynomial criteria over primes below a bound.
#[derive(Debug, Clone)]
pub struct HarnessReport {
    pub n: u64,
    pub level: LevelStructure,
    pub bound: u64,
    pub agree: usize,
    pub excluded: Vec<u64>,
    /// `(p, brute force says represented, criterion says represented)`.
    pub disagreements: Vec<(u64, bool, bool)>,
    /// Every represented prime below the bound, excluded ones included, with witnesses `(p, x, y)`.
    pub represented: Vec<(u64, u64, u64)>,
    pub minpoly: AlgebraicValue,
}

impl HarnessReport {
    pub fn to_json(&self) -> Value {
        let s = |x: u64| x.to_string();
        json!({
            "n": s(self.n),
            "N": s(self.level.n()),
            "G": self.level.g().iter().map(|&t| s(t)).collect::<Vec<_>>(),
            "bound": s(self.bound),
            "agree": self.agree.to_string(),
            "excluded": self.excluded.iter().map(|&p| s(p)).collect::<Vec<_>>(),
            "disagreements": self
                .disagreements
                .iter()
                .map(|&(p, b, c)| json!({"p": s(p), "brute_force": b, "criterion": c}))
                .collect::<Vec<_>>(),
            "represented": self.represented.iter().map(|&(p, x, y)| json!([s(p), s(x), s(y)])).collect::<Vec<_>>(),
        })
    }
}

fn primes_below(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

/// Runs both criteria over all primes `p < bound` with `F` the synthesized
/// minimal polynomial for discriminant `−4n`.
pub fn equivalence_harness(n: u64, level: &LevelStructure, bound: u64, ctx: &PrecCtx) -> Result<HarnessReport> {
    let d = -BigInt::from(4u64) * n;
    let order = Order::from_disc(&d)?;
    let cg = enumerate_classes(&order, level)?;
    let spec = InvariantSpec::for_level(level)?;
    let minpoly = minpoly_over_q(&cg, &spec, ctx)?;
    equivalence_harness_with(n, level, bound, minpoly)
}

/// As [`equivalence_harness`] with an already synthesized polynomial.
pub fn equivalence_harness_with(
    n: u64,
    level: &LevelStructure,
    bound: u64,
    minpoly: AlgebraicValue,
) -> Result<HarnessReport> {
    let crit = RepCriterion::new(minpoly.minpoly.clone(), n, level.n())?;
    let results = primes_below(bound)
        .into_par_iter()
        .map(|p| {
            let brute = brute_force_rep(p, n, level);
            if crit.is_excluded(p) {
                return Ok((p, brute, None));
            }
            Ok((p, brute, Some(crit.check(p)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = HarnessReport {
        n,
        level: level.clone(),
        bound,
        agree: 0,
        excluded: Vec::new(),
        disagreements: Vec::new(),
        represented: Vec::new(),
        minpoly,
    };
    for (p, brute, crit) in results {
        match crit {
            None => report.excluded.push(p),
            Some(crit) if brute.is_some() == crit => report.agree += 1,
            Some(crit) => report.disagreements.push((p, brute.is_some(), crit)),
        }
        if let Some((x, y)) = brute {
            report.represented.push((p, x, y));
        }
    }
    Ok(report)
}
