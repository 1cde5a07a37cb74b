// SPDX-License-Identifier: Apache-2.0

//! Siegel functions, class invariants built from them, their Galois
//! conjugates over the class group, and minimal polynomials over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classgroups::{ClassGroup, LevelStructure};
use crate::error::{Error, Result};
use crate::exact_algebra::IntPoly;
use crate::numerics::{round_to_int, sqrt_negative, BigComplex, BigReal, PrecCtx};

/// Rounding tolerance for recognising polynomial coefficients as integers.
pub const COEFF_TOLERANCE_EXP: i64 = -10;

/// Index `v = (v1, v2) ∈ (Q/Z)² \ {0}` of a Siegel function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiegelIndex {
    v1: BigRational,
    v2: BigRational,
}

impl SiegelIndex {
    pub fn new(v1: BigRational, v2: BigRational) -> Result<Self> {
        let frac = |x: BigRational| &x - x.floor();
        let (v1, v2) = (frac(v1), frac(v2));
        if v1.is_zero() && v2.is_zero() {
            return Err(Error::InvalidArgument("Siegel index must not be integral".into()));
        }
        Ok(SiegelIndex { v1, v2 })
    }

    /// `[0, u/n]`.
    pub fn column(u: u64, n: u64) -> Result<Self> {
        Self::new(BigRational::zero(), BigRational::new(BigInt::from(u), BigInt::from(n)))
    }

    pub fn v1(&self) -> &BigRational {
        &self.v1
    }

    pub fn v2(&self) -> &BigRational {
        &self.v2
    }
}

fn rat_times(z: &BigComplex, r: &BigRational) -> BigComplex {
    z.mul_int(r.numer()).div_int(r.denom())
}

fn rat_real(r: &BigRational, bits: u64) -> BigComplex {
    BigComplex::from_real(BigReal::from_ratio(r.numer(), r.denom(), bits))
}

/// `e^{2πiz}` with a precomputed `2π`.
fn e2pi(z: &BigComplex, two_pi: &BigReal) -> BigComplex {
    z.mul_real(two_pi).mul_i().exp()
}

/// Number of product factors so that `|q|^M` drops below `10^−(digits+guard)`.
fn truncation(tau: &BigComplex, ctx: &PrecCtx) -> u64 {
    let im = tau.im.to_f64();
    let want = (ctx.digits() + ctx.guard()) as f64 * std::f64::consts::LN_10;
    (want / (2.0 * std::f64::consts::PI * im)).ceil() as u64 + 2
}

/// `g_v(τ) = −q^{B₂(v₁)/2} e^{πi v₂(v₁−1)} (1 − q_z) ∏ₙ (1 − qⁿq_z)(1 − qⁿ/q_z)` with `z = v₁τ + v₂`.
pub fn siegel(v: &SiegelIndex, tau: &BigComplex, ctx: &PrecCtx) -> BigComplex {
    assert!(!tau.im.is_negative() && !tau.im.is_zero(), "siegel needs a point in the upper half-plane");
    let bits = ctx.bits();
    let tau = tau.with_bits(bits);
    let two_pi = ctx.pi().shl(1);
    let (v1, v2) = (&v.v1, &v.v2);

    let b2_half = (v1 * v1 - v1 + BigRational::new(1.into(), 6.into())) / BigRational::from_integer(2.into());
    let twist = v2 * (v1 - BigRational::one()) / BigRational::from_integer(2.into());
    let z = &rat_times(&tau, v1) + &rat_real(v2, bits);

    let q = e2pi(&tau, &two_pi);
    let qz = e2pi(&z, &two_pi);
    let qz_inv = e2pi(&-&z, &two_pi);
    let one = ctx.one();

    let mut prod = &one - &qz;
    let mut qn = q.clone();
    for _ in 0..truncation(&tau, ctx) {
        let f = &(&one - &(&qn * &qz)) * &(&one - &(&qn * &qz_inv));
        prod = &prod * &f;
        qn = &qn * &q;
        if qn.is_zero() {
            break;
        }
    }
    let pre = &e2pi(&rat_times(&tau, &b2_half), &two_pi) * &e2pi(&rat_real(&twist, bits), &two_pi);
    -(&pre * &prod)
}

/// The invariant `h = ∏_{u∈U} g_{[0,u/N]}^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSpec {
    n: u64,
    e: u64,
    orbit: Vec<u64>,
}

impl InvariantSpec {
    /// `e = 12N/gcd(6, N)` and `U` the `±`-folded set `G`.
    pub fn for_level(level: &LevelStructure) -> Result<Self> {
        let n = level.n();
        if n < 2 {
            return Err(Error::InvalidLevel("invariants need N ≥ 2".into()));
        }
        Ok(InvariantSpec { n, e: 12 * n / n.gcd(&6), orbit: level.folded_residues() })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    pub fn orbit(&self) -> &[u64] {
        &self.orbit
    }

    /// `∏_{u∈U} g_{[0, s·u/N]}(τ)^e`; `s = 1` gives `h(τ)` itself.
    fn value_twisted(&self, s: u64, tau: &BigComplex, ctx: &PrecCtx) -> BigComplex {
        let mut acc = ctx.one();
        for &u in &self.orbit {
            let idx = SiegelIndex::column((u as u128 * s as u128 % self.n as u128) as u64, self.n).expect("unit index");
            acc = &acc * &siegel(&idx, tau, ctx).pow_u(self.e);
        }
        acc
    }
}

pub fn invariant_value(spec: &InvariantSpec, tau: &BigComplex, ctx: &PrecCtx) -> BigComplex {
    spec.value_twisted(1, tau, ctx)
}

fn check_supported(cg: &ClassGroup) -> Result<()> {
    let d = &cg.order().d;
    if d == &BigInt::from(-3) || d == &BigInt::from(-4) {
        return Err(Error::InvalidArgument("discriminants −3 and −4 are not supported".into()));
    }
    if cg.level().n() < 2 {
        return Err(Error::InvalidLevel("invariants need N ≥ 2".into()));
    }
    Ok(())
}

/// Conjugate of `h(τ_O)` at class `(a, b, c)`: `∏_u g_{[0, u·a'/N]}(−ω̄_Q)^e` with `a·a' ≡ 1 (mod N)`.
pub fn conjugate_value(cg: &ClassGroup, spec: &InvariantSpec, i: usize, ctx: &PrecCtx) -> Result<BigComplex> {
    let q = &cg.reps()[i];
    if (&q.b - &cg.order().b_o).is_odd() {
        return Err(Error::ParityViolation);
    }
    let nn = BigInt::from(spec.n);
    let e = q.a.mod_floor(&nn).extended_gcd(&nn);
    if !e.gcd.is_one() {
        return Err(Error::NotInLevelSet(q.to_string()));
    }
    let a_inv = e.x.mod_floor(&nn).to_string().parse::<u64>().expect("reduced");
    let tau = q.neg_conj_root(ctx);
    Ok(spec.value_twisted(a_inv, &tau, ctx))
}

/// One conjugate value per class, evaluated in parallel.
pub fn conjugate_values(cg: &ClassGroup, spec: &InvariantSpec, ctx: &PrecCtx) -> Result<Vec<BigComplex>> {
    check_supported(cg)?;
    (0..cg.len()).into_par_iter().map(|i| conjugate_value(cg, spec, i, ctx)).collect()
}

/// Generator `α = √d_K·h(τ_O)` with its conjugates and integer minimal polynomial.
#[derive(Debug, Clone)]
pub struct AlgebraicValue {
    pub degree: usize,
    /// `√d_K·v_i` for each class, followed by their complex conjugates.
    pub conjugates: Vec<BigComplex>,
    pub minpoly: IntPoly,
    pub residual: BigReal,
    pub digits_used: u32,
}

impl AlgebraicValue {
    pub fn generator(&self) -> &BigComplex {
        &self.conjugates[0]
    }

    /// `{"degree", "coefficients", "digits_used", "residual"}`, coefficients constant first.
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree.to_string(),
            "coefficients": self.minpoly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "digits_used": self.digits_used.to_string(),
            "residual": self.residual.to_sci_string(2),
        })
    }
}

/// Product of the real quadratics `X² − 2Re(r)X + |r|²`, constant term first.
fn expand_conjugate_pairs(roots: &[BigComplex], bits: u64) -> Vec<BigReal> {
    let mut poly = vec![BigReal::from_i64(1, bits)];
    for r in roots {
        let c0 = r.norm_sqr();
        let c1 = -&r.re.mul_int(&BigInt::from(2));
        let mut next = vec![BigReal::zero(bits); poly.len() + 2];
        for (k, p) in poly.iter().enumerate() {
            next[k] = &next[k] + &(p * &c0);
            next[k + 1] = &next[k + 1] + &(p * &c1);
            next[k + 2] = &next[k + 2] + p;
        }
        poly = next;
    }
    poly
}

/// `Σ log10 max(1, |r|)` over a root set and its conjugates.
fn coefficient_scale(values: &[BigComplex]) -> f64 {
    2.0 * values.iter().map(|v| v.log10_abs().max(0.0)).sum::<f64>()
}

/// Index pair of two conjugates closer than `10^−(digits/2)` relative, if any.
fn find_collision(conjugates: &[BigComplex], ctx: &PrecCtx) -> Option<(usize, usize)> {
    let thresh = -(ctx.digits() as f64) / 2.0;
    for i in 0..conjugates.len() {
        for j in i + 1..conjugates.len() {
            let scale = conjugates[i].log10_abs().max(0.0);
            if (&conjugates[i] - &conjugates[j]).log10_abs() - scale < thresh {
                return Some((i, j));
            }
        }
    }
    None
}

fn minpoly_at(cg: &ClassGroup, spec: &InvariantSpec, ctx: &PrecCtx) -> Result<AlgebraicValue> {
    let bits = ctx.bits();
    let sqrt_dk = sqrt_negative(&cg.order().dk, ctx)?;
    let values = conjugate_values(cg, spec, ctx)?;
    let roots: Vec<BigComplex> = values.iter().map(|v| &sqrt_dk * v).collect();
    let mut conjugates = roots.clone();
    conjugates.extend(roots.iter().map(|r| r.conj()));
    if let Some((i, j)) = find_collision(&conjugates, ctx) {
        return Err(Error::NotPrimitive(i, j));
    }
    let tol = BigReal::pow10(COEFF_TOLERANCE_EXP, bits);
    let mut coeffs = Vec::new();
    let mut residual = BigReal::zero(bits);
    for c in expand_conjugate_pairs(&roots, bits) {
        let r = round_to_int(&BigComplex::from_real(c), &tol)?;
        if r.residual > residual {
            residual = r.residual;
        }
        coeffs.push(r.value);
    }
    let minpoly = IntPoly::new(coeffs);
    let check = poly_eval_check(&minpoly, &conjugates[0], ctx);
    let limit = BigReal::pow10(40 - ctx.digits() as i64, bits);
    if check > limit {
        return Err(Error::ResidualTooLarge { residual: check.to_sci_string(3) });
    }
    Ok(AlgebraicValue { degree: conjugates.len(), conjugates, minpoly, residual, digits_used: ctx.digits() })
}

/// Minimal polynomial of `√d_K·h(τ_O)` over Q, retrying at doubled precision until the
/// coefficients round cleanly and conjugates separate, up to the context's cap.
pub fn minpoly_over_q(cg: &ClassGroup, spec: &InvariantSpec, ctx: &PrecCtx) -> Result<AlgebraicValue> {
    check_supported(cg)?;
    // a cheap pass sizes the coefficients so the first real attempt is usually enough
    let probe = ctx.with_digits(50);
    let sqrt_dk = sqrt_negative(&cg.order().dk, &probe)?;
    let probe_vals: Vec<BigComplex> = conjugate_values(cg, spec, &probe)?.iter().map(|v| &sqrt_dk * v).collect();
    let needed = (coefficient_scale(&probe_vals) + 30.0).ceil() as u32;
    let mut cur = ctx.with_digits(ctx.digits().max(needed.div_ceil(10) * 10));
    loop {
        match minpoly_at(cg, spec, &cur) {
            Ok(v) => return Ok(v),
            Err(err @ (Error::ResidualTooLarge { .. } | Error::NotPrimitive(..) | Error::DivideByZero)) => {
                match cur.doubled() {
                    Some(next) => cur = next,
                    None => {
                        return Err(match err {
                            Error::NotPrimitive(i, j) => Error::NotPrimitive(i, j),
                            _ => Error::PrecisionExhausted { digits: cur.digits() },
                        })
                    }
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// `|F(α)| / (max|coeff|·max(1, |α|)^deg)` by Horner.
pub fn poly_eval_check(f: &IntPoly, alpha: &BigComplex, ctx: &PrecCtx) -> BigReal {
    let bits = ctx.bits();
    if f.is_zero() {
        return BigReal::zero(bits);
    }
    let alpha = alpha.with_bits(bits);
    let mut acc = ctx.zero();
    for c in f.coeffs().iter().rev() {
        acc = &(&acc * &alpha) + &BigComplex::from_real(BigReal::from_int(c, bits));
    }
    let max_c = f.coeffs().iter().map(|c| c.abs()).max().expect("nonzero");
    let mut scale = BigReal::from_int(&max_c, bits);
    let a = alpha.abs();
    if a > BigReal::from_i64(1, bits) {
        for _ in 0..f.degree().unwrap_or(0) {
            scale = &scale * &a;
        }
    }
    acc.abs().checked_div(&scale).expect("nonzero scale")
}
