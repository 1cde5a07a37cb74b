// SPDX-License-Identifier: Apache-2.0

//! Form class groups of level N for imaginary quadratic orders.
//!
//! The crate enumerates the classes of primitive positive definite forms
//! modulo the congruence subgroup `Γ_G`, equips them with the group law
//! transported from ray-type ideal class groups, evaluates Siegel-function
//! class invariants at CM points together with all of their Galois
//! conjugates, and reconstructs the minimal polynomials over Q. On top of
//! that sit two arithmetic applications: a checker for the Kronecker-type
//! congruence relation and a prime-representation engine for
//! `p = x² + ny²` with congruence conditions on `x` and `y`.

pub mod arithmetic_apps;
pub mod classgroups;
pub mod error;
pub mod exact_algebra;
pub mod modfuncs;
pub mod numerics;
pub mod orders;
pub mod quadforms;

pub use arithmetic_apps::{
    brute_force_rep, criterion_rep, equivalence_harness, find_split, kronecker_symbol, verify_kronecker,
    CongruenceReport, HarnessReport, RepCriterion, SplitPrimeData,
};
pub use classgroups::{
    enumerate_classes, gamma_g_contains, gamma_g_equivalent, natural_surjection, signed_classes, ClassGroup,
    LevelStructure, SignedClassGroup,
};
pub use error::{Condition, Error, Result};
pub use exact_algebra::{factor_int, has_root_mod_p, is_prime, poly_disc, Factorization, IntPoly};
pub use modfuncs::{
    conjugate_values, invariant_value, minpoly_over_q, poly_eval_check, siegel, AlgebraicValue, InvariantSpec,
    SiegelIndex,
};
pub use numerics::{cx_exp2pii, round_to_int, sqrt_negative, BigComplex, BigReal, PrecCtx};
pub use orders::{in_pg, AlgInt, IdealLat, Order, PgTester};
pub use quadforms::{reduced_reps, Form, SignedForm, UniMat};
