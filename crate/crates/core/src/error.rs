// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use thiserror::Error;

/// Which hypothesis of the congruence relation an input prime violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// p must be prime to `D_O * N`.
    CoprimeToDiscLevel,
    /// p must split in the order.
    Decomposed,
    /// p or -p must lie in G.
    ResidueInSubgroup,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::CoprimeToDiscLevel => write!(f, "condition (i): p divides D*N"),
            Condition::Decomposed => write!(f, "condition (ii): p is not decomposed in the order"),
            Condition::ResidueInSubgroup => write!(f, "condition (iii): neither p nor -p lies in G"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by a numerically vanishing value")]
    DivideByZero,
    #[error("value is not within tolerance of an integer (residual {residual})")]
    ResidualTooLarge { residual: String },
    #[error("expected a negative discriminant, got {0}")]
    NonNegativeInput(String),
    #[error("bad discriminant {0}: must be negative and congruent to 0 or 1 mod 4")]
    BadDiscriminant(String),
    #[error("form discriminant {form} does not match order discriminant {order}")]
    DiscMismatch { form: String, order: String },
    #[error("ideal is not prime to the level")]
    NotPrimeToN,
    #[error("form {0} is not in the level set")]
    NotInLevelSet(String),
    #[error("class lookup found {candidates} candidates instead of exactly one")]
    AmbiguousClass { candidates: usize },
    #[error("parity of b differs from the principal form")]
    ParityViolation,
    #[error("precision exhausted at {digits} digits")]
    PrecisionExhausted { digits: u32 },
    #[error("invariant does not generate the class field (conjugates {0} and {1} coincide)")]
    NotPrimitive(usize, usize),
    #[error("factorization budget exhausted")]
    FactorTimeout,
    #[error("leading coefficient vanishes modulo {0}")]
    LeadingCoeffVanishes(u64),
    #[error("prime {0} divides the discriminant")]
    PDividesD(u64),
    #[error("{0}")]
    ConditionViolated(Condition),
    #[error("prime {0} divides the excluded quantity")]
    ExcludedPrime(u64),
    #[error("incompatible level structures: {0}")]
    IncompatibleLevels(String),
    #[error("invalid level structure: {0}")]
    InvalidLevel(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
