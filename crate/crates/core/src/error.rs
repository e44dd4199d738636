//! Error types shared across the engine.
//!
//! [`SeriesError`] covers exact-arithmetic and series-ring failures;
//! [`EvalError`] covers everything that can go wrong while evaluating
//! q-kernel sums, WP-Bailey pairs, and identity sides. Admissibility
//! problems are typed so the verifier can report them instead of panicking.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("division by zero")]
    DivisionByZero,

    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series is not invertible (no nonzero coefficient)")]
    NonInvertible,

    #[error("monomial materializes with negative exponent: {expr}")]
    NegativeExponent { expr: String },

    #[error("{value} has no exact {degree}-th root in the Gaussian rationals")]
    NotAPerfectRoot { value: String, degree: u32 },

    #[error("insufficient working precision: reliable through p^{have}, needed p^{needed}")]
    IncompletePrecision { needed: i64, have: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Series(#[from] SeriesError),

    #[error("pole in denominator: factor (1 - {atom}) vanishes")]
    PoleInDenominator { atom: String },

    #[error("sum does not truncate: {detail}")]
    NonTruncating { detail: String },

    #[error("parameter environment has no symbol '{name}'")]
    MissingSymbol { name: String },

    #[error("admissibility constraint violated: {detail}")]
    ConstraintViolation { detail: String },

    #[error("sampler exhausted its retry budget for '{target}' (seed {seed})")]
    SamplerExhausted { target: String, seed: u64 },
}

impl EvalError {
    /// True for errors that mean "this environment is inadmissible" rather
    /// than "the engine is broken".
    pub fn is_admissibility(&self) -> bool {
        match self {
            EvalError::PoleInDenominator { .. }
            | EvalError::NonTruncating { .. }
            | EvalError::ConstraintViolation { .. } => true,
            EvalError::Series(e) => matches!(
                e,
                SeriesError::DivisionByZero
                    | SeriesError::NegativeExponent { .. }
                    | SeriesError::NotAPerfectRoot { .. }
            ),
            _ => false,
        }
    }
}
