//! Special functions backing the closed-form bounds: Hurwitz zeta, principal
//! Lambert W, digamma, and the upper incomplete gamma function.
//!
//! Every evaluation returns an [`EvalResult`] carrying a guaranteed absolute
//! error bound next to the value, so downstream bound calculators can keep
//! their reported constants honest upper bounds.

mod gamma;
mod lambert;
mod zeta;

pub use gamma::{digamma, digamma_real, ln_gamma, upper_incomplete_gamma};
pub use lambert::lambert_w0;
pub use zeta::hurwitz_zeta;

use std::fmt;

/// A numeric value together with a guaranteed bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    /// Guaranteed truncation/iteration error; finite and at most the
    /// requested tolerance on success.
    pub abs_error_bound: f64,
}

impl EvalResult {
    pub fn exact(value: f64) -> Self {
        EvalResult {
            value,
            abs_error_bound: 0.0,
        }
    }

    pub fn new(value: f64, abs_error_bound: f64) -> Self {
        EvalResult {
            value,
            abs_error_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecFnError {
    #[error("domain error in {function}: {message}")]
    Domain {
        function: &'static str,
        message: String,
    },
    #[error("{function} failed to converge after {iterations} iterations")]
    Convergence {
        function: &'static str,
        iterations: usize,
    },
    #[error("invalid tolerance {tol} passed to {function}")]
    InvalidTolerance { function: &'static str, tol: f64 },
}

impl SpecFnError {
    pub(crate) fn domain(function: &'static str, message: impl fmt::Display) -> Self {
        SpecFnError::Domain {
            function,
            message: message.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SpecFnError>;
