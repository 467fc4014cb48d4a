//! Scalar special-function kernels: zeta on the critical strip, the argument
//! function S(t), and the principal branch of the Lambert W function.
//!
//! Everything here is a pure function of its inputs.

mod lambert;
mod zeta;

pub use lambert::{lambert_w0, lambert_w0_derivative, BRANCH_POINT};
pub use zeta::{arg_zeta_s, zeta_critical_strip, ARG_GUARD, POLE_GUARD};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex number carrying zeta evaluations.
pub type ComplexValue = num_complex::Complex64;

/// Truncation control for the accelerated eta series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPrecision {
    target_abs_error: f64,
    max_terms: usize,
}

impl SeriesPrecision {
    pub const MIN_TERMS: usize = 16;

    pub fn new(target_abs_error: f64, max_terms: usize) -> Result<Self> {
        if !(target_abs_error > 0.0 && target_abs_error < 1.0) {
            return Err(Error::domain(format!(
                "target_abs_error must lie in (0, 1), got {target_abs_error}"
            )));
        }
        if max_terms < Self::MIN_TERMS {
            return Err(Error::domain(format!(
                "max_terms must be at least {}, got {max_terms}",
                Self::MIN_TERMS
            )));
        }
        Ok(Self {
            target_abs_error,
            max_terms,
        })
    }

    pub fn target_abs_error(&self) -> f64 {
        self.target_abs_error
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesPrecision {
    fn default() -> Self {
        Self {
            target_abs_error: 1e-13,
            max_terms: 4096,
        }
    }
}
