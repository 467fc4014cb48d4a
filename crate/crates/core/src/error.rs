use thiserror::Error;

use crate::zero_map::ZeroResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or iteration exhausted its budget before meeting its accuracy target.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// |zeta(s)| is below the guard, so its argument is numerically meaningless.
    #[error("argument of zeta undefined at t = {t} (sigma offset {sigma_offset}): |zeta| = {modulus:e}")]
    ArgUndefined {
        t: f64,
        sigma_offset: f64,
        modulus: f64,
    },

    /// The zero map did not settle within `max_iter` steps; the partial trace is attached.
    #[error("zero n = {} did not converge after {} iterations (last step {:e})", .0.n, .0.iterations, .0.final_step)]
    NonConvergence(Box<ZeroResult>),

    /// The derivative of the map vanishes identically (constant map), so the exponent is -inf.
    #[error("degenerate constant map: {0}")]
    DegenerateMap(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
