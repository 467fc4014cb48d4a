//! Nontrivial zeros of the Riemann zeta function on the critical line, found
//! as fixed points of a Lambert-W map, and the Lyapunov exponent of that map
//! as a function of its feedback parameter delta.
//!
//! The crate is split into three layers:
//!
//! * [`special`]: zeta on the critical strip, the argument function S(t) and
//!   the principal Lambert W branch.
//! * [`zero_map`]: the closed-form zero estimate, the fixed-point map, the
//!   safeguarded solver and the zero-counting function.
//! * [`lyapunov`]: the analytic map derivative, the Lyapunov exponent and
//!   delta sweeps for locating the bifurcation point.

pub mod error;
pub mod lyapunov;
pub mod special;
pub mod zero_map;

pub use error::{Error, Result};
pub use lyapunov::{
    delta_sweep, lyapunov_exponent, map_derivative_full, map_derivative_simplified,
    LyapunovMode, LyapunovResult, SweepRow,
};
pub use special::{
    arg_zeta_s, lambert_w0, lambert_w0_derivative, zeta_critical_strip, ComplexValue,
    SeriesPrecision,
};
pub use zero_map::{
    counting_function, initial_estimate, map_step, s_value, solve_zero, MapConfig, SModel,
    ZeroResult,
};
