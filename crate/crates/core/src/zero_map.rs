//! The Lambert-W zero map and its solver.
//!
//! For the n-th zero the map is
//!
//! ```text
//! T(t) = 2 pi A / W0(A / e),   A = n - 11/8 - delta * S(t)
//! ```
//!
//! With `delta = 0` it collapses to the closed-form estimate
//! `2 pi (n - 11/8) / W0((n - 11/8) / e)`.
//!
//! Under the true argument function, S(t) is a sawtooth that jumps at every
//! zero, and the zero height is the point where `T(t) - t` changes sign
//! across that jump. Plain iteration only circles it on a period-2 orbit, so
//! [`solve_zero`] falls back to bisection on `T(t) - t` once successive steps
//! change sign, and to secant steps when they stop shrinking.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{arg_zeta_s, lambert_w0, zeta_critical_strip, ComplexValue, SeriesPrecision};

const TWO_PI: f64 = 2.0 * PI;

/// The constant 11/8 in the zero equation.
pub const ZERO_SHIFT: f64 = 11.0 / 8.0;

/// Source of the argument term S(t) inside the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SModel {
    /// `arg zeta(1/2 + sigma_offset + i t) / pi`, principal branch.
    TrueArgZeta,
    /// The smooth trend `-(t/2pi)(log(t/2pi) - 1)`, whose derivative is exactly
    /// `-(1/2pi) log(t/2pi)`.
    SmoothModel,
}

/// Solver knobs shared by the map, the solver and the Lyapunov estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapConfig {
    /// Feedback coefficient on S(t); the bifurcation parameter.
    pub delta: f64,
    /// Absolute tolerance on successive iterates.
    pub tol: f64,
    pub max_iter: usize,
    /// Real-part offset used when evaluating arg zeta.
    pub sigma_offset: f64,
    pub prec: SeriesPrecision,
    pub s_model: SModel,
}

impl Default for MapConfig {
    fn default() -> Self {
        Self {
            delta: 1.0,
            tol: 1e-9,
            max_iter: 64,
            sigma_offset: 1e-6,
            prec: SeriesPrecision::default(),
            s_model: SModel::TrueArgZeta,
        }
    }
}

impl MapConfig {
    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_model(mut self, s_model: SModel) -> Self {
        self.s_model = s_model;
        self
    }

    pub fn with_sigma_offset(mut self, sigma_offset: f64) -> Self {
        self.sigma_offset = sigma_offset;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.delta.is_finite() {
            return Err(Error::domain(format!("delta must be finite, got {}", self.delta)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::domain(format!("tol must be finite and > 0, got {}", self.tol)));
        }
        if self.max_iter < 1 {
            return Err(Error::domain("max_iter must be at least 1"));
        }
        if !(self.sigma_offset >= 0.0 && self.sigma_offset.is_finite()) {
            return Err(Error::domain(format!(
                "sigma_offset must be finite and >= 0, got {}",
                self.sigma_offset
            )));
        }
        Ok(())
    }
}

/// One solved zero with its full iteration history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroResult {
    pub n: u64,
    pub t: f64,
    pub iterations: usize,
    pub converged: bool,
    pub final_step: f64,
    /// Every iterate, starting with the closed-form estimate.
    pub trace: Vec<f64>,
    /// |zeta(1/2 + i t)| at the returned height.
    pub zeta_modulus: f64,
}

/// Smooth part of the zero count, `(t/2pi)(log(t/2pi) - 1)`.
pub fn smooth_count(t: f64) -> f64 {
    let x = t / TWO_PI;
    x * (x.ln() - 1.0)
}

/// Smooth surrogate for S(t) with integration constant zero.
pub fn smooth_s(t: f64) -> f64 {
    -smooth_count(t)
}

/// S(t) under the configured model. The smooth model carries no constant.
pub fn s_value(t: f64, cfg: &MapConfig) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("s_value needs finite t > 0, got {t}")));
    }
    match cfg.s_model {
        SModel::TrueArgZeta => arg_zeta_s(t, cfg.sigma_offset, cfg.prec),
        SModel::SmoothModel => Ok(smooth_s(t)),
    }
}

/// S(t) as the map for index n sees it.
///
/// The smooth model is shifted by `n - 11/8`, the mean of the true sawtooth
/// S(t) around the n-th zero. That anchors its fixed point at the closed-form
/// estimate for every delta, and at `delta = 1` turns the map into the
/// identity.
pub fn map_s_value(n: u64, t: f64, cfg: &MapConfig) -> Result<f64> {
    let s = s_value(t, cfg)?;
    Ok(match cfg.s_model {
        SModel::TrueArgZeta => s,
        SModel::SmoothModel => s + (n as f64 - ZERO_SHIFT),
    })
}

fn check_index(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("zero index n must be >= 1"));
    }
    Ok(())
}

/// t such that `smooth_count(t) = a`, on the branch t >= 2 pi.
///
/// `2 pi a / W0(a/e)` rewritten as `2 pi e^(1 + W0(a/e))`, which stays finite
/// at a = 0.
fn lambert_height(a: f64) -> Result<f64> {
    if a < -1.0 {
        return Err(Error::domain(format!(
            "Lambert argument {:.6} is below the branch point (A = {a:.6} < -1)",
            a / E
        )));
    }
    let w = lambert_w0(a / E)?;
    Ok(TWO_PI * (1.0 + w).exp())
}

/// Closed-form height estimate for the n-th zero.
pub fn initial_estimate(n: u64) -> Result<f64> {
    check_index(n)?;
    lambert_height(n as f64 - ZERO_SHIFT)
}

/// One application of the zero map.
pub fn map_step(n: u64, t_prev: f64, cfg: &MapConfig) -> Result<f64> {
    check_index(n)?;
    if !(t_prev > 0.0 && t_prev.is_finite()) {
        return Err(Error::domain(format!("map_step needs finite t > 0, got {t_prev}")));
    }
    let s = if cfg.delta == 0.0 {
        0.0
    } else {
        map_s_value(n, t_prev, cfg)?
    };
    lambert_height(n as f64 - ZERO_SHIFT - cfg.delta * s)
}

/// Map application used inside iteration loops: an undefined argument is
/// retried once with a larger real offset.
pub(crate) fn map_step_retry(n: u64, t: f64, cfg: &MapConfig) -> Result<f64> {
    match map_step(n, t, cfg) {
        Err(Error::ArgUndefined { .. }) => {
            let retry = cfg.with_sigma_offset((10.0 * cfg.sigma_offset).max(1e-6));
            map_step(n, t, &retry)
        }
        other => other,
    }
}

/// The raw orbit `t, T(t), T(T(t)), ...` with `steps` applications and no
/// stopping rule. Stops early, returning what it has, if the map fails.
pub fn iterate_map(n: u64, t0: f64, steps: usize, cfg: &MapConfig) -> (Vec<f64>, Option<Error>) {
    let mut orbit = Vec::with_capacity(steps + 1);
    orbit.push(t0);
    let mut t = t0;
    for _ in 0..steps {
        match map_step_retry(n, t, cfg) {
            Ok(next) => {
                orbit.push(next);
                t = next;
            }
            Err(e) => return (orbit, Some(e)),
        }
    }
    (orbit, None)
}

enum Phase {
    Plain,
    Secant { t_prev: f64, g_prev: f64 },
    Bracket { a: f64, ga: f64, b: f64, gb: f64 },
}

/// Finds the n-th zero height as a fixed point of the map, starting from the
/// closed-form estimate.
///
/// Iterates `t^k = T(t^{k-1})` while the steps shrink without changing sign.
/// A sign change in `T(t) - t` switches to bisection inside the bracket; steps
/// that stop shrinking switch to secant updates on `T(t) - t`. Every
/// accepted point is appended to the trace and counts as one iteration; the
/// loop stops once two consecutive trace points are within `tol`.
///
/// Under the true argument model the returned height is the bisection
/// midpoint with the smallest |zeta(1/2 + i t)|. A tighter `tol` only extends
/// the same midpoint sequence, so the residual never grows as `tol` shrinks.
pub fn solve_zero(n: u64, cfg: &MapConfig) -> Result<ZeroResult> {
    cfg.validate()?;
    let t0 = initial_estimate(n)?;
    let mut trace = vec![t0];

    let modulus_at = |t: f64| {
        zeta_critical_strip(ComplexValue::new(0.5, t), cfg.prec)
            .map(|z| z.norm())
            .unwrap_or(f64::NAN)
    };
    // bisection midpoint with the smallest |zeta|, true-argument model only
    let mut best: Option<(f64, f64)> = None;

    let finish = |trace: Vec<f64>, converged: bool, best: Option<(f64, f64)>| -> Result<ZeroResult> {
        let k = trace.len() - 1;
        let final_step = if k == 0 { f64::INFINITY } else { (trace[k] - trace[k - 1]).abs() };
        let last = (trace[k], modulus_at(trace[k]));
        let (t, zeta_modulus) = match best {
            Some(b) if converged && b.1 < last.1 => b,
            _ => last,
        };
        let result = ZeroResult {
            n,
            t,
            iterations: k,
            converged,
            final_step,
            trace,
            zeta_modulus,
        };
        if converged {
            Ok(result)
        } else {
            Err(Error::NonConvergence(Box::new(result)))
        }
    };

    // g(t) = T(t) - t; an argument that stays undefined aborts the solve
    let g = |t: f64| -> std::result::Result<f64, Error> { map_step_retry(n, t, cfg).map(|v| v - t) };

    let mut t = t0;
    let mut gt = match g(t) {
        Ok(v) => v,
        Err(Error::ArgUndefined { .. }) => return finish(trace, false, best),
        Err(e) => return Err(e),
    };
    let mut phase = Phase::Plain;

    while trace.len() <= cfg.max_iter {
        let next = match phase {
            Phase::Plain => t + gt,
            Phase::Secant { t_prev, g_prev } => {
                let denom = gt - g_prev;
                if denom == 0.0 {
                    return finish(trace, false, best);
                }
                t - gt * (t - t_prev) / denom
            }
            Phase::Bracket { a, b, .. } => 0.5 * (a + b),
        };
        if !(next > 0.0 && next.is_finite()) {
            return finish(trace, false, best);
        }
        let last = *trace.last().expect("trace starts non-empty");
        trace.push(next);
        if matches!(phase, Phase::Bracket { .. }) && cfg.s_model == SModel::TrueArgZeta {
            let m = modulus_at(next);
            if best.map_or(true, |b| m < b.1) {
                best = Some((next, m));
            }
        }
        if (next - last).abs() <= cfg.tol {
            return finish(trace, true, best);
        }

        let g_next = match g(next) {
            Ok(v) => v,
            Err(Error::ArgUndefined { .. }) => return finish(trace, false, best),
            Err(e) => return Err(e),
        };
        if g_next == 0.0 {
            // exact fixed point; one more map application lands on it
            trace.push(next);
            return finish(trace, true, best);
        }

        phase = match phase {
            Phase::Bracket { a, ga, b, gb } => {
                if (g_next > 0.0) == (ga > 0.0) {
                    Phase::Bracket { a: next, ga: g_next, b, gb }
                } else {
                    Phase::Bracket { a, ga, b: next, gb: g_next }
                }
            }
            _ if (g_next > 0.0) != (gt > 0.0) => Phase::Bracket {
                a: t,
                ga: gt,
                b: next,
                gb: g_next,
            },
            Phase::Plain if g_next.abs() < gt.abs() => Phase::Plain,
            _ => Phase::Secant { t_prev: t, g_prev: gt },
        };
        t = next;
        gt = g_next;
    }
    finish(trace, false, best)
}

/// Zero count up to height t: smooth part plus 7/8 plus S(t).
pub fn counting_function(t: f64, cfg: &MapConfig) -> Result<f64> {
    if !(t > TWO_PI && t.is_finite()) {
        return Err(Error::domain(format!("counting_function needs t > 2 pi, got {t}")));
    }
    Ok(smooth_count(t) + 7.0 / 8.0 + s_value(t, cfg)?)
}
