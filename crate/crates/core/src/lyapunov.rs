//! Lyapunov exponent of the zero map and sweeps over delta.
//!
//! The derivative uses the smooth slope `S'(t) = -(1/2pi) log(t/2pi)` with
//! the O(t^-2) remainder dropped. At a fixed point `log(t/2pi) = 1 + W0(u)`,
//! so the derivative there is exactly delta, and an ensemble of converged
//! zeros gives `Lambda(delta) = ln |delta|`.

use std::f64::consts::{E, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{lambert_w0, lambert_w0_derivative};
use crate::zero_map::{initial_estimate, iterate_map, map_s_value, solve_zero, MapConfig, ZERO_SHIFT};

const TWO_PI: f64 = 2.0 * PI;

/// Derivatives smaller than this are skipped instead of contributing ln 0.
pub const MIN_ABS_DERIVATIVE: f64 = 1e-300;

/// Largest skipped fraction for which a result is still valid.
pub const MAX_SKIPPED_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LyapunovMode {
    /// Average over zero indices 1..=n_max, each at its converged fixed point.
    EnsembleFixedPoints,
    /// Average along one orbit of the map for index n_max.
    OrbitPerN,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovResult {
    pub delta: f64,
    pub mode: LyapunovMode,
    pub n_max: u64,
    /// Mean of `terms`; NaN when no term survived.
    pub value: f64,
    /// ln |T'| summands, in index order.
    pub terms: Vec<f64>,
    /// Zero index (ensemble) or orbit step (orbit) of each term.
    pub term_index: Vec<u64>,
    pub skipped: usize,
    pub valid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta: f64,
    pub lambda: f64,
    pub n_max: u64,
    pub valid: bool,
}

struct Parts {
    log_ratio: f64,
    u: f64,
    w: f64,
}

fn parts(n: u64, t: f64, cfg: &MapConfig) -> Result<Parts> {
    if n == 0 {
        return Err(Error::domain("zero index n must be >= 1"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("map derivative needs finite t > 0, got {t}")));
    }
    let s = if cfg.delta == 0.0 {
        0.0
    } else {
        map_s_value(n, t, cfg)?
    };
    let a = n as f64 - ZERO_SHIFT - cfg.delta * s;
    let u = a / E;
    if !(a > -1.0) {
        return Err(Error::domain(format!(
            "map derivative needs u > -1/e strictly, got u = {u}"
        )));
    }
    Ok(Parts {
        log_ratio: (t / TWO_PI).ln(),
        u,
        w: lambert_w0(u)?,
    })
}

/// dT/dt by the quotient rule on `f / g` with `f = 2 pi A`, `g = W0(u)`,
/// `u = A / e`:
///
/// ```text
/// f' = delta log(t/2pi)
/// u' = delta log(t/2pi) / (2 pi e)
/// g' = W0'(u) u'
/// T' = (f' g - g' f) / g^2
/// ```
pub fn map_derivative_full(n: u64, t: f64, cfg: &MapConfig) -> Result<f64> {
    let p = parts(n, t, cfg)?;
    if p.w == 0.0 {
        return Err(Error::domain("map derivative quotient is 0/0 at u = 0"));
    }
    let f = TWO_PI * E * p.u;
    let df = cfg.delta * p.log_ratio;
    let du = df / (TWO_PI * E);
    let dg = lambert_w0_derivative(p.u)? * du;
    Ok((df * p.w - dg * f) / (p.w * p.w))
}

/// `delta log(t/2pi) / (1 + W0(u))`, the quotient above after substituting
/// `e^(-W0(u)) = W0(u) / u`.
pub fn map_derivative_simplified(n: u64, t: f64, cfg: &MapConfig) -> Result<f64> {
    let p = parts(n, t, cfg)?;
    if p.u == 0.0 {
        return Err(Error::domain("simplified map derivative needs u != 0"));
    }
    Ok(cfg.delta * p.log_ratio / (1.0 + p.w))
}

fn derivative_retry(n: u64, t: f64, cfg: &MapConfig) -> Result<f64> {
    match map_derivative_full(n, t, cfg) {
        Err(Error::ArgUndefined { .. }) => {
            let retry = cfg.with_sigma_offset((10.0 * cfg.sigma_offset).max(1e-6));
            map_derivative_full(n, t, &retry)
        }
        other => other,
    }
}

fn log_term(d: Result<f64>) -> Option<f64> {
    match d {
        Ok(v) if v.abs() >= MIN_ABS_DERIVATIVE && v.is_finite() => Some(v.abs().ln()),
        _ => None,
    }
}

/// Lyapunov exponent of the zero map at `cfg.delta`.
///
/// Terms that cannot be evaluated (unconverged zeros, domain failures,
/// vanishing derivatives) are counted in `skipped`; the result is marked
/// invalid when more than 5% are skipped.
pub fn lyapunov_exponent(cfg: &MapConfig, mode: LyapunovMode, n_max: u64) -> Result<LyapunovResult> {
    cfg.validate()?;
    if n_max < 1 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    if cfg.delta == 0.0 {
        return Err(Error::DegenerateMap(
            "delta = 0 makes the map constant; its derivative is identically zero".into(),
        ));
    }

    let labelled: Vec<(u64, Option<f64>)> = match mode {
        LyapunovMode::EnsembleFixedPoints => (1..=n_max)
            .into_par_iter()
            .map(|n| {
                let term = solve_zero(n, cfg)
                    .ok()
                    .and_then(|r| log_term(derivative_retry(n, r.t, cfg)));
                (n, term)
            })
            .collect(),
        LyapunovMode::OrbitPerN => {
            let steps = cfg.max_iter;
            let t0 = initial_estimate(n_max)?;
            let (orbit, _) = iterate_map(n_max, t0, steps, cfg);
            (0..steps)
                .map(|k| {
                    let term = orbit
                        .get(k)
                        .and_then(|&t| log_term(derivative_retry(n_max, t, cfg)));
                    (k as u64, term)
                })
                .collect()
        }
    };

    let mut terms = Vec::with_capacity(labelled.len());
    let mut term_index = Vec::with_capacity(labelled.len());
    let mut skipped = 0;
    for (label, term) in labelled {
        match term {
            Some(v) => {
                terms.push(v);
                term_index.push(label);
            }
            None => skipped += 1,
        }
    }
    let value = if terms.is_empty() {
        f64::NAN
    } else {
        terms.iter().sum::<f64>() / terms.len() as f64
    };
    let total = skipped + terms.len();
    let valid = !terms.is_empty() && (skipped as f64) <= MAX_SKIPPED_FRACTION * total as f64;
    Ok(LyapunovResult {
        delta: cfg.delta,
        mode,
        n_max,
        value,
        terms,
        term_index,
        skipped,
        valid,
    })
}

/// The uniform grid of `steps` deltas from `delta_min` to `delta_max` inclusive.
pub fn delta_grid(delta_min: f64, delta_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(delta_min.is_finite() && delta_max.is_finite() && delta_min < delta_max) {
        return Err(Error::domain(format!(
            "sweep needs finite delta_min < delta_max, got [{delta_min}, {delta_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::domain(format!("sweep needs at least 2 steps, got {steps}")));
    }
    let h = (delta_max - delta_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                delta_max
            } else {
                delta_min + i as f64 * h
            }
        })
        .collect())
}

/// Lyapunov exponents over a uniform delta grid. Rows that fail are kept,
/// with `valid = false`.
pub fn delta_sweep(
    delta_min: f64,
    delta_max: f64,
    steps: usize,
    cfg_template: &MapConfig,
    mode: LyapunovMode,
    n_max: u64,
) -> Result<Vec<SweepRow>> {
    let grid = delta_grid(delta_min, delta_max, steps)?;
    Ok(grid
        .into_par_iter()
        .map(|delta| {
            let cfg = cfg_template.with_delta(delta);
            match lyapunov_exponent(&cfg, mode, n_max) {
                Ok(r) => SweepRow {
                    delta,
                    lambda: r.value,
                    n_max,
                    valid: r.valid,
                },
                Err(_) => SweepRow {
                    delta,
                    lambda: f64::NAN,
                    n_max,
                    valid: false,
                },
            }
        })
        .collect())
}

/// First pair of adjacent valid rows whose exponents differ in sign.
pub fn sign_change_bracket(rows: &[SweepRow]) -> Option<(f64, f64)> {
    rows.windows(2)
        .find(|w| {
            w[0].valid
                && w[1].valid
                && w[0].lambda.is_finite()
                && w[1].lambda.is_finite()
                && (w[0].lambda < 0.0) != (w[1].lambda < 0.0)
        })
        .map(|w| (w[0].delta, w[1].delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zero_map::{map_step, SModel};
    use approx::assert_abs_diff_eq;

    fn smooth(delta: f64) -> MapConfig {
        MapConfig::default()
            .with_model(SModel::SmoothModel)
            .with_delta(delta)
    }

    #[test]
    fn zero_delta_gives_zero_derivative() {
        let cfg = smooth(0.0);
        assert_eq!(map_derivative_full(10, 50.0, &cfg).unwrap(), 0.0);
        assert_eq!(map_derivative_simplified(10, 50.0, &cfg).unwrap(), 0.0);
        let cfg = MapConfig::default().with_delta(0.0);
        assert_eq!(map_derivative_full(3, 25.0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn finite_difference_at_reference_point() {
        let cfg = smooth(0.7);
        let h = 1e-4;
        let fd = (map_step(10, 50.0 + h, &cfg).unwrap() - map_step(10, 50.0 - h, &cfg).unwrap())
            / (2.0 * h);
        let d = map_derivative_full(10, 50.0, &cfg).unwrap();
        assert!(((d - fd) / fd).abs() < 1e-5, "analytic {d} fd {fd}");
    }

    #[test]
    fn derivative_equals_delta_at_fixed_point() {
        for &delta in &[0.25, 0.5, 1.0, 1.5] {
            let cfg = smooth(delta);
            let t = solve_zero(12, &cfg).unwrap().t;
            assert!((map_step(12, t, &cfg).unwrap() - t).abs() <= 1e-10);
            let full = map_derivative_full(12, t, &cfg).unwrap();
            let simple = map_derivative_simplified(12, t, &cfg).unwrap();
            assert!(((full - delta) / delta).abs() < 1e-8, "full {full}");
            assert!(((simple - delta) / delta).abs() < 1e-8, "simplified {simple}");
        }
    }

    #[test]
    fn domain_guards() {
        // smooth model at delta = 1: A = N0(t), which vanishes at t = 2 pi e
        let cfg = smooth(1.0);
        let t = TWO_PI * E;
        assert!(map_derivative_full(1, t, &cfg).is_err());
        assert!(map_derivative_simplified(1, t, &cfg).is_err());
        assert!(map_derivative_full(0, 20.0, &cfg).is_err());
        assert!(map_derivative_full(5, -1.0, &cfg).is_err());
    }

    #[test]
    fn ensemble_smooth_matches_log_delta() {
        for &delta in &[0.5, 1.0] {
            let r = lyapunov_exponent(&smooth(delta), LyapunovMode::EnsembleFixedPoints, 100).unwrap();
            assert!(r.valid);
            assert_eq!(r.skipped, 0);
            assert_eq!(r.terms.len(), 100);
            assert_abs_diff_eq!(r.value, delta.ln(), epsilon = 1e-6);
        }
    }

    #[test]
    fn zero_delta_is_degenerate() {
        let r = lyapunov_exponent(&smooth(0.0), LyapunovMode::EnsembleFixedPoints, 10);
        assert!(matches!(r, Err(Error::DegenerateMap(_))));
    }

    #[test]
    fn orbit_mode_smooth() {
        let cfg = smooth(0.5).with_max_iter(20);
        let r = lyapunov_exponent(&cfg, LyapunovMode::OrbitPerN, 30).unwrap();
        assert_eq!(r.terms.len(), 20);
        assert_eq!(r.term_index, (0..20).collect::<Vec<u64>>());
        assert_abs_diff_eq!(r.value, 0.5f64.ln(), epsilon = 1e-6);
    }

    #[test]
    fn mean_consistency() {
        let r = lyapunov_exponent(&MapConfig::default(), LyapunovMode::EnsembleFixedPoints, 8).unwrap();
        let mean = r.terms.iter().sum::<f64>() / r.terms.len() as f64;
        assert!((r.value - mean).abs() <= 1e-12 * mean.abs().max(1e-300));
    }

    #[test]
    fn grid_shape() {
        let g = delta_grid(0.25, 1.75, 7).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 0.25);
        assert_eq!(g[6], 1.75);
        for w in g.windows(2) {
            assert!((w[1] - w[0] - 0.25).abs() < 1e-12);
        }
        assert_eq!(delta_grid(0.0, 1.0, 2).unwrap(), vec![0.0, 1.0]);
        assert!(delta_grid(1.0, 1.0, 5).is_err());
        assert!(delta_grid(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn sweep_keeps_failed_rows() {
        // the delta = 0 row is degenerate but the sweep still reports it
        let rows = delta_sweep(0.0, 1.0, 3, &smooth(1.0), LyapunovMode::EnsembleFixedPoints, 5).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(!rows[0].valid);
        assert!(rows[0].lambda.is_nan());
        assert!(rows[1].valid && rows[2].valid);
    }

    #[test]
    fn bracket_detection() {
        let row = |delta, lambda| SweepRow { delta, lambda, n_max: 1, valid: true };
        let rows = [row(0.5, -0.7), row(0.75, -0.3), row(1.25, 0.2)];
        assert_eq!(sign_change_bracket(&rows), Some((0.75, 1.25)));
        assert_eq!(sign_change_bracket(&rows[..2]), None);
    }
}
