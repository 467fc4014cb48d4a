//! Command implementations, independent of argument parsing.

use rayon::prelude::*;
use thiserror::Error;

use zml_core::lyapunov::{sign_change_bracket, LyapunovMode};
use zml_core::{
    delta_sweep, initial_estimate, lyapunov_exponent, solve_zero, Error as CoreError, MapConfig,
    SModel,
};

use crate::output::{Cell, OutputRecord};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

/// A finished command: its table and whether every row succeeded.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub record: OutputRecord,
    pub all_ok: bool,
    /// Extra human-readable lines for stderr.
    pub notes: Vec<String>,
}

pub fn model_name(m: SModel) -> &'static str {
    match m {
        SModel::TrueArgZeta => "true",
        SModel::SmoothModel => "smooth",
    }
}

pub fn mode_name(m: LyapunovMode) -> &'static str {
    match m {
        LyapunovMode::EnsembleFixedPoints => "ensemble",
        LyapunovMode::OrbitPerN => "orbit",
    }
}

fn check_range(n_start: u64, n_end: u64) -> Result<(), CliError> {
    if n_start < 1 || n_start > n_end {
        return Err(CliError::Usage(format!(
            "need 1 <= n_start <= n_end, got {n_start}..{n_end}"
        )));
    }
    Ok(())
}

fn check_config(cfg: &MapConfig) -> Result<(), CliError> {
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))
}

fn config_params(record: &mut OutputRecord, cfg: &MapConfig) {
    record
        .param("delta", cfg.delta)
        .param("tol", cfg.tol)
        .param("max_iter", cfg.max_iter)
        .param("sigma_offset", cfg.sigma_offset)
        .param("s_model", model_name(cfg.s_model));
}

pub fn cmd_estimate(n_start: u64, n_end: u64) -> Result<Outcome, CliError> {
    check_range(n_start, n_end)?;
    let mut record = OutputRecord::new("estimate", &["n", "t_estimate"]);
    record.param("n_start", n_start).param("n_end", n_end);
    for n in n_start..=n_end {
        let t = initial_estimate(n).map_err(|e| CliError::Numerical(e.to_string()))?;
        record.push(vec![n.into(), t.into()]);
    }
    Ok(Outcome {
        record,
        all_ok: true,
        notes: Vec::new(),
    })
}

pub fn cmd_zeros(n_start: u64, n_end: u64, cfg: &MapConfig) -> Result<Outcome, CliError> {
    check_range(n_start, n_end)?;
    check_config(cfg)?;
    let mut record = OutputRecord::new(
        "zeros",
        &["n", "t", "iterations", "converged", "final_step", "zeta_modulus"],
    );
    record.param("n_start", n_start).param("n_end", n_end);
    config_params(&mut record, cfg);

    let results: Vec<_> = (n_start..=n_end)
        .into_par_iter()
        .map(|n| (n, solve_zero(n, cfg)))
        .collect();

    let mut all_ok = true;
    let mut notes = Vec::new();
    for (n, result) in results {
        let row = match result {
            Ok(r) => vec![
                n.into(),
                r.t.into(),
                r.iterations.into(),
                true.into(),
                r.final_step.into(),
                r.zeta_modulus.into(),
            ],
            Err(CoreError::NonConvergence(r)) => {
                all_ok = false;
                notes.push(format!("n = {n}: no convergence after {} iterations", r.iterations));
                vec![
                    n.into(),
                    r.t.into(),
                    r.iterations.into(),
                    false.into(),
                    r.final_step.into(),
                    r.zeta_modulus.into(),
                ]
            }
            Err(e) => {
                all_ok = false;
                notes.push(format!("n = {n}: {e}"));
                vec![
                    n.into(),
                    f64::NAN.into(),
                    0usize.into(),
                    false.into(),
                    f64::NAN.into(),
                    f64::NAN.into(),
                ]
            }
        };
        record.push(row);
    }
    Ok(Outcome {
        record,
        all_ok,
        notes,
    })
}

pub fn cmd_lyapunov(
    cfg: &MapConfig,
    mode: LyapunovMode,
    n_max: u64,
    emit_terms: bool,
) -> Result<Outcome, CliError> {
    check_config(cfg)?;
    if n_max < 1 {
        return Err(CliError::Usage("n_max must be at least 1".into()));
    }
    let result =
        lyapunov_exponent(cfg, mode, n_max).map_err(|e| CliError::Numerical(e.to_string()))?;

    let mut record = OutputRecord::new(
        "lyapunov",
        &["kind", "index", "delta", "lambda", "n_max", "mode", "skipped", "valid"],
    );
    record.param("n_max", n_max).param("mode", mode_name(mode));
    config_params(&mut record, cfg);
    record.push(vec![
        "summary".into(),
        0u64.into(),
        result.delta.into(),
        result.value.into(),
        n_max.into(),
        mode_name(mode).into(),
        result.skipped.into(),
        result.valid.into(),
    ]);
    if emit_terms {
        for (idx, term) in result.term_index.iter().zip(&result.terms) {
            record.push(vec![
                "term".into(),
                (*idx).into(),
                result.delta.into(),
                (*term).into(),
                n_max.into(),
                mode_name(mode).into(),
                0usize.into(),
                true.into(),
            ]);
        }
    }
    let notes = if result.valid {
        Vec::new()
    } else {
        vec![format!(
            "invalid result: {} of {} terms skipped",
            result.skipped,
            result.skipped + result.terms.len()
        )]
    };
    Ok(Outcome {
        record,
        all_ok: result.valid,
        notes,
    })
}

pub fn cmd_sweep(
    delta_min: f64,
    delta_max: f64,
    steps: usize,
    cfg: &MapConfig,
    mode: LyapunovMode,
    n_max: u64,
) -> Result<Outcome, CliError> {
    check_config(cfg)?;
    if n_max < 1 {
        return Err(CliError::Usage("n_max must be at least 1".into()));
    }
    let rows = delta_sweep(delta_min, delta_max, steps, cfg, mode, n_max)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut record = OutputRecord::new("sweep", &["delta", "lambda", "n_max", "valid"]);
    record
        .param("delta_min", delta_min)
        .param("delta_max", delta_max)
        .param("steps", steps)
        .param("n_max", n_max)
        .param("mode", mode_name(mode))
        .param("tol", cfg.tol)
        .param("max_iter", cfg.max_iter)
        .param("sigma_offset", cfg.sigma_offset)
        .param("s_model", model_name(cfg.s_model));
    let mut all_ok = true;
    for r in &rows {
        all_ok &= r.valid;
        record.push(vec![r.delta.into(), r.lambda.into(), r.n_max.into(), r.valid.into()]);
    }
    let note = match sign_change_bracket(&rows) {
        Some((lo, hi)) => {
            record.param("bracket_lo", lo).param("bracket_hi", hi);
            format!("lambda changes sign between delta = {lo} and delta = {hi}")
        }
        None => "lambda does not change sign over the sweep".to_string(),
    };
    Ok(Outcome {
        record,
        all_ok,
        notes: vec![note],
    })
}

/// Sign-change bracket stored in a sweep record, if any.
pub fn sweep_bracket(record: &OutputRecord) -> Option<(f64, f64)> {
    let lo = record.parameters.get("bracket_lo").and_then(Cell::as_f64)?;
    let hi = record.parameters.get("bracket_hi").and_then(Cell::as_f64)?;
    Some((lo, hi))
}
