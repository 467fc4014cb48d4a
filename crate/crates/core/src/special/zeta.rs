use std::f64::consts::{LN_2, PI};

use super::{ComplexValue, SeriesPrecision};
use crate::error::{Error, Result};

/// Smallest admissible |1 - 2^(1-s)|.
pub const POLE_GUARD: f64 = 1e-12;

/// Below this |zeta(s)| the argument is reported as undefined.
pub const ARG_GUARD: f64 = 1e-12;

// 3 + sqrt(8): per-term convergence factor of the accelerated alternating sum.
const RATE: f64 = 5.828_427_124_746_19;

/// Riemann zeta for 0 < Re(s), via the Dirichlet eta series
/// `zeta(s) = eta(s) / (1 - 2^(1-s))`.
///
/// The alternating sum is accelerated with the Cohen, Rodriguez Villegas and
/// Zagier weights. The term count comes from the a-priori bound
/// `3 (1 + 2|t|) e^(pi |t| / 2) / (3 + sqrt 8)^n` on the eta error, scaled by
/// the prefactor, so accuracy holds uniformly in `t`.
pub fn zeta_critical_strip(s: ComplexValue, prec: SeriesPrecision) -> Result<ComplexValue> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::domain(format!("zeta argument must be finite, got {s}")));
    }
    if s.re <= 0.0 {
        return Err(Error::domain(format!(
            "zeta_critical_strip needs Re(s) > 0, got {}",
            s.re
        )));
    }

    // 2^(1-s) = exp((1-s) ln 2)
    let prefactor = ComplexValue::new(1.0, 0.0) - ((ComplexValue::new(1.0, 0.0) - s) * LN_2).exp();
    let pre_norm = prefactor.norm();
    if pre_norm <= POLE_GUARD {
        return Err(Error::domain(format!(
            "|1 - 2^(1-s)| = {pre_norm:e} at s = {s} is within the pole guard"
        )));
    }

    let n = required_terms(s.im.abs(), pre_norm, prec.target_abs_error());
    if n > prec.max_terms() {
        return Err(Error::Convergence(format!(
            "eta series at s = {s} needs {n} terms for error {:e}, max_terms is {}",
            prec.target_abs_error(),
            prec.max_terms()
        )));
    }

    let eta = accelerated_eta(s, n);
    let value = eta / prefactor;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Convergence(format!("non-finite zeta value at s = {s}")));
    }
    Ok(value)
}

fn required_terms(abs_t: f64, pre_norm: f64, target: f64) -> usize {
    let log_bound = 3f64.ln() + (1.0 + 2.0 * abs_t).ln() + 0.5 * PI * abs_t - pre_norm.ln();
    let n = ((log_bound - target.ln()) / RATE.ln()).ceil();
    (n.max(1.0)) as usize
}

/// sum_{k>=0} (-1)^k (k+1)^(-s) with n weighted terms.
///
/// The weights are carried divided by d_n, and the recurrence coefficient b
/// in log-magnitude form, so nothing overflows for large n.
fn accelerated_eta(s: ComplexValue, n: usize) -> ComplexValue {
    let nf = n as f64;
    let big = nf * RATE.ln();
    // d = (D + 1/D) / 2 with D = RATE^n
    let ln_d = big - LN_2 + (-2.0 * big).exp().ln_1p();

    let mut ln_b = 0.0_f64;
    let mut b_negative = true;
    let mut c = -1.0_f64;
    let mut sum = ComplexValue::new(0.0, 0.0);
    for k in 0..n {
        let b = {
            let mag = (ln_b - ln_d).exp();
            if b_negative {
                -mag
            } else {
                mag
            }
        };
        c = b - c;
        let ln_m = ((k + 1) as f64).ln();
        let term = ComplexValue::from_polar((-s.re * ln_m).exp(), -s.im * ln_m);
        sum += term * c;

        let kf = k as f64;
        // (k+n)(k-n) / ((k+1/2)(k+1)) is negative for k < n
        let ratio = (nf + kf) * (nf - kf) / ((kf + 0.5) * (kf + 1.0));
        ln_b += ratio.ln();
        b_negative = !b_negative;
    }
    sum
}

/// S = arg(zeta(1/2 + sigma_offset + i t)) / pi, principal branch, in (-1, 1].
pub fn arg_zeta_s(t: f64, sigma_offset: f64, prec: SeriesPrecision) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("arg_zeta_s needs finite t > 0, got {t}")));
    }
    if !(sigma_offset >= 0.0 && sigma_offset.is_finite()) {
        return Err(Error::domain(format!(
            "sigma_offset must be finite and >= 0, got {sigma_offset}"
        )));
    }
    let z = zeta_critical_strip(ComplexValue::new(0.5 + sigma_offset, t), prec)?;
    let modulus = z.norm();
    if modulus < ARG_GUARD {
        return Err(Error::ArgUndefined {
            t,
            sigma_offset,
            modulus,
        });
    }
    let s = z.im.atan2(z.re) / PI;
    // atan2(-0.0, x < 0) = -pi; fold onto the half-open range
    Ok(if s <= -1.0 { 1.0 } else { s })
}
