use std::f64::consts::E;

use crate::error::{Error, Result};

/// -1/e, where the principal branch meets the lower branch.
pub const BRANCH_POINT: f64 = -1.0 / E;

// Inputs this far below -1/e are still treated as the branch point.
const BRANCH_SLACK: f64 = 1e-15;
const MAX_HALLEY: usize = 32;

/// Principal branch W0 of the Lambert W function: the real w >= -1 with
/// w e^w = x, for x >= -1/e.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() || x.is_infinite() {
        return Err(Error::domain(format!("lambert_w0 needs a finite argument, got {x}")));
    }
    if x < BRANCH_POINT - BRANCH_SLACK {
        return Err(Error::domain(format!(
            "lambert_w0 argument {x} is below the branch point -1/e"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    // p^2 = 2 (e x + 1), formed with one rounding
    let p2 = 2.0 * E.mul_add(x, 1.0);
    if p2 <= 0.0 {
        return Ok(-1.0);
    }
    let p = p2.sqrt();
    if p < 1e-3 {
        // the series is exact to O(p^6) here, tighter than Halley can resolve
        return Ok(branch_series(p));
    }

    let mut w = initial_guess(x, p);
    for _ in 0..MAX_HALLEY {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let dw = f / denom;
        w -= dw;
        if dw.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w.max(-1.0))
}

fn branch_series(p: f64) -> f64 {
    -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * 769.0 / 17280.0))))
}

fn initial_guess(x: f64, p: f64) -> f64 {
    if x.abs() < 0.5 / E {
        x
    } else if x < 0.0 {
        branch_series(p)
    } else if x > E {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    } else {
        // Winitzki's closed-form approximation
        let l = x.ln_1p();
        l * (1.0 - l.ln_1p() / (2.0 + l))
    }
}

/// dW0/dx = e^(-W0(x)) / (1 + W0(x)), defined for x > -1/e.
pub fn lambert_w0_derivative(x: f64) -> Result<f64> {
    if !(x > BRANCH_POINT) {
        return Err(Error::domain(format!(
            "lambert_w0_derivative needs x > -1/e, got {x}"
        )));
    }
    let w = lambert_w0(x)?;
    let wp1 = w + 1.0;
    if wp1 <= 0.0 {
        return Err(Error::domain(format!(
            "lambert_w0_derivative diverges at x = {x} (too close to -1/e)"
        )));
    }
    Ok((-w).exp() / wp1)
}
