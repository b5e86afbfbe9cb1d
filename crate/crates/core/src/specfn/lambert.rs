//! Principal branch of Lambert's W function via Halley iteration.

use super::{EvalResult, Result, SpecFnError};

const INV_E: f64 = 1.0 / std::f64::consts::E;
const MAX_ITER: usize = 80;

/// W₀(x) for x ≥ −1/e: the solution w ≥ −1 of w·e^w = x.
///
/// Halley iteration from a piecewise initial guess (branch-point series near
/// −1/e, a rational fit around 0, log asymptotics for large x). The residual
/// target is |w e^w − x| ≤ 1e−14·max(1, |x|); for very large x the iteration
/// runs on the log form w + ln w = ln x to avoid overflow.
pub fn lambert_w0(x: f64) -> Result<EvalResult> {
    if !x.is_finite() {
        return Err(SpecFnError::domain("lambert_w0", "non-finite argument"));
    }
    if x < -INV_E {
        return Err(SpecFnError::domain(
            "lambert_w0",
            format!("requires x >= -1/e, got {x}"),
        ));
    }
    if x == 0.0 {
        return Ok(EvalResult::exact(0.0));
    }
    // Exactly the branch point.
    if x == -INV_E {
        return Ok(EvalResult::new(-1.0, 1e-15));
    }

    if x > 1e10 {
        return log_form(x);
    }

    let mut w = initial_guess(x);
    let scale = x.abs().max(1.0);
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 1e-15 * scale {
            break;
        }
        // Halley step for f(w) = w e^w - x.
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if w < -1.0 {
            w = -1.0 + (w + 1.0).abs().min(1e-12);
        }
    }
    let residual = (w * w.exp() - x).abs();
    let target = 1e-14 * scale;
    if residual > target {
        return Err(SpecFnError::Convergence {
            function: "lambert_w0",
            iterations: MAX_ITER,
        });
    }
    // |dW/d(we^w)| = 1/(e^w (1+w)), so the value error is about the residual
    // scaled by that derivative; report a conservative multiple.
    let deriv = (w.exp() * (1.0 + w)).abs().max(f64::MIN_POSITIVE);
    Ok(EvalResult::new(w, (residual / deriv).max(1e-16 * w.abs())))
}

/// For huge x solve w + ln w = ln x by Newton (exact same root, no overflow).
fn log_form(x: f64) -> Result<EvalResult> {
    let lx = x.ln();
    let mut w = lx - lx.ln();
    for _ in 0..MAX_ITER {
        let f = w + w.ln() - lx;
        if f.abs() <= 1e-15 * lx.abs().max(1.0) {
            break;
        }
        w -= f / (1.0 + 1.0 / w);
    }
    let logres = (w + w.ln() - lx).abs();
    // |we^w - x| = x·|exp(log residual) - 1| ≈ x·logres.
    Ok(EvalResult::new(w, logres * 2.0 * w.abs().max(1.0)))
}

fn initial_guess(x: f64) -> f64 {
    if x < -0.25 {
        // Branch-point series in p = sqrt(2(ex + 1)).
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 2.0 {
        // One Newton step from w = x(1 - x) keeps us in the basin.
        let w = x * (1.0 - x).max(0.1);
        if w <= -0.9 {
            -0.9
        } else {
            w
        }
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}
