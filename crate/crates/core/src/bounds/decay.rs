//! Moment and tail bounds for the three canonical decay classes of the event
//! probabilities: polynomial c·m^{-q}, exponential c·b^m, and Weibull-type
//! c·b^{m^alpha}.

use super::{golden_min, BoundReport, Quantity, TWO_E_NINE_EIGHTHS};
use crate::sequences;
use crate::specfn;

/// Decay hypothesis on P(A_m) for m >= n0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// P(A_m) <= c m^{-q}
    Poly { c: f64, q: f64 },
    /// P(A_m) <= c b^m, b in (0,1)
    Exp { c: f64, b: f64 },
    /// P(A_m) <= c b^{m^alpha}, b in (0,1), alpha in (0,1)
    Weibull { c: f64, b: f64, alpha: f64 },
}

fn zeta(z: f64, n0: u64) -> f64 {
    // Upper bound: value plus its certified error.
    match specfn::hurwitz_zeta(z, n0, 1e-11) {
        Ok(r) => r.value + r.abs_error_bound,
        Err(_) => f64::INFINITY,
    }
}

/// The convergent Weibull tradeoff constant
///
///   K(b, p, alpha, n0) = c · Σ_{n≥n0} (1 + κ n^{1-alpha}) b^{(1-p) n^alpha},
///   κ = (1 + (1/alpha - 1)/|ln b|) / (alpha |ln b|),
///
/// an upper bound on Σ_n b^{-p n^alpha} Σ_{m≥n} c b^{m^alpha}.
pub fn weibull_constant(c: f64, b: f64, p: f64, alpha: f64, n0: u64) -> Result<f64, String> {
    if !(b > 0.0 && b < 1.0) {
        return Err(format!("requires b in (0,1), got {b}"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(format!("requires alpha in (0,1), got {alpha}"));
    }
    if !(p >= 0.0 && p < 1.0) {
        return Err(format!("requires p in [0,1), got {p}"));
    }
    let lambda = (1.0 - p) * -b.ln();
    let kappa = weibull_kappa(b, alpha);
    // The tail helpers fold their majorant into `value`, so the sum of the
    // two values is already a certified upper bound.
    let flat = sequences::weibull_poly_tail(c, lambda, alpha, 0.0, n0.max(1))
        .map_err(|e| e.to_string())?;
    let poly = sequences::weibull_poly_tail(c * kappa, lambda, alpha, 1.0 - alpha, n0.max(1))
        .map_err(|e| e.to_string())?;
    Ok(flat.value + poly.value)
}

fn weibull_kappa(b: f64, alpha: f64) -> f64 {
    let l = -b.ln();
    (1.0 + (1.0 / alpha - 1.0) / l) / (alpha * l)
}

/// The k-independent constants (d, D) of the optimized Weibull tail
/// (d + D (k-1)^{2-alpha}) b^{(k-1)^alpha}, assembled at p* = 1 - 1/(k-1)^alpha.
pub fn weibull_opt_constants(c: f64, b: f64, alpha: f64, n0: u64) -> (f64, f64) {
    let l = -b.ln();
    let kappa = weibull_kappa(b, alpha);
    let d = c * (1.0 + kappa * (n0 as f64).powf(1.0 - alpha)) / b;
    let s = 2.0 / alpha - 1.0;
    let gamma_s = specfn::ln_gamma(s).exp();
    let big_c = c * (1.0 + kappa);
    let dd = big_c * gamma_s / (alpha * l.powf(s) * b);
    (d, dd)
}

/// Moment bound for the decay class: E[O^{p+1}] (polynomial),
/// E[b^{-p O}] (exponential), or E[b^{-p (O + n0 - 1)^alpha}] (Weibull).
pub fn decay_moment_bound(decay: Decay, p: f64, n0: u64) -> BoundReport {
    match decay {
        Decay::Poly { c, q } => {
            let id = "poly_moment";
            if c <= 0.0 || q <= 0.0 {
                return BoundReport::invalid(id, Quantity::MomentPower, "requires c > 0, q > 0");
            }
            if !(0.0..).contains(&p) || p >= q - 2.0 {
                return BoundReport::invalid(
                    id,
                    Quantity::MomentPower,
                    format!("requires 0 <= p < q - 2 = {}", q - 2.0),
                )
                .with_params(&[("c", c), ("q", q), ("p", p), ("n0", n0 as f64)]);
            }
            let v = c * q * zeta(q - p - 1.0, n0.max(1));
            BoundReport::ok(id, Quantity::MomentPower, v).with_params(&[
                ("c", c),
                ("q", q),
                ("p", p),
                ("n0", n0 as f64),
            ])
        }
        Decay::Exp { c, b } => {
            let id = "exp_moment";
            if c <= 0.0 || !(b > 0.0 && b < 1.0) {
                return BoundReport::invalid(id, Quantity::ExpMoment, "requires c > 0, b in (0,1)");
            }
            if !(p > 0.0 && p < 1.0) {
                return BoundReport::invalid(id, Quantity::ExpMoment, "requires p in (0,1)")
                    .with_params(&[("c", c), ("b", b), ("p", p), ("n0", n0 as f64)]);
            }
            let v = 1.0 + c * b.powf(n0 as f64 - 1.0) / (1.0 - b.powf(1.0 - p));
            BoundReport::ok(id, Quantity::ExpMoment, v).with_params(&[
                ("c", c),
                ("b", b),
                ("p", p),
                ("n0", n0 as f64),
            ])
        }
        Decay::Weibull { c, b, alpha } => {
            let id = "weibull_moment";
            if c <= 0.0 {
                return BoundReport::invalid(id, Quantity::ExpMoment, "requires c > 0");
            }
            if !(p > 0.0 && p < 1.0) {
                return BoundReport::invalid(id, Quantity::ExpMoment, "requires p in (0,1)")
                    .with_params(&[("c", c), ("b", b), ("alpha", alpha), ("p", p)]);
            }
            match weibull_constant(c, b, p, alpha, n0.max(1)) {
                Ok(v) => BoundReport::ok(id, Quantity::ExpMoment, v).with_params(&[
                    ("c", c),
                    ("b", b),
                    ("alpha", alpha),
                    ("p", p),
                    ("n0", n0 as f64),
                ]),
                Err(e) => BoundReport::invalid(id, Quantity::ExpMoment, e),
            }
        }
    }
}

/// Tail bound P(O >= k) for the decay class.
///
/// `optimize = true` applies the paper's closed-form optimizer over the free
/// exponent; `optimize = false` evaluates the sub-optimal bound at the given
/// `p` (or the best feasible p by golden-section search when `p` is `None`).
/// The exponential class has no free parameter left after optimization, so
/// both routes coincide there.
pub fn decay_tail_bound(
    decay: Decay,
    n0: u64,
    k: u64,
    optimize: bool,
    p: Option<f64>,
) -> BoundReport {
    let n0 = n0.max(1);
    if k < 1 {
        return BoundReport::invalid("decay_tail", Quantity::Tail, "requires k >= 1");
    }
    let kf = k as f64;
    match decay {
        Decay::Poly { c, q } => {
            let id = if optimize { "poly_tail_opt" } else { "poly_tail" };
            if c <= 0.0 || q <= 2.0 {
                return BoundReport::invalid(id, Quantity::Tail, "requires c > 0 and q > 2");
            }
            let psi = specfn::digamma(n0).expect("n0 >= 1").value;
            if optimize {
                let k_min = (1.0 / (q - 2.0) + psi).exp();
                if kf >= k_min {
                    let c1 = c * q * ((q - 2.0) * psi).exp() * (n0 as f64).powf(q - 2.0);
                    let v = c1 * kf.powf(-(q - 1.0)) * (kf.ln() + 1.0 / n0 as f64 - psi);
                    let p_star = q - 2.0 - 1.0 / (kf.ln() - psi);
                    return BoundReport::ok(id, Quantity::Tail, v)
                        .with_params(&[("c", c), ("q", q), ("n0", n0 as f64), ("k", kf), ("c1", c1)])
                        .with_optimizer("p", p_star);
                }
                // Below the optimizer's validity range: fall back to the
                // sub-optimal bound at the best feasible p.
            }
            let objective = |pp: f64| c * q * kf.powf(-(pp + 1.0)) * zeta(q - pp - 1.0, n0);
            let (p_used, v) = match p {
                Some(pp) => {
                    if !(0.0..q - 2.0).contains(&pp) {
                        return BoundReport::invalid(
                            id,
                            Quantity::Tail,
                            format!("requires 0 <= p < q - 2 = {}", q - 2.0),
                        );
                    }
                    (pp, objective(pp))
                }
                None => golden_min(0.0, q - 2.0, 1e-6, objective),
            };
            BoundReport::ok(id, Quantity::Tail, v)
                .with_params(&[("c", c), ("q", q), ("n0", n0 as f64), ("k", kf)])
                .with_optimizer("p", p_used)
        }
        Decay::Exp { c, b } => {
            let id = "exp_tail";
            if c <= 0.0 || !(b > 0.0 && b < 1.0) {
                return BoundReport::invalid(id, Quantity::Tail, "requires c > 0, b in (0,1)");
            }
            let v = TWO_E_NINE_EIGHTHS
                * (kf * (c * b.powf(n0 as f64 - 1.0) + 1.0) + 1.0)
                * b.powf(kf);
            BoundReport::ok(id, Quantity::Tail, v).with_params(&[
                ("c", c),
                ("b", b),
                ("n0", n0 as f64),
                ("k", kf),
            ])
        }
        Decay::Weibull { c, b, alpha } => {
            let id = if optimize { "weibull_tail_opt" } else { "weibull_tail" };
            if optimize {
                if k < 2 {
                    return BoundReport::invalid(id, Quantity::Tail, "optimized form requires k >= 2");
                }
                if !(b > 0.0 && b < 1.0) || !(alpha > 0.0 && alpha < 1.0) || c <= 0.0 {
                    return BoundReport::invalid(
                        id,
                        Quantity::Tail,
                        "requires c > 0, b in (0,1), alpha in (0,1)",
                    );
                }
                let (d, dd) = weibull_opt_constants(c, b, alpha, n0);
                let km1 = kf - 1.0;
                let v = (d + dd * km1.powf(2.0 - alpha)) * b.powf(km1.powf(alpha));
                let p_star = 1.0 - 1.0 / km1.powf(alpha);
                return BoundReport::ok(id, Quantity::Tail, v)
                    .with_params(&[
                        ("c", c),
                        ("b", b),
                        ("alpha", alpha),
                        ("n0", n0 as f64),
                        ("k", kf),
                        ("d", d),
                        ("D", dd),
                    ])
                    .with_optimizer("p", p_star);
            }
            let objective = |pp: f64| match weibull_constant(c, b, pp, alpha, n0) {
                Ok(kc) => b.powf(pp * (kf - 1.0).powf(alpha)) * kc,
                Err(_) => f64::INFINITY,
            };
            let (p_used, v) = match p {
                Some(pp) => {
                    if !(pp > 0.0 && pp < 1.0) {
                        return BoundReport::invalid(id, Quantity::Tail, "requires p in (0,1)");
                    }
                    (pp, objective(pp))
                }
                None => golden_min(0.0, 1.0, 1e-6, objective),
            };
            if !v.is_finite() {
                return BoundReport::invalid(id, Quantity::Tail, "constant K diverged");
            }
            BoundReport::ok(id, Quantity::Tail, v)
                .with_params(&[("c", c), ("b", b), ("alpha", alpha), ("n0", n0 as f64), ("k", kf)])
                .with_optimizer("p", p_used)
        }
    }
}
