//! Excursion bounds for the Galton-Watson process in its three regimes.

use super::decay::{decay_moment_bound, decay_tail_bound, Decay};
use super::{BoundReport, Quantity, TWO_E_NINE_EIGHTHS};
use crate::specfn;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalExpMode {
    /// Excursion threshold K(n) = n² sqrt(ln(n+2)).
    SqrtLog,
    /// Excursion threshold K(n) = delta · n².
    Quadratic { delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BranchingRegime {
    /// P(O_K >= k) for O_K = #{n : Z_n >= K}, offspring mean m in (0,1).
    Subcritical { m: f64, v: f64, cap: f64, k: u64 },
    /// P(O_eps >= k) for the normalized martingale, offspring mean m > 1.
    SupercriticalTail { m: f64, v: f64, eps: f64, k: u64 },
    /// Near-optimal tolerance eps_n = sqrt(v n^theta / (m^n (m²-m))):
    /// P(O >= k) <= k^{-1} zeta(theta).
    SupercriticalRate { m: f64, v: f64, theta: f64, k: u64 },
    /// Critical case, excursions above 1: E[S_a(O_1)] with a_n = ln^{-2}(n+1)
    /// and the tail at `k`.
    CriticalMoment { v: f64, c_inf: f64, k: Option<u64> },
    /// Critical case, logarithmically growing excursion sizes:
    /// E[O^{1+p}] <= (2 c_inf / v) zeta(r - 2 - 4 eta - p).
    CriticalPoly {
        r: f64,
        v: f64,
        eta: f64,
        p: f64,
        c_inf: f64,
        k: Option<u64>,
    },
    /// Critical case with exponential offspring moments: exponential decay of
    /// O for quadratic excursion thresholds.
    CriticalExp {
        v: f64,
        c_inf: f64,
        mode: CriticalExpMode,
        p: Option<f64>,
        k: Option<u64>,
    },
}

pub fn branching_bounds(regime: BranchingRegime) -> BoundReport {
    match regime {
        BranchingRegime::Subcritical { m, v, cap, k } => {
            let id = "branching_subcritical";
            if !(m > 0.0 && m < 1.0) {
                return BoundReport::invalid(id, Quantity::Tail, "requires m in (0,1)");
            }
            if !(cap > 0.0) || !(v >= 0.0) || k < 1 {
                return BoundReport::invalid(id, Quantity::Tail, "requires K > 0, v >= 0, k >= 1");
            }
            let m1k = m * (1.0 - m) * cap;
            let kf = k as f64;
            let val = TWO_E_NINE_EIGHTHS / m1k
                * (kf * ((v / m1k).min(1.0) + 1.0) + 1.0)
                * m.powf(kf);
            BoundReport::ok(id, Quantity::Tail, val).with_params(&[
                ("m", m),
                ("v", v),
                ("K", cap),
                ("k", kf),
            ])
        }
        BranchingRegime::SupercriticalTail { m, v, eps, k } => {
            let id = "branching_supercritical_tail";
            if !(m > 1.0) {
                return BoundReport::invalid(id, Quantity::Tail, "requires m > 1");
            }
            if !(eps > 0.0) || !(v > 0.0) || k < 1 {
                return BoundReport::invalid(id, Quantity::Tail, "requires eps > 0, v > 0, k >= 1");
            }
            let kf = k as f64;
            let val = TWO_E_NINE_EIGHTHS * v
                / ((1.0 - 1.0 / m) * (m * m - m) * eps * eps)
                * (2.0 * kf + 1.0)
                * m.powf(-kf);
            BoundReport::ok(id, Quantity::Tail, val).with_params(&[
                ("m", m),
                ("v", v),
                ("eps", eps),
                ("k", kf),
            ])
        }
        BranchingRegime::SupercriticalRate { m, v, theta, k } => {
            let id = "branching_supercritical_rate";
            if !(m > 1.0) || !(v > 0.0) {
                return BoundReport::invalid(id, Quantity::Tail, "requires m > 1, v > 0");
            }
            if !(theta > 1.0) {
                return BoundReport::invalid(id, Quantity::Tail, "requires theta > 1");
            }
            if k < 1 {
                return BoundReport::invalid(id, Quantity::Tail, "requires k >= 1");
            }
            let z = match specfn::hurwitz_zeta(theta, 1, 1e-11) {
                Ok(r) => r.value + r.abs_error_bound,
                Err(e) => return BoundReport::invalid(id, Quantity::Tail, e.to_string()),
            };
            let val = z / k as f64;
            BoundReport::ok(id, Quantity::Tail, val).with_params(&[
                ("m", m),
                ("v", v),
                ("theta", theta),
                ("k", k as f64),
            ])
        }
        BranchingRegime::CriticalMoment { v, c_inf, k } => {
            let id = "branching_critical_moment";
            if !(v > 0.0) || !(c_inf > 0.0) {
                return BoundReport::invalid(id, Quantity::MomentSa, "requires v > 0, c_inf > 0");
            }
            // E[S_a(O_1)] <= (2 c_inf / v) sum_{n>=1} 1/(n ln²(n+1)),
            // with a_n = ln^{-2}(n+1).
            let sum = match crate::sequences::log_weight_tail(1.0, 1.0, 1) {
                Ok(t) => t.value + t.abs_error_bound,
                Err(e) => return BoundReport::invalid(id, Quantity::MomentSa, e.to_string()),
            };
            let moment = 2.0 * c_inf / v * sum;
            match k {
                None => BoundReport::ok(id, Quantity::MomentSa, moment).with_params(&[
                    ("v", v),
                    ("c_inf", c_inf),
                ]),
                Some(k) => {
                    if k < 1 {
                        return BoundReport::invalid(id, Quantity::Tail, "requires k >= 1");
                    }
                    // S_a(k) = sum_{n=1}^k ln^{-2}(n+1), computed exactly;
                    // S_a(k) >= k/ln²(1+k) recovers the C ln(1+k)/k shape.
                    let s: f64 = (1..=k).map(|n| ((n + 1) as f64).ln().powi(-2)).sum();
                    BoundReport::ok(id, Quantity::Tail, moment / s).with_params(&[
                        ("v", v),
                        ("c_inf", c_inf),
                        ("k", k as f64),
                        ("moment", moment),
                    ])
                }
            }
        }
        BranchingRegime::CriticalPoly {
            r,
            v,
            eta,
            p,
            c_inf,
            k,
        } => {
            let id = "branching_critical_poly";
            if !(eta > 0.0 && eta < 1.0) || !(v > 0.0) || !(c_inf > 0.0) {
                return BoundReport::invalid(
                    id,
                    Quantity::MomentPower,
                    "requires eta in (0,1), v > 0, c_inf > 0",
                );
            }
            if !(r > 3.0 + 4.0 * eta) {
                return BoundReport::invalid(
                    id,
                    Quantity::MomentPower,
                    format!("requires r > 3 + 4 eta = {}", 3.0 + 4.0 * eta),
                );
            }
            if !(0.0..r - 3.0 - 4.0 * eta).contains(&p) {
                return BoundReport::invalid(
                    id,
                    Quantity::MomentPower,
                    format!("requires 0 <= p < r - 3 - 4 eta = {}", r - 3.0 - 4.0 * eta),
                );
            }
            let z = match specfn::hurwitz_zeta(r - 2.0 - 4.0 * eta - p, 1, 1e-11) {
                Ok(t) => t.value + t.abs_error_bound,
                Err(e) => return BoundReport::invalid(id, Quantity::MomentPower, e.to_string()),
            };
            let moment = 2.0 * c_inf / v * z;
            match k {
                None => BoundReport::ok(id, Quantity::MomentPower, moment).with_params(&[
                    ("r", r),
                    ("v", v),
                    ("eta", eta),
                    ("p", p),
                    ("c_inf", c_inf),
                ]),
                Some(k) => BoundReport::ok(
                    id,
                    Quantity::Tail,
                    (k as f64).powf(-(1.0 + p)) * moment,
                )
                .with_params(&[("r", r), ("p", p), ("k", k as f64)]),
            }
        }
        BranchingRegime::CriticalExp {
            v,
            c_inf,
            mode,
            p,
            k,
        } => {
            let id = "branching_critical_exp";
            if !(v > 0.0) || !(c_inf > 0.0) {
                return BoundReport::invalid(id, Quantity::ExpMoment, "requires v > 0, c_inf > 0");
            }
            let (c, b) = match mode {
                CriticalExpMode::SqrtLog => (2.0 * (1.0 + c_inf) / v, (-2.0 / v).exp()),
                CriticalExpMode::Quadratic { delta } => {
                    if !(delta > 0.0) {
                        return BoundReport::invalid(id, Quantity::ExpMoment, "requires delta > 0");
                    }
                    (2.0 * delta * (1.0 + c_inf) / v, (-2.0 * delta / v).exp())
                }
            };
            match (p, k) {
                (Some(p), _) => {
                    let p_norm = p / -b.ln();
                    let mut rep = decay_moment_bound(Decay::Exp { c, b }, p_norm, 1);
                    rep.bound_id = id;
                    rep.params.push(("v".into(), v));
                    rep.params.push(("c_inf".into(), c_inf));
                    rep
                }
                (None, Some(k)) => {
                    let mut rep = decay_tail_bound(Decay::Exp { c, b }, 1, k, false, None);
                    rep.bound_id = id;
                    rep.params.push(("v".into(), v));
                    rep.params.push(("c_inf".into(), c_inf));
                    rep
                }
                (None, None) => BoundReport::invalid(id, Quantity::ExpMoment, "supply p or k"),
            }
        }
    }
}
