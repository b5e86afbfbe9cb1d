//! Freedman's maximal inequality turned into a conditional MDF bound.

use super::{BoundReport, Quantity};
use crate::sequences::{weibull_poly_tail, Direction, Family, Sequence};

/// One term of Freedman's bound: exp(-u²/(2(v² + rho·u))).
pub fn freedman_term(u: f64, rho: f64, v: f64) -> f64 {
    (-u * u / (2.0 * (v * v + rho * u))).exp()
}

/// K_{v,u,n0} = Σ_{n≥n0} a_n exp(-u_n²/(2(v²+rho u_n))) and the conditional
/// bound K / P(⟨M⟩_∞ <= v), with `qv_prob` the caller's estimate of that
/// probability.
pub fn freedman_bound(
    rho: f64,
    v: f64,
    u_seq: &Sequence,
    a: &Sequence,
    n0: u64,
    qv_prob: f64,
) -> BoundReport {
    let id = "freedman";
    if !(rho >= 0.0) || !(v > 0.0) {
        return BoundReport::invalid(id, Quantity::MomentSa, "requires rho >= 0 and v > 0");
    }
    if !(qv_prob > 0.0 && qv_prob <= 1.0) {
        return BoundReport::invalid(
            id,
            Quantity::MomentSa,
            format!("requires qv_prob in (0,1], got {qv_prob}"),
        );
    }
    if u_seq.direction() != Direction::Nondecreasing {
        return BoundReport::invalid(id, Quantity::MomentSa, "u must be nondecreasing");
    }
    let n0 = n0.max(u_seq.n0()).max(a.n0()).max(1);

    // Divergence / unsupported-family checks on u.
    match u_seq.family() {
        Family::Power { p } if *p > 0.0 => {}
        Family::LogPow { p } if *p > 0.0 => {
            let (_, rho_a) = match weight_cap(a) {
                Some(t) => t,
                None => {
                    return BoundReport::invalid(
                        id,
                        Quantity::MomentSa,
                        format!("unsupported weight family {:?}", a.family()),
                    )
                }
            };
            if *p < 1.0 {
                return BoundReport::invalid(
                    id,
                    Quantity::MomentSa,
                    format!("u ~ ln^{p} grows too slowly: terms decay sub-polynomially"),
                );
            }
            if (*p - 1.0).abs() < 1e-12 && rho > 0.0 {
                // Terms decay like n^{-1/(2rho) + o(1)}.
                if 1.0 / (2.0 * rho) <= rho_a + 1.0 {
                    return BoundReport::invalid(
                        id,
                        Quantity::MomentSa,
                        format!(
                            "divergent: u = ln(n+1) with rho = {rho} decays like n^(-{}) against weight growth n^{rho_a}",
                            1.0 / (2.0 * rho)
                        ),
                    );
                }
            }
        }
        other => {
            return BoundReport::invalid(
                id,
                Quantity::MomentSa,
                format!("unsupported or non-divergent threshold family {other:?}"),
            )
        }
    }
    let (kappa_a, rho_a) = match weight_cap(a) {
        Some(t) => t,
        None => {
            return BoundReport::invalid(
                id,
                Quantity::MomentSa,
                format!("unsupported weight family {:?}", a.family()),
            )
        }
    };

    let mut sum = 0.0f64;
    let mut n = n0;
    let cap = 5_000_000u64;
    loop {
        let u = u_seq.value(n);
        sum += a.value(n) * freedman_term(u, rho, v);
        if sum > 1e15 {
            return BoundReport::invalid(
                id,
                Quantity::MomentSa,
                format!("divergent: partial sums exceeded 1e15 at index {n}"),
            );
        }
        if let Some(maj) = tail_majorant(u_seq, rho, v, kappa_a, rho_a, n) {
            if maj <= 1e-10 * sum.max(1e-300) {
                let k = sum + maj;
                return BoundReport::ok(id, Quantity::MomentSa, k / qv_prob).with_params(&[
                    ("rho", rho),
                    ("v", v),
                    ("n0", n0 as f64),
                    ("qv_prob", qv_prob),
                    ("K", k),
                ]);
            }
        }
        n += 1;
        if n - n0 > cap {
            return BoundReport::invalid(
                id,
                Quantity::MomentSa,
                format!("no convergence certificate after {cap} terms"),
            );
        }
    }
}

fn weight_cap(a: &Sequence) -> Option<(f64, f64)> {
    match a.family() {
        Family::Constant { c } => Some((a.scale() * c, 0.0)),
        Family::Power { p } if *p >= 0.0 => Some((a.scale(), *p)),
        _ => None,
    }
}

/// Majorant for Σ_{m>n} a_m exp(-u_m²/(2(v²+rho u_m))), using the pointwise
/// bound exponent >= beta·u_m with beta = 1/(2(v²/u_n + rho)) for m > n.
fn tail_majorant(
    u_seq: &Sequence,
    rho: f64,
    v: f64,
    kappa_a: f64,
    rho_a: f64,
    n: u64,
) -> Option<f64> {
    let u_n = u_seq.value(n);
    if u_n <= 0.0 {
        return None;
    }
    let beta = 1.0 / (2.0 * (v * v / u_n + rho));
    match u_seq.family() {
        Family::Power { p } => {
            // u_m = scale·m^p: terms <= kappa (m+1)^{rho_a} e^{-beta·scale·m^p}.
            let lambda = beta * u_seq.scale();
            let fudge = (1.0 + 1.0 / n as f64).powf(rho_a);
            let t = weibull_poly_tail(kappa_a * fudge, lambda, *p, rho_a, n + 1).ok()?;
            Some(t.value + t.abs_error_bound)
        }
        Family::LogPow { p } => {
            // exp(-beta ln^p(m+1)) <= (m+1)^{-beta ln^{p-1}(n+2)} for m >= n.
            let s = beta * u_seq.scale() * ((n + 2) as f64).ln().powf(p - 1.0);
            let e = rho_a - s;
            if e < -1.0 {
                let m = (n + 1) as f64;
                Some(kappa_a * (m.powf(e) + m.powf(e + 1.0) / (-e - 1.0)))
            } else {
                None // exponent still too small; keep summing, beta grows
            }
        }
        _ => None,
    }
}
