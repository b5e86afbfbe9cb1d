//! Strong-law bounds for martingale differences: the L^p moment route, the
//! Baum-Katz-Nagaev polynomial route, and the exponential-moment route.

use super::decay::{weibull_constant, weibull_opt_constants};
use super::{BoundReport, Quantity};
use crate::sequences::{log_weight_tail, tradeoff_constant, Direction, Family, SeqError, Sequence};
use crate::specfn;

/// C_p = [8(p-1) max(1, 2^{p-1})]^p for p >= 2.
pub fn dharmadhikari_constant(p: f64) -> f64 {
    (8.0 * (p - 1.0) * (1.0f64).max(2.0f64.powf(p - 1.0))).powf(p)
}

/// Pointwise strong-law rate beta_n / (eps_n^p n^{p/2 - 1}).
pub fn slln_pointwise(beta: &Sequence, eps: &Sequence, p: f64, n: u64) -> f64 {
    beta.value(n) / (eps.value(n).powf(p) * (n as f64).powf(p / 2.0 - 1.0))
}

/// E[S_a(O)] <= C_p · Σ_n a_n Σ_{m≥n} beta_m / (eps_m^p m^{p/2-1}).
pub fn slln_lp_bound(p: f64, beta: &Sequence, eps: &Sequence, a: &Sequence) -> BoundReport {
    let id = "slln_lp";
    if !(p >= 2.0) {
        return BoundReport::invalid(id, Quantity::MomentSa, "requires p >= 2");
    }
    let c_p = dharmadhikari_constant(p);
    let rate = match slln_rate_family(beta, eps, p) {
        Ok(r) => r,
        Err(e) => return BoundReport::invalid(id, Quantity::MomentSa, e),
    };
    let n0 = a.n0().max(rate.n0());
    match tradeoff_constant(a, &rate, n0) {
        Ok(k) => BoundReport::ok(id, Quantity::MomentSa, c_p * k.value).with_params(&[
            ("p", p),
            ("C_p", c_p),
            ("K", k.value),
            ("n0", n0 as f64),
        ]),
        Err(SeqError::Divergence { index, message }) => BoundReport::invalid(
            id,
            Quantity::MomentSa,
            format!("divergent at index {index}: {message}"),
        )
        .with_params(&[("p", p), ("C_p", c_p)]),
        Err(e) => BoundReport::invalid(id, Quantity::MomentSa, e.to_string()),
    }
}

fn slln_rate_family(beta: &Sequence, eps: &Sequence, p: f64) -> Result<Sequence, String> {
    let n0 = beta.n0().max(eps.n0()).max(1);
    let base_exp = -(p / 2.0 - 1.0);
    let (beta_scale, beta_pow) = match beta.family() {
        Family::Constant { c } => (beta.scale() * c, 0.0),
        Family::Power { p: bp } => (beta.scale(), *bp),
        other => return Err(format!("unsupported beta family {other:?}")),
    };
    match eps.family() {
        Family::Constant { c } => Sequence::with_scale(
            Family::Power { p: base_exp + beta_pow },
            beta_scale / (eps.scale() * c).powf(p),
            n0,
            Direction::Unconstrained,
        )
        .map_err(|e| e.to_string()),
        Family::Power { p: ep } => Sequence::with_scale(
            Family::Power {
                p: base_exp + beta_pow - ep * p,
            },
            beta_scale / eps.scale().powf(p),
            n0,
            Direction::Unconstrained,
        )
        .map_err(|e| e.to_string()),
        other => Err(format!("unsupported eps family {other:?}")),
    }
}

/// Baum-Katz-Nagaev moment/tail bounds with the caller-supplied implicit
/// constant C_est.
#[derive(Debug, Clone)]
pub struct BaumKatzBound {
    pub moment: BoundReport,
    alpha: f64,
    eta: f64,
    p: f64,
    p_tilde: f64,
}

impl BaumKatzBound {
    /// eps_n(alpha, eta, p) = eta · n^{alpha/p - 1}.
    pub fn eps_at(&self, n: u64) -> f64 {
        self.eta * (n as f64).powf(self.alpha / self.p - 1.0)
    }

    /// P(O >= k) <= k^{-(1+p_tilde)} · moment.
    pub fn tail(&self, k: u64) -> BoundReport {
        if !self.moment.valid {
            return BoundReport::invalid(
                self.moment.bound_id,
                Quantity::Tail,
                self.moment.reason.clone().unwrap_or_default(),
            );
        }
        let v = (k as f64).powf(-(1.0 + self.p_tilde)) * self.moment.value;
        BoundReport::ok(self.moment.bound_id, Quantity::Tail, v)
            .with_params(&[("k", k as f64), ("p_tilde", self.p_tilde)])
    }
}

/// E[O^{1+p_tilde}] <= C_est (alpha-1) zeta(alpha-2-p_tilde; n0) (plain) or
/// C_est zeta(alpha-1-p_tilde; n0) (nested maxima variant).
pub fn baum_katz_bound(
    alpha: f64,
    p: f64,
    p_tilde: f64,
    eta: f64,
    n0: u64,
    c_est: f64,
    nested: bool,
) -> BaumKatzBound {
    let id = if nested { "baum_katz_nested" } else { "baum_katz" };
    let n0 = n0.max(1);
    let invalid = |reason: String| BaumKatzBound {
        moment: BoundReport::invalid(id, Quantity::MomentPower, reason),
        alpha,
        eta,
        p,
        p_tilde,
    };
    if !(eta > 0.0) || !(c_est >= 0.0) {
        return invalid(format!("requires eta > 0 and C_est >= 0, got eta={eta}, C_est={c_est}"));
    }
    let ratio = alpha / p;
    if !(ratio > 0.5 && ratio <= 1.0) {
        return invalid(format!("requires 1/2 < alpha/p <= 1, got {ratio}"));
    }
    let (alpha_floor, ptilde_cap, z) = if nested {
        (2.0, alpha - 2.0, alpha - 1.0 - p_tilde)
    } else {
        (3.0, alpha - 3.0, alpha - 2.0 - p_tilde)
    };
    if !(alpha > alpha_floor) {
        return invalid(format!("requires alpha > {alpha_floor}, got {alpha}"));
    }
    if !(0.0..ptilde_cap).contains(&p_tilde) {
        return invalid(format!(
            "requires 0 <= p_tilde < {ptilde_cap}, got {p_tilde}"
        ));
    }
    let zeta = match specfn::hurwitz_zeta(z, n0, 1e-11) {
        Ok(r) => r.value + r.abs_error_bound,
        Err(e) => return invalid(e.to_string()),
    };
    let v = if nested {
        c_est * zeta
    } else {
        c_est * (alpha - 1.0) * zeta
    };
    BaumKatzBound {
        moment: BoundReport::ok(id, Quantity::MomentPower, v).with_params(&[
            ("alpha", alpha),
            ("p", p),
            ("p_tilde", p_tilde),
            ("eta", eta),
            ("n0", n0 as f64),
            ("C_est", c_est),
        ]),
        alpha,
        eta,
        p,
        p_tilde,
    }
}

/// Modes of the exponential-moment strong law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LvMode {
    /// Pointwise rate e^{-(1-delta)/2 · lambda^{2/3} eps^{2/3} n^{1/3}} at n.
    FixedEps { eps: f64, n: u64 },
    /// Weibull MDF: the O^{1/3}-exponential moment at `p`, or the tail at `k`.
    WeibullMdf {
        eps: f64,
        p: f64,
        k: Option<u64>,
    },
    /// Ky Fan rate at index n.
    KyFan { n: u64 },
    /// Barely-summable tolerance: E[O] <= Σ 1/(n ln^{1+theta}(n+1)).
    AsRate { theta: f64 },
}

/// The tolerance sequence of the barely-summable mode,
/// ln^3(n+1)/sqrt(n) · 2(1+theta)/((1-delta) lambda^{2/3}).
pub fn lv_as_rate_eps(lambda: f64, delta: f64, theta: f64, n: u64) -> f64 {
    let nf = n as f64;
    (nf + 1.0).ln().powi(3) / nf.sqrt() * 2.0 * (1.0 + theta)
        / ((1.0 - delta) * lambda.powf(2.0 / 3.0))
}

/// Bounds from the exponential-moment strong law for martingale differences.
pub fn lesigne_volny_suite(lambda: f64, delta: f64, mode: LvMode, n0: u64) -> BoundReport {
    let n0 = n0.max(1);
    if !(lambda > 0.0) {
        return BoundReport::invalid("lesigne_volny", Quantity::Tail, "requires lambda > 0");
    }
    if !(delta > 0.0 && delta < 1.0) {
        return BoundReport::invalid("lesigne_volny", Quantity::Tail, "requires delta in (0,1)");
    }
    let l23 = lambda.powf(2.0 / 3.0);
    match mode {
        LvMode::FixedEps { eps, n } => {
            let id = "lesigne_volny_rate";
            if !(eps > 0.0) {
                return BoundReport::invalid(id, Quantity::PointwiseRate, "requires eps > 0");
            }
            let v = (-(1.0 - delta) / 2.0 * l23 * eps.powf(2.0 / 3.0) * (n as f64).powf(1.0 / 3.0))
                .exp();
            BoundReport::ok(id, Quantity::PointwiseRate, v).with_params(&[
                ("lambda", lambda),
                ("delta", delta),
                ("eps", eps),
                ("n", n as f64),
            ])
        }
        LvMode::WeibullMdf { eps, p, k } => {
            let id = "lesigne_volny_weibull";
            let rate = 0.5 * (1.0 - delta) * l23 * eps.powf(2.0 / 3.0);
            if !(p > 0.0 && p < rate) {
                return BoundReport::invalid(
                    id,
                    Quantity::ExpMoment,
                    format!("requires 0 < p < (1-delta)/2 · lambda^(2/3) eps^(2/3) = {rate}"),
                );
            }
            let b = (-rate).exp();
            match k {
                None => {
                    let p_norm = p / rate;
                    match weibull_constant(1.0, b, p_norm, 1.0 / 3.0, n0) {
                        Ok(v) => BoundReport::ok(id, Quantity::ExpMoment, v).with_params(&[
                            ("lambda", lambda),
                            ("delta", delta),
                            ("eps", eps),
                            ("p", p),
                            ("n0", n0 as f64),
                        ]),
                        Err(e) => BoundReport::invalid(id, Quantity::ExpMoment, e),
                    }
                }
                Some(k) => {
                    if k < 2 {
                        return BoundReport::invalid(id, Quantity::Tail, "requires k >= 2");
                    }
                    let (d, dd) = weibull_opt_constants(1.0, b, 1.0 / 3.0, n0);
                    let km1 = (k - 1) as f64;
                    let v = (d + dd * km1.powf(2.0 - 1.0 / 3.0)) * (-p * km1.powf(1.0 / 3.0)).exp();
                    BoundReport::ok(id, Quantity::Tail, v).with_params(&[
                        ("lambda", lambda),
                        ("delta", delta),
                        ("eps", eps),
                        ("p", p),
                        ("k", k as f64),
                        ("d", d),
                        ("D", dd),
                    ])
                }
            }
        }
        LvMode::KyFan { n } => {
            let id = "lesigne_volny_kyfan";
            let arg = (1.0 - delta) / 3.0 * l23 * (n as f64).powf(1.0 / 3.0);
            match specfn::lambert_w0(arg) {
                Ok(w) => {
                    let v = 2.0f64.powf(5.0 / 6.0) / 3.0f64.powf(1.0 / 3.0) * w.value.powf(1.5)
                        / ((1.0 - delta).powf(1.5) * lambda * (n as f64).sqrt());
                    BoundReport::ok(id, Quantity::KyFan, v).with_params(&[
                        ("lambda", lambda),
                        ("delta", delta),
                        ("n", n as f64),
                    ])
                }
                Err(e) => BoundReport::invalid(id, Quantity::KyFan, e.to_string()),
            }
        }
        LvMode::AsRate { theta } => {
            let id = "lesigne_volny_as_rate";
            if !(theta > 0.0) {
                return BoundReport::invalid(id, Quantity::MomentPower, "requires theta > 0");
            }
            match log_weight_tail(1.0, theta, n0) {
                Ok(t) => BoundReport::ok(id, Quantity::MomentPower, t.value).with_params(&[
                    ("lambda", lambda),
                    ("delta", delta),
                    ("theta", theta),
                    ("n0", n0 as f64),
                    ("abs_error_bound", t.abs_error_bound),
                ]),
                Err(e) => BoundReport::invalid(id, Quantity::MomentPower, e.to_string()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dharmadhikari_at_two() {
        // [8 · 1 · 2]^2 = 256.
        assert_eq!(dharmadhikari_constant(2.0), 256.0);
    }

    #[test]
    fn slln_divergence_for_slow_tolerances() {
        // beta constant, eps_n = n^{-gamma} with p·gamma + p/2 - 1 <= 1.
        let beta = Sequence::constant(1.0, 1).unwrap();
        let eps = Sequence::new(Family::Power { p: -0.5 }, 1, Direction::Nonincreasing).unwrap();
        let a = Sequence::constant(1.0, 1).unwrap();
        let r = slln_lp_bound(2.0, &beta, &eps, &a);
        assert!(!r.valid, "p=2, gamma=1/2 must diverge");
    }

    #[test]
    fn slln_p6_unit_tolerance_diverges_like_double_sum_oracle() {
        // beta = 1, p = 6, eps ≡ 1, a = 1: rate m^{-2}; the double sum
        // sum_n sum_{m>=n} m^{-2} = sum_m m·m^{-2} diverges. Both the op and
        // the brute-force oracle must agree on divergence.
        let beta = Sequence::constant(1.0, 1).unwrap();
        let eps = Sequence::constant(1.0, 1).unwrap();
        let a = Sequence::constant(1.0, 1).unwrap();
        let r = slln_lp_bound(6.0, &beta, &eps, &a);
        assert!(!r.valid);

        // Oracle: partial Fubini sums grow logarithmically without bound.
        let partial = |upto: u64| -> f64 { (1..upto).map(|m| 1.0 / m as f64).sum() };
        assert!(partial(1 << 16) > partial(1 << 8) + 2.0);
    }

    #[test]
    fn slln_fast_tolerance_matches_oracle() {
        // beta = 1, p = 6, eps = n^{1/4}... use a *growing* tolerance so the
        // rate m^{-2 - 6/4} is summable: rate = m^{-3.5}.
        let beta = Sequence::constant(1.0, 1).unwrap();
        let eps = Sequence::new(Family::Power { p: 0.25 }, 1, Direction::Nondecreasing).unwrap();
        let a = Sequence::constant(1.0, 1).unwrap();
        let r = slln_lp_bound(6.0, &beta, &eps, &a);
        assert!(r.valid, "{:?}", r.reason);
        let c6 = dharmadhikari_constant(6.0);
        let mut oracle = 0.0;
        for m in 1..1_000_000u64 {
            oracle += (m as f64) * (m as f64).powf(-3.5);
        }
        assert!(r.value >= c6 * oracle * (1.0 - 1e-9));
        assert!(r.value <= c6 * (oracle + 1e-2));
    }

    #[test]
    fn baum_katz_example() {
        // alpha=4, p=4, p_tilde=0.5, C_est=1, n0=1 -> 3·zeta(1.5) ~ 7.837.
        let b = baum_katz_bound(4.0, 4.0, 0.5, 1.0, 1, 1.0, false);
        assert!(b.moment.valid);
        // zeta(1.5) oracle frozen from the specfn summation oracle.
        let zeta15 = 2.612375348685488;
        assert!((b.moment.value - 3.0 * zeta15).abs() < 1e-6, "{}", b.moment.value);
        // Tail is k^{-(1+p_tilde)} times the moment.
        let t = b.tail(4);
        assert!((t.value - b.moment.value * 4.0f64.powf(-1.5)).abs() < 1e-12);
        // eps_n = eta n^{alpha/p - 1} = 1 for alpha = p.
        assert_eq!(b.eps_at(10), 1.0);
    }

    #[test]
    fn baum_katz_validity() {
        // p_tilde >= alpha - 3 is invalid in the plain variant...
        let b = baum_katz_bound(3.5, 4.0, 1.0, 1.0, 1, 1.0, false);
        assert!(!b.moment.valid);
        // ...but p_tilde = 1.2 < alpha - 2 is fine in the nested variant,
        // which uses zeta(alpha - 1 - p_tilde).
        let b = baum_katz_bound(3.5, 4.0, 1.2, 1.0, 1, 1.0, true);
        assert!(b.moment.valid);
        let z = specfn::hurwitz_zeta(3.5 - 1.0 - 1.2, 1, 1e-11).unwrap();
        assert!((b.moment.value - z.value).abs() < 1e-6);
        // alpha/p outside (1/2, 1] rejected.
        assert!(!baum_katz_bound(4.0, 10.0, 0.5, 1.0, 1, 1.0, false).moment.valid);
    }

    #[test]
    fn lv_fixed_eps_example() {
        // lambda=1, delta=1/2, eps=1, n=8 -> e^{-(1/4)·2} = e^{-1/2}.
        let r = lesigne_volny_suite(
            1.0,
            0.5,
            LvMode::FixedEps { eps: 1.0, n: 8 },
            1,
        );
        assert!(r.valid);
        assert!((r.value - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn lv_as_rate_matches_summation_oracle() {
        // theta=1, n0=2: E[O] <= sum_{n>=2} 1/(n ln²(n+1)).
        let r = lesigne_volny_suite(1.0, 0.5, LvMode::AsRate { theta: 1.0 }, 2);
        assert!(r.valid);
        let oracle: f64 = (2..40_000_000u64)
            .map(|n| 1.0 / (n as f64 * ((n + 1) as f64).ln().powi(2)))
            .sum();
        let err = r
            .params
            .iter()
            .find(|(k, _)| k == "abs_error_bound")
            .unwrap()
            .1;
        assert!(r.value + 1e-12 >= oracle, "{} < {oracle}", r.value);
        assert!(r.value - oracle <= err + 0.06, "{} vs {oracle} (err {err})", r.value);
    }

    #[test]
    fn lv_weibull_boundary_invalid() {
        let rate = 0.5 * 0.5 * 1.0f64;
        let r = lesigne_volny_suite(
            1.0,
            0.5,
            LvMode::WeibullMdf {
                eps: 1.0,
                p: rate,
                k: None,
            },
            1,
        );
        assert!(!r.valid, "boundary p must be rejected (open interval)");
    }

    #[test]
    fn lv_kyfan_positive_and_decreasing() {
        let v1 = lesigne_volny_suite(1.0, 0.5, LvMode::KyFan { n: 100 }, 1).value;
        let v2 = lesigne_volny_suite(1.0, 0.5, LvMode::KyFan { n: 10_000 }, 1).value;
        assert!(v1 > v2 && v2 > 0.0);
    }
}
