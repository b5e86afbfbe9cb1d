//! Method-of-moments quantification: bounds on the deviation frequency of
//! M-estimators in the five data regimes, all reduced to the law of large
//! numbers through the spectral linearization margins.

use super::decay::{weibull_constant, weibull_opt_constants};
use super::slln::{baum_katz_bound, dharmadhikari_constant};
use super::{BoundReport, Quantity};
use crate::sequences::{tradeoff_constant, Direction, Family, SeqError, Sequence};

/// Spectral / linearization constants of the reduction: lambda is the
/// Jacobian's minimum singular value minus a safety epsilon, delta1 and
/// delta2 the inclusion margins (1/2 by default, overridable).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margins {
    pub lambda: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl Margins {
    pub fn new(lambda: f64) -> Self {
        Margins {
            lambda,
            delta1: 0.5,
            delta2: 0.5,
        }
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.lambda > 0.0) {
            return Err(format!("requires lambda > 0, got {}", self.lambda));
        }
        for (name, d) in [("delta1", self.delta1), ("delta2", self.delta2)] {
            if !(d > 0.0 && d < 1.0) {
                return Err(format!("requires {name} in (0,1), got {d}"));
            }
        }
        Ok(())
    }

    fn product(&self) -> f64 {
        self.lambda * self.delta1 * self.delta2
    }
}

#[derive(Debug, Clone)]
pub enum MEstimatorSetting<'a> {
    /// Cesàro-convergent p-th moments, p > 6·ell.
    Cesaro {
        p: f64,
        ell: u64,
        beta_star: &'a Sequence,
        eps: &'a Sequence,
        a: &'a Sequence,
        margins: Margins,
        sup_m_norm: f64,
        n0: u64,
    },
    /// Uniformly L^p bounded data: delegates to the Baum-Katz route at p/ell.
    LpBounded {
        p: f64,
        ell: u64,
        alpha: f64,
        p_tilde: f64,
        eta: f64,
        c_est: f64,
        n0: u64,
        k: Option<u64>,
    },
    /// Uniformly bounded exponential moments: Weibull regime with
    /// c0 = (delta1 delta2 lambda gamma)^{2/3} and exponent (1-2 alpha)/3.
    ExpMoments {
        gamma: f64,
        alpha: f64,
        ell: u64,
        margins: Margins,
        n0: u64,
        p: Option<f64>,
        k: Option<u64>,
    },
    /// Gärtner-Ellis upper bound with Hessian norm h = |||D²Λ*(0)|||.
    GartnerEllis {
        hessian_norm: f64,
        alpha: f64,
        margins: Margins,
        c_est: f64,
        n0: u64,
        p: Option<f64>,
        k: Option<u64>,
    },
    /// Almost surely bounded data |Y_n| <= c_n with square-summable c.
    AsBounded {
        c_seq: &'a Sequence,
        eps: &'a Sequence,
        a: &'a Sequence,
        ell: u64,
        margins: Margins,
        n0: u64,
    },
}

pub fn m_estimator_bounds(setting: MEstimatorSetting<'_>) -> BoundReport {
    match setting {
        MEstimatorSetting::Cesaro {
            p,
            ell,
            beta_star,
            eps,
            a,
            margins,
            sup_m_norm,
            n0,
        } => cesaro(p, ell, beta_star, eps, a, margins, sup_m_norm, n0),
        MEstimatorSetting::LpBounded {
            p,
            ell,
            alpha,
            p_tilde,
            eta,
            c_est,
            n0,
            k,
        } => {
            let id = "m_est_lp_bounded";
            if ell == 0 || !(p > 6.0 * ell as f64) {
                return BoundReport::invalid(id, Quantity::MomentPower, "requires ell >= 1 and p > 6 ell");
            }
            let p_eff = p / ell as f64;
            if !(alpha > 3.0) || !(alpha > p_eff / 2.0 && alpha <= p_eff) {
                return BoundReport::invalid(
                    id,
                    Quantity::MomentPower,
                    format!("requires 3 < alpha and p/(2 ell) < alpha <= p/ell = {p_eff}"),
                );
            }
            // Bit-for-bit the Baum-Katz bound at the reduced exponent.
            let bk = baum_katz_bound(alpha, p_eff, p_tilde, eta, n0, c_est, false);
            let mut rep = match k {
                None => bk.moment.clone(),
                Some(k) => bk.tail(k),
            };
            rep.bound_id = id;
            rep.params.push(("ell".into(), ell as f64));
            rep
        }
        MEstimatorSetting::ExpMoments {
            gamma,
            alpha,
            ell,
            margins,
            n0,
            p,
            k,
        } => {
            let id = "m_est_exp_moments";
            if let Err(e) = margins.validate() {
                return BoundReport::invalid(id, Quantity::ExpMoment, e);
            }
            if !(gamma > 0.0) || ell == 0 {
                return BoundReport::invalid(id, Quantity::ExpMoment, "requires gamma > 0, ell >= 1");
            }
            if !(0.0..0.5).contains(&alpha) {
                return BoundReport::invalid(id, Quantity::ExpMoment, "requires 0 <= alpha < 1/2");
            }
            let c0 = (margins.product() * gamma).powf(2.0 / 3.0);
            let alpha_w = (1.0 - 2.0 * alpha) / 3.0;
            let b = (-c0).exp();
            let c_pref = ell as f64;
            match (p, k) {
                (Some(p), _) => {
                    if !(p > 0.0 && p < 1.0) {
                        return BoundReport::invalid(id, Quantity::ExpMoment, "requires p in (0,1)");
                    }
                    match weibull_constant(c_pref, b, p, alpha_w, n0.max(1)) {
                        Ok(v) => BoundReport::ok(id, Quantity::ExpMoment, v).with_params(&[
                            ("gamma", gamma),
                            ("alpha", alpha),
                            ("ell", ell as f64),
                            ("c0", c0),
                            ("p", p),
                        ]),
                        Err(e) => BoundReport::invalid(id, Quantity::ExpMoment, e),
                    }
                }
                (None, Some(k)) => {
                    if k < 2 {
                        return BoundReport::invalid(id, Quantity::Tail, "requires k >= 2");
                    }
                    let (d, dd) = weibull_opt_constants(c_pref, b, alpha_w, n0.max(1));
                    let km1 = (k - 1) as f64;
                    // Exponent uses k (not k-1), matching the stated form.
                    let v = (d + dd * km1.powf(2.0 - alpha_w)) * (-c0 * (k as f64).powf(alpha_w)).exp();
                    BoundReport::ok(id, Quantity::Tail, v).with_params(&[
                        ("gamma", gamma),
                        ("alpha", alpha),
                        ("ell", ell as f64),
                        ("c0", c0),
                        ("k", k as f64),
                        ("d", d),
                        ("D", dd),
                    ])
                }
                (None, None) => BoundReport::invalid(id, Quantity::ExpMoment, "supply p or k"),
            }
        }
        MEstimatorSetting::GartnerEllis {
            hessian_norm,
            alpha,
            margins,
            c_est,
            n0,
            p,
            k,
        } => {
            let id = "m_est_gartner_ellis";
            if let Err(e) = margins.validate() {
                return BoundReport::invalid(id, Quantity::ExpMoment, e);
            }
            if !(hessian_norm > 0.0) || !(c_est > 0.0) {
                return BoundReport::invalid(id, Quantity::ExpMoment, "requires h > 0 and C > 0");
            }
            if !(alpha > 0.0 && alpha < 0.5) {
                return BoundReport::invalid(id, Quantity::ExpMoment, "requires alpha in (0, 1/2)");
            }
            let delta3 = 0.5;
            let c0 = (1.0 - delta3) / 2.0 * hessian_norm;
            let alpha_w = 1.0 - 2.0 * alpha;
            let b = (-c0).exp();
            let p_cap = 0.5 * margins.delta1 * margins.delta2 * (1.0 - delta3) * margins.lambda
                * hessian_norm;
            match (p, k) {
                (Some(p), _) => {
                    if !(p > 0.0 && p < p_cap) {
                        return BoundReport::invalid(
                            id,
                            Quantity::ExpMoment,
                            format!("requires 0 < p < {p_cap}"),
                        );
                    }
                    let p_norm = (p / c0).min(1.0 - 1e-12);
                    match weibull_constant(c_est, b, p_norm, alpha_w, n0.max(1)) {
                        Ok(v) => BoundReport::ok(id, Quantity::ExpMoment, v).with_params(&[
                            ("h", hessian_norm),
                            ("alpha", alpha),
                            ("c0", c0),
                            ("p", p),
                        ]),
                        Err(e) => BoundReport::invalid(id, Quantity::ExpMoment, e),
                    }
                }
                (None, Some(k)) => {
                    if k < 2 {
                        return BoundReport::invalid(id, Quantity::Tail, "requires k >= 2");
                    }
                    let (d, dd) = weibull_opt_constants(c_est, b, alpha_w, n0.max(1));
                    let km1 = (k - 1) as f64;
                    let v = (d + dd * km1.powf(2.0 - alpha_w)) * (-c0 * km1.powf(alpha_w)).exp();
                    BoundReport::ok(id, Quantity::Tail, v).with_params(&[
                        ("h", hessian_norm),
                        ("alpha", alpha),
                        ("c0", c0),
                        ("k", k as f64),
                    ])
                }
                (None, None) => BoundReport::invalid(id, Quantity::ExpMoment, "supply p or k"),
            }
        }
        MEstimatorSetting::AsBounded {
            c_seq,
            eps,
            a,
            ell,
            margins,
            n0,
        } => as_bounded(c_seq, eps, a, ell, margins, n0),
    }
}

#[allow(clippy::too_many_arguments)]
fn cesaro(
    p: f64,
    ell: u64,
    beta_star: &Sequence,
    eps: &Sequence,
    a: &Sequence,
    margins: Margins,
    sup_m_norm: f64,
    n0: u64,
) -> BoundReport {
    let id = "m_est_cesaro";
    if let Err(e) = margins.validate() {
        return BoundReport::invalid(id, Quantity::MomentSa, e);
    }
    if ell == 0 || !(p > 6.0 * ell as f64) {
        return BoundReport::invalid(id, Quantity::MomentSa, "requires ell >= 1 and p > 6 ell");
    }
    if !(sup_m_norm > 0.0) {
        return BoundReport::invalid(id, Quantity::MomentSa, "requires sup ||M|| > 0");
    }
    let ellf = ell as f64;
    let p_eff = p / ellf;
    // Constant chain from the moment inequality:
    //   C_{p/l} · 2^{p/l - 1} · l^{p/(2l) - 1} · max(l, sup||M||^{p/(2l)}).
    let c_chain = dharmadhikari_constant(p_eff)
        * 2.0f64.powf(p_eff - 1.0)
        * ellf.powf(p / (2.0 * ellf) - 1.0)
        * ellf.max(sup_m_norm.powf(p / (2.0 * ellf)));
    // Rate: (max(beta*, 1) + 1) / ((delta1 delta2 lambda eps_m)^{p/l} m^{p/(2l)-1}).
    let beta_cap = match beta_star.family() {
        Family::Constant { c } => beta_star.scale() * c,
        other => {
            return BoundReport::invalid(
                id,
                Quantity::MomentSa,
                format!("beta* must be a constant sequence, got {other:?}"),
            )
        }
    };
    let beta_fac = beta_cap.max(1.0) + 1.0;
    let markov_scale = margins.product().powf(-p_eff);
    let rate = match eps.family() {
        Family::Constant { c } => Sequence::with_scale(
            Family::Power {
                p: -(p / (2.0 * ellf) - 1.0),
            },
            beta_fac * markov_scale / (eps.scale() * c).powf(p_eff),
            n0.max(1),
            Direction::Unconstrained,
        ),
        Family::Power { p: pe } => Sequence::with_scale(
            Family::Power {
                p: -(p / (2.0 * ellf) - 1.0) - pe * p_eff,
            },
            beta_fac * markov_scale / eps.scale().powf(p_eff),
            n0.max(1),
            Direction::Unconstrained,
        ),
        other => {
            return BoundReport::invalid(
                id,
                Quantity::MomentSa,
                format!("unsupported eps family {other:?}"),
            )
        }
    };
    let rate = match rate {
        Ok(r) => r,
        Err(e) => return BoundReport::invalid(id, Quantity::MomentSa, e.to_string()),
    };
    match tradeoff_constant(a, &rate, n0.max(1)) {
        Ok(k) => BoundReport::ok(id, Quantity::MomentSa, c_chain * k.value).with_params(&[
            ("p", p),
            ("ell", ellf),
            ("lambda", margins.lambda),
            ("K", k.value),
            ("C_chain", c_chain),
        ]),
        Err(SeqError::Divergence { index, message }) => BoundReport::invalid(
            id,
            Quantity::MomentSa,
            format!("divergent at index {index}: {message}"),
        ),
        Err(e) => BoundReport::invalid(id, Quantity::MomentSa, e.to_string()),
    }
}

fn as_bounded(
    c_seq: &Sequence,
    eps: &Sequence,
    a: &Sequence,
    ell: u64,
    margins: Margins,
    n0: u64,
) -> BoundReport {
    let id = "m_est_as_bounded";
    if let Err(e) = margins.validate() {
        return BoundReport::invalid(id, Quantity::MomentSa, e);
    }
    if ell == 0 {
        return BoundReport::invalid(id, Quantity::MomentSa, "requires ell >= 1");
    }
    // K = 2 Σ a_n Σ_{m>=n} exp(-(lambda d1 d2)²/(2 ell) · m² eps_m² / r(m)),
    // r(m) = Σ_{i>m} c_i². Envelope r(m) <= C_r/(m+1)^{q_r} as in the Azuma
    // closure, then the exponent grows like m^{2 - 2 gamma + q_r}.
    let (c_r, q_r) = match c_seq.family() {
        Family::Power { p } => {
            let tp = 2.0 * p;
            if tp >= -1.0 {
                return BoundReport::invalid(id, Quantity::MomentSa, "c must be square-summable");
            }
            let n0f = n0.max(1) as f64;
            let fudge = ((n0f + 1.0) / n0f).powf(-tp - 1.0);
            (c_seq.scale() * c_seq.scale() * fudge / (-tp - 1.0), -tp - 1.0)
        }
        other => {
            return BoundReport::invalid(
                id,
                Quantity::MomentSa,
                format!("unsupported increment family {other:?}"),
            )
        }
    };
    let kappa = margins.product().powi(2) / (2.0 * ell as f64);
    let (lambda, s) = match eps.family() {
        Family::Constant { c } => {
            let e2 = (eps.scale() * c).powi(2);
            (kappa * e2 / c_r, 2.0 + q_r - 2.0)
        }
        Family::Power { p: pe } => {
            let e2 = eps.scale() * eps.scale();
            (kappa * e2 / c_r, 2.0 + 2.0 * pe + q_r - 2.0)
        }
        other => {
            return BoundReport::invalid(
                id,
                Quantity::MomentSa,
                format!("unsupported eps family {other:?}"),
            )
        }
    };
    if s <= 0.0 {
        return BoundReport::invalid(
            id,
            Quantity::MomentSa,
            format!("closure exponent m^{s} does not grow; tolerance decays too fast"),
        );
    }
    let fam = if s < 1.0 {
        Family::Weibull {
            base: std::f64::consts::E,
            p: -lambda,
            alpha: s,
        }
    } else {
        // exp(-lambda m^s) <= exp(-lambda m) for m >= 1.
        Family::Exponential {
            base: std::f64::consts::E,
            p: -lambda,
        }
    };
    let rate = match Sequence::with_scale(fam, 2.0, n0.max(1), Direction::Unconstrained) {
        Ok(r) => r,
        Err(e) => return BoundReport::invalid(id, Quantity::MomentSa, e.to_string()),
    };
    match tradeoff_constant(a, &rate, n0.max(1)) {
        Ok(k) => BoundReport::ok(id, Quantity::MomentSa, k.value).with_params(&[
            ("ell", ell as f64),
            ("lambda", margins.lambda),
            ("n0", n0.max(1) as f64),
        ]),
        Err(SeqError::Divergence { index, message }) => BoundReport::invalid(
            id,
            Quantity::MomentSa,
            format!("divergent at index {index}: {message}"),
        ),
        Err(e) => BoundReport::invalid(id, Quantity::MomentSa, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_bounded_reduces_to_baum_katz_bitwise() {
        // ell = 1 must match baum_katz_bound exactly on shared parameters
        // (alpha/p = 4/7 lies in (1/2, 1] and p > 6).
        let (alpha, p, p_tilde, eta, c_est) = (4.0, 7.0, 0.5, 1.0, 2.0);
        let m = m_estimator_bounds(MEstimatorSetting::LpBounded {
            p,
            ell: 1,
            alpha,
            p_tilde,
            eta,
            c_est,
            n0: 1,
            k: None,
        });
        let bk = baum_katz_bound(alpha, p, p_tilde, eta, 1, c_est, false).moment;
        assert!(m.valid && bk.valid);
        assert_eq!(m.value.to_bits(), bk.value.to_bits(), "not bit-identical");
        // Tails too.
        let mt = m_estimator_bounds(MEstimatorSetting::LpBounded {
            p,
            ell: 1,
            alpha,
            p_tilde,
            eta,
            c_est,
            n0: 1,
            k: Some(7),
        });
        let bkt = baum_katz_bound(alpha, p, p_tilde, eta, 1, c_est, false).tail(7);
        assert_eq!(mt.value.to_bits(), bkt.value.to_bits());
    }

    #[test]
    fn exp_moments_specializes_to_lesigne_volny_exponent() {
        // gamma=1, alpha=0, margins (1,1,1): c0 = 1 and the Weibull exponent
        // is k^{1/3}, i.e. exactly the exponential-moment strong-law tail.
        let margins = Margins {
            lambda: 1.0,
            delta1: 1.0 - 1e-12,
            delta2: 1.0 - 1e-12,
        };
        for k in [64u64, 512] {
            let t = m_estimator_bounds(MEstimatorSetting::ExpMoments {
                gamma: 1.0,
                alpha: 0.0,
                ell: 1,
                margins,
                n0: 1,
                p: None,
                k: Some(k),
            });
            assert!(t.valid);
            let c0 = t.params.iter().find(|(n, _)| n == "c0").unwrap().1;
            assert!((c0 - 1.0).abs() < 1e-9, "c0 = {c0}");
            let d = t.params.iter().find(|(n, _)| n == "d").unwrap().1;
            let dd = t.params.iter().find(|(n, _)| n == "D").unwrap().1;
            let km1 = (k - 1) as f64;
            let expect =
                (d + dd * km1.powf(2.0 - 1.0 / 3.0)) * (-c0 * (k as f64).powf(1.0 / 3.0)).exp();
            assert!((t.value - expect).abs() <= 1e-12 * expect);
        }
    }

    #[test]
    fn cesaro_divergent_when_tolerance_decays_too_fast() {
        // ell=2, p=13, beta* constant, eps = n^{-1/4}, a ≡ 1: the reduced
        // rate is m^{1.625 - 2.25} = m^{-0.625}, whose tails already diverge.
        // The brute-force double-sum oracle agrees.
        let beta = Sequence::constant(1.0, 1).unwrap();
        let eps = Sequence::new(Family::Power { p: -0.25 }, 1, Direction::Nonincreasing).unwrap();
        let a = Sequence::constant(1.0, 1).unwrap();
        let r = m_estimator_bounds(MEstimatorSetting::Cesaro {
            p: 13.0,
            ell: 2,
            beta_star: &beta,
            eps: &eps,
            a: &a,
            margins: Margins::new(1.0),
            sup_m_norm: 1.0,
            n0: 1,
        });
        assert!(!r.valid, "rate m^-0.625 has divergent tails");
        let inner = |upto: u64| -> f64 { (1..upto).map(|m| (m as f64).powf(-0.625)).sum() };
        assert!(inner(1 << 20) > 2.0 * inner(1 << 14));
    }

    #[test]
    fn cesaro_matches_double_sum_oracle_in_convergent_regime() {
        // Constant tolerance keeps the Fubini terms at m^{-1.25}: summable,
        // and the oracle's truncation tail has a clean integral correction.
        let beta = Sequence::constant(2.0, 1).unwrap();
        let eps = Sequence::constant(0.5, 1).unwrap();
        let a = Sequence::constant(1.0, 1).unwrap();
        let margins = Margins::new(1.0); // delta1 = delta2 = 1/2
        let r = m_estimator_bounds(MEstimatorSetting::Cesaro {
            p: 13.0,
            ell: 2,
            beta_star: &beta,
            eps: &eps,
            a: &a,
            margins,
            sup_m_norm: 1.0,
            n0: 1,
        });
        assert!(r.valid, "{:?}", r.reason);
        // Oracle: Fubini form of the same assembled series plus an integral
        // bracket for the truncated tail.
        let p_eff = 13.0 / 2.0;
        let chain = dharmadhikari_constant(p_eff)
            * 2.0f64.powf(p_eff - 1.0)
            * 2.0f64.powf(13.0 / 4.0 - 1.0)
            * 2.0f64;
        let beta_fac = 2.0f64.max(1.0) + 1.0;
        let markov = (0.25f64 * 0.5).powf(-p_eff); // (d1 d2 lambda · eps)^{-p/l}
        let m_end = 4_000_000u64;
        let mut oracle = 0.0;
        for m in 1..m_end {
            let mf = m as f64;
            oracle += mf * beta_fac * markov * mf.powf(-(13.0 / 4.0 - 1.0));
        }
        // Tail of sum m^{-1.25} from m_end: between the integrals.
        let e = 1.0 - (13.0 / 4.0 - 1.0);
        let tail_hi = beta_fac * markov * (m_end as f64 - 1.0).powf(e + 1.0) / (-e - 1.0);
        let lo = chain * oracle;
        let hi = chain * (oracle + tail_hi);
        assert!(r.value >= lo * (1.0 - 1e-9), "{} < {lo}", r.value);
        assert!(r.value <= hi * 1.01, "{} vs ({lo}, {hi})", r.value);
    }

    #[test]
    fn as_bounded_constant_eps_finite() {
        let c = Sequence::new(Family::Power { p: -1.0 }, 1, Direction::Nonincreasing).unwrap();
        let eps = Sequence::constant(0.5, 1).unwrap();
        let a = Sequence::constant(1.0, 1).unwrap();
        let r = m_estimator_bounds(MEstimatorSetting::AsBounded {
            c_seq: &c,
            eps: &eps,
            a: &a,
            ell: 2,
            margins: Margins::new(1.0),
            n0: 1,
        });
        assert!(r.valid, "{:?}", r.reason);
        assert!(r.value.is_finite());
    }
}
