//! The bound catalog: id -> evaluator dispatch and the printable registry.

use crate::config::{build_sequence, get_f64, get_f64_opt, get_u64, get_u64_opt, get_u64_or, SeqSpec};
use mdf_core::bounds::{
    azuma_special_cases, baum_katz_bound, branching_bounds, decay_moment_bound, decay_tail_bound,
    freedman_bound, gcrp_normalizer, kyfan_corollaries, lesigne_volny_suite, m_estimator_bounds,
    pythagoras_rate, slln_lp_bound, AzumaCase, BoundReport, BranchingRegime, CriticalExpMode,
    Decay, KyFanMode, LvMode, MEstimatorSetting, Margins, Quantity,
};
use serde_json::Value;
use std::collections::BTreeMap;

type Params = BTreeMap<String, Value>;

/// One catalog row for `list-bounds`.
pub struct CatalogEntry {
    pub id: &'static str,
    pub summary: &'static str,
    pub params: &'static str,
    pub domain: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { id: "poly_moment", summary: "E[O^(p+1)] under P(A_m) <= c m^-q", params: "c, q, p, n0", domain: "c>0, q>0, 0<=p<q-2" },
    CatalogEntry { id: "poly_tail", summary: "P(O>=k) under polynomial decay (optimize=false, optional p)", params: "c, q, n0, k, p?", domain: "q>2, 0<=p<q-2, k>=1" },
    CatalogEntry { id: "poly_tail_opt", summary: "optimized polynomial tail k^-(q-1) ln k", params: "c, q, n0, k", domain: "k >= e^(1/(q-2)+psi(n0)), falls back below" },
    CatalogEntry { id: "exp_moment", summary: "E[b^(-pO)] under P(A_m) <= c b^m", params: "c, b, p, n0", domain: "b in (0,1), p in (0,1)" },
    CatalogEntry { id: "exp_tail", summary: "2e^(9/8) [k(c b^(n0-1)+1)+1] b^k", params: "c, b, n0, k", domain: "b in (0,1), k>=1" },
    CatalogEntry { id: "weibull_moment", summary: "stretched-exponential moment constant K(b,p,alpha,n0)", params: "c, b, alpha, p, n0", domain: "b,alpha,p in (0,1)" },
    CatalogEntry { id: "weibull_tail", summary: "P(O>=k) under Weibull decay at given p", params: "c, b, alpha, n0, k, p?", domain: "p in (0,1), k>=1" },
    CatalogEntry { id: "weibull_tail_opt", summary: "(d + D(k-1)^(2-alpha)) b^((k-1)^alpha)", params: "c, b, alpha, n0, k", domain: "k>=2" },
    CatalogEntry { id: "pythagoras", summary: "tradeoff constant of the L2 martingale route", params: "pi, eps, a (sequences), n0", domain: "pi summable against eps^-2" },
    CatalogEntry { id: "azuma_case_a", summary: "moment/tail for log-corrected tolerances", params: "C, q, theta, p, n0, k?", domain: "q in (0,1], theta>0, 0<p<theta" },
    CatalogEntry { id: "azuma_case_b", summary: "Weibull regime of the closure, q in (0,1)", params: "C, q, eps, p?|k?, n0", domain: "q in (0,1), eps>0" },
    CatalogEntry { id: "azuma_case_c", summary: "exponential regime at q=1 (urn constants at C=1/3)", params: "C, eps, p?|k?, n0", domain: "moment needs 0<p<min(eps^2/(2C),1)" },
    CatalogEntry { id: "azuma_case_d", summary: "Ky Fan rate sqrt(C W((n+1)^q/C)/(n+1)^q)", params: "C, q, n", domain: "q in (0,1]" },
    CatalogEntry { id: "slln_lp", summary: "C_p K(a, eps) for the L^p strong law", params: "p, beta, eps, a (sequences)", domain: "p>=2" },
    CatalogEntry { id: "baum_katz", summary: "C_est (alpha-1) zeta(alpha-2-ptilde; n0), tail k^-(1+ptilde)", params: "alpha, p, p_tilde, eta, n0, C_est, nested?, k?", domain: "1/2<alpha/p<=1, alpha>3 (nested: >2)" },
    CatalogEntry { id: "lesigne_volny_rate", summary: "e^(-(1-delta)/2 lambda^(2/3) eps^(2/3) n^(1/3))", params: "lambda, delta, eps, n", domain: "lambda>0, delta in (0,1)" },
    CatalogEntry { id: "lesigne_volny_weibull", summary: "O^(1/3)-exponential moment / tail", params: "lambda, delta, eps, p, n0, k?", domain: "0<p<(1-delta)/2 lambda^(2/3) eps^(2/3)" },
    CatalogEntry { id: "lesigne_volny_kyfan", summary: "Ky Fan rate via Lambert W", params: "lambda, delta, n", domain: "n>=1" },
    CatalogEntry { id: "lesigne_volny_as_rate", summary: "E[O] <= sum 1/(n ln^(1+theta)(n+1))", params: "lambda, delta, theta, n0", domain: "theta>0" },
    CatalogEntry { id: "branching_subcritical", summary: "excursion tail above K, m<1", params: "m, v, K, k", domain: "m in (0,1), K>0, k>=1" },
    CatalogEntry { id: "branching_supercritical_tail", summary: "fixed-eps tail, m>1", params: "m, v, eps, k", domain: "m>1, eps>0" },
    CatalogEntry { id: "branching_supercritical_rate", summary: "near-optimal tolerance: tail k^-1 zeta(theta)", params: "m, v, theta, k", domain: "m>1, theta>1" },
    CatalogEntry { id: "branching_critical_moment", summary: "E[S_a(O_1)] with a_n = ln^-2(n+1), tail at k", params: "v, c_inf, k?", domain: "v>0, c_inf>0" },
    CatalogEntry { id: "branching_critical_poly", summary: "(2 c_inf/v) zeta(r-2-4eta-p)", params: "r, v, eta, p, c_inf, k?", domain: "r>3+4eta, 0<=p<r-3-4eta" },
    CatalogEntry { id: "branching_critical_exp", summary: "exponential excursion decay for quadratic thresholds", params: "v, c_inf, mode(sqrt_log|quadratic), delta?, p?|k?", domain: "v>0, c_inf>0" },
    CatalogEntry { id: "freedman", summary: "conditional maximal-threshold moment K/qv_prob", params: "rho, v, qv_prob, n0, u, a (sequences)", domain: "rho>=0, v>0, u nondecreasing divergent" },
    CatalogEntry { id: "kyfan_kf_to_mdf", summary: "summable Ky Fan rates -> MDF moment", params: "theta, n0, eps (sequence)", domain: "theta>0, eps summable" },
    CatalogEntry { id: "kyfan_mdf_to_kf", summary: "balance condition certifies d_KF <= eps_n", params: "n0, a, eps (sequences), rate?", domain: "eps_n sum(a) >= 1" },
    CatalogEntry { id: "m_est_cesaro", summary: "M-estimator moment under Cesaro p-th moments", params: "p, ell, lambda, delta1?, delta2?, sup_m_norm, n0, beta, eps, a", domain: "p > 6 ell" },
    CatalogEntry { id: "m_est_lp_bounded", summary: "M-estimator via the Baum-Katz route", params: "p, ell, alpha, p_tilde, eta, C_est, n0, k?", domain: "p>6 ell, p/(2 ell)<alpha<=p/ell, alpha>3" },
    CatalogEntry { id: "m_est_exp_moments", summary: "M-estimator Weibull tail, exponent (1-2alpha)/3", params: "gamma, alpha, ell, lambda, delta1?, delta2?, n0, p?|k?", domain: "gamma>0, 0<=alpha<1/2" },
    CatalogEntry { id: "m_est_gartner_ellis", summary: "M-estimator tail under a large-deviations upper bound", params: "h, alpha, lambda, delta1?, delta2?, C_est, n0, p?|k?", domain: "h>0, alpha in (0,1/2)" },
    CatalogEntry { id: "m_est_as_bounded", summary: "M-estimator closure for a.s.-bounded data", params: "ell, lambda, delta1?, delta2?, n0, c, eps, a (sequences)", domain: "c square-summable" },
    CatalogEntry { id: "gcrp_normalizer", summary: "phi_n = Gamma ratio, ~ n^alpha", params: "alpha, theta, n", domain: "alpha in (0,1), theta > -alpha" },
];

fn seq_param(params: &Params, key: &str) -> Result<SeqSpec, String> {
    let v = params
        .get(key)
        .ok_or_else(|| format!("missing sequence parameter '{key}'"))?;
    serde_json::from_value(v.clone()).map_err(|e| format!("bad sequence '{key}': {e}"))
}

fn margins(params: &Params) -> Result<Margins, String> {
    let mut m = Margins::new(get_f64(params, "lambda")?);
    if let Some(d1) = get_f64_opt(params, "delta1")? {
        m.delta1 = d1;
    }
    if let Some(d2) = get_f64_opt(params, "delta2")? {
        m.delta2 = d2;
    }
    Ok(m)
}

/// Evaluate a catalog bound. `Err` means the id or parameter set is
/// malformed; range violations come back as invalid reports.
pub fn evaluate_bound(id: &str, params: &Params) -> Result<BoundReport, String> {
    let n0 = get_u64_or(params, "n0", 1)?;
    match id {
        "poly_moment" => Ok(decay_moment_bound(
            Decay::Poly {
                c: get_f64(params, "c")?,
                q: get_f64(params, "q")?,
            },
            get_f64(params, "p")?,
            n0,
        )),
        "exp_moment" => Ok(decay_moment_bound(
            Decay::Exp {
                c: get_f64(params, "c")?,
                b: get_f64(params, "b")?,
            },
            get_f64(params, "p")?,
            n0,
        )),
        "weibull_moment" => Ok(decay_moment_bound(
            Decay::Weibull {
                c: get_f64(params, "c")?,
                b: get_f64(params, "b")?,
                alpha: get_f64(params, "alpha")?,
            },
            get_f64(params, "p")?,
            n0,
        )),
        "poly_tail" | "poly_tail_opt" => Ok(decay_tail_bound(
            Decay::Poly {
                c: get_f64(params, "c")?,
                q: get_f64(params, "q")?,
            },
            n0,
            get_u64(params, "k")?,
            id == "poly_tail_opt",
            get_f64_opt(params, "p")?,
        )),
        "exp_tail" => Ok(decay_tail_bound(
            Decay::Exp {
                c: get_f64(params, "c")?,
                b: get_f64(params, "b")?,
            },
            n0,
            get_u64(params, "k")?,
            false,
            None,
        )),
        "weibull_tail" | "weibull_tail_opt" => Ok(decay_tail_bound(
            Decay::Weibull {
                c: get_f64(params, "c")?,
                b: get_f64(params, "b")?,
                alpha: get_f64(params, "alpha")?,
            },
            n0,
            get_u64(params, "k")?,
            id == "weibull_tail_opt",
            get_f64_opt(params, "p")?,
        )),
        "pythagoras" => {
            let pi = build_sequence(&seq_param(params, "pi")?, "pi")?;
            let eps = build_sequence(&seq_param(params, "eps")?, "eps")?;
            let a = build_sequence(&seq_param(params, "a")?, "a")?;
            Ok(pythagoras_rate(&pi, &eps, &a, n0))
        }
        "azuma_case_a" => Ok(azuma_special_cases(
            get_f64(params, "C")?,
            get_f64(params, "q")?,
            AzumaCase::A {
                theta: get_f64(params, "theta")?,
                p: get_f64(params, "p")?,
                k: get_u64_opt(params, "k")?,
            },
            n0,
        )),
        "azuma_case_b" => Ok(azuma_special_cases(
            get_f64(params, "C")?,
            get_f64(params, "q")?,
            AzumaCase::B {
                eps: get_f64(params, "eps")?,
                p: get_f64_opt(params, "p")?,
                k: get_u64_opt(params, "k")?,
            },
            n0,
        )),
        "azuma_case_c" => Ok(azuma_special_cases(
            get_f64(params, "C")?,
            1.0,
            AzumaCase::C {
                eps: get_f64(params, "eps")?,
                p: get_f64_opt(params, "p")?,
                k: get_u64_opt(params, "k")?,
            },
            n0,
        )),
        "azuma_case_d" => Ok(azuma_special_cases(
            get_f64(params, "C")?,
            get_f64(params, "q")?,
            AzumaCase::D {
                n: get_u64(params, "n")?,
            },
            n0,
        )),
        "slln_lp" => {
            let beta = build_sequence(&seq_param(params, "beta")?, "beta")?;
            let eps = build_sequence(&seq_param(params, "eps")?, "eps")?;
            let a = build_sequence(&seq_param(params, "a")?, "a")?;
            Ok(slln_lp_bound(get_f64(params, "p")?, &beta, &eps, &a))
        }
        "baum_katz" => {
            let b = baum_katz_bound(
                get_f64(params, "alpha")?,
                get_f64(params, "p")?,
                get_f64(params, "p_tilde")?,
                get_f64(params, "eta")?,
                n0,
                get_f64(params, "C_est")?,
                params
                    .get("nested")
                    .and_then(Value::as_bool)
                    .unwrap_or(false),
            );
            Ok(match get_u64_opt(params, "k")? {
                Some(k) => b.tail(k),
                None => b.moment,
            })
        }
        "lesigne_volny_rate" => Ok(lesigne_volny_suite(
            get_f64(params, "lambda")?,
            get_f64(params, "delta")?,
            LvMode::FixedEps {
                eps: get_f64(params, "eps")?,
                n: get_u64(params, "n")?,
            },
            n0,
        )),
        "lesigne_volny_weibull" => Ok(lesigne_volny_suite(
            get_f64(params, "lambda")?,
            get_f64(params, "delta")?,
            LvMode::WeibullMdf {
                eps: get_f64(params, "eps")?,
                p: get_f64(params, "p")?,
                k: get_u64_opt(params, "k")?,
            },
            n0,
        )),
        "lesigne_volny_kyfan" => Ok(lesigne_volny_suite(
            get_f64(params, "lambda")?,
            get_f64(params, "delta")?,
            LvMode::KyFan {
                n: get_u64(params, "n")?,
            },
            n0,
        )),
        "lesigne_volny_as_rate" => Ok(lesigne_volny_suite(
            get_f64(params, "lambda")?,
            get_f64(params, "delta")?,
            LvMode::AsRate {
                theta: get_f64(params, "theta")?,
            },
            n0,
        )),
        "branching_subcritical" => Ok(branching_bounds(BranchingRegime::Subcritical {
            m: get_f64(params, "m")?,
            v: get_f64(params, "v")?,
            cap: get_f64(params, "K")?,
            k: get_u64(params, "k")?,
        })),
        "branching_supercritical_tail" => Ok(branching_bounds(BranchingRegime::SupercriticalTail {
            m: get_f64(params, "m")?,
            v: get_f64(params, "v")?,
            eps: get_f64(params, "eps")?,
            k: get_u64(params, "k")?,
        })),
        "branching_supercritical_rate" => Ok(branching_bounds(BranchingRegime::SupercriticalRate {
            m: get_f64(params, "m")?,
            v: get_f64(params, "v")?,
            theta: get_f64(params, "theta")?,
            k: get_u64(params, "k")?,
        })),
        "branching_critical_moment" => Ok(branching_bounds(BranchingRegime::CriticalMoment {
            v: get_f64(params, "v")?,
            c_inf: get_f64(params, "c_inf")?,
            k: get_u64_opt(params, "k")?,
        })),
        "branching_critical_poly" => Ok(branching_bounds(BranchingRegime::CriticalPoly {
            r: get_f64(params, "r")?,
            v: get_f64(params, "v")?,
            eta: get_f64(params, "eta")?,
            p: get_f64(params, "p")?,
            c_inf: get_f64(params, "c_inf")?,
            k: get_u64_opt(params, "k")?,
        })),
        "branching_critical_exp" => {
            let mode = match params.get("mode").and_then(Value::as_str) {
                None | Some("sqrt_log") => CriticalExpMode::SqrtLog,
                Some("quadratic") => CriticalExpMode::Quadratic {
                    delta: get_f64(params, "delta")?,
                },
                Some(m) => return Err(format!("unknown critical-exp mode '{m}'")),
            };
            Ok(branching_bounds(BranchingRegime::CriticalExp {
                v: get_f64(params, "v")?,
                c_inf: get_f64(params, "c_inf")?,
                mode,
                p: get_f64_opt(params, "p")?,
                k: get_u64_opt(params, "k")?,
            }))
        }
        "freedman" => {
            let u = build_sequence(&seq_param(params, "u")?, "u")?;
            let a = build_sequence(&seq_param(params, "a")?, "a")?;
            Ok(freedman_bound(
                get_f64(params, "rho")?,
                get_f64(params, "v")?,
                &u,
                &a,
                n0,
                get_f64(params, "qv_prob")?,
            ))
        }
        "kyfan_kf_to_mdf" => {
            let eps = build_sequence(&seq_param(params, "eps")?, "eps")?;
            Ok(kyfan_corollaries(
                KyFanMode::KfToMdf {
                    eps: &eps,
                    theta: get_f64(params, "theta")?,
                },
                n0,
            ))
        }
        "kyfan_mdf_to_kf" => {
            let a = build_sequence(&seq_param(params, "a")?, "a")?;
            let eps = build_sequence(&seq_param(params, "eps")?, "eps")?;
            let rate = match params.get("rate") {
                Some(_) => Some(build_sequence(&seq_param(params, "rate")?, "rate")?),
                None => None,
            };
            Ok(kyfan_corollaries(
                KyFanMode::MdfToKf {
                    a: &a,
                    eps: &eps,
                    rate: rate.as_ref(),
                },
                n0,
            ))
        }
        "m_est_cesaro" => {
            let beta = build_sequence(&seq_param(params, "beta")?, "beta")?;
            let eps = build_sequence(&seq_param(params, "eps")?, "eps")?;
            let a = build_sequence(&seq_param(params, "a")?, "a")?;
            Ok(m_estimator_bounds(MEstimatorSetting::Cesaro {
                p: get_f64(params, "p")?,
                ell: get_u64(params, "ell")?,
                beta_star: &beta,
                eps: &eps,
                a: &a,
                margins: margins(params)?,
                sup_m_norm: get_f64(params, "sup_m_norm")?,
                n0,
            }))
        }
        "m_est_lp_bounded" => Ok(m_estimator_bounds(MEstimatorSetting::LpBounded {
            p: get_f64(params, "p")?,
            ell: get_u64(params, "ell")?,
            alpha: get_f64(params, "alpha")?,
            p_tilde: get_f64(params, "p_tilde")?,
            eta: get_f64(params, "eta")?,
            c_est: get_f64(params, "C_est")?,
            n0,
            k: get_u64_opt(params, "k")?,
        })),
        "m_est_exp_moments" => Ok(m_estimator_bounds(MEstimatorSetting::ExpMoments {
            gamma: get_f64(params, "gamma")?,
            alpha: get_f64(params, "alpha")?,
            ell: get_u64(params, "ell")?,
            margins: margins(params)?,
            n0,
            p: get_f64_opt(params, "p")?,
            k: get_u64_opt(params, "k")?,
        })),
        "m_est_gartner_ellis" => Ok(m_estimator_bounds(MEstimatorSetting::GartnerEllis {
            hessian_norm: get_f64(params, "h")?,
            alpha: get_f64(params, "alpha")?,
            margins: margins(params)?,
            c_est: get_f64(params, "C_est")?,
            n0,
            p: get_f64_opt(params, "p")?,
            k: get_u64_opt(params, "k")?,
        })),
        "m_est_as_bounded" => {
            let c = build_sequence(&seq_param(params, "c")?, "c")?;
            let eps = build_sequence(&seq_param(params, "eps")?, "eps")?;
            let a = build_sequence(&seq_param(params, "a")?, "a")?;
            Ok(m_estimator_bounds(MEstimatorSetting::AsBounded {
                c_seq: &c,
                eps: &eps,
                a: &a,
                ell: get_u64(params, "ell")?,
                margins: margins(params)?,
                n0,
            }))
        }
        "gcrp_normalizer" => {
            let alpha = get_f64(params, "alpha")?;
            let theta = get_f64(params, "theta")?;
            let n = get_u64(params, "n")?;
            Ok(match gcrp_normalizer(alpha, theta, n) {
                Ok(v) => {
                    let mut r = BoundReport::ok("gcrp_normalizer", Quantity::KyFan, v);
                    r.quantity = Quantity::PointwiseRate;
                    r.params.push(("alpha".into(), alpha));
                    r.params.push(("theta".into(), theta));
                    r.params.push(("n".into(), n as f64));
                    r
                }
                Err(e) => BoundReport::invalid("gcrp_normalizer", Quantity::PointwiseRate, e),
            })
        }
        other => Err(format!("unknown bound_id '{other}'")),
    }
}

/// Evaluate a tail-capable bound at a specific k (used for tail curves).
pub fn evaluate_tail_at(id: &str, params: &Params, k: u64) -> Result<BoundReport, String> {
    let mut p = params.clone();
    p.insert("k".into(), Value::from(k));
    let rep = evaluate_bound(id, &p)?;
    if rep.valid && rep.quantity != Quantity::Tail {
        return Err(format!(
            "bound '{id}' reports {:?}, not a tail; cannot build a tail curve",
            rep.quantity
        ));
    }
    Ok(rep)
}
