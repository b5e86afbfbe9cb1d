//! Ensemble Monte Carlo measurement of the deviation frequency.

use super::overlap::overlap_count;
use super::stats::{bootstrap_mean_bracket, wilson_lower, wilson_upper, Z_99};
use super::{MdfError, Result};
use crate::sequences::{PartialSum, Sequence};
use crate::simulate::rng::{path_rng, sub_seed};
use crate::simulate::{
    galton_watson, gcrp, moment_process, polya2, polya_multicolor, polya_r_tail,
    random_walk_decaying, sign_martingale, stochastic_integral, GRule, GwObservable, LimitProxy,
    MomentFamily, Offspring, PathRecord, ProcessAux, ProxyMethod, ReplacementMatrix, Series,
};
use rand::Rng;
use rayon::prelude::*;

/// A simulator specification the Monte Carlo layer can drive.
#[derive(Debug, Clone)]
pub enum SimSpec {
    Polya2 {
        b: u64,
        n: u64,
    },
    Multicolor {
        matrix: Vec<Vec<i64>>,
        initial: Vec<u64>,
    },
    GaltonWatson {
        offspring: Vec<(u64, f64)>,
        cap: u64,
        observable: GwObservable,
    },
    RandomWalk {
        q: f64,
    },
    StochasticIntegral {
        bound_g: f64,
        bound_delta: f64,
        sign_rule: bool,
    },
    Gcrp {
        alpha: f64,
        theta: f64,
    },
    MomentProcess {
        family: MomentFamily,
    },
    SignMartingale,
    /// Synthetic nested family A_n = {U <= 2^{-n}}: values are indicators,
    /// so any tolerance below 1 counts exactly the nested events.
    NestedSynthetic,
}

/// Simulate one path of the specified process.
pub fn simulate_path(spec: &SimSpec, horizon: u64, seed: u64) -> Result<PathRecord> {
    let rec = match spec {
        SimSpec::Polya2 { b, n } => polya2(*b, *n, horizon, seed)?,
        SimSpec::Multicolor { matrix, initial } => {
            let r = ReplacementMatrix::new(matrix.clone())?;
            polya_multicolor(&r, initial, horizon, seed)?
        }
        SimSpec::GaltonWatson {
            offspring,
            cap,
            observable,
        } => {
            let off = Offspring::new(offspring.clone())?;
            let mut rec = galton_watson(&off, horizon, seed, *cap)?;
            if *observable == GwObservable::Population {
                if let ProcessAux::GaltonWatson { populations, .. } = &rec.aux {
                    rec.values = Series::Scalar(populations.iter().map(|z| *z as f64).collect());
                    rec.limit_proxy = LimitProxy::Scalar(0.0);
                    rec.proxy_method = ProxyMethod::Analytic;
                }
            }
            rec
        }
        SimSpec::RandomWalk { q } => random_walk_decaying(*q, horizon, seed)?,
        SimSpec::StochasticIntegral {
            bound_g,
            bound_delta,
            sign_rule,
        } => stochastic_integral(
            *bound_g,
            *bound_delta,
            if *sign_rule {
                GRule::SignOfPast
            } else {
                GRule::Constant
            },
            horizon,
            seed,
        )?,
        SimSpec::Gcrp { alpha, theta } => gcrp(*alpha, *theta, horizon.max(1), seed)?,
        SimSpec::MomentProcess { family } => moment_process(*family, horizon.max(1), seed)?,
        SimSpec::SignMartingale => sign_martingale(horizon, seed),
        SimSpec::NestedSynthetic => nested_synthetic(horizon, seed),
    };
    Ok(rec)
}

fn nested_synthetic(horizon: u64, seed: u64) -> PathRecord {
    let mut rng = path_rng(seed, 0);
    let u: f64 = rng.gen();
    let mut values = Vec::with_capacity(horizon as usize + 1);
    values.push(0.0); // index 0 is outside the family
    for n in 1..=horizon {
        values.push(if u <= 0.5f64.powi(n as i32) { 1.0 } else { 0.0 });
    }
    PathRecord {
        process_id: "nested_synthetic",
        seed,
        start_index: 0,
        values: Series::Scalar(values),
        limit_proxy: LimitProxy::Scalar(0.0),
        proxy_method: ProxyMethod::Analytic,
        aux: ProcessAux::StochasticIntegral { c: vec![] },
        truncated_at: None,
    }
}

/// Upper bound on the probability that the horizon proxy sits farther than
/// eps/2 from the true limit at the evaluation edge (the process's own
/// closure bound); `None` when no bound is available.
fn proxy_contamination(spec: &SimSpec, path_like: &PathRecord, eps_at_edge: f64, n_eval: u64) -> Option<f64> {
    let half = eps_at_edge / 2.0;
    match spec {
        SimSpec::Polya2 { n, .. } => {
            // Azuma closure with the urn's printed tail r(n) <= 3/n, two-sided.
            let r = polya_r_tail(*n, n_eval);
            Some((2.0 * (-half * half / (2.0 * r)).exp()).min(1.0))
        }
        SimSpec::Multicolor { matrix, initial } => {
            let c = matrix
                .iter()
                .flatten()
                .map(|e| e.abs())
                .max()
                .unwrap_or(0) as f64;
            let s: i64 = matrix.first().map(|r| r.iter().sum()).unwrap_or(0);
            if s <= 0 {
                return None;
            }
            let t0: u64 = initial.iter().sum();
            // r(n) <= ((C+1)/s)^2 / n per the increment bound; dimension-many
            // one-sided closures union-bounded.
            let dim = matrix.len() as f64;
            let r = ((c + 1.0) / s as f64).powi(2) / (n_eval.max(1) as f64 + t0 as f64 / s as f64);
            Some((2.0 * dim * (-half * half / (2.0 * r)).exp()).min(1.0))
        }
        SimSpec::GaltonWatson { offspring, observable, .. } => {
            if *observable == GwObservable::Population {
                return Some(0.0); // analytic proxy
            }
            let off = Offspring::new(offspring.clone()).ok()?;
            let m = off.mean();
            if m > 1.0 {
                // L2 tail: E[(X_inf - X_n)^2] = v m^{-n}/(m^2 - m).
                let v = off.variance();
                let var_tail = v * m.powf(-(n_eval as f64)) / (m * m - m);
                Some((var_tail / (half * half)).min(1.0))
            } else {
                Some(0.0) // analytic proxy (extinction)
            }
        }
        SimSpec::RandomWalk { .. } => {
            if let ProcessAux::RandomWalk { pi } = &path_like.aux {
                let idx = (n_eval as usize).min(pi.len() - 1);
                Some((pi[idx] / (half * half)).min(1.0))
            } else {
                None
            }
        }
        SimSpec::StochasticIntegral {
            bound_g,
            bound_delta,
            ..
        } => {
            // r(n) = (g·delta)^2 sum_{k>n} k^{-2} <= (g·delta)^2 / n.
            let r = (bound_g * bound_delta).powi(2) / n_eval.max(1) as f64;
            Some((2.0 * (-half * half / (2.0 * r)).exp()).min(1.0))
        }
        SimSpec::MomentProcess { .. } | SimSpec::NestedSynthetic | SimSpec::SignMartingale => {
            Some(0.0) // analytic proxies
        }
        SimSpec::Gcrp { .. } => None, // no closure bound available
    }
}

/// Monte Carlo configuration.
#[derive(Debug, Clone)]
pub struct McConfig {
    pub n_paths: u64,
    pub horizon: u64,
    pub n0: u64,
    pub n_eval: u64,
    pub master_seed: u64,
    /// Optional total-step budget; paths beyond floor(budget/horizon) are
    /// not run and the report flags partial completion.
    pub step_budget: Option<u64>,
    /// Cap on reported tail indices.
    pub k_cap: u64,
}

impl McConfig {
    pub fn new(n_paths: u64, horizon: u64, n0: u64, n_eval: u64, master_seed: u64) -> Self {
        McConfig {
            n_paths,
            horizon,
            n0,
            n_eval,
            master_seed,
            step_budget: None,
            k_cap: 200,
        }
    }
}

/// One reported tail index.
#[derive(Debug, Clone, Copy)]
pub struct TailPoint {
    pub k: u64,
    pub exceeding_paths: u64,
    pub tail_hat: f64,
    pub ci_upper: f64,
    pub ci_lower: f64,
}

/// Ensemble estimates of E[S_a(O)] and the tail P(O >= k).
#[derive(Debug, Clone)]
pub struct McOverlapReport {
    pub e_hat_sa: f64,
    /// Bootstrap percentile bracket for the mean of S_a(O) (heuristic range).
    pub e_sa_ci: (f64, f64),
    /// Flag: the moment CI uses a bootstrap, not an analytic range.
    pub heuristic_ci: bool,
    pub tails: Vec<TailPoint>,
    /// Histogram of O over the completed paths.
    pub histogram: Vec<(u64, u64)>,
    pub completed_paths: u64,
    pub requested_paths: u64,
    /// Closure-probability slack added to verdicts for horizon proxies.
    pub proxy_slack: Option<f64>,
    pub mean_o: f64,
}

impl McOverlapReport {
    /// Tail estimate at k as an EmpiricalEstimate (includes proxy slack).
    pub fn tail_estimate(&self, k: u64) -> Option<super::EmpiricalEstimate> {
        let slack = self.proxy_slack.unwrap_or(0.0);
        self.tails.iter().find(|t| t.k == k).map(|t| super::EmpiricalEstimate {
            quantity: crate::bounds::Quantity::Tail,
            value: t.tail_hat,
            ci_upper: (t.ci_upper + slack).min(1.0),
            ci_lower: t.ci_lower,
            n_paths: self.completed_paths,
        })
    }

    /// Moment estimate E[S_a(O)] as an EmpiricalEstimate.
    pub fn moment_estimate(&self) -> super::EmpiricalEstimate {
        super::EmpiricalEstimate {
            quantity: crate::bounds::Quantity::MomentSa,
            value: self.e_hat_sa,
            ci_upper: self.e_sa_ci.1,
            ci_lower: self.e_sa_ci.0,
            n_paths: self.completed_paths,
        }
    }
}

/// Run `n_paths` independent paths, count overlaps under `eps`, and estimate
/// E[S_a(O)] plus the tail curve. Deterministic for a fixed master seed
/// regardless of the rayon worker count (per-path streams, ordered reduce).
pub fn mc_overlap(
    spec: &SimSpec,
    eps: &Sequence,
    a: &Sequence,
    cfg: &McConfig,
) -> Result<McOverlapReport> {
    if cfg.n_paths < 100 {
        return Err(MdfError::Invalid(format!(
            "needs at least 100 paths, got {}",
            cfg.n_paths
        )));
    }
    let ps = PartialSum::new(a.clone(), cfg.n0.max(a.n0()))
        .map_err(MdfError::Seq)?;
    let run_paths = match cfg.step_budget {
        Some(b) => (b / cfg.horizon.max(1)).min(cfg.n_paths),
        None => cfg.n_paths,
    };
    if run_paths == 0 {
        return Err(MdfError::Invalid("step budget admits zero paths".into()));
    }

    // Per-path overlap counts, order fixed by path index.
    let counts: Vec<Result<u64>> = (0..run_paths)
        .into_par_iter()
        .map(|i| {
            let seed = sub_seed(cfg.master_seed, i);
            let path = simulate_path(spec, cfg.horizon, seed)?;
            let s = overlap_count(&path, eps, cfg.n0, cfg.n_eval)?;
            Ok(s.o)
        })
        .collect();
    let mut os = Vec::with_capacity(run_paths as usize);
    for c in counts {
        os.push(c?);
    }

    // Sequential, associative-commutative aggregation.
    let mut histogram = std::collections::BTreeMap::<u64, u64>::new();
    for &o in &os {
        *histogram.entry(o).or_insert(0) += 1;
    }
    let sa_values: Vec<f64> = os.iter().map(|&o| ps.value(o).value).collect();
    let e_hat_sa = sa_values.iter().sum::<f64>() / run_paths as f64;
    let e_sa_ci = bootstrap_mean_bracket(
        &sa_values,
        1000,
        0.99,
        sub_seed(cfg.master_seed, u64::MAX - 1),
    );
    let mean_o = os.iter().sum::<u64>() as f64 / run_paths as f64;

    // Tail curve: k up to the smallest k with fewer than 5 exceeding paths,
    // capped. Exceedance counts are nonincreasing in k, so one pass works.
    let mut tails = Vec::new();
    let mut k = 1u64;
    loop {
        let exceeding = os.iter().filter(|&&o| o >= k).count() as u64;
        tails.push(TailPoint {
            k,
            exceeding_paths: exceeding,
            tail_hat: exceeding as f64 / run_paths as f64,
            ci_upper: wilson_upper(exceeding, run_paths, Z_99),
            ci_lower: wilson_lower(exceeding, run_paths, Z_99),
        });
        if exceeding < 5 || k >= cfg.k_cap {
            break;
        }
        k += 1;
    }

    // Proxy contamination at the evaluation edge.
    let probe = simulate_path(spec, cfg.horizon, sub_seed(cfg.master_seed, 0))?;
    let proxy_slack = proxy_contamination(spec, &probe, eps.value(cfg.n_eval.max(eps.n0())), cfg.n_eval);

    Ok(McOverlapReport {
        e_hat_sa,
        e_sa_ci,
        heuristic_ci: true,
        tails,
        histogram: histogram.into_iter().collect(),
        completed_paths: run_paths,
        requested_paths: cfg.n_paths,
        proxy_slack,
        mean_o,
    })
}
