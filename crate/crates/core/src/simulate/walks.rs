//! Centered random walks with decaying variance, discrete stochastic
//! integrals, and the plain ±1 sign martingale.

use super::rng::path_rng;
use super::{LimitProxy, PathRecord, ProcessAux, ProxyMethod, Series, SimError, Result};
use rand::Rng;

/// Centered random walk with Var(ΔX_n) = n^{-q}, increments ±n^{-q/2}.
/// aux carries pi_n = sum_{m>n} m^{-q} (tail variances) per step.
pub fn random_walk_decaying(q: f64, horizon: u64, seed: u64) -> Result<PathRecord> {
    if !(q > 3.0) {
        return Err(SimError::Invalid {
            process: "random_walk_decaying",
            message: format!("requires q > 3 (the MDF regime), got {q}"),
        });
    }
    let mut rng = path_rng(seed, 0);
    let mut values = Vec::with_capacity(horizon as usize + 1);
    let mut x = 0.0f64;
    values.push(x);
    for n in 1..=horizon {
        let step = (n as f64).powf(-q / 2.0);
        x += if rng.gen::<bool>() { step } else { -step };
        values.push(x);
    }
    // pi_n = sum_{m=n+1..horizon} m^{-q} + analytic tail past the horizon.
    let mut pi = vec![0.0f64; horizon as usize + 1];
    let beyond = (horizon as f64).powf(1.0 - q) / (q - 1.0);
    let mut acc = beyond;
    for n in (0..horizon as usize).rev() {
        acc += ((n + 1) as f64).powf(-q);
        pi[n] = acc;
    }
    pi[horizon as usize] = beyond;
    let last = *values.last().expect("nonempty");
    Ok(PathRecord {
        process_id: "random_walk_decaying",
        seed,
        start_index: 0,
        values: Series::Scalar(values),
        limit_proxy: LimitProxy::Scalar(last),
        proxy_method: ProxyMethod::HorizonValue,
        aux: ProcessAux::RandomWalk { pi },
        truncated_at: None,
    })
}

/// Predictable integrand rule for the discrete stochastic integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GRule {
    /// g_k = bound_g.
    Constant,
    /// g_k = bound_g · sign(X_{k-1}) (and +bound_g at the start).
    SignOfPast,
}

/// X_n = sum_{k<=n} g_k Δ_k / k with |g_k| <= bound_g, |Δ_k| <= bound_delta
/// (symmetric two-point increments). aux carries c_k = bound_g·bound_delta/k.
pub fn stochastic_integral(
    bound_g: f64,
    bound_delta: f64,
    g_rule: GRule,
    horizon: u64,
    seed: u64,
) -> Result<PathRecord> {
    if !(bound_g > 0.0) || !(bound_delta > 0.0) {
        return Err(SimError::Invalid {
            process: "stochastic_integral",
            message: "requires positive bounds".into(),
        });
    }
    let mut rng = path_rng(seed, 0);
    let mut values = Vec::with_capacity(horizon as usize + 1);
    let mut c = Vec::with_capacity(horizon as usize);
    let mut x = 0.0f64;
    values.push(x);
    for k in 1..=horizon {
        let g = match g_rule {
            GRule::Constant => bound_g,
            GRule::SignOfPast => {
                if x < 0.0 {
                    -bound_g
                } else {
                    bound_g
                }
            }
        };
        debug_assert!(g.abs() <= bound_g);
        let delta = if rng.gen::<bool>() {
            bound_delta
        } else {
            -bound_delta
        };
        x += g * delta / k as f64;
        values.push(x);
        c.push(bound_g * bound_delta / k as f64);
    }
    let last = *values.last().expect("nonempty");
    Ok(PathRecord {
        process_id: "stochastic_integral",
        seed,
        start_index: 0,
        values: Series::Scalar(values),
        limit_proxy: LimitProxy::Scalar(last),
        proxy_method: ProxyMethod::HorizonValue,
        aux: ProcessAux::StochasticIntegral { c },
        truncated_at: None,
    })
}

/// Plain ±1 i.i.d.-sign martingale of length `horizon` (partial sums).
pub fn sign_martingale(horizon: u64, seed: u64) -> PathRecord {
    let mut rng = path_rng(seed, 0);
    let mut values = Vec::with_capacity(horizon as usize + 1);
    let mut x = 0.0f64;
    values.push(x);
    for _ in 1..=horizon {
        x += if rng.gen::<bool>() { 1.0 } else { -1.0 };
        values.push(x);
    }
    PathRecord {
        process_id: "sign_martingale",
        seed,
        start_index: 0,
        values: Series::Scalar(values),
        limit_proxy: LimitProxy::Scalar(0.0),
        proxy_method: ProxyMethod::Analytic,
        aux: ProcessAux::StochasticIntegral { c: vec![] },
        truncated_at: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_increments_are_two_point() {
        let q = 4.0;
        let p = random_walk_decaying(q, 500, 11).unwrap();
        let v = p.values.scalar().unwrap();
        for n in 1..=500usize {
            let step = (v[n] - v[n - 1]).abs();
            let expect = (n as f64).powf(-2.0);
            assert!((step - expect).abs() < 1e-15, "at {n}");
        }
    }

    #[test]
    fn walk_rejects_small_q() {
        assert!(random_walk_decaying(3.0, 10, 0).is_err());
    }

    #[test]
    fn walk_ensemble_mean_and_variance() {
        let q = 4.0;
        let paths = 5_000;
        let n_probe = 3usize;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for seed in 0..paths {
            let p = random_walk_decaying(q, 10, seed).unwrap();
            let v = p.values.scalar().unwrap();
            let d = v[n_probe] - v[n_probe - 1];
            sum += d;
            sumsq += d * d;
        }
        let mean = sum / paths as f64;
        let var = sumsq / paths as f64;
        assert!(mean.abs() < 3.0 * (var / paths as f64).sqrt() + 1e-12);
        // Var(ΔX_n)·n^q = 1 exactly for two-point increments.
        assert!((var * (n_probe as f64).powf(q) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn integral_bounds_and_certificate() {
        let p = stochastic_integral(2.0, 0.5, GRule::SignOfPast, 300, 3).unwrap();
        if let ProcessAux::StochasticIntegral { c } = &p.aux {
            // c_n = 1/n here; sum of squares converges (p-series, exponent 2).
            for (i, ck) in c.iter().enumerate() {
                assert!((ck - 1.0 / (i as f64 + 1.0)).abs() < 1e-15);
            }
            // Pathwise: |X_m - X_n| <= sum_{k>n} c_k for m > n.
            let v = p.values.scalar().unwrap();
            for n in [10usize, 50, 100] {
                let tail: f64 = c[n..].iter().sum();
                for m in n + 1..=300 {
                    assert!((v[m] - v[n]).abs() <= tail + 1e-12);
                }
            }
        } else {
            panic!("expected stochastic-integral aux");
        }
    }

    #[test]
    fn constant_rule_steps_are_reciprocal() {
        let p = stochastic_integral(1.0, 1.0, GRule::Constant, 100, 9).unwrap();
        let v = p.values.scalar().unwrap();
        for k in 1..=100usize {
            assert!(((v[k] - v[k - 1]).abs() - 1.0 / k as f64).abs() < 1e-15);
        }
    }
}
