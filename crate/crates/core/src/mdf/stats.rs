//! Small statistics toolbox: Wilson intervals, bootstrap, exact binomial
//! tails, and the Kolmogorov-Smirnov distance.

use crate::simulate::rng::path_rng;
use rand::Rng;

/// z for a one-sided 99% limit.
pub const Z_99: f64 = 2.3263478740408408;
/// z for a two-sided 99% interval (99.5% quantile).
pub const Z_995: f64 = 2.5758293035489004;

/// One-sided Wilson score upper limit for a binomial proportion.
pub fn wilson_upper(successes: u64, n: u64, z: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let center = p + z2 / (2.0 * nf);
    let spread = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center + spread) / (1.0 + z2 / nf)).min(1.0)
}

/// One-sided Wilson score lower limit.
pub fn wilson_lower(successes: u64, n: u64, z: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let center = p + z2 / (2.0 * nf);
    let spread = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center - spread) / (1.0 + z2 / nf)).max(0.0)
}

/// Nonparametric bootstrap percentile bracket (lower, upper) for the mean,
/// seeded deterministically; `q` is the one-sided level (e.g. 0.99).
pub fn bootstrap_mean_bracket(
    values: &[f64],
    resamples: u32,
    q: f64,
    seed: u64,
) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mut rng = path_rng(seed, u64::MAX);
    let n = values.len();
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| {
            let mut acc = 0.0;
            for _ in 0..n {
                acc += values[rng.gen_range(0..n)];
            }
            acc / n as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let hi_idx = ((resamples as f64 * q).ceil() as usize).min(means.len() - 1);
    let lo_idx = (resamples as f64 * (1.0 - q)).floor() as usize;
    (means[lo_idx], means[hi_idx])
}

/// Exact P(Binomial(n, 1/2) >= k), summed in log space.
pub fn binomial_half_tail_at_least(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let ln_half = 0.5f64.ln();
    let mut total = 0.0f64;
    for j in k..=n {
        let ln_c = ln_choose(n, j);
        total += (ln_c + n as f64 * ln_half).exp();
    }
    total.min(1.0)
}

fn ln_choose(n: u64, k: u64) -> f64 {
    crate::specfn::ln_gamma(n as f64 + 1.0)
        - crate::specfn::ln_gamma(k as f64 + 1.0)
        - crate::specfn::ln_gamma((n - k) as f64 + 1.0)
}

/// Kolmogorov-Smirnov distance between a sample and a CDF.
pub fn ks_distance(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in samples.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_brackets_proportion() {
        let up = wilson_upper(10, 1000, Z_99);
        let lo = wilson_lower(10, 1000, Z_99);
        assert!(lo < 0.01 && 0.01 < up);
        assert!(up < 0.025, "upper too loose: {up}");
        assert_eq!(wilson_upper(0, 0, Z_99), 1.0);
        // Zero successes still give a positive upper limit.
        assert!(wilson_upper(0, 1000, Z_99) > 0.0);
    }

    #[test]
    fn binomial_tail_matches_direct_small_n() {
        // P(Bin(4, 1/2) >= 3) = (4 + 1)/16.
        assert!((binomial_half_tail_at_least(4, 3) - 5.0 / 16.0).abs() < 1e-12);
        assert_eq!(binomial_half_tail_at_least(4, 5), 0.0);
        assert!((binomial_half_tail_at_least(4, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn binomial_tail_hundred_sixty() {
        // P(Bin(100, 1/2) >= 60): the sign-martingale oracle value.
        let v = binomial_half_tail_at_least(100, 60);
        assert!((v - 0.028443966820490392).abs() < 1e-12, "{v}");
        assert!(v <= (-2.0f64).exp());
    }

    #[test]
    fn ks_of_exact_uniform_grid() {
        let mut s: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let d = ks_distance(&mut s, |x| x.clamp(0.0, 1.0));
        assert!(d <= 0.0006, "{d}");
    }

    #[test]
    fn bootstrap_brackets_mean() {
        let values: Vec<f64> = (0..500).map(|i| (i % 7) as f64).collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let (lo, hi) = bootstrap_mean_bracket(&values, 500, 0.99, 42);
        assert!(lo <= mean && mean <= hi);
        assert!(hi - lo < 1.0);
        // Deterministic for a fixed seed.
        let again = bootstrap_mean_bracket(&values, 500, 0.99, 42);
        assert_eq!((lo, hi), again);
    }
}
