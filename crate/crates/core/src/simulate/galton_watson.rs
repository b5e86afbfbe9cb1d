//! Galton-Watson branching with finite-support offspring laws.

use super::rng::path_rng;
use super::{LimitProxy, PathRecord, ProcessAux, ProxyMethod, Series, SimError, Result};
use rand::Rng;
use rand_distr::{Binomial, Distribution};

/// A finite-support offspring distribution on {0, 1, 2, ...}.
#[derive(Debug, Clone, PartialEq)]
pub struct Offspring {
    /// (value, probability) pairs; probabilities sum to 1.
    support: Vec<(u64, f64)>,
    mean: f64,
    variance: f64,
    /// Cumulative table for inverse-CDF draws.
    cdf: Vec<f64>,
}

impl Offspring {
    pub fn new(support: Vec<(u64, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(SimError::Invalid {
                process: "galton_watson",
                message: "offspring distribution needs finite, nonempty support".into(),
            });
        }
        let mut total = 0.0;
        for &(_, p) in &support {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(SimError::Invalid {
                    process: "galton_watson",
                    message: format!("negative or non-finite mass {p}"),
                });
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(SimError::Invalid {
                process: "galton_watson",
                message: format!("masses sum to {total}, expected 1"),
            });
        }
        let mean: f64 = support.iter().map(|&(k, p)| k as f64 * p).sum();
        let second: f64 = support.iter().map(|&(k, p)| (k * k) as f64 * p).sum();
        let mut cdf = Vec::with_capacity(support.len());
        let mut acc = 0.0;
        for &(_, p) in &support {
            acc += p;
            cdf.push(acc);
        }
        Ok(Offspring {
            support,
            mean,
            variance: second - mean * mean,
            cdf,
        })
    }

    /// Bernoulli(q) on {0,1}: mean q.
    pub fn bernoulli(q: f64) -> Result<Self> {
        Self::new(vec![(0, 1.0 - q), (1, q)])
    }

    /// Two-point law {0 w.p. 1-q, 2 w.p. q}: mean 2q.
    pub fn zero_or_two(q: f64) -> Result<Self> {
        Self::new(vec![(0, 1.0 - q), (2, q)])
    }

    /// Geometric(1/2) on {0..cutoff-1} with the leftover mass 2^{-cutoff}
    /// placed at the single atom cutoff+1, keeping total mass and mean
    /// exactly 1 (critical).
    pub fn critical_geometric_truncated(cutoff: u32) -> Result<Self> {
        let mut support: Vec<(u64, f64)> = (0..cutoff)
            .map(|k| (k as u64, 0.5f64.powi(k as i32 + 1)))
            .collect();
        support.push((cutoff as u64 + 1, 0.5f64.powi(cutoff as i32)));
        Self::new(support)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    fn draw_one(&self, rng: &mut impl Rng) -> u64 {
        let u = rng.gen::<f64>();
        for (i, &c) in self.cdf.iter().enumerate() {
            if u < c {
                return self.support[i].0;
            }
        }
        self.support.last().expect("nonempty").0
    }

    /// Sum of `n` independent offspring draws: per-individual below the
    /// threshold, exact multinomial via sequential binomials above it.
    fn draw_sum(&self, n: u64, rng: &mut impl Rng) -> u64 {
        const DIRECT: u64 = 10_000;
        if n <= DIRECT {
            let mut z = 0u64;
            for _ in 0..n {
                z += self.draw_one(rng);
            }
            return z;
        }
        let mut remaining = n;
        let mut mass_left = 1.0f64;
        let mut z = 0u64;
        for &(value, p) in &self.support {
            if remaining == 0 || mass_left <= 0.0 {
                break;
            }
            let q = (p / mass_left).clamp(0.0, 1.0);
            let count = if q >= 1.0 {
                remaining
            } else {
                Binomial::new(remaining, q)
                    .expect("valid binomial")
                    .sample(rng)
            };
            z += count * value;
            remaining -= count;
            mass_left -= p;
        }
        z
    }
}

/// Which series the measurement layer reads from a branching path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GwObservable {
    /// X_n = Z_n / m^n (the normalized martingale).
    Normalized,
    /// Raw population Z_n.
    Population,
}

/// Simulate Z_0 = 1, Z_{n+1} = sum of Z_n offspring draws.
/// `values` carries X_n = Z_n/m^n; populations sit in aux. Paths hitting
/// `cap` freeze there and carry `truncated_at`.
pub fn galton_watson(
    offspring: &Offspring,
    horizon: u64,
    seed: u64,
    cap: u64,
) -> Result<PathRecord> {
    if cap == 0 {
        return Err(SimError::Invalid {
            process: "galton_watson",
            message: "population cap must be positive".into(),
        });
    }
    let m = offspring.mean();
    let mut rng = path_rng(seed, 0);
    let mut z: u64 = 1;
    let mut populations = Vec::with_capacity(horizon as usize + 1);
    let mut values = Vec::with_capacity(horizon as usize + 1);
    populations.push(z);
    values.push(1.0);
    let mut truncated_at = None;
    for n in 1..=horizon {
        if truncated_at.is_none() {
            z = offspring.draw_sum(z, &mut rng);
            if z > cap {
                truncated_at = Some(n);
                z = cap;
            }
        }
        populations.push(z);
        values.push(if m > 0.0 {
            z as f64 / m.powi(n as i32)
        } else {
            z as f64
        });
    }
    let (proxy, method) = if m > 1.0 {
        (*values.last().expect("nonempty"), ProxyMethod::HorizonValue)
    } else {
        // Subcritical and critical branching die out almost surely.
        (0.0, ProxyMethod::Analytic)
    };
    Ok(PathRecord {
        process_id: "galton_watson",
        seed,
        start_index: 0,
        values: Series::Scalar(values),
        limit_proxy: LimitProxy::Scalar(proxy),
        proxy_method: method,
        aux: ProcessAux::GaltonWatson {
            populations,
            mean: m,
            variance: offspring.variance(),
        },
        truncated_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_single_child() {
        let off = Offspring::new(vec![(1, 1.0)]).unwrap();
        let p = galton_watson(&off, 50, 3, 1 << 20).unwrap();
        assert!(p.values.scalar().unwrap().iter().all(|x| *x == 1.0));
    }

    #[test]
    fn bernoulli_half_moments() {
        let off = Offspring::bernoulli(0.5).unwrap();
        assert!((off.mean() - 0.5).abs() < 1e-15);
        assert!((off.variance() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn zero_or_two_moments() {
        let off = Offspring::zero_or_two(0.6).unwrap();
        assert!((off.mean() - 1.2).abs() < 1e-15);
        assert!((off.variance() - 0.96).abs() < 1e-12);
    }

    #[test]
    fn critical_truncated_geometric_is_exactly_critical() {
        let off = Offspring::critical_geometric_truncated(10).unwrap();
        assert!((off.mean() - 1.0).abs() < 1e-14, "mean {}", off.mean());
        let total: f64 = off.support.iter().map(|&(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_distributions_rejected() {
        assert!(Offspring::new(vec![]).is_err());
        assert!(Offspring::new(vec![(0, 0.5), (1, 0.4)]).is_err());
        assert!(Offspring::new(vec![(0, -0.1), (1, 1.1)]).is_err());
    }

    #[test]
    fn martingale_mean_rough_check() {
        // Ensemble mean of X_n near 1 for the supercritical two-point law.
        let off = Offspring::zero_or_two(0.6).unwrap();
        let horizon = 10;
        let paths = 20_000;
        let mut sums = vec![0.0f64; horizon as usize + 1];
        for i in 0..paths {
            let p = galton_watson(&off, horizon, 1_000 + i, 1 << 30).unwrap();
            for (j, v) in p.values.scalar().unwrap().iter().enumerate() {
                sums[j] += v;
            }
        }
        for (j, s) in sums.iter().enumerate() {
            let mean = s / paths as f64;
            assert!(
                (mean - 1.0).abs() < 0.05,
                "ensemble mean at {j}: {mean}"
            );
        }
    }

    #[test]
    fn binomial_decomposition_matches_law_of_large_population() {
        // A large population advances through the exact multinomial path;
        // check its one-step mean against m·Z.
        let off = Offspring::zero_or_two(0.6).unwrap();
        let mut rng = path_rng(99, 0);
        let z0 = 200_000u64;
        let z1 = off.draw_sum(z0, &mut rng);
        let expect = 1.2 * z0 as f64;
        assert!(
            (z1 as f64 - expect).abs() < 5.0 * (z0 as f64 * 0.96).sqrt() + 1.0,
            "one-step mean off: {z1} vs {expect}"
        );
    }

    #[test]
    fn cap_freezes_and_flags() {
        let off = Offspring::new(vec![(3, 1.0)]).unwrap(); // deterministic tripling
        let p = galton_watson(&off, 30, 1, 1000).unwrap();
        assert!(p.truncated_at.is_some());
        if let ProcessAux::GaltonWatson { populations, .. } = &p.aux {
            assert_eq!(populations.len(), 31);
            assert!(populations.iter().all(|z| *z <= 1000));
        }
    }
}
