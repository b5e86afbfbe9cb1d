//! Method-of-moments estimator paths: running ||theta_hat_m - theta0|| for
//! two-parameter families with closed-form moment maps.

use super::rng::path_rng;
use super::{LimitProxy, PathRecord, ProcessAux, ProxyMethod, Series, SimError, Result};
use rand_distr::{Distribution, Gamma, Normal};

/// Two-parameter families with invertible two-moment maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentFamily {
    /// M(mu, sigma) = (mu, mu² + sigma²), sigma > 0.
    Normal { mu: f64, sigma: f64 },
    /// M(shape a, scale s) = (a s, a s² (1 + a)), a, s > 0.
    Gamma { shape: f64, scale: f64 },
}

impl MomentFamily {
    pub fn moment_map(&self) -> (f64, f64) {
        match *self {
            MomentFamily::Normal { mu, sigma } => (mu, mu * mu + sigma * sigma),
            MomentFamily::Gamma { shape, scale } => {
                (shape * scale, shape * scale * scale * (1.0 + shape))
            }
        }
    }

    /// Inverse of the moment map; `None` when (m1, m2) is outside the range.
    pub fn invert(&self, m1: f64, m2: f64) -> Option<(f64, f64)> {
        let var = m2 - m1 * m1;
        match self {
            MomentFamily::Normal { .. } => {
                if var <= 0.0 {
                    None
                } else {
                    Some((m1, var.sqrt()))
                }
            }
            MomentFamily::Gamma { .. } => {
                if var <= 0.0 || m1 <= 0.0 {
                    None
                } else {
                    // a s² = var, a s = m1 -> s = var/m1, a = m1²/var.
                    Some((m1 * m1 / var, var / m1))
                }
            }
        }
    }

    pub fn params(&self) -> (f64, f64) {
        match *self {
            MomentFamily::Normal { mu, sigma } => (mu, sigma),
            MomentFamily::Gamma { shape, scale } => (shape, scale),
        }
    }

    /// Jacobian of the moment map at the family's own parameters (row-major).
    pub fn jacobian(&self) -> [f64; 4] {
        match *self {
            MomentFamily::Normal { mu, sigma } => [1.0, 0.0, 2.0 * mu, 2.0 * sigma],
            MomentFamily::Gamma { shape, scale } => [
                scale,
                shape,
                scale * scale * (1.0 + 2.0 * shape),
                2.0 * shape * scale * (1.0 + shape),
            ],
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            MomentFamily::Normal { sigma, .. } => sigma > 0.0,
            MomentFamily::Gamma { shape, scale } => shape > 0.0 && scale > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(SimError::Invalid {
                process: "moment_process",
                message: format!("parameters outside the open domain: {self:?}"),
            })
        }
    }
}

/// Minimum singular value of a 2x2 matrix (closed form).
pub fn min_singular_2x2(j: &[f64; 4]) -> f64 {
    let (a, b, c, d) = (j[0], j[1], j[2], j[3]);
    let q = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let disc = (q * q - 4.0 * det * det).max(0.0).sqrt();
    (0.5 * (q - disc)).max(0.0).sqrt()
}

/// Sample n observations, track theta_hat_m = M^{-1}(sample moments) and
/// emit ||theta_hat_m - theta0|| per step (infinite sentinel where the
/// moment vector leaves M's range). The analytic limit is 0.
pub fn moment_process(family: MomentFamily, n: u64, seed: u64) -> Result<PathRecord> {
    family.validate()?;
    if n < 1 {
        return Err(SimError::Invalid {
            process: "moment_process",
            message: "requires n >= 1".into(),
        });
    }
    let mut rng = path_rng(seed, 0);
    let (t1, t2) = family.params();
    let mut values = Vec::with_capacity(n as usize);
    let mut s1 = 0.0f64;
    let mut s2 = 0.0f64;
    match family {
        MomentFamily::Normal { mu, sigma } => {
            let dist = Normal::new(mu, sigma).expect("validated");
            for m in 1..=n {
                let y = dist.sample(&mut rng);
                s1 += y;
                s2 += y * y;
                values.push(distance(&family, s1, s2, m, t1, t2));
            }
        }
        MomentFamily::Gamma { shape, scale } => {
            let dist = Gamma::new(shape, scale).expect("validated");
            for m in 1..=n {
                let y = dist.sample(&mut rng);
                s1 += y;
                s2 += y * y;
                values.push(distance(&family, s1, s2, m, t1, t2));
            }
        }
    }
    let jac = family.jacobian();
    Ok(PathRecord {
        process_id: "moment_process",
        seed,
        start_index: 1,
        values: Series::Scalar(values),
        limit_proxy: LimitProxy::Scalar(0.0),
        proxy_method: ProxyMethod::Analytic,
        aux: ProcessAux::MomentProcess {
            min_singular: min_singular_2x2(&jac),
            jacobian: jac,
        },
        truncated_at: None,
    })
}

fn distance(family: &MomentFamily, s1: f64, s2: f64, m: u64, t1: f64, t2: f64) -> f64 {
    let m1 = s1 / m as f64;
    let m2 = s2 / m as f64;
    match family.invert(m1, m2) {
        Some((e1, e2)) => ((e1 - t1).powi(2) + (e2 - t2).powi(2)).sqrt(),
        None => f64::INFINITY, // excursion index with the +inf sentinel
    }
}
