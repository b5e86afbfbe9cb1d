//! Reproducible path simulators for the process families under study.
//!
//! Every simulator is a pure function of its parameters and a 64-bit seed;
//! ensembles derive independent per-path streams from (master seed, path
//! index), so results are bit-identical regardless of worker count or
//! execution order.

mod galton_watson;
mod gcrp;
mod moments;
mod polya;
pub mod rng;
mod walks;

pub use galton_watson::{galton_watson, GwObservable, Offspring};
pub use gcrp::gcrp;
pub use moments::{moment_process, MomentFamily};
pub use polya::{polya2, polya_multicolor, polya_r_tail, ReplacementMatrix};
pub use walks::{random_walk_decaying, sign_martingale, stochastic_integral, GRule};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid parameter in {process}: {message}")]
    Invalid {
        process: &'static str,
        message: String,
    },
    #[error("tenability violation: {0}")]
    Tenability(String),
    #[error("runtime defect in {process} at step {step}: {message}")]
    Defect {
        process: &'static str,
        step: u64,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, SimError>;

/// How the limit proxy of a path was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProxyMethod {
    /// The limit is known analytically (e.g. 0 for subcritical branching).
    Analytic,
    /// The value at the simulation horizon stands in for the limit.
    HorizonValue,
    /// The ensemble/horizon mean stands in for the limit.
    HorizonMean,
}

/// Scalar or vector path values.
#[derive(Debug, Clone, PartialEq)]
pub enum Series {
    Scalar(Vec<f64>),
    /// Row-major (step-major) flattened vectors of fixed dimension.
    Vector { dim: usize, flat: Vec<f64> },
}

impl Series {
    pub fn len(&self) -> usize {
        match self {
            Series::Scalar(v) => v.len(),
            Series::Vector { dim, flat } => flat.len() / dim,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distance of the step-`i` value from a proxy point: absolute value for
    /// scalars, Euclidean norm for vectors.
    pub fn distance(&self, i: usize, proxy: &LimitProxy) -> f64 {
        match (self, proxy) {
            (Series::Scalar(v), LimitProxy::Scalar(p)) => (v[i] - p).abs(),
            (Series::Vector { dim, flat }, LimitProxy::Vector(p)) => {
                let row = &flat[i * dim..(i + 1) * dim];
                row.iter()
                    .zip(p.iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            }
            _ => f64::INFINITY, // mismatched shapes never match a tolerance
        }
    }

    pub fn scalar(&self) -> Option<&[f64]> {
        match self {
            Series::Scalar(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LimitProxy {
    Scalar(f64),
    Vector(Vec<f64>),
}

/// Process-specific per-step data needed by the measurement layer.
#[derive(Debug, Clone, PartialEq)]
pub enum ProcessAux {
    Polya2 {
        /// Beta(B, N-B) parameters of the analytic limit law.
        beta: (f64, f64),
    },
    Multicolor {
        /// Total ball count after every step (linear in the step).
        totals: Vec<u64>,
        row_sum: i64,
    },
    GaltonWatson {
        populations: Vec<u64>,
        mean: f64,
        variance: f64,
    },
    RandomWalk {
        /// Tail variance sums pi_n = sum_{m>n} Var(step m), per step.
        pi: Vec<f64>,
    },
    StochasticIntegral {
        /// Azuma increment bounds c_n = bound_g * bound_delta / n.
        c: Vec<f64>,
    },
    Gcrp {
        /// Final block-size histogram N_n(k), index k-1 -> count.
        block_counts: Vec<u64>,
        /// Table counts V_m per step.
        tables: Vec<u64>,
    },
    MomentProcess {
        /// Jacobian of the moment map at theta0 (row-major 2x2).
        jacobian: [f64; 4],
        /// Its minimum singular value.
        min_singular: f64,
    },
}

/// One simulated trajectory with its limit proxy and per-step metadata.
#[derive(Debug, Clone)]
pub struct PathRecord {
    pub process_id: &'static str,
    pub seed: u64,
    /// First index carried by `values` (step indexing is contiguous).
    pub start_index: u64,
    pub values: Series,
    pub limit_proxy: LimitProxy,
    pub proxy_method: ProxyMethod,
    pub aux: ProcessAux,
    /// Set when the path hit a resource cap before the horizon.
    pub truncated_at: Option<u64>,
}

impl PathRecord {
    /// Horizon = last index covered by `values`.
    pub fn horizon(&self) -> u64 {
        self.start_index + self.values.len() as u64 - 1
    }

    pub fn distance_at(&self, n: u64) -> f64 {
        debug_assert!(n >= self.start_index);
        self.values
            .distance((n - self.start_index) as usize, &self.limit_proxy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_distances() {
        let s = Series::Scalar(vec![1.0, 0.5, 0.25]);
        assert_eq!(s.distance(1, &LimitProxy::Scalar(0.0)), 0.5);
        let v = Series::Vector {
            dim: 2,
            flat: vec![1.0, 0.0, 0.0, 1.0],
        };
        let d = v.distance(0, &LimitProxy::Vector(vec![0.0, 0.0]));
        assert!((d - 1.0).abs() < 1e-15);
    }
}
