//! Monte Carlo measurement of deviation-frequency statistics, empirical
//! Ky Fan distances, bound-vs-empirical verdicts, and the urn model
//! refutation test.

mod estimate;
mod kyfan;
mod montecarlo;
mod overlap;
mod refute;
pub mod stats;

pub use estimate::{estimate_constant, ConstantKind, RateEstimate};
pub use kyfan::kyfan_empirical;
pub use montecarlo::{mc_overlap, simulate_path, McConfig, McOverlapReport, SimSpec, TailPoint};
pub use overlap::{overlap_count, OverlapSample, PROXY_MARGIN};
pub use refute::{biased_polya2_observations, refutation_test, RefutationOutcome, UrnModel};

use crate::bounds::{BoundReport, Quantity};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MdfError {
    #[error("{0}")]
    Invalid(String),
    #[error("evaluation window [{n0}, {n_eval}] needs a horizon of at least {required} (path has {horizon})")]
    ProxyMargin {
        n0: u64,
        n_eval: u64,
        required: u64,
        horizon: u64,
    },
    #[error("quantity mismatch: bound constrains {bound:?}, empirical measures {empirical:?}")]
    QuantityMismatch {
        bound: &'static str,
        empirical: &'static str,
    },
    #[error(transparent)]
    Sim(#[from] crate::simulate::SimError),
    #[error(transparent)]
    Seq(#[from] crate::sequences::SeqError),
}

pub type Result<T> = std::result::Result<T, MdfError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::Pass => "pass",
            VerdictStatus::Fail => "fail",
            VerdictStatus::Inconclusive => "inconclusive",
        }
    }
}

/// Empirical estimate paired against a bound.
#[derive(Debug, Clone, Copy)]
pub struct EmpiricalEstimate {
    pub quantity: Quantity,
    pub value: f64,
    /// One-sided upper confidence limit (99% Wilson for tails, bootstrap for
    /// moments), already inflated by any proxy-contamination slack.
    pub ci_upper: f64,
    /// Lower confidence limit, used only to declare honest failures.
    pub ci_lower: f64,
    pub n_paths: u64,
}

/// Outcome of checking one bound against Monte Carlo evidence.
#[derive(Debug, Clone)]
pub struct VerificationVerdict {
    pub bound: BoundReport,
    pub empirical: f64,
    pub ci_upper: f64,
    pub status: VerdictStatus,
    pub n_paths: u64,
    pub runtime: std::time::Duration,
}

/// Width guard: estimates wider than this fraction of the bound are treated
/// as evidence-free rather than passes.
pub const MAX_WIDTH_FRACTION: f64 = 0.5;

/// Compare an empirical estimate against a theoretical bound. Never declares
/// `Fail` when the confidence interval still overlaps the bound.
pub fn verify(bound: &BoundReport, empirical: &EmpiricalEstimate) -> Result<VerificationVerdict> {
    if bound.quantity != empirical.quantity {
        return Err(MdfError::QuantityMismatch {
            bound: bound.quantity.as_str(),
            empirical: empirical.quantity.as_str(),
        });
    }
    let status = if !bound.valid || !bound.value.is_finite() {
        VerdictStatus::Inconclusive
    } else if empirical.ci_upper <= bound.value {
        let width = empirical.ci_upper - empirical.value;
        if width > MAX_WIDTH_FRACTION * bound.value && empirical.value > bound.value {
            VerdictStatus::Inconclusive
        } else {
            VerdictStatus::Pass
        }
    } else if empirical.ci_lower > bound.value {
        VerdictStatus::Fail
    } else {
        VerdictStatus::Inconclusive
    };
    Ok(VerificationVerdict {
        bound: bound.clone(),
        empirical: empirical.value,
        ci_upper: empirical.ci_upper,
        status,
        n_paths: empirical.n_paths,
        runtime: std::time::Duration::ZERO,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn est(value: f64, lo: f64, hi: f64) -> EmpiricalEstimate {
        EmpiricalEstimate {
            quantity: Quantity::Tail,
            value,
            ci_upper: hi,
            ci_lower: lo,
            n_paths: 1000,
        }
    }

    #[test]
    fn verdict_rules() {
        let good = BoundReport::ok("x", Quantity::Tail, 0.05);
        // ci upper below the bound: pass.
        let v = verify(&good, &est(0.005, 0.001, 0.01)).unwrap();
        assert_eq!(v.status, VerdictStatus::Pass);
        // ci lower above the bound: fail.
        let v = verify(&good, &est(0.2, 0.15, 0.25)).unwrap();
        assert_eq!(v.status, VerdictStatus::Fail);
        // straddling: inconclusive.
        let v = verify(&good, &est(0.04, 0.02, 0.08)).unwrap();
        assert_eq!(v.status, VerdictStatus::Inconclusive);
        // invalid bound: inconclusive.
        let bad = BoundReport::invalid("x", Quantity::Tail, "out of range");
        let v = verify(&bad, &est(0.005, 0.001, 0.01)).unwrap();
        assert_eq!(v.status, VerdictStatus::Inconclusive);
        // mismatched quantities error.
        let moment = BoundReport::ok("x", Quantity::MomentSa, 1.0);
        assert!(verify(&moment, &est(0.1, 0.0, 0.2)).is_err());
    }
}
