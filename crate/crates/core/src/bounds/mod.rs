//! Closed-form theoretical bounds as numeric evaluators with validity-domain
//! checking, plus the one-dimensional optimizers over free parameters.
//!
//! Every operation produces a [`BoundReport`]. When a precondition of the
//! underlying result fails the report carries `valid = false`, an infinite
//! sentinel value, and the reason; values are never silently clipped.

mod azuma;
mod branching;
mod decay;
mod freedman;
mod gcrp;
mod kyfan;
mod mestimator;
mod slln;

pub use azuma::{
    azuma_closure_rate, azuma_eta, azuma_finite_tail, azuma_special_cases, azuma_suite,
    pythagoras_pointwise, pythagoras_rate, AzumaCase, AzumaSuiteReports,
};
pub use branching::{branching_bounds, BranchingRegime, CriticalExpMode};
pub use decay::{
    decay_moment_bound, decay_tail_bound, weibull_constant, weibull_opt_constants, Decay,
};
pub use freedman::{freedman_bound, freedman_term};
pub use gcrp::gcrp_normalizer;
pub use kyfan::{kf_to_mdf_weight, kyfan_corollaries, KyFanMode};
pub use mestimator::{m_estimator_bounds, MEstimatorSetting, Margins};
pub use slln::{
    baum_katz_bound, dharmadhikari_constant, lesigne_volny_suite, slln_lp_bound, slln_pointwise,
    BaumKatzBound, LvMode,
};

/// What a bound constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// E[S_a(O)]
    MomentSa,
    /// E[O^{p+1}]
    MomentPower,
    /// E[b^{-p O}]-type exponential moments
    ExpMoment,
    /// P(O >= k)
    Tail,
    /// P(d(X_n, X) > eps_n) at a probe index
    PointwiseRate,
    /// Upper bound on the Ky Fan distance
    KyFan,
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::MomentSa => "moment_sa",
            Quantity::MomentPower => "moment_power",
            Quantity::ExpMoment => "exp_moment",
            Quantity::Tail => "tail",
            Quantity::PointwiseRate => "pointwise_rate",
            Quantity::KyFan => "ky_fan",
        }
    }
}

/// One evaluated theoretical bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub bound_id: &'static str,
    pub quantity: Quantity,
    /// Parameter values, in insertion order (kept deterministic for reports).
    pub params: Vec<(String, f64)>,
    /// The bound. `f64::INFINITY` sentinel when `valid` is false.
    pub value: f64,
    pub valid: bool,
    pub reason: Option<String>,
    /// Free parameter the evaluator optimized, and the chosen value.
    pub optimizer: Option<(&'static str, f64)>,
}

impl BoundReport {
    pub fn ok(bound_id: &'static str, quantity: Quantity, value: f64) -> Self {
        debug_assert!(value >= 0.0, "{bound_id} produced negative bound {value}");
        BoundReport {
            bound_id,
            quantity,
            params: Vec::new(),
            value,
            valid: true,
            reason: None,
            optimizer: None,
        }
    }

    pub fn invalid(bound_id: &'static str, quantity: Quantity, reason: impl Into<String>) -> Self {
        BoundReport {
            bound_id,
            quantity,
            params: Vec::new(),
            value: f64::INFINITY,
            valid: false,
            reason: Some(reason.into()),
            optimizer: None,
        }
    }

    pub fn with_params(mut self, params: &[(&str, f64)]) -> Self {
        self.params
            .extend(params.iter().map(|(k, v)| (k.to_string(), *v)));
        self
    }

    pub fn with_optimizer(mut self, name: &'static str, value: f64) -> Self {
        self.optimizer = Some((name, value));
        self
    }

    /// Tail probabilities are clipped to [0, 1] only for display; the raw
    /// value is preserved in `value`.
    pub fn display_value(&self) -> f64 {
        match self.quantity {
            Quantity::Tail | Quantity::PointwiseRate => self.value.min(1.0),
            _ => self.value,
        }
    }
}

/// Golden-section minimization of a unimodal-ish positive objective over an
/// open interval, shrunk by `margin` at each end (validity intervals are
/// open; the boundary is undefined).
pub(crate) fn golden_min(
    mut lo: f64,
    mut hi: f64,
    margin: f64,
    f: impl Fn(f64) -> f64,
) -> (f64, f64) {
    lo += margin;
    hi -= margin;
    if lo >= hi {
        let mid = 0.5 * (lo + hi);
        return (mid, f(mid));
    }
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
        if (hi - lo).abs() < 1e-12 * (1.0 + hi.abs()) {
            break;
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// 2e^{9/8}, the prefactor of the optimized exponential tail.
pub(crate) const TWO_E_NINE_EIGHTHS: f64 = 6.160_433_697_836_062;
