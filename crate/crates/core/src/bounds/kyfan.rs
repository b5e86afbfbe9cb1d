//! Transfers between summable Ky Fan rates and a.s.-MDF convergence.

use super::{BoundReport, Quantity};
use crate::sequences::{
    log_weight_tail, tail_sum, tradeoff_constant, Direction, Family, Sequence,
};

#[derive(Debug, Clone)]
pub enum KyFanMode<'a> {
    /// Summable Ky Fan rates imply MDF convergence with the log-corrected
    /// weight; returns the moment bound Σ 1/(n ln^{1+theta}(n+1)).
    KfToMdf { eps: &'a Sequence, theta: f64 },
    /// MDF convergence plus the weight balance eps_n·Σ_{i<=n} a_i >= 1
    /// certifies d_KF(X_n, X) <= eps_n from n0 on. The optional `rate`
    /// checks the double-sum hypothesis when the caller can supply it.
    MdfToKf {
        a: &'a Sequence,
        eps: &'a Sequence,
        rate: Option<&'a Sequence>,
    },
}

/// The canonical weight of the KF-to-MDF direction:
/// a_n = 1 / (n ln^{1+theta}(n+1) Σ_{m≥n} eps_m).
pub fn kf_to_mdf_weight(eps: &Sequence, theta: f64, n: u64) -> Result<f64, String> {
    let tail = tail_sum(eps, n).map_err(|e| e.to_string())?;
    let nf = n as f64;
    Ok(1.0 / (nf * (nf + 1.0).ln().powf(1.0 + theta) * tail.value))
}

pub fn kyfan_corollaries(mode: KyFanMode<'_>, n0: u64) -> BoundReport {
    let n0 = n0.max(1);
    match mode {
        KyFanMode::KfToMdf { eps, theta } => {
            let id = "kyfan_kf_to_mdf";
            if !(theta > 0.0) {
                return BoundReport::invalid(id, Quantity::MomentSa, "requires theta > 0");
            }
            if eps.direction() == Direction::Nondecreasing {
                return BoundReport::invalid(id, Quantity::MomentSa, "eps must be nonincreasing");
            }
            // Summability of eps is the hypothesis.
            if let Err(e) = tail_sum(eps, n0) {
                return BoundReport::invalid(id, Quantity::MomentSa, format!("eps not summable: {e}"));
            }
            match log_weight_tail(1.0, theta, n0) {
                Ok(t) => BoundReport::ok(id, Quantity::MomentSa, t.value).with_params(&[
                    ("theta", theta),
                    ("n0", n0 as f64),
                    ("abs_error_bound", t.abs_error_bound),
                ]),
                Err(e) => BoundReport::invalid(id, Quantity::MomentSa, e.to_string()),
            }
        }
        KyFanMode::MdfToKf { a, eps, rate } => {
            let id = "kyfan_mdf_to_kf";
            if a.direction() == Direction::Nonincreasing {
                return BoundReport::invalid(id, Quantity::KyFan, "weights must be nondecreasing");
            }
            if let Some(rate) = rate {
                if let Err(e) = tradeoff_constant(a, rate, n0) {
                    return BoundReport::invalid(
                        id,
                        Quantity::KyFan,
                        format!("double-sum condition failed: {e}"),
                    );
                }
            }
            match check_balance(a, eps, n0) {
                Ok(()) => {
                    BoundReport::ok(id, Quantity::KyFan, eps.value(n0.max(eps.n0())))
                        .with_params(&[("n0", n0 as f64)])
                }
                Err(BalanceFailure::Violated(idx)) => BoundReport::invalid(
                    id,
                    Quantity::KyFan,
                    format!("balance condition eps_n * sum(a) >= 1 fails first at n = {idx}"),
                ),
                Err(BalanceFailure::Undecided(msg)) => {
                    BoundReport::invalid(id, Quantity::KyFan, msg)
                }
            }
        }
    }
}

enum BalanceFailure {
    Violated(u64),
    Undecided(String),
}

/// Verify eps_n · Σ_{i=start}^n a_i >= 1 for all n >= n0: exhaustive scan on
/// a probe range, then an analytic growth certificate for closed forms.
fn check_balance(a: &Sequence, eps: &Sequence, n0: u64) -> Result<(), BalanceFailure> {
    let start = a.n0();
    let n0 = n0.max(start).max(eps.n0());
    let probe_end = n0 + 100_000;
    let mut acc = 0.0f64;
    for i in start..n0 {
        acc += a.value(i);
    }
    let mut product_at_end = 0.0;
    for n in n0..probe_end {
        acc += a.value(n);
        product_at_end = eps.value(n) * acc;
        if product_at_end < 1.0 {
            return Err(BalanceFailure::Violated(n));
        }
    }
    // Growth certificate: for polynomial pairs the product behaves like
    // n^{rho_a + 1 + p_eps}; nonnegative exponent plus a passing probe range
    // certifies the rest (the product is eventually monotone).
    let exponent = match (a.family(), eps.family()) {
        (Family::Power { p: pa }, Family::Power { p: pe }) => Some(pa + 1.0 + pe),
        (Family::Constant { .. }, Family::Power { p: pe }) => Some(1.0 + pe),
        (Family::Power { p: pa }, Family::LogWeight { .. }) => Some(*pa), // eps ~ 1/(n ln^{1+t})
        (_, Family::Exponential { base, p }) => {
            // Exponentially decaying eps loses to any polynomial weight sum.
            if p * base.ln() < 0.0 {
                Some(-1.0)
            } else {
                Some(1.0)
            }
        }
        _ => None,
    };
    match exponent {
        Some(e) if e > 1e-9 => Ok(()),
        Some(e) if e < -1e-9 => {
            // Will eventually fail; locate the first violation past the probe.
            let mut acc = acc;
            let mut n = probe_end;
            loop {
                acc += a.value(n);
                if eps.value(n) * acc < 1.0 {
                    return Err(BalanceFailure::Violated(n));
                }
                n += 1;
                if n > probe_end + 10_000_000 {
                    return Err(BalanceFailure::Undecided(
                        "balance decays but no violation found within 1e7 indices".into(),
                    ));
                }
            }
        }
        Some(_) => {
            // Neutral exponent: decide by the probe margin.
            if product_at_end >= 1.0 + 1e-9 {
                Ok(())
            } else {
                Err(BalanceFailure::Undecided(format!(
                    "balance product sits at {product_at_end} with neutral growth; cannot certify"
                )))
            }
        }
        None => Err(BalanceFailure::Undecided(format!(
            "no balance certificate for weight {:?} against eps {:?}",
            a.family(),
            eps.family()
        ))),
    }
}
