//! Empirical estimation of the paper-level implicit constants.

use super::{MdfError, Result};

/// An empirical rate estimate at one index, with its upper confidence limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub n: u64,
    pub p_hat: f64,
    pub ci_upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstantKind {
    /// C with p_n <= C / n^{alpha - 1}: sup ci_upper(p_hat_n) · n^{alpha-1}.
    BaumKatzC { alpha: f64 },
    /// c_inf = sup (1 + c_K(n)) from P(X_n >= K) = 2/(v n) e^{-2K/(v n)} (1 + c_K(n)).
    CriticalCInf { v: f64, threshold: f64 },
}

/// Estimate an implicit constant from empirical rates; the result is an
/// MC-inflated estimate (it uses the upper confidence limits) and is flagged
/// as such by construction.
pub fn estimate_constant(kind: ConstantKind, rates: &[RateEstimate]) -> Result<f64> {
    if rates.len() < 10 {
        return Err(MdfError::Invalid(format!(
            "needs rate estimates at >= 10 indices, got {}",
            rates.len()
        )));
    }
    let sup = rates
        .iter()
        .map(|r| match kind {
            ConstantKind::BaumKatzC { alpha } => r.ci_upper * (r.n as f64).powf(alpha - 1.0),
            ConstantKind::CriticalCInf { v, threshold } => {
                let nf = r.n as f64;
                r.ci_upper * (v * nf / 2.0) * (2.0 * threshold / (v * nf)).exp()
            }
        })
        .fold(0.0f64, f64::max);
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_rates_recover_c() {
        // p_hat_n = C / n^{alpha-1} with ci_upper = p_hat: returns C exactly.
        let c = 3.5;
        let alpha = 4.0;
        let rates: Vec<RateEstimate> = (1..=20)
            .map(|n| {
                let p = c / (n as f64).powf(alpha - 1.0);
                RateEstimate {
                    n,
                    p_hat: p,
                    ci_upper: p,
                }
            })
            .collect();
        let est = estimate_constant(ConstantKind::BaumKatzC { alpha }, &rates).unwrap();
        assert!((est - c).abs() < 1e-12);
    }

    #[test]
    fn zero_rates_give_zero() {
        let rates: Vec<RateEstimate> = (1..=12)
            .map(|n| RateEstimate {
                n,
                p_hat: 0.0,
                ci_upper: 0.0,
            })
            .collect();
        let est = estimate_constant(ConstantKind::BaumKatzC { alpha: 4.0 }, &rates).unwrap();
        assert_eq!(est, 0.0);
    }

    #[test]
    fn too_few_indices_rejected() {
        let rates: Vec<RateEstimate> = (1..=5)
            .map(|n| RateEstimate {
                n,
                p_hat: 0.1,
                ci_upper: 0.2,
            })
            .collect();
        assert!(estimate_constant(ConstantKind::BaumKatzC { alpha: 4.0 }, &rates).is_err());
    }

    #[test]
    fn critical_cinf_scaling() {
        // p_hat = (2/(v n)) e^{-2K/(v n)} (1 + c): recovers 1 + c.
        let (v, k, c) = (2.0, 1.0, 0.35);
        let rates: Vec<RateEstimate> = (5..=30)
            .map(|n| {
                let nf = n as f64;
                let p = 2.0 / (v * nf) * (-2.0 * k / (v * nf)).exp() * (1.0 + c);
                RateEstimate {
                    n,
                    p_hat: p,
                    ci_upper: p,
                }
            })
            .collect();
        let est =
            estimate_constant(ConstantKind::CriticalCInf { v, threshold: k }, &rates).unwrap();
        assert!((est - (1.0 + c)).abs() < 1e-12);
    }
}
