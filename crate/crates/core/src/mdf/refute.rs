//! The urn model refutation test: a conservative level-alpha test of "the
//! data stem from a known Pólya urn" built from the exponential MDF bound.

use super::{MdfError, Result};
use crate::simulate::rng::path_rng;
use rand::Rng;

/// Pólya-urn model parameters entering the test's constants: C = max |r_ij|,
/// s = row sum, and the start index of the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UrnModel {
    pub c_max: f64,
    pub s: f64,
    pub n0: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefutationOutcome {
    pub k_star: u64,
    pub u_n: u64,
    pub refute: bool,
    /// The bound value at k_star (diagnostic).
    pub bound_at_k_star: f64,
}

/// Exponential-moment bound behind the test:
/// g(k) = 2 e^{-p k} sqrt(1 + b^{n0-1} / (1 - b^{1 - 2p/|ln b|})),
/// b = e^{-s² eps² / (C+1)²}; strictly decreasing in k.
fn test_bound(k: u64, p: f64, b: f64, n0: u64) -> f64 {
    let p_norm = 2.0 * p / -b.ln();
    let moment = 1.0 + b.powf(n0 as f64 - 1.0) / (1.0 - b.powf(1.0 - p_norm));
    2.0 * (-p * k as f64).exp() * moment.sqrt()
}

/// Run the refutation test on an observed scalar sequence y_{n0..N}.
///
/// k* is the smallest k with the bound at most alpha (the bound is monotone
/// in k; solved by bisection); U_N counts |y_j - y_N| > 2 eps. The decision
/// refutes the urn hypothesis iff U_N > k*.
pub fn refutation_test(
    data: &[f64],
    model: UrnModel,
    eps: f64,
    p: f64,
    alpha_level: f64,
) -> Result<RefutationOutcome> {
    if data.len() < 2 {
        return Err(MdfError::Invalid("need at least two observations".into()));
    }
    if !(eps > 0.0) || !(alpha_level > 0.0 && alpha_level < 1.0) {
        return Err(MdfError::Invalid(
            "requires eps > 0 and alpha in (0,1)".into(),
        ));
    }
    if !(model.c_max >= 0.0) || !(model.s > 0.0) {
        return Err(MdfError::Invalid("requires C >= 0 and s > 0".into()));
    }
    let cap1 = model.c_max + 1.0;
    let p_max = model.s * model.s * eps * eps / (2.0 * cap1 * cap1);
    if !(p > 0.0 && p <= p_max) {
        return Err(MdfError::Invalid(format!(
            "requires 0 < p <= s² eps²/(2(C+1)²) = {p_max}"
        )));
    }
    if p >= p_max {
        // The exponential moment is infinite exactly at the boundary.
        return Err(MdfError::Invalid(format!(
            "p = {p} sits at the boundary {p_max}; the moment bound is infinite"
        )));
    }
    let n_last = model.n0 + data.len() as u64 - 1;
    // Absorbed-exponential condition: (N - n0) p <= p_max (N + 1).
    if (n_last - model.n0) as f64 * p > p_max * (n_last as f64 + 1.0) {
        return Err(MdfError::Invalid(format!(
            "N = {n_last} too small: (N - n0) p exceeds s² eps² (N+1)/(2(C+1)²)"
        )));
    }
    let b = (-(model.s * model.s * eps * eps) / (cap1 * cap1)).exp();

    // Bisection for the smallest k with bound <= alpha.
    let mut hi = 1u64;
    while test_bound(hi, p, b, model.n0) > alpha_level {
        hi = hi.saturating_mul(2);
        if hi > 1 << 40 {
            return Err(MdfError::Invalid(
                "bound never reaches the requested level".into(),
            ));
        }
    }
    let mut lo = 0u64; // bound(0) = 2 sqrt(...) > 1 > alpha
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if test_bound(mid, p, b, model.n0) <= alpha_level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let k_star = hi;

    let y_last = *data.last().expect("nonempty");
    let u_n = data
        .iter()
        .filter(|y| (*y - y_last).abs() > 2.0 * eps)
        .count() as u64;

    Ok(RefutationOutcome {
        k_star,
        u_n,
        refute: u_n > k_star,
        bound_at_k_star: test_bound(k_star, p, b, model.n0),
    })
}

/// Observations from a two-color urn whose draw probability is biased by
/// `bias` toward color 1 (the perturbed-dynamics alternative; `bias = 0`
/// recovers the true Pólya urn). Returns the proportion of color 1 after
/// each of `n` draws.
pub fn biased_polya2_observations(
    b_black: u64,
    n_total: u64,
    bias: f64,
    n: u64,
    seed: u64,
) -> Vec<f64> {
    let mut rng = path_rng(seed, 0);
    let mut black = b_black;
    let mut out = Vec::with_capacity(n as usize);
    for step in 0..n {
        let total = n_total + step;
        let p_draw = (black as f64 / total as f64 + bias).clamp(0.0, 1.0);
        if rng.gen::<f64>() < p_draw {
            black += 1;
        }
        out.push(black as f64 / (total + 1) as f64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MODEL: UrnModel = UrnModel {
        c_max: 1.0,
        s: 1.0,
        n0: 1,
    };

    #[test]
    fn constant_data_retains() {
        let data = vec![0.3; 1000];
        let out = refutation_test(&data, MODEL, 0.3, 0.01, 0.05).unwrap();
        assert_eq!(out.u_n, 0);
        assert!(!out.refute);
    }

    #[test]
    fn bound_monotone_and_k_star_positive() {
        let b = (-(0.3f64 * 0.3) / 4.0).exp();
        let mut prev = f64::INFINITY;
        for k in 0..2000u64 {
            let v = test_bound(k, 0.01, b, 1);
            assert!(v < prev);
            prev = v;
        }
        // bound at k = 0 exceeds 1, so k* >= 1 for any alpha < 1.
        assert!(test_bound(0, 0.01, b, 1) > 1.0);
        let out = refutation_test(&vec![0.5; 100_000], MODEL, 0.3, 0.01, 0.05).unwrap();
        assert!(out.k_star >= 1);
        assert!(out.bound_at_k_star <= 0.05);
        // k* is minimal: one step earlier the bound exceeds alpha.
        assert!(test_bound(out.k_star - 1, 0.01, b, 1) > 0.05);
    }

    #[test]
    fn p_range_enforced() {
        let data = vec![0.5; 1000];
        // p_max = 0.09/8 = 0.01125 for eps = 0.3, C = 1, s = 1.
        assert!(refutation_test(&data, MODEL, 0.3, 0.02, 0.05).is_err());
        assert!(refutation_test(&data, MODEL, 0.3, 0.0, 0.05).is_err());
        assert!(refutation_test(&data, MODEL, 0.3, 0.0112, 0.05).is_ok());
    }

    #[test]
    fn drifted_data_refutes() {
        // A deterministic ramp from 0 to 1 has many exceedances of 0.6
        // against its final value once it is long enough.
        let n = 200_000usize;
        let data: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let out = refutation_test(&data, MODEL, 0.3, 0.01, 0.05).unwrap();
        // Indices with |y - 1| > 0.6 are the first 40%.
        assert!(out.u_n > (n as f64 * 0.39) as u64);
        assert!(out.refute);
    }

    #[test]
    fn biased_urn_drifts_upward() {
        let obs = biased_polya2_observations(1, 200, 0.15, 100_000, 5);
        assert!(obs[0] < 0.05);
        assert!(*obs.last().unwrap() > 0.9);
    }
}
