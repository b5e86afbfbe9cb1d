//! Deviation-frequency counting along a single path.

use super::{MdfError, Result};
use crate::sequences::Sequence;
use crate::simulate::{PathRecord, ProxyMethod};

/// Horizon-to-evaluation margin for horizon-value proxies: O is counted only
/// up to horizon / PROXY_MARGIN so the proxy's own fluctuation stays small
/// relative to the tolerance at the evaluation edge.
pub const PROXY_MARGIN: f64 = 2.5;

/// The deviation count O of one path under a tolerance sequence, with the
/// contributing indices.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapSample {
    pub o: u64,
    pub exceed_indices: Vec<u64>,
    /// Evaluation horizon the count was truncated at.
    pub truncated_at: u64,
    /// Tolerance-sequence reference for reports.
    pub eps_id: String,
}

/// Count indices n in [n0, n_eval] with d(X_n, proxy) > eps_n.
pub fn overlap_count(
    path: &PathRecord,
    eps: &Sequence,
    n0: u64,
    n_eval: u64,
) -> Result<OverlapSample> {
    let horizon = path.horizon();
    let required = match path.proxy_method {
        ProxyMethod::HorizonValue | ProxyMethod::HorizonMean => {
            (n_eval as f64 * PROXY_MARGIN).ceil() as u64
        }
        ProxyMethod::Analytic => n_eval,
    };
    if n_eval < n0 {
        return Err(MdfError::Invalid(format!(
            "evaluation window empty: n0 = {n0} > N_eval = {n_eval}"
        )));
    }
    if horizon < required {
        return Err(MdfError::ProxyMargin {
            n0,
            n_eval,
            required,
            horizon,
        });
    }
    let lo = n0.max(path.start_index).max(eps.n0());
    let mut exceed = Vec::new();
    for n in lo..=n_eval {
        if path.distance_at(n) > eps.value(n) {
            exceed.push(n);
        }
    }
    Ok(OverlapSample {
        o: exceed.len() as u64,
        exceed_indices: exceed,
        truncated_at: n_eval,
        eps_id: format!("{:?}", eps.family()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::Sequence;
    use crate::simulate::{LimitProxy, PathRecord, ProcessAux, ProxyMethod, Series};

    fn hand_path(values: Vec<f64>, proxy: f64, method: ProxyMethod) -> PathRecord {
        PathRecord {
            process_id: "hand",
            seed: 0,
            start_index: 0,
            values: Series::Scalar(values),
            limit_proxy: LimitProxy::Scalar(proxy),
            proxy_method: method,
            aux: ProcessAux::StochasticIntegral { c: vec![] },
            truncated_at: None,
        }
    }

    #[test]
    fn hand_built_count() {
        // proxy 0, values (x0=0) 1, 0.5, 0.1, 0.05 at n = 1..4, eps ≡ 0.2:
        // exceedances at n = 1, 2.
        let p = hand_path(vec![0.0, 1.0, 0.5, 0.1, 0.05], 0.0, ProxyMethod::Analytic);
        let eps = Sequence::constant(0.2, 1).unwrap();
        let s = overlap_count(&p, &eps, 1, 4).unwrap();
        assert_eq!(s.o, 2);
        assert_eq!(s.exceed_indices, vec![1, 2]);
    }

    #[test]
    fn huge_tolerance_counts_nothing() {
        let p = hand_path(vec![0.0, 1.0, -3.0, 2.0], 0.0, ProxyMethod::Analytic);
        let eps = Sequence::constant(1e9, 1).unwrap();
        assert_eq!(overlap_count(&p, &eps, 1, 3).unwrap().o, 0);
    }

    #[test]
    fn tiny_tolerance_counts_everything() {
        let p = hand_path(vec![0.1, 1.0, 3.0, 2.0], 0.0, ProxyMethod::Analytic);
        let eps = Sequence::constant(1e-300, 1).unwrap();
        let s = overlap_count(&p, &eps, 1, 3).unwrap();
        assert_eq!(s.o, 3); // N_eval - n0 + 1
    }

    #[test]
    fn margin_enforced_for_horizon_proxies() {
        let p = hand_path(vec![0.0; 100], 0.0, ProxyMethod::HorizonValue);
        let eps = Sequence::constant(0.5, 1).unwrap();
        // horizon 99 < 2.5 * 50: rejected, error names the requirement.
        let err = overlap_count(&p, &eps, 1, 50).unwrap_err();
        match err {
            MdfError::ProxyMargin { required, .. } => assert_eq!(required, 125),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(overlap_count(&p, &eps, 1, 39).is_ok());
    }

    #[test]
    fn pathwise_monotone_in_eps() {
        // Coupled tolerances on the same path: indices nest.
        let p = crate::simulate::polya2(1, 2, 500, 99).unwrap();
        let eps_small = Sequence::constant(0.05, 1).unwrap();
        let eps_big = Sequence::constant(0.15, 1).unwrap();
        let s_small = overlap_count(&p, &eps_small, 1, 200).unwrap();
        let s_big = overlap_count(&p, &eps_big, 1, 200).unwrap();
        assert!(s_big.o <= s_small.o);
        for idx in &s_big.exceed_indices {
            assert!(s_small.exceed_indices.contains(idx));
        }
    }

    #[test]
    fn strictly_greater_semantics_for_integer_paths() {
        // eps = K - 0.5 realizes {Z >= K} for integer-valued series.
        let p = hand_path(vec![1.0, 4.0, 3.0, 5.0], 0.0, ProxyMethod::Analytic);
        let eps = Sequence::constant(3.5, 1).unwrap();
        let s = overlap_count(&p, &eps, 1, 3).unwrap();
        assert_eq!(s.exceed_indices, vec![1, 3]);
    }
}
