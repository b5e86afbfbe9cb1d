//! Generalized Chinese restaurant process: partition growth with the
//! (alpha, theta) seating rule, normalized table counts V_m / phi_m.

use super::rng::path_rng;
use super::{LimitProxy, PathRecord, ProcessAux, ProxyMethod, Series, SimError, Result};
use crate::bounds::gcrp_normalizer;
use rand::Rng;

/// Simulate n customers. values[m-1] = V_m / phi_m for m = 1..n; aux carries
/// the final block-size histogram and the V_m series. The two counting
/// identities (sum of block sizes = m, number of blocks = V_m) are asserted
/// at every step.
pub fn gcrp(alpha: f64, theta: f64, n: u64, seed: u64) -> Result<PathRecord> {
    if !(alpha > 0.0 && alpha < 1.0) || !(theta > -alpha) {
        return Err(SimError::Invalid {
            process: "gcrp",
            message: format!("requires alpha in (0,1) and theta > -alpha, got ({alpha}, {theta})"),
        });
    }
    if n < 1 {
        return Err(SimError::Invalid {
            process: "gcrp",
            message: "requires n >= 1".into(),
        });
    }
    let mut rng = path_rng(seed, 0);
    let mut sizes: Vec<u64> = vec![1]; // customer 1 sits by herself
    let mut occupied: u64 = 1;
    let mut values = Vec::with_capacity(n as usize);
    let mut tables = Vec::with_capacity(n as usize);
    values.push(1.0 / gcrp_normalizer(alpha, theta, 1).expect("valid params"));
    tables.push(1);

    for m in 1..n {
        // Seat customer m+1: table i with prob (|A_i| - alpha)/(m + theta),
        // a new table with prob (alpha V_m + theta)/(m + theta).
        let mf = m as f64;
        let denom = mf + theta;
        let new_table_mass = alpha * occupied as f64 + theta;
        // Probability-mass identity: sum_i (|A_i| - alpha) + alpha V + theta
        // = m + theta, using sum |A_i| = m.
        let mass_check =
            (mf - alpha * occupied as f64) + new_table_mass;
        if (mass_check - denom).abs() > 1e-12 * denom.abs() {
            return Err(SimError::Defect {
                process: "gcrp",
                step: m,
                message: format!("seating masses sum to {mass_check}, expected {denom}"),
            });
        }
        let u = rng.gen::<f64>() * denom;
        if u < new_table_mass {
            sizes.push(1);
            occupied += 1;
        } else {
            let mut acc = new_table_mass;
            let mut seated = false;
            for s in sizes.iter_mut() {
                acc += *s as f64 - alpha;
                if u < acc {
                    *s += 1;
                    seated = true;
                    break;
                }
            }
            if !seated {
                // Floating slack at the very top of the interval.
                *sizes.last_mut().expect("nonempty") += 1;
            }
        }
        let total: u64 = sizes.iter().sum();
        if total != m + 1 || sizes.len() as u64 != occupied {
            return Err(SimError::Defect {
                process: "gcrp",
                step: m + 1,
                message: format!(
                    "counting identity broke: sum sizes {total} (want {}), blocks {} (want {occupied})",
                    m + 1,
                    sizes.len()
                ),
            });
        }
        let phi = gcrp_normalizer(alpha, theta, m + 1).expect("valid params");
        values.push(occupied as f64 / phi);
        tables.push(occupied);
    }

    let mut block_counts = Vec::new();
    for &s in &sizes {
        let idx = (s - 1) as usize;
        if block_counts.len() <= idx {
            block_counts.resize(idx + 1, 0);
        }
        block_counts[idx] += 1;
    }
    let last = *values.last().expect("nonempty");
    Ok(PathRecord {
        process_id: "gcrp",
        seed,
        start_index: 1,
        values: Series::Scalar(values),
        limit_proxy: LimitProxy::Scalar(last),
        proxy_method: ProxyMethod::HorizonValue,
        aux: ProcessAux::Gcrp {
            block_counts,
            tables,
        },
        truncated_at: None,
    })
}
