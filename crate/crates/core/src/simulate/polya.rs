//! Two-color and multicolor Pólya urn simulators.

use super::rng::path_rng;
use super::{LimitProxy, PathRecord, ProcessAux, ProxyMethod, Series, SimError, Result};
use rand::Rng;

/// Two-color urn: N balls, B of them black; each draw returns the ball plus
/// one more of the same color. values[n] = proportion of black after n draws,
/// starting at X_0 = B/N.
pub fn polya2(b_black: u64, n_total: u64, horizon: u64, seed: u64) -> Result<PathRecord> {
    if !(b_black >= 1 && b_black < n_total) {
        return Err(SimError::Invalid {
            process: "polya2",
            message: format!("requires 1 <= B < N, got B={b_black}, N={n_total}"),
        });
    }
    let mut rng = path_rng(seed, 0);
    let mut black = b_black;
    let mut values = Vec::with_capacity(horizon as usize + 1);
    let mut x_prev = b_black as f64 / n_total as f64;
    values.push(x_prev);
    for n in 1..=horizon {
        let total = n_total + n - 1;
        if rng.gen::<f64>() < black as f64 / total as f64 {
            black += 1;
        }
        let x = black as f64 / (total + 1) as f64;
        // |X_n - X_{n-1}| <= 2/(n+N), checked at every step of every path.
        let cap = 2.0 / (n + n_total) as f64;
        if (x - x_prev).abs() > cap {
            return Err(SimError::Defect {
                process: "polya2",
                step: n,
                message: format!("increment {} exceeded {cap}", (x - x_prev).abs()),
            });
        }
        values.push(x);
        x_prev = x;
    }
    let last = *values.last().expect("nonempty");
    Ok(PathRecord {
        process_id: "polya2",
        seed,
        start_index: 0,
        values: Series::Scalar(values),
        limit_proxy: LimitProxy::Scalar(last),
        proxy_method: ProxyMethod::HorizonValue,
        aux: ProcessAux::Polya2 {
            beta: (b_black as f64, (n_total - b_black) as f64),
        },
        truncated_at: None,
    })
}

/// The paper's printed quadratic-variation tail for the two-color urn,
/// r(n) = sum_{k>=n} 2/(N+k)^2, which satisfies r(n) <= 2/(n-1+N) <= 3/n.
pub fn polya_r_tail(n_total: u64, n: u64) -> f64 {
    let mut r = 0.0;
    let mut k = n;
    // Direct summation with integral tail once terms are small.
    loop {
        let t = 2.0 / (((n_total + k) as f64) * ((n_total + k) as f64));
        r += t;
        if t < 1e-16 * r || k > n + 10_000_000 {
            r += 2.0 / (n_total + k) as f64; // integral remainder
            return r;
        }
        k += 1;
    }
}

/// Replacement rule of a multicolor urn, validated for tenability.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplacementMatrix {
    entries: Vec<i64>,
    dim: usize,
    row_sum: i64,
}

impl ReplacementMatrix {
    /// Tenability assumptions: off-diagonal entries nonnegative, all rows
    /// summing to the same s >= 0, and any negative diagonal dividing its
    /// column (so counts stay in the lattice that never goes negative).
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(SimError::Tenability("matrix must be square and nonempty".into()));
        }
        let row_sum: i64 = rows[0].iter().sum();
        if row_sum < 0 {
            return Err(SimError::Tenability(format!(
                "row sum must be >= 0, got {row_sum}"
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            let s: i64 = row.iter().sum();
            if s != row_sum {
                return Err(SimError::Tenability(format!(
                    "row {i} sums to {s}, expected the common row sum {row_sum}"
                )));
            }
            for (j, &e) in row.iter().enumerate() {
                if i != j && e < 0 {
                    return Err(SimError::Tenability(format!(
                        "off-diagonal entry r[{i}][{j}] = {e} is negative"
                    )));
                }
            }
        }
        for i in 0..dim {
            let d = rows[i][i];
            if d < 0 {
                for (k, row) in rows.iter().enumerate() {
                    if row[i] % d != 0 {
                        return Err(SimError::Tenability(format!(
                            "diagonal r[{i}][{i}] = {d} does not divide r[{k}][{i}] = {}",
                            row[i]
                        )));
                    }
                }
            }
        }
        Ok(ReplacementMatrix {
            entries: rows.into_iter().flatten().collect(),
            dim,
            row_sum,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row_sum(&self) -> i64 {
        self.row_sum
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or(0)
    }

    fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    /// Initial counts must be positive in total and, for colors with negative
    /// diagonal replacement, divisible by |r_ii| (otherwise a legal draw can
    /// push the count negative).
    fn validate_initial(&self, initial: &[u64]) -> Result<()> {
        if initial.len() != self.dim {
            return Err(SimError::Tenability(format!(
                "initial vector has length {}, matrix dimension is {}",
                initial.len(),
                self.dim
            )));
        }
        if initial.iter().sum::<u64>() == 0 {
            return Err(SimError::Tenability("urn starts empty".into()));
        }
        for i in 0..self.dim {
            let d = self.row(i)[i];
            if d < 0 && initial[i] % d.unsigned_abs() != 0 {
                return Err(SimError::Tenability(format!(
                    "initial count of color {i} ({}) not divisible by |r_ii| = {}",
                    initial[i],
                    d.unsigned_abs()
                )));
            }
        }
        Ok(())
    }
}

/// Generalized multicolor urn. values = proportion vectors per step; the
/// proportions stay on the simplex and the total count grows linearly.
pub fn polya_multicolor(
    r: &ReplacementMatrix,
    initial: &[u64],
    horizon: u64,
    seed: u64,
) -> Result<PathRecord> {
    r.validate_initial(initial)?;
    let d = r.dim();
    let mut counts: Vec<i64> = initial.iter().map(|&c| c as i64).collect();
    let initial_total: i64 = counts.iter().sum();
    let mut flat = Vec::with_capacity((horizon as usize + 1) * d);
    let mut totals = Vec::with_capacity(horizon as usize + 1);
    let mut rng = path_rng(seed, 0);

    let push_proportions = |counts: &[i64], flat: &mut Vec<f64>, total: i64| {
        for &c in counts {
            flat.push(c as f64 / total as f64);
        }
    };
    push_proportions(&counts, &mut flat, initial_total);
    totals.push(initial_total as u64);

    for n in 1..=horizon {
        let total: i64 = counts.iter().sum();
        // Draw color i with probability counts_i / total.
        let u = rng.gen::<f64>() * total as f64;
        let mut acc = 0.0;
        let mut color = d - 1;
        for (i, &c) in counts.iter().enumerate() {
            acc += c as f64;
            if u < acc {
                color = i;
                break;
            }
        }
        for (j, &rj) in r.row(color).iter().enumerate() {
            counts[j] += rj;
            if counts[j] < 0 {
                return Err(SimError::Defect {
                    process: "polya_multicolor",
                    step: n,
                    message: format!(
                        "color {j} went negative after drawing {color}; tenability bug"
                    ),
                });
            }
        }
        let new_total: i64 = counts.iter().sum();
        let expected = initial_total + n as i64 * r.row_sum();
        if new_total != expected {
            return Err(SimError::Defect {
                process: "polya_multicolor",
                step: n,
                message: format!("total count {new_total} != {expected}"),
            });
        }
        push_proportions(&counts, &mut flat, new_total);
        totals.push(new_total as u64);
    }

    let proxy: Vec<f64> = flat[flat.len() - d..].to_vec();
    Ok(PathRecord {
        process_id: "polya_multicolor",
        seed,
        start_index: 0,
        values: Series::Vector { dim: d, flat },
        limit_proxy: LimitProxy::Vector(proxy),
        proxy_method: ProxyMethod::HorizonValue,
        aux: ProcessAux::Multicolor {
            totals,
            row_sum: r.row_sum(),
        },
        truncated_at: None,
    })
}
