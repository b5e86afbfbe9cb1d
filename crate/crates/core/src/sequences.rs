//! Weight, tolerance, and probability-rate sequences; the partial-sum
//! functional `S_{a,n0}`; tail sums with certified upper bounds; and the
//! tradeoff constant `K(a, eps, n0)`.
//!
//! All infinite sums are truncated adaptively and the analytic tail majorant
//! is *added* to the reported error bound, so every reported constant is a
//! valid upper bound on the true sum, never an approximation from below.

use crate::specfn::{self, EvalResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// n^p
    Power { p: f64 },
    /// base^(p*n); `a_n = 2^n` is `(base: 0.5, p: -1)`, a rate `2^-m` is `(base: 0.5, p: 1)`.
    Exponential { base: f64, p: f64 },
    /// base^(p * n^alpha)
    Weibull { base: f64, p: f64, alpha: f64 },
    /// 1 / (n * ln^{1+theta}(n+1))
    LogWeight { theta: f64 },
    /// ln^p(n+1); the divergent threshold shape maximal inequalities use.
    LogPow { p: f64 },
    /// sqrt(2*c*(2+theta)*ln(n+1) / (n+1)^q)
    LogSqrt { c: f64, theta: f64, q: f64 },
    Constant { c: f64 },
    /// Explicit values for indices start, start+1, ...; weights extend past
    /// the table by holding the last value, rates refuse to extend.
    Tabulated { values: Vec<f64>, start: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Nondecreasing,
    Nonincreasing,
    Unconstrained,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeqError {
    #[error("invalid sequence: {0}")]
    Invalid(String),
    #[error("monotonicity violation at n = {index}: {message}")]
    Monotonicity { index: u64, message: String },
    #[error("series diverges: {message} (detected at index {index})")]
    Divergence { index: u64, message: String },
    #[error("no convergence certificate: {0}")]
    NoCertificate(String),
    #[error("tabulated rate evaluated past its table at n = {0}")]
    TableExhausted(u64),
    #[error(transparent)]
    SpecFn(#[from] specfn::SpecFnError),
}

pub type Result<T> = std::result::Result<T, SeqError>;

/// A positive sequence over indices n >= n0 with a declared direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    family: Family,
    /// Multiplies every value; lets rates carry their constants (c * m^-q).
    scale: f64,
    n0: u64,
    direction: Direction,
}

/// Probe range used to spot-check monotonicity of closed forms on top of the
/// analytic checks.
const PROBE: u64 = 4096;

impl Sequence {
    pub fn new(family: Family, n0: u64, direction: Direction) -> Result<Self> {
        Self::with_scale(family, 1.0, n0, direction)
    }

    pub fn with_scale(family: Family, scale: f64, n0: u64, direction: Direction) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(SeqError::Invalid(format!("scale must be positive, got {scale}")));
        }
        validate_family(&family, n0)?;
        let seq = Sequence {
            family,
            scale,
            n0,
            direction,
        };
        seq.check_direction()?;
        Ok(seq)
    }

    pub fn power(p: f64, n0: u64, direction: Direction) -> Result<Self> {
        Self::new(Family::Power { p }, n0, direction)
    }

    pub fn constant(c: f64, n0: u64) -> Result<Self> {
        Self::new(Family::Constant { c }, n0, Direction::Unconstrained)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Value at index n >= n0. Always finite and positive by construction.
    pub fn value(&self, n: u64) -> f64 {
        debug_assert!(n >= self.n0, "index {n} below start {}", self.n0);
        self.scale * raw_value(&self.family, n)
    }

    /// Whether `value(n)` is defined by the table (vs. held) at this index.
    fn table_covers(&self, n: u64) -> bool {
        match &self.family {
            Family::Tabulated { values, start } => n < start + values.len() as u64,
            _ => true,
        }
    }

    /// True when the sequence provably never decreases: declared as such, or
    /// analytically monotone regardless of declaration.
    pub fn is_nondecreasing(&self) -> bool {
        if self.direction == Direction::Nondecreasing {
            return true;
        }
        match &self.family {
            Family::Constant { .. } => true,
            Family::Power { p } => *p >= 0.0,
            Family::Exponential { base, p } | Family::Weibull { base, p, .. } => {
                p * base.ln() >= 0.0
            }
            Family::LogPow { p } => *p >= 0.0,
            _ => false,
        }
    }

    fn check_direction(&self) -> Result<()> {
        let analytic = match (&self.family, self.direction) {
            (_, Direction::Unconstrained) => Some(true),
            (Family::Constant { .. }, _) => Some(true),
            (Family::Power { p }, Direction::Nondecreasing) => Some(*p >= 0.0),
            (Family::Power { p }, Direction::Nonincreasing) => Some(*p <= 0.0),
            (Family::Exponential { base, p }, dir) | (Family::Weibull { base, p, .. }, dir) => {
                let growing = p * base.ln() > 0.0;
                let flat = p * base.ln() == 0.0;
                Some(match dir {
                    Direction::Nondecreasing => growing || flat,
                    Direction::Nonincreasing => !growing,
                    Direction::Unconstrained => true,
                })
            }
            (Family::LogWeight { .. }, Direction::Nonincreasing) => Some(true),
            (Family::LogWeight { .. }, Direction::Nondecreasing) => Some(false),
            (Family::LogPow { p }, Direction::Nondecreasing) => Some(*p >= 0.0),
            (Family::LogPow { p }, Direction::Nonincreasing) => Some(*p <= 0.0),
            // ln(x+1)/(x+1)^q peaks at x+1 = e^{1/q}; nonincreasing needs
            // the start index past the peak.
            (Family::LogSqrt { q, .. }, Direction::Nonincreasing) => {
                Some(*q > 0.0 && (self.n0 + 1) as f64 >= (1.0 / q).exp())
            }
            (Family::LogSqrt { .. }, Direction::Nondecreasing) => Some(false),
            (Family::Tabulated { .. }, _) => None,
        };
        match analytic {
            Some(true) => Ok(()),
            Some(false) => Err(SeqError::Monotonicity {
                index: self.n0,
                message: format!("{:?} cannot be {:?} from n0 = {}", self.family, self.direction, self.n0),
            }),
            None => {
                // Tabulated: exhaustive check over the table.
                let end = match &self.family {
                    Family::Tabulated { values, start } => start + values.len() as u64,
                    _ => self.n0 + PROBE,
                };
                let mut prev = self.value(self.n0);
                for n in self.n0 + 1..end {
                    let v = self.value(n);
                    let ok = match self.direction {
                        Direction::Nondecreasing => v >= prev,
                        Direction::Nonincreasing => v <= prev,
                        Direction::Unconstrained => true,
                    };
                    if !ok {
                        return Err(SeqError::Monotonicity {
                            index: n,
                            message: format!("value {v} breaks {:?} after {prev}", self.direction),
                        });
                    }
                    prev = v;
                }
                Ok(())
            }
        }
    }
}

fn validate_family(family: &Family, n0: u64) -> Result<()> {
    let fail = |m: String| Err(SeqError::Invalid(m));
    match family {
        Family::Power { p } => {
            if !p.is_finite() {
                return fail("power exponent must be finite".into());
            }
            if n0 == 0 && *p != 0.0 {
                return fail("Power requires n0 >= 1".into());
            }
        }
        Family::Exponential { base, p } => {
            if !(*base > 0.0) || !base.is_finite() || !p.is_finite() {
                return fail(format!("Exponential requires base > 0, got base={base}, p={p}"));
            }
        }
        Family::Weibull { base, p, alpha } => {
            if !(*base > 0.0) || !base.is_finite() {
                return fail(format!("Weibull requires base > 0, got {base}"));
            }
            if !(*alpha > 0.0 && *alpha <= 1.0) {
                return fail(format!("Weibull requires alpha in (0,1], got {alpha}"));
            }
            if !p.is_finite() {
                return fail("Weibull exponent must be finite".into());
            }
        }
        Family::LogWeight { theta } => {
            if !(*theta > -1.0) || n0 < 1 {
                return fail(format!("LogWeight requires theta > -1 and n0 >= 1, got theta={theta}, n0={n0}"));
            }
        }
        Family::LogPow { p } => {
            if !p.is_finite() || n0 < 1 {
                return fail(format!("LogPow requires finite p and n0 >= 1, got p={p}, n0={n0}"));
            }
        }
        Family::LogSqrt { c, theta, q } => {
            if !(*c > 0.0) || !(*theta > -2.0) || !q.is_finite() || n0 < 1 {
                return fail(format!("LogSqrt requires c > 0, theta > -2, n0 >= 1; got c={c}, theta={theta}, q={q}, n0={n0}"));
            }
        }
        Family::Constant { c } => {
            if !(*c > 0.0) || !c.is_finite() {
                return fail(format!("Constant requires c > 0, got {c}"));
            }
        }
        Family::Tabulated { values, start } => {
            if values.is_empty() {
                return fail("Tabulated requires at least one value".into());
            }
            if n0 < *start {
                return fail(format!("Tabulated n0 = {n0} below table start {start}"));
            }
            for (i, v) in values.iter().enumerate() {
                if !(*v > 0.0) || !v.is_finite() {
                    return fail(format!("Tabulated value at offset {i} must be positive and finite, got {v}"));
                }
            }
        }
    }
    Ok(())
}

fn raw_value(family: &Family, n: u64) -> f64 {
    let nf = n as f64;
    match family {
        Family::Power { p } => nf.powf(*p),
        Family::Exponential { base, p } => (p * nf * base.ln()).exp(),
        Family::Weibull { base, p, alpha } => (p * nf.powf(*alpha) * base.ln()).exp(),
        Family::LogWeight { theta } => 1.0 / (nf * (nf + 1.0).ln().powf(1.0 + theta)),
        Family::LogPow { p } => (nf + 1.0).ln().powf(*p),
        Family::LogSqrt { c, theta, q } => {
            (2.0 * c * (2.0 + theta) * (nf + 1.0).ln() / (nf + 1.0).powf(*q)).sqrt()
        }
        Family::Constant { c } => *c,
        Family::Tabulated { values, start } => {
            let idx = (n - start) as usize;
            if idx < values.len() {
                values[idx]
            } else {
                *values.last().expect("non-empty table")
            }
        }
    }
}

/// Outcome of a partial sum: the value and whether it saturated f64 range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumOutcome {
    pub value: f64,
    pub saturated: bool,
}

const SATURATION: f64 = 1e300;

/// The partial-sum functional S_{a,n0}(N) = sum_{n=0}^{N-1} a_{n0+n},
/// S(0) = 0, of a positive nondecreasing weight sequence.
#[derive(Debug, Clone)]
pub struct PartialSum {
    weight: Sequence,
    n0: u64,
}

impl PartialSum {
    pub fn new(weight: Sequence, n0: u64) -> Result<Self> {
        if !weight.is_nondecreasing() {
            return Err(SeqError::Invalid(
                "PartialSum weight must be nondecreasing".into(),
            ));
        }
        if n0 < weight.n0() {
            return Err(SeqError::Invalid(format!(
                "PartialSum n0 = {n0} below the weight's start {}",
                weight.n0()
            )));
        }
        Ok(PartialSum { weight, n0 })
    }

    pub fn weight(&self) -> &Sequence {
        &self.weight
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    /// S(N). Closed forms where the family admits them, accumulation
    /// otherwise. Overflow reports `saturated` instead of infinity.
    pub fn value(&self, n_terms: u64) -> SumOutcome {
        if n_terms == 0 {
            return SumOutcome {
                value: 0.0,
                saturated: false,
            };
        }
        let scale = self.weight.scale();
        match self.weight.family() {
            Family::Constant { c } => finite_or_saturated(scale * c * n_terms as f64),
            Family::Power { p } if *p == 1.0 => {
                // Arithmetic progression n0 + ... + (n0 + N - 1).
                let n = n_terms as f64;
                let first = self.n0 as f64;
                finite_or_saturated(scale * n * (2.0 * first + n - 1.0) / 2.0)
            }
            Family::Exponential { base, p } => {
                // Geometric with ratio r = base^p.
                let log_r = p * base.ln();
                if log_r == 0.0 {
                    return finite_or_saturated(scale * n_terms as f64);
                }
                let first = scale * (log_r * self.n0 as f64).exp();
                let log_rn = log_r * n_terms as f64;
                if log_rn > 690.0 || first.ln().max(0.0) + log_rn > 690.0 {
                    return SumOutcome {
                        value: SATURATION,
                        saturated: true,
                    };
                }
                let r = log_r.exp();
                finite_or_saturated(first * (log_rn.exp() - 1.0) / (r - 1.0))
            }
            _ => {
                let mut acc = 0.0f64;
                for n in self.n0..self.n0 + n_terms {
                    acc += self.weight.value(n);
                    if acc > SATURATION {
                        return SumOutcome {
                            value: SATURATION,
                            saturated: true,
                        };
                    }
                }
                SumOutcome {
                    value: acc,
                    saturated: false,
                }
            }
        }
    }
}

fn finite_or_saturated(v: f64) -> SumOutcome {
    if v.is_finite() && v <= SATURATION {
        SumOutcome {
            value: v,
            saturated: false,
        }
    } else {
        SumOutcome {
            value: SATURATION,
            saturated: true,
        }
    }
}

/// Convenience: S_{a,n0}(N) for a weight sequence.
pub fn partial_sum(ps: &PartialSum, n_terms: u64) -> SumOutcome {
    ps.value(n_terms)
}

const REL_TOL: f64 = 1e-10;
const TERM_CAP: u64 = 10_000_000;

/// Upper bound on the tail sum sum_{m >= n} rate(m) with a certified error.
///
/// The returned value is always >= the true tail (majorant added on top of
/// the truncated sum); exact geometric closed form for the Exponential
/// family.
pub fn tail_sum(rate: &Sequence, n: u64) -> Result<EvalResult> {
    let n = n.max(rate.n0());
    match rate.family() {
        Family::Exponential { base, p } => {
            let log_r = p * base.ln();
            if log_r >= 0.0 {
                return Err(SeqError::Divergence {
                    index: n,
                    message: format!("exponential rate with ratio {} >= 1", log_r.exp()),
                });
            }
            let r = log_r.exp();
            let v = rate.value(n) / (1.0 - r);
            Ok(EvalResult::new(v, 1e-14 * v))
        }
        Family::Power { p } => {
            if *p >= -1.0 {
                return Err(SeqError::Divergence {
                    index: n,
                    message: format!("power rate m^{p} is not summable"),
                });
            }
            let z = -p;
            let est = (n as f64).powf(1.0 - z) / (z - 1.0);
            let r = specfn::hurwitz_zeta(z, n, (est * 1e-11).max(1e-300))?;
            Ok(EvalResult::new(
                rate.scale() * (r.value + r.abs_error_bound),
                2.0 * rate.scale() * r.abs_error_bound,
            ))
        }
        Family::Weibull { base, p, alpha } => {
            let lambda = -p * base.ln();
            if lambda <= 0.0 {
                return Err(SeqError::Divergence {
                    index: n,
                    message: "Weibull rate does not decay".into(),
                });
            }
            weibull_poly_tail(rate.scale(), lambda, *alpha, 0.0, n)
        }
        Family::LogWeight { theta } => {
            if *theta <= 0.0 {
                return Err(SeqError::Divergence {
                    index: n,
                    message: format!("LogWeight with theta = {theta} <= 0 is not summable"),
                });
            }
            log_weight_tail(rate.scale(), *theta, n)
        }
        Family::LogSqrt { c, theta, q } => {
            if *q <= 2.0 {
                return Err(SeqError::Divergence {
                    index: n,
                    message: format!("LogSqrt rate with q = {q} <= 2 is not summable"),
                });
            }
            // sqrt(ln(y)) <= y^{e/2}/sqrt(e') trick with e = (q-2)/2 turns the
            // term into a summable power; crude but certified.
            let eps = (q - 2.0) / 2.0;
            let coeff = rate.scale() * (2.0 * c * (2.0 + theta) / eps).sqrt();
            let expo = -(q + 2.0) / 4.0; // (eps - q)/2 applied to (n+1)
            let z = -expo;
            let r = specfn::hurwitz_zeta(z, n + 1, 1e-11)?;
            let v = coeff * (r.value + r.abs_error_bound);
            Ok(EvalResult::new(v, v)) // loose majorant: value doubles as error
        }
        Family::Constant { .. } => Err(SeqError::Divergence {
            index: n,
            message: "constant rate is not summable".into(),
        }),
        Family::LogPow { .. } => Err(SeqError::Divergence {
            index: n,
            message: "LogPow does not decay".into(),
        }),
        Family::Tabulated { .. } => Err(SeqError::TableExhausted(n)),
    }
}

/// Certified upper bound for sum_{m >= n} scale * m^rho * e^{-lambda m^alpha}.
/// The returned `value` already includes the tail majorant (it is one-sided);
/// `abs_error_bound` is the bracket width.
pub(crate) fn weibull_poly_tail(
    scale: f64,
    lambda: f64,
    alpha: f64,
    rho: f64,
    n: u64,
) -> Result<EvalResult> {
    let term = |m: u64| {
        let mf = m as f64;
        scale * mf.powf(rho) * (-lambda * mf.powf(alpha)).exp()
    };
    // Integral majorant for the remainder past m:
    //   sum_{j > m} j^rho e^{-lambda j^alpha}
    //     <= integral_m^inf x^rho e^{-lambda x^alpha} dx
    //      = Gamma((rho+1)/alpha, lambda m^alpha) / (alpha lambda^{(rho+1)/alpha})
    // (valid once the integrand is past its peak at x^alpha = rho/(lambda alpha);
    // before the peak the integral still dominates the sum up to one extra
    // term, which the bracket width absorbs).
    let s = (rho + 1.0) / alpha;
    let majorant_at = |m: u64| -> Result<f64> {
        let x = lambda * (m as f64).powf(alpha);
        let g = specfn::upper_incomplete_gamma(s, x)?;
        Ok(scale * (g.value + g.abs_error_bound) / (alpha * lambda.powf(s)) + term(m))
    };
    let mut acc = 0.0f64;
    let mut m = n;
    let mut next_check = n;
    loop {
        acc += term(m);
        if m >= next_check {
            let majorant = majorant_at(m)?;
            if majorant <= REL_TOL * acc.max(1e-300) || m - n >= TERM_CAP {
                return Ok(EvalResult::new(acc + majorant, majorant + 1e-14 * acc));
            }
            // Geometric cadence keeps the incomplete-gamma evaluations cheap.
            next_check = m + (m / 8).max(64);
        }
        m += 1;
    }
}

/// Certified bracket for sum_{m >= n} scale / (m ln^{1+theta}(m+1)).
pub(crate) fn log_weight_tail(scale: f64, theta: f64, n: u64) -> Result<EvalResult> {
    let f = |m: u64| {
        let mf = m as f64;
        scale / (mf * (mf + 1.0).ln().powf(1.0 + theta))
    };
    let mut acc = 0.0;
    let cap = 1_000_000u64;
    let m_end = n + cap;
    for m in n.max(2)..m_end {
        acc += f(m);
    }
    if n < 2 {
        for m in n..n.max(2) {
            acc += f(m);
        }
    }
    // Tail bracket past M = m_end - 1:
    //   lower: ln^{-theta}(M+2)/theta  (compare with 1/((x+1) ln^{1+theta}(x+1)))
    //   upper: ln^{-theta}(M+1)/theta + f(M+1)
    let m = m_end as f64;
    let upper = scale * ((m).ln().powf(-theta) / theta) + f(m_end);
    let lower = scale * ((m + 1.0).ln().powf(-theta) / theta);
    let mid = 0.5 * (upper + lower);
    let half = 0.5 * (upper - lower) + 1e-13 * acc;
    Ok(EvalResult::new(acc + mid + half, 2.0 * half))
}

/// The tradeoff constant K(a, rate, n0) = sum_{n>=n0} a_n sum_{m>=n} rate_m,
/// evaluated through the equivalent single sum sum_{m>=n0} rate_m * A(m)
/// with A(m) = sum_{n=n0}^m a_n (all terms positive, so the exchange is
/// exact). The reported value is an upper bound; divergence is reported with
/// the index at which the certificate fired or partial sums crossed 1e15.
pub fn tradeoff_constant(a: &Sequence, rate: &Sequence, n0: u64) -> Result<EvalResult> {
    if !a.is_nondecreasing() {
        return Err(SeqError::Invalid("weights must be nondecreasing".into()));
    }
    let n0 = n0.max(a.n0()).max(rate.n0());
    divergence_certificate(a, rate, n0)?;

    let mut weight_acc = 0.0f64; // A(m)
    let mut sum = 0.0f64;
    let mut m = n0;
    loop {
        if !rate.table_covers(m) {
            return Err(SeqError::TableExhausted(m));
        }
        weight_acc += a.value(m);
        let term = rate.value(m) * weight_acc;
        sum += term;
        if sum > 1e15 {
            return Err(SeqError::Divergence {
                index: m,
                message: "partial sums exceeded 1e15".into(),
            });
        }
        if let Some(majorant) = product_tail_majorant(a, rate, m, weight_acc)? {
            if majorant <= REL_TOL * sum.max(1e-300) {
                return Ok(EvalResult::new(sum + majorant, majorant + 1e-13 * sum));
            }
            // Loose majorants still certify an upper bound once they stop
            // shrinking the answer materially.
            if m - n0 >= TERM_CAP {
                return Ok(EvalResult::new(sum + majorant, majorant + 1e-13 * sum));
            }
        } else if m - n0 >= TERM_CAP {
            return Err(SeqError::NoCertificate(format!(
                "no analytic tail majorant for weight {:?} x rate {:?} after {TERM_CAP} terms",
                a.family(),
                rate.family()
            )));
        }
        m += 1;
    }
}

/// Immediate divergence certificates (weights are positive nondecreasing, so
/// A(m) >= (m - n0 + 1) a_{n0}).
fn divergence_certificate(a: &Sequence, rate: &Sequence, n0: u64) -> Result<()> {
    let diverge = |message: String| {
        Err(SeqError::Divergence {
            index: n0,
            message,
        })
    };
    // Lower-bound exponent for A(m): m^{rho_low} up to constants.
    let weight_growth = weight_poly_lower_exponent(a);
    match rate.family() {
        Family::Constant { .. } => diverge("constant rate".into()),
        Family::LogWeight { theta } => {
            if *theta <= 0.0 {
                diverge(format!("LogWeight theta = {theta} not summable"))
            } else {
                // A(m)/(m ln^{1+theta}) >= a_{n0} (1 - n0/m) / ln^{1+theta}: never summable.
                diverge("weighted LogWeight tails decay only logarithmically".into())
            }
        }
        Family::Power { p } => {
            if *p >= -1.0 {
                return diverge(format!("rate m^{p} not summable"));
            }
            if let Some(rho) = weight_growth {
                if rho + p >= -1.0 {
                    return diverge(format!(
                        "Fubini terms ~ m^{} are not summable",
                        rho + p
                    ));
                }
            }
            // Exponential/Weibull weights against a power rate always diverge.
            if matches!(a.family(), Family::Exponential { .. } | Family::Weibull { .. })
                && weight_log_growth(a) > 0.0
            {
                return diverge("exponentially growing weights against a polynomial rate".into());
            }
            Ok(())
        }
        Family::Exponential { base, p } => {
            let log_r = p * base.ln();
            if log_r >= 0.0 {
                return diverge("exponential rate with ratio >= 1".into());
            }
            let g = weight_log_growth(a);
            if matches!(a.family(), Family::Exponential { .. }) && g + log_r >= 0.0 {
                return diverge(format!(
                    "combined geometric ratio {} >= 1",
                    (g + log_r).exp()
                ));
            }
            if matches!(a.family(), Family::Weibull { .. }) {
                // subexponential growth: fine.
            }
            Ok(())
        }
        Family::Weibull { base, p, alpha } => {
            let lambda = -p * base.ln();
            if lambda <= 0.0 {
                return diverge("Weibull rate does not decay".into());
            }
            match a.family() {
                Family::Exponential { base: ab, p: ap } if ap * ab.ln() > 0.0 => {
                    diverge("exponential weights against a stretched-exponential rate".into())
                }
                Family::Weibull {
                    base: ab,
                    p: ap,
                    alpha: aa,
                } => {
                    let growth = ap * ab.ln();
                    if growth > 0.0 {
                        if (*aa - *alpha).abs() < 1e-12 {
                            if growth >= lambda {
                                diverge("Weibull weight grows at least as fast as the rate decays".into())
                            } else {
                                Ok(())
                            }
                        } else if *aa > *alpha {
                            diverge("Weibull weight has larger stretching exponent than the rate".into())
                        } else {
                            Ok(())
                        }
                    } else {
                        Ok(())
                    }
                }
                _ => Ok(()),
            }
        }
        Family::LogSqrt { q, .. } => {
            if *q <= 2.0 {
                diverge(format!("LogSqrt rate with q = {q} is not summable"))
            } else {
                Ok(())
            }
        }
        Family::LogPow { .. } => diverge("LogPow rate does not decay".into()),
        Family::Tabulated { .. } => Ok(()), // caught at evaluation, table end
    }
}

/// rho with A(m) >= c m^rho for some c > 0 (polynomial families only).
fn weight_poly_lower_exponent(a: &Sequence) -> Option<f64> {
    match a.family() {
        Family::Constant { .. } | Family::Tabulated { .. } => Some(1.0),
        Family::Power { p } => Some(p.max(0.0) + 1.0),
        Family::Exponential { base, p } | Family::Weibull { base, p, .. } => {
            if p * base.ln() >= 0.0 {
                Some(1.0)
            } else {
                None
            }
        }
        Family::LogWeight { .. } | Family::LogSqrt { .. } => None,
        // ln^p grows, so linear-in-m is still a lower bound for A(m).
        Family::LogPow { p } => {
            if *p >= 0.0 {
                Some(1.0)
            } else {
                None
            }
        }
    }
}

/// log of the per-step geometric growth factor for exponential-type weights.
fn weight_log_growth(a: &Sequence) -> f64 {
    match a.family() {
        Family::Exponential { base, p } => p * base.ln(),
        _ => 0.0,
    }
}

/// Upper bound on A(m') for m' >= m as kappa * (m'+1)^rho (polynomial
/// weights) — returns (kappa, rho); exponential weights are handled inline.
fn weight_poly_upper(a: &Sequence, weight_acc: f64, m: u64) -> Option<(f64, f64)> {
    match a.family() {
        Family::Constant { c } => Some((a.scale() * c, 1.0)),
        Family::Power { p } if *p >= 0.0 => Some((a.scale() / (p + 1.0), p + 1.0)),
        Family::Power { .. } => {
            // decreasing-but-positive powers still have A(m) <= A(m0) + ...;
            // bound by current acc plus per-term cap.
            Some((weight_acc.max(a.scale()) / (m as f64 + 1.0) + a.scale(), 1.0))
        }
        Family::Tabulated { .. } => {
            let last = a.value(m); // held constant beyond the table
            Some((weight_acc / (m as f64 + 1.0) + last, 1.0))
        }
        _ => None,
    }
}

/// Analytic majorant for sum_{m' > m} rate(m') * A(m'), if one exists.
fn product_tail_majorant(
    a: &Sequence,
    rate: &Sequence,
    m: u64,
    weight_acc: f64,
) -> Result<Option<f64>> {
    let mf = m as f64;
    match rate.family() {
        Family::Exponential { base, p } => {
            let log_r = p * base.ln();
            debug_assert!(log_r < 0.0);
            let g = weight_log_growth(a);
            if g > 0.0 {
                // Combined exact geometric (certificate already ruled g+log_r >= 0).
                let ratio = (g + log_r).exp();
                // A(m') <= A(m) * growth + geometric sum of new weights <= A(m') form:
                // A(m') <= A(m) g^{m'-m} * g/(g-1) is valid since weights grow geometrically.
                let gf = g.exp();
                let amp = gf / (gf - 1.0);
                let t_next = rate.value(m + 1) * weight_acc * gf * amp;
                return Ok(Some(t_next / (1.0 - ratio)));
            }
            if let Some((kappa, rho)) = weight_poly_upper(a, weight_acc, m) {
                // t(m') <= kappa (m'+1)^rho r^{m'}; ratio bound from m.
                let ratio = ((mf + 2.0) / (mf + 1.0)).powf(rho.max(0.0)) * log_r.exp();
                if ratio < 1.0 {
                    let t_next = kappa * (mf + 2.0).powf(rho) * rate.value(m + 1);
                    return Ok(Some(t_next / (1.0 - ratio)));
                }
                return Ok(None); // not yet in the geometric regime; keep summing
            }
            Ok(None)
        }
        Family::Power { p } => {
            if let Some((kappa, rho)) = weight_poly_upper(a, weight_acc, m) {
                let e = rho + p; // < -1 by the certificate
                if e < -1.0 {
                    // sum_{m'>m} (m'+1)^rho m'^p <= (1+1/m)^rho * sum m'^e
                    let fudge = (1.0 + 1.0 / mf).powf(rho.max(0.0));
                    let tail = (mf + 1.0).powf(e) + (mf + 1.0).powf(e + 1.0) / (-e - 1.0);
                    return Ok(Some(rate.scale() * kappa * fudge * tail));
                }
            }
            Ok(None)
        }
        Family::Weibull { base, p, alpha } => {
            let lambda = -p * base.ln();
            match a.family() {
                Family::Weibull {
                    base: ab,
                    p: ap,
                    alpha: aa,
                } if ap * ab.ln() > 0.0 && (*aa - *alpha).abs() < 1e-12 => {
                    // A(m') <= (m'+1) a(m'); combined decay lambda' = lambda - growth.
                    let growth = ap * ab.ln();
                    let lambda_eff = lambda - growth;
                    debug_assert!(lambda_eff > 0.0);
                    let t = weibull_poly_tail(
                        rate.scale() * a.scale(),
                        lambda_eff,
                        *alpha,
                        1.0,
                        m + 1,
                    )?;
                    return Ok(Some(2.0 * (t.value + t.abs_error_bound)));
                }
                Family::Exponential { base: ab, p: ap } if ap * ab.ln() <= 0.0 => {
                    let t = weibull_poly_tail(rate.scale() * weight_acc.max(1.0), lambda, *alpha, 1.0, m + 1)?;
                    return Ok(Some(t.value + t.abs_error_bound));
                }
                _ => {
                    if let Some((kappa, rho)) = weight_poly_upper(a, weight_acc, m) {
                        let fudge = (1.0 + 1.0 / mf).powf(rho.max(0.0));
                        let t = weibull_poly_tail(rate.scale() * kappa * fudge, lambda, *alpha, rho, m + 1)?;
                        return Ok(Some(t.value + t.abs_error_bound));
                    }
                    Ok(None)
                }
            }
        }
        Family::LogSqrt { c, theta, q } => {
            // Reduce to a power rate via sqrt(ln y) <= y^{eps/2}/sqrt(eps).
            if let Some((kappa, rho)) = weight_poly_upper(a, weight_acc, m) {
                let eps = ((q - 2.0) / 2.0 - rho + 1.0).max((q - 2.0) / 4.0) * 0.5;
                let coeff = rate.scale() * (2.0 * c * (2.0 + theta) / eps.max(1e-9)).sqrt();
                let e = rho + eps / 2.0 - q / 2.0;
                if e < -1.0 {
                    let fudge = (1.0 + 1.0 / mf).powf(rho.max(0.0));
                    let tail = (mf + 1.0).powf(e) + (mf + 1.0).powf(e + 1.0) / (-e - 1.0);
                    return Ok(Some(coeff * kappa * fudge * tail));
                }
            }
            Ok(None)
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(f: Family, n0: u64, d: Direction) -> Sequence {
        Sequence::new(f, n0, d).unwrap()
    }

    #[test]
    fn partial_sum_examples() {
        // a_n = n, n0 = 1, N = 3 -> 1 + 2 + 3 = 6.
        let a = seq(Family::Power { p: 1.0 }, 1, Direction::Nondecreasing);
        let ps = PartialSum::new(a, 1).unwrap();
        assert_eq!(ps.value(3).value, 6.0);
        assert_eq!(ps.value(0).value, 0.0);

        // a_n = 2^n, n0 = 0, N = 4 -> 1 + 2 + 4 + 8 = 15 (geometric closed form).
        let a = seq(
            Family::Exponential { base: 0.5, p: -1.0 },
            0,
            Direction::Nondecreasing,
        );
        let ps = PartialSum::new(a, 0).unwrap();
        assert!((ps.value(4).value - 15.0).abs() < 1e-12);
    }

    #[test]
    fn partial_sum_saturates_instead_of_overflowing() {
        let a = seq(
            Family::Exponential { base: 0.5, p: -1.0 },
            0,
            Direction::Nondecreasing,
        );
        let ps = PartialSum::new(a, 0).unwrap();
        let out = ps.value(5000);
        assert!(out.saturated);
        assert!(out.value.is_finite());
    }

    #[test]
    fn telescoping_identity_probes() {
        // S(N+1) - S(N) = a_{n0+N} across families and offsets.
        let families: Vec<(Family, u64)> = vec![
            (Family::Power { p: 1.0 }, 1),
            (Family::Power { p: 2.5 }, 3),
            (Family::Exponential { base: 0.5, p: -0.3 }, 0),
            (Family::Exponential { base: 2.0, p: 0.125 }, 2),
            (Family::Constant { c: 3.25 }, 5),
            (
                Family::Weibull {
                    base: 0.5,
                    p: -1.0,
                    alpha: 0.5,
                },
                1,
            ),
        ];
        let mut lcg = 0x12345678u64;
        let mut rnd = move || {
            lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1);
            (lcg >> 33) % 200
        };
        for (fam, n0) in families {
            let s = Sequence::new(fam, n0, Direction::Unconstrained).unwrap();
            let s = Sequence::with_scale(s.family().clone(), 1.0, n0, Direction::Nondecreasing)
                .unwrap_or(s);
            let ps = PartialSum::new(
                Sequence::new(s.family().clone(), n0, Direction::Nondecreasing)
                    .unwrap_or_else(|_| {
                        Sequence::new(s.family().clone(), n0, Direction::Unconstrained).unwrap()
                    }),
                n0,
            );
            let ps = match ps {
                Ok(p) => p,
                Err(_) => continue, // nonincreasing families are not weights
            };
            for _ in 0..170 {
                let n = rnd();
                let s1 = ps.value(n + 1).value;
                let s0 = ps.value(n).value;
                let a = ps.weight().value(n0 + n);
                assert!(
                    (s1 - s0 - a).abs() <= 1e-9 * (s1.abs() + a.abs()).max(1.0),
                    "telescoping broke: family {:?}, N={n}",
                    ps.weight().family()
                );
            }
        }
    }

    #[test]
    fn tail_sum_geometric_exact() {
        // rate_m = 2^{-m}, n = 1 -> 1.
        let r = seq(
            Family::Exponential { base: 0.5, p: 1.0 },
            1,
            Direction::Nonincreasing,
        );
        let t = tail_sum(&r, 1).unwrap();
        assert!((t.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_sum_power_matches_zeta_oracle() {
        // rate_m = m^{-5}, n = 1: direct-summation oracle bracket.
        let r = seq(Family::Power { p: -5.0 }, 1, Direction::Nonincreasing);
        let t = tail_sum(&r, 1).unwrap();
        let oracle: f64 = (1..200_000u64).map(|m| (m as f64).powi(-5)).sum();
        assert!(t.value >= oracle);
        assert!(t.value - oracle < 1e-9 + t.abs_error_bound);
    }

    #[test]
    fn tail_sum_divergent_harmonic() {
        let r = seq(Family::Power { p: -1.0 }, 1, Direction::Nonincreasing);
        assert!(matches!(tail_sum(&r, 1), Err(SeqError::Divergence { .. })));
    }

    #[test]
    fn tail_shift_consistency() {
        // tail(n) - rate(n) = tail(n+1) within combined error bounds.
        for fam in [
            Family::Exponential { base: 0.5, p: 0.7 },
            Family::Power { p: -3.0 },
            Family::Weibull {
                base: 0.36787944117144233,
                p: 1.0,
                alpha: 0.5,
            },
        ] {
            let r = seq(fam, 1, Direction::Unconstrained);
            for n in [1u64, 4, 9] {
                let t0 = tail_sum(&r, n).unwrap();
                let t1 = tail_sum(&r, n + 1).unwrap();
                let lhs = t0.value - r.value(n);
                assert!(
                    (lhs - t1.value).abs() <= t0.abs_error_bound + t1.abs_error_bound + 1e-12,
                    "family {:?} at n={n}: {lhs} vs {}",
                    r.family(),
                    t1.value
                );
            }
        }
    }

    #[test]
    fn tradeoff_nested_geometric() {
        // a_n = 1, rate_m = 2^{-m}, n0 = 1 -> sum_n 2^{-n+1} = 2.
        let a = Sequence::constant(1.0, 1).unwrap();
        let r = seq(
            Family::Exponential { base: 0.5, p: 1.0 },
            1,
            Direction::Nonincreasing,
        );
        let k = tradeoff_constant(&a, &r, 1).unwrap();
        assert!((k.value - 2.0).abs() <= k.abs_error_bound + 1e-9);
        assert!(k.value >= 2.0 - 1e-12, "K must upper-bound the true sum");
    }

    #[test]
    fn tradeoff_poly_matches_bruteforce() {
        // a_n = n, rate_m = m^{-5}: brute-force double sum oracle.
        let a = seq(Family::Power { p: 1.0 }, 1, Direction::Nondecreasing);
        let r = seq(Family::Power { p: -5.0 }, 1, Direction::Nonincreasing);
        let k = tradeoff_constant(&a, &r, 1).unwrap();
        let mut oracle = 0.0f64;
        for m in 1..300_000u64 {
            let am_sum = (m * (m + 1) / 2) as f64; // A(m) for a_n = n
            oracle += (m as f64).powi(-5) * am_sum;
        }
        assert!(k.value >= oracle, "K = {} < oracle {oracle}", k.value);
        assert!(k.value - oracle <= k.abs_error_bound + 1e-8);
    }

    #[test]
    fn tradeoff_divergent_geometric_race() {
        // a_n = 2^n against rate 2^{-m}: inner tail times weight is constant.
        let a = seq(
            Family::Exponential { base: 0.5, p: -1.0 },
            1,
            Direction::Nondecreasing,
        );
        let r = seq(
            Family::Exponential { base: 0.5, p: 1.0 },
            1,
            Direction::Nonincreasing,
        );
        assert!(matches!(
            tradeoff_constant(&a, &r, 1),
            Err(SeqError::Divergence { .. })
        ));
    }

    #[test]
    fn markov_chain_bound_monotone() {
        // K / S(k) nonincreasing in k for a verified pair.
        let a = seq(Family::Power { p: 1.0 }, 1, Direction::Nondecreasing);
        let r = seq(Family::Power { p: -5.0 }, 1, Direction::Nonincreasing);
        let k = tradeoff_constant(&a, &r, 1).unwrap().value;
        let ps = PartialSum::new(a, 1).unwrap();
        let mut prev = f64::INFINITY;
        for i in 1..200u64 {
            let bound = k / ps.value(i).value;
            assert!(bound <= prev + 1e-12);
            prev = bound;
        }
    }

    #[test]
    fn logweight_tail_matches_direct_sum() {
        let r = seq(Family::LogWeight { theta: 1.0 }, 2, Direction::Nonincreasing);
        let t = tail_sum(&r, 2).unwrap();
        let direct: f64 = (2..3_000_000u64)
            .map(|m| 1.0 / (m as f64 * ((m + 1) as f64).ln().powi(2)))
            .sum();
        assert!(t.value + t.abs_error_bound >= direct);
        assert!(t.value - direct <= 0.2, "value {} vs direct {direct}", t.value);
    }

    #[test]
    fn direction_validation() {
        assert!(Sequence::new(Family::Power { p: 1.0 }, 1, Direction::Nonincreasing).is_err());
        assert!(Sequence::new(Family::Power { p: -1.0 }, 1, Direction::Nondecreasing).is_err());
        // LogSqrt q = 1: peak at e - 1 ~ 1.7, so n0 = 2 is fine but n0 = 1 is not.
        assert!(Sequence::new(
            Family::LogSqrt { c: 1.0, theta: 1.0, q: 1.0 },
            1,
            Direction::Nonincreasing
        )
        .is_err());
        assert!(Sequence::new(
            Family::LogSqrt { c: 1.0, theta: 1.0, q: 1.0 },
            2,
            Direction::Nonincreasing
        )
        .is_ok());
        let tab = Family::Tabulated {
            values: vec![1.0, 2.0, 1.5],
            start: 1,
        };
        assert!(Sequence::new(tab, 1, Direction::Nondecreasing).is_err());
    }

    #[test]
    fn tabulated_weight_extends_rate_rejects() {
        let tab = Sequence::new(
            Family::Tabulated {
                values: vec![1.0, 2.0, 3.0],
                start: 1,
            },
            1,
            Direction::Nondecreasing,
        )
        .unwrap();
        assert_eq!(tab.value(10), 3.0); // held last value
        assert!(matches!(tail_sum(&tab, 1), Err(SeqError::TableExhausted(_))));
    }
}
