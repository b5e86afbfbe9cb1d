//! Experiment configuration: JSON schema, validation, and the mapping onto
//! library types.

use mdf_core::sequences::{Direction, Family, Sequence};
use mdf_core::simulate::{GwObservable, MomentFamily};
use mdf_core::mdf::SimSpec;
use serde::Deserialize;
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// simulate | bounds | verify | refute | calibrate
    pub kind: String,
    #[serde(default)]
    pub process: Option<ProcessSpec>,
    #[serde(default)]
    pub sequences: Option<SequencePair>,
    #[serde(default)]
    pub bounds: Vec<BoundSpec>,
    #[serde(default)]
    pub mc: Option<McSpec>,
    #[serde(default)]
    pub refute: Option<RefuteSpec>,
    pub output_dir: String,
    #[serde(default)]
    pub parallelism: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ProcessSpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SequencePair {
    pub a: SeqSpec,
    pub eps: SeqSpec,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SeqSpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    #[serde(default = "default_n0")]
    pub n0: u64,
    #[serde(default)]
    pub scale: Option<f64>,
    #[serde(default)]
    pub direction: Option<String>,
}

fn default_n0() -> u64 {
    1
}

#[derive(Debug, Clone, Deserialize)]
pub struct BoundSpec {
    pub bound_id: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct McSpec {
    pub paths: u64,
    pub horizon: u64,
    pub n_eval: u64,
    #[serde(default = "default_n0")]
    pub n0: u64,
    pub seed: u64,
    #[serde(default)]
    pub step_budget: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RefuteSpec {
    pub eps: f64,
    pub p: f64,
    pub alpha: f64,
    /// Observations per run (the data length N - n0 + 1).
    pub observations: u64,
    /// Number of repetitions (1 for a single refute decision).
    #[serde(default = "one")]
    pub runs: u64,
    /// Drawing-probability bias toward color 1 (0 = true model).
    #[serde(default)]
    pub bias: f64,
    /// Urn constants (C = max |r_ij|, s = row sum).
    #[serde(default = "one_f")]
    pub c_max: f64,
    #[serde(default = "one_f")]
    pub s: f64,
    /// Initial composition (black, total).
    #[serde(default = "default_initial")]
    pub initial: (u64, u64),
}

fn one() -> u64 {
    1
}
fn one_f() -> f64 {
    1.0
}
fn default_initial() -> (u64, u64) {
    (1, 200)
}

pub fn get_f64(params: &BTreeMap<String, Value>, key: &str) -> Result<f64, String> {
    params
        .get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| format!("missing or non-numeric parameter '{key}'"))
}

pub fn get_f64_opt(params: &BTreeMap<String, Value>, key: &str) -> Result<Option<f64>, String> {
    match params.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| format!("non-numeric parameter '{key}'")),
    }
}

pub fn get_u64(params: &BTreeMap<String, Value>, key: &str) -> Result<u64, String> {
    params
        .get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| format!("missing or non-integer parameter '{key}'"))
}

pub fn get_u64_or(params: &BTreeMap<String, Value>, key: &str, default: u64) -> Result<u64, String> {
    match params.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(v) => v
            .as_u64()
            .ok_or_else(|| format!("non-integer parameter '{key}'")),
    }
}

pub fn get_u64_opt(params: &BTreeMap<String, Value>, key: &str) -> Result<Option<u64>, String> {
    match params.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .map(Some)
            .ok_or_else(|| format!("non-integer parameter '{key}'")),
    }
}

/// Build a Sequence from its JSON spec; errors name the offending key.
pub fn build_sequence(spec: &SeqSpec, key_prefix: &str) -> Result<Sequence, String> {
    let p = &spec.params;
    let fam = match spec.family.as_str() {
        "power" => Family::Power {
            p: get_f64(p, "p").map_err(|e| format!("{key_prefix}: {e}"))?,
        },
        "exponential" => Family::Exponential {
            base: get_f64(p, "base").map_err(|e| format!("{key_prefix}: {e}"))?,
            p: get_f64(p, "p").map_err(|e| format!("{key_prefix}: {e}"))?,
        },
        "weibull" => Family::Weibull {
            base: get_f64(p, "base").map_err(|e| format!("{key_prefix}: {e}"))?,
            p: get_f64(p, "p").map_err(|e| format!("{key_prefix}: {e}"))?,
            alpha: get_f64(p, "alpha").map_err(|e| format!("{key_prefix}: {e}"))?,
        },
        "log_weight" => Family::LogWeight {
            theta: get_f64(p, "theta").map_err(|e| format!("{key_prefix}: {e}"))?,
        },
        "log_sqrt" => Family::LogSqrt {
            c: get_f64(p, "c").map_err(|e| format!("{key_prefix}: {e}"))?,
            theta: get_f64(p, "theta").map_err(|e| format!("{key_prefix}: {e}"))?,
            q: get_f64(p, "q").map_err(|e| format!("{key_prefix}: {e}"))?,
        },
        "log_pow" => Family::LogPow {
            p: get_f64(p, "p").map_err(|e| format!("{key_prefix}: {e}"))?,
        },
        "constant" => Family::Constant {
            c: get_f64(p, "c").map_err(|e| format!("{key_prefix}: {e}"))?,
        },
        "tabulated" => {
            let values = p
                .get("values")
                .and_then(Value::as_array)
                .ok_or_else(|| format!("{key_prefix}: missing 'values' array"))?
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| format!("{key_prefix}: non-numeric table value")))
                .collect::<Result<Vec<f64>, _>>()?;
            Family::Tabulated {
                values,
                start: get_u64_or(p, "start", spec.n0).map_err(|e| format!("{key_prefix}: {e}"))?,
            }
        }
        other => return Err(format!("{key_prefix}: unknown sequence family '{other}'")),
    };
    let dir = match spec.direction.as_deref() {
        None | Some("unconstrained") => Direction::Unconstrained,
        Some("nondecreasing") => Direction::Nondecreasing,
        Some("nonincreasing") => Direction::Nonincreasing,
        Some(other) => return Err(format!("{key_prefix}: unknown direction '{other}'")),
    };
    Sequence::with_scale(fam, spec.scale.unwrap_or(1.0), spec.n0, dir)
        .map_err(|e| format!("{key_prefix}: {e}"))
}

/// Map a process spec to the Monte Carlo simulator driver.
pub fn build_sim_spec(spec: &ProcessSpec) -> Result<SimSpec, String> {
    let p = &spec.params;
    let ctx = format!("process.{}", spec.family);
    match spec.family.as_str() {
        "polya2" => Ok(SimSpec::Polya2 {
            b: get_u64(p, "b").map_err(|e| format!("{ctx}: {e}"))?,
            n: get_u64(p, "n").map_err(|e| format!("{ctx}: {e}"))?,
        }),
        "polya_multicolor" => {
            let matrix = p
                .get("matrix")
                .and_then(Value::as_array)
                .ok_or_else(|| format!("{ctx}: missing 'matrix'"))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| format!("{ctx}: matrix rows must be arrays"))?
                        .iter()
                        .map(|v| {
                            v.as_i64()
                                .ok_or_else(|| format!("{ctx}: non-integer matrix entry"))
                        })
                        .collect::<Result<Vec<i64>, _>>()
                })
                .collect::<Result<Vec<Vec<i64>>, _>>()?;
            let initial = p
                .get("initial")
                .and_then(Value::as_array)
                .ok_or_else(|| format!("{ctx}: missing 'initial'"))?
                .iter()
                .map(|v| {
                    v.as_u64()
                        .ok_or_else(|| format!("{ctx}: non-integer initial count"))
                })
                .collect::<Result<Vec<u64>, _>>()?;
            Ok(SimSpec::Multicolor { matrix, initial })
        }
        "galton_watson" => {
            let offspring = p
                .get("offspring")
                .and_then(Value::as_array)
                .ok_or_else(|| format!("{ctx}: missing 'offspring' [[value, prob], ...]"))?
                .iter()
                .map(|pair| {
                    let arr = pair
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| format!("{ctx}: offspring entries are [value, prob]"))?;
                    let v = arr[0]
                        .as_u64()
                        .ok_or_else(|| format!("{ctx}: offspring value must be an integer"))?;
                    let q = arr[1]
                        .as_f64()
                        .ok_or_else(|| format!("{ctx}: offspring prob must be numeric"))?;
                    Ok((v, q))
                })
                .collect::<Result<Vec<(u64, f64)>, String>>()?;
            let observable = match p.get("observable").and_then(Value::as_str) {
                None | Some("normalized") => GwObservable::Normalized,
                Some("population") => GwObservable::Population,
                Some(o) => return Err(format!("{ctx}: unknown observable '{o}'")),
            };
            Ok(SimSpec::GaltonWatson {
                offspring,
                cap: get_u64_or(p, "cap", 10_000_000).map_err(|e| format!("{ctx}: {e}"))?,
                observable,
            })
        }
        "random_walk" => Ok(SimSpec::RandomWalk {
            q: get_f64(p, "q").map_err(|e| format!("{ctx}: {e}"))?,
        }),
        "stochastic_integral" => Ok(SimSpec::StochasticIntegral {
            bound_g: get_f64(p, "bound_g").map_err(|e| format!("{ctx}: {e}"))?,
            bound_delta: get_f64(p, "bound_delta").map_err(|e| format!("{ctx}: {e}"))?,
            sign_rule: p
                .get("sign_rule")
                .and_then(Value::as_bool)
                .unwrap_or(false),
        }),
        "gcrp" => Ok(SimSpec::Gcrp {
            alpha: get_f64(p, "alpha").map_err(|e| format!("{ctx}: {e}"))?,
            theta: get_f64(p, "theta").map_err(|e| format!("{ctx}: {e}"))?,
        }),
        "moment_normal" => Ok(SimSpec::MomentProcess {
            family: MomentFamily::Normal {
                mu: get_f64(p, "mu").map_err(|e| format!("{ctx}: {e}"))?,
                sigma: get_f64(p, "sigma").map_err(|e| format!("{ctx}: {e}"))?,
            },
        }),
        "moment_gamma" => Ok(SimSpec::MomentProcess {
            family: MomentFamily::Gamma {
                shape: get_f64(p, "shape").map_err(|e| format!("{ctx}: {e}"))?,
                scale: get_f64(p, "scale").map_err(|e| format!("{ctx}: {e}"))?,
            },
        }),
        "sign_martingale" => Ok(SimSpec::SignMartingale),
        "nested_synthetic" => Ok(SimSpec::NestedSynthetic),
        other => Err(format!("process: unknown family '{other}'")),
    }
}

/// Validate everything that can fail before computation starts; returns the
/// full list of violations (empty = valid).
pub fn validate(cfg: &ConfigFile) -> Vec<String> {
    let mut errs = Vec::new();
    let kinds = ["simulate", "bounds", "verify", "refute", "calibrate"];
    if !kinds.contains(&cfg.kind.as_str()) {
        errs.push(format!(
            "kind: '{}' is not one of {kinds:?}",
            cfg.kind
        ));
        return errs;
    }
    let needs_process = matches!(cfg.kind.as_str(), "simulate" | "verify");
    let needs_mc = matches!(cfg.kind.as_str(), "simulate" | "verify");
    let needs_seqs = matches!(cfg.kind.as_str(), "simulate" | "verify");
    let needs_bounds = matches!(cfg.kind.as_str(), "bounds" | "verify");
    let needs_refute = matches!(cfg.kind.as_str(), "refute" | "calibrate");

    if needs_process {
        match &cfg.process {
            None => errs.push("process: required for this experiment kind".into()),
            Some(p) => {
                if let Err(e) = build_sim_spec(p) {
                    errs.push(e);
                }
            }
        }
    }
    if needs_seqs {
        match &cfg.sequences {
            None => errs.push("sequences: required for this experiment kind".into()),
            Some(s) => {
                if let Err(e) = build_sequence(&s.a, "sequences.a") {
                    errs.push(e);
                }
                if let Err(e) = build_sequence(&s.eps, "sequences.eps") {
                    errs.push(e);
                }
            }
        }
    }
    if needs_mc {
        match &cfg.mc {
            None => errs.push("mc: required for this experiment kind".into()),
            Some(m) => {
                if m.paths < 100 {
                    errs.push(format!("mc.paths: needs at least 100, got {}", m.paths));
                }
                if m.n_eval > m.horizon {
                    errs.push(format!(
                        "mc.n_eval: {} exceeds the horizon {}",
                        m.n_eval, m.horizon
                    ));
                }
            }
        }
    }
    if needs_bounds {
        if cfg.bounds.is_empty() {
            errs.push("bounds: at least one bound_id is required".into());
        }
        for (i, b) in cfg.bounds.iter().enumerate() {
            match crate::catalog::evaluate_bound(&b.bound_id, &b.params) {
                Err(e) => errs.push(format!("bounds[{i}].{}: {e}", b.bound_id)),
                Ok(rep) if !rep.valid => errs.push(format!(
                    "bounds[{i}].{}: {}",
                    b.bound_id,
                    rep.reason.unwrap_or_else(|| "parameter range violation".into())
                )),
                Ok(_) => {}
            }
        }
    }
    if needs_refute {
        match &cfg.refute {
            None => errs.push("refute: required for this experiment kind".into()),
            Some(r) => {
                let p_max = r.s * r.s * r.eps * r.eps / (2.0 * (r.c_max + 1.0) * (r.c_max + 1.0));
                if !(r.p > 0.0 && r.p < p_max) {
                    errs.push(format!(
                        "refute.p: must lie in (0, {p_max}) for eps = {}, C = {}, s = {}",
                        r.eps, r.c_max, r.s
                    ));
                }
                if !(r.alpha > 0.0 && r.alpha < 1.0) {
                    errs.push(format!("refute.alpha: must lie in (0,1), got {}", r.alpha));
                }
                if r.observations < 2 {
                    errs.push("refute.observations: needs at least 2".into());
                }
                if r.initial.0 == 0 || r.initial.0 >= r.initial.1 {
                    errs.push(format!(
                        "refute.initial: needs 0 < black < total, got {:?}",
                        r.initial
                    ));
                }
            }
        }
    }
    if cfg.output_dir.is_empty() {
        errs.push("output_dir: must not be empty".into());
    }
    errs
}
