//! The constant cascade that drives fingerprint extraction.
//!
//! Levels are indexed by `k' ∈ [1, k]`; `λ` additionally has level 0, which
//! is always `ε`. In proof mode every constant follows from `(k, ε, B, T)`.
//! In empirical mode `α`, `λ` and `T` start from documented defaults and the
//! remaining constants are re-derived from them with the same identities:
//!
//! - `β = ε / (2k²)`
//! - `γ_{k'} = λ_{k'−1} ε / (2k²)`
//! - `ξ_{k'} = α_{k'} ε / (4k²)`
//!
//! Empirical overrides for `β`, `γ` and `ξ` are accepted too; pinning them
//! deliberately breaks the identity for that entry and is recorded in
//! [`ConstantSchedule::overridden`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Hypergraph;

pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_T_DEL: f64 = 4.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScheduleError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("schedule file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleMode {
    Proof,
    Empirical,
}

impl std::str::FromStr for ScheduleMode {
    type Err = ScheduleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "proof" => Ok(ScheduleMode::Proof),
            "empirical" => Ok(ScheduleMode::Empirical),
            other => Err(ScheduleError::InvalidParameter(format!(
                "unknown mode {other:?}"
            ))),
        }
    }
}

/// Per-level pins, keyed by `k'`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScheduleOverrides {
    #[serde(default)]
    pub alpha: BTreeMap<usize, f64>,
    #[serde(default)]
    pub lambda: BTreeMap<usize, f64>,
    #[serde(default)]
    pub xi: BTreeMap<usize, f64>,
    #[serde(default)]
    pub gamma: BTreeMap<usize, f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub t_del: Option<f64>,
}

impl ScheduleOverrides {
    fn is_empty_except_t_del(&self) -> bool {
        self.alpha.is_empty()
            && self.lambda.is_empty()
            && self.xi.is_empty()
            && self.gamma.is_empty()
            && self.beta.is_none()
    }

    /// The same value at every level `1..=k`.
    pub fn uniform(map: &mut BTreeMap<usize, f64>, k: usize, value: f64) {
        for level in 1..=k {
            map.insert(level, value);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantSchedule {
    pub k: usize,
    pub epsilon: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub mode: ScheduleMode,
    pub beta: f64,
    pub t_del: f64,
    /// `γ_1..γ_k`.
    pub gamma: Vec<f64>,
    /// `α_1..α_k`.
    pub alpha: Vec<f64>,
    /// `ξ_1..ξ_k`.
    pub xi: Vec<f64>,
    /// `λ_0..λ_k`, with `λ_0 = ε`.
    pub lambda: Vec<f64>,
    /// `Z_{k'} = 5 γ_{k'}^{-2} 18^{2k} T B`; informational only.
    pub z: Vec<f64>,
    /// Natural logarithms of `γ, α, ξ, λ, Z` (same indexing). Proof-mode
    /// constants leave the range of `f64` already at `k = 3` — the plain
    /// fields then hold `0` or `inf` — so positivity and the identities are
    /// checked on these.
    pub ln_gamma: Vec<f64>,
    pub ln_alpha: Vec<f64>,
    pub ln_xi: Vec<f64>,
    pub ln_lambda: Vec<f64>,
    pub ln_z: Vec<f64>,
    /// Names of entries that were pinned rather than derived, e.g. `alpha.2`.
    #[serde(default)]
    pub overridden: Vec<String>,
}

fn positive(name: &str, value: f64) -> Result<f64, ScheduleError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ScheduleError::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

pub fn derive_schedule(
    k: usize,
    epsilon: f64,
    b: f64,
    mode: ScheduleMode,
    overrides: &ScheduleOverrides,
) -> Result<ConstantSchedule, ScheduleError> {
    if k < 1 {
        return Err(ScheduleError::InvalidParameter(format!(
            "k must be at least 1, got {k}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(ScheduleError::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    positive("B", b)?;
    if mode == ScheduleMode::Proof && !overrides.is_empty_except_t_del() {
        return Err(ScheduleError::InvalidParameter(
            "proof mode only accepts a t_del override".into(),
        ));
    }
    let levels = [
        ("alpha", &overrides.alpha),
        ("lambda", &overrides.lambda),
        ("xi", &overrides.xi),
        ("gamma", &overrides.gamma),
    ];
    for (name, map) in levels {
        for (&level, &value) in map.iter() {
            if level < 1 || level > k {
                return Err(ScheduleError::InvalidParameter(format!(
                    "{name}.{level} is outside levels 1..={k}"
                )));
            }
            positive(&format!("{name}.{level}"), value)?;
        }
    }

    let mut overridden = Vec::new();
    let t_del = match overrides.t_del {
        Some(t) => {
            overridden.push("t_del".to_string());
            positive("t_del", t)?
        }
        None => DEFAULT_T_DEL,
    };
    if mode == ScheduleMode::Proof && t_del <= 1.0 {
        return Err(ScheduleError::InvalidParameter(format!(
            "proof mode needs t_del > 1, got {t_del}"
        )));
    }

    let kk = (k * k) as f64;
    let beta = match overrides.beta {
        Some(v) => {
            overridden.push("beta".to_string());
            positive("beta", v)?
        }
        None => epsilon / (2.0 * kk),
    };
    let mut pin = |name: &str, level: usize, map: &BTreeMap<usize, f64>, derived: f64| match map
        .get(&level)
    {
        Some(&v) => {
            overridden.push(format!("{name}.{level}"));
            v
        }
        None => derived,
    };

    let ln_z_base = 5f64.ln() + (2 * k) as f64 * 18f64.ln() + t_del.ln() + b.ln();
    let mut ln_lambda = vec![epsilon.ln()];
    let (mut ln_gamma, mut ln_alpha, mut ln_xi, mut ln_z) = (vec![], vec![], vec![], vec![]);
    let mut lambda = vec![epsilon];
    let (mut gamma, mut alpha, mut xi) = (vec![], vec![], vec![]);
    for level in 1..=k {
        match mode {
            // Log space throughout; the plain values may leave f64 range.
            ScheduleMode::Proof => {
                let (ln_eps, ln_2kk, ln_4kk) = (epsilon.ln(), (2.0 * kk).ln(), (4.0 * kk).ln());
                let g = ln_lambda[level - 1] + ln_eps - ln_2kk;
                let z = ln_z_base - 2.0 * g;
                let a = -(4f64.ln() + (2 * k) as f64 * 2f64.ln() + z);
                let x = a + ln_eps - ln_4kk;
                let l = g + level as f64 * (x - 2f64.ln()) - 4f64.ln();
                ln_gamma.push(g);
                ln_alpha.push(a);
                ln_xi.push(x);
                ln_lambda.push(l);
            }
            ScheduleMode::Empirical => {
                let g = pin(
                    "gamma",
                    level,
                    &overrides.gamma,
                    lambda[level - 1] * epsilon / (2.0 * kk),
                );
                let a = pin("alpha", level, &overrides.alpha, DEFAULT_ALPHA);
                let x = pin("xi", level, &overrides.xi, a * epsilon / (4.0 * kk));
                let l = pin("lambda", level, &overrides.lambda, g / 4.0);
                ln_gamma.push(g.ln());
                ln_alpha.push(a.ln());
                ln_xi.push(x.ln());
                ln_lambda.push(l.ln());
                gamma.push(g);
                alpha.push(a);
                xi.push(x);
                lambda.push(l);
            }
        }
        ln_z.push(ln_z_base - 2.0 * ln_gamma[level - 1]);
    }
    let exp = |v: &[f64]| v.iter().map(|x| x.exp()).collect::<Vec<f64>>();
    if mode == ScheduleMode::Proof {
        gamma = exp(&ln_gamma);
        alpha = exp(&ln_alpha);
        xi = exp(&ln_xi);
        lambda.extend(exp(&ln_lambda[1..]));
    }
    let z = exp(&ln_z);

    let schedule = ConstantSchedule {
        k,
        epsilon,
        b,
        mode,
        beta,
        t_del,
        gamma,
        alpha,
        xi,
        lambda,
        z,
        ln_gamma,
        ln_alpha,
        ln_xi,
        ln_lambda,
        ln_z,
        overridden,
    };
    schedule.validate()?;
    Ok(schedule)
}

impl ConstantSchedule {
    /// Default empirical schedule: no overrides.
    pub fn empirical(k: usize, epsilon: f64, b: f64) -> Result<Self, ScheduleError> {
        derive_schedule(
            k,
            epsilon,
            b,
            ScheduleMode::Empirical,
            &ScheduleOverrides::default(),
        )
    }

    pub fn gamma(&self, level: usize) -> f64 {
        self.gamma[level - 1]
    }

    pub fn alpha(&self, level: usize) -> f64 {
        self.alpha[level - 1]
    }

    pub fn xi(&self, level: usize) -> f64 {
        self.xi[level - 1]
    }

    pub fn lambda(&self, level: usize) -> f64 {
        self.lambda[level]
    }

    pub fn z(&self, level: usize) -> f64 {
        self.z[level - 1]
    }

    /// `t_{k'}(m) = λ_{k'} e(H) (m/N)^{k'}`.
    pub fn threshold(&self, h: &Hypergraph, level: usize, m: usize) -> f64 {
        let q = m as f64 / h.vertex_count() as f64;
        self.lambda(level) * h.edge_count() as f64 * q.powi(level as i32)
    }

    /// `t_0(m), …, t_{k−1}(m)`, the inputs of the degree cascade.
    pub fn cascade_thresholds(&self, h: &Hypergraph, m: usize) -> Vec<f64> {
        (0..self.k)
            .map(|level| self.threshold(h, level, m))
            .collect()
    }

    /// `γ_{k'} e(H) (m/N)^{k'}`, the stopping level of the saturation loop
    /// (and, for `k' = k`, the dense-subset threshold).
    pub fn guard(&self, h: &Hypergraph, level: usize, m: usize) -> f64 {
        let q = m as f64 / h.vertex_count() as f64;
        self.gamma(level) * h.edge_count() as f64 * q.powi(level as i32)
    }

    fn validate(&self) -> Result<(), ScheduleError> {
        let k = self.k;
        if self.gamma.len() != k
            || self.alpha.len() != k
            || self.xi.len() != k
            || self.z.len() != k
            || self.lambda.len() != k + 1
        {
            return Err(ScheduleError::InvalidParameter(format!(
                "per-level vectors must have {k} entries (lambda {})",
                k + 1
            )));
        }
        if self.lambda[0] != self.epsilon {
            return Err(ScheduleError::InvalidParameter(
                "lambda.0 must equal epsilon".into(),
            ));
        }
        let logs = [&self.ln_gamma, &self.ln_alpha, &self.ln_xi, &self.ln_z];
        if logs.iter().any(|v| v.len() != k) || self.ln_lambda.len() != k + 1 {
            return Err(ScheduleError::InvalidParameter(
                "log-scale vectors have the wrong length".into(),
            ));
        }
        for v in logs.into_iter().flatten().chain(&self.ln_lambda) {
            if !v.is_finite() {
                return Err(ScheduleError::InvalidParameter(format!(
                    "schedule entry must be positive, got log value {v}"
                )));
            }
        }
        for &v in [&self.beta, &self.t_del, &self.b] {
            positive("schedule entry", v)?;
        }
        if self.mode == ScheduleMode::Empirical {
            let entries = self
                .gamma
                .iter()
                .chain(&self.alpha)
                .chain(&self.xi)
                .chain(&self.lambda)
                .chain(&self.z);
            for &v in entries {
                positive("schedule entry", v)?;
            }
        }
        Ok(())
    }

    /// Flat `key = value` text (TOML).
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("schedule serialises")
    }

    pub fn from_text(text: &str) -> Result<Self, ScheduleError> {
        let schedule: ConstantSchedule =
            toml::from_str(text).map_err(|e| ScheduleError::Parse(e.to_string()))?;
        schedule.validate()?;
        Ok(schedule)
    }
}
