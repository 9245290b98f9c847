//! Experiment harness: Monte Carlo trichotomy, exhaustive scans at tiny
//! scale, independence estimates and Janson sweeps written to disk.
//!
//! Every trial draws from its own derived stream and results are collected
//! in trial order before aggregation, so summaries do not depend on the
//! thread count.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::containers::{
    verify_container, ConstantSchedule, ExtractionConfig, ExtractionOutcome, Extractor, Tag,
};
use crate::generators::{binomial, sample_uniform_mset};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::janson::{pair_census, JansonProfile};
use crate::seeds::stream;

/// Largest `C(N, m)` a brute-force scan will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;
pub const MIN_INDEPENDENCE_TRIALS: usize = 100;
/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;
pub const SWEEP_SCHEMA_VERSION: u32 = 1;
pub const SWEEP_COLUMNS: [&str; 10] = [
    "m",
    "mu",
    "delta",
    "bound",
    "p1",
    "p2",
    "bad",
    "indep_est",
    "indep_lo",
    "indep_hi",
];

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("instance too large: C({n}, {m}) = {count} exceeds {limit}")]
    InstanceTooLarge {
        n: usize,
        m: usize,
        count: u128,
        limit: u128,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn check_m(h: &Hypergraph, m: usize) -> Result<(), ExperimentError> {
    if m < 1 || m > h.vertex_count() {
        return Err(ExperimentError::InvalidParameter(format!(
            "m = {m} outside [1, {}]",
            h.vertex_count()
        )));
    }
    Ok(())
}

/// Independent re-check of the cascade bookkeeping for one outcome:
/// iterations per level within `⌈1/α⌉ + margin`, every shrink `≥ αN`, and
/// for P2 the nesting `D_0 ⊆ … ⊆ D_k`.
pub fn cascade_invariants_hold(
    outcome: &ExtractionOutcome,
    schedule: &ConstantSchedule,
    n: usize,
    margin: usize,
) -> bool {
    let levels_ok = outcome
        .levels()
        .iter()
        .filter(|r| r.level < schedule.k)
        .all(|r| {
            let alpha = schedule.alpha(r.level);
            let cap = (1.0 / alpha).ceil() as usize + margin;
            r.iterations <= cap && r.shrinks.iter().all(|&s| s as f64 >= alpha * n as f64)
        });
    let nested = outcome
        .certificate()
        .is_none_or(|cert| cert.trace.is_nested());
    levels_ok && nested
}

/// One classified input, as seen by the aggregators.
struct Classified {
    tag: Tag,
    bad_label: Option<&'static str>,
    verified: Option<bool>,
    container_size: usize,
    container_fraction: f64,
    cascade_ok: bool,
    max_iterations: usize,
}

fn classify(ex: &Extractor, outcome: &ExtractionOutcome, i: &VertexSet) -> Classified {
    let h = ex.hypergraph();
    let schedule = ex.schedule();
    let (verified, container_size, container_fraction) = match outcome.certificate() {
        Some(cert) => {
            let report = verify_container(h, i, outcome, schedule).expect("outcome is P2");
            let container = cert.trace.container();
            let fraction = if h.edge_count() == 0 {
                0.0
            } else {
                h.induced_edge_count(container) as f64 / h.edge_count() as f64
            };
            (Some(report.all_passed()), container.len(), fraction)
        }
        None => (None, 0, 0.0),
    };
    let bad_label = match outcome {
        ExtractionOutcome::Bad { reason, .. } => Some(reason.label()),
        _ => None,
    };
    Classified {
        tag: outcome.tag(),
        bad_label,
        verified,
        container_size,
        container_fraction,
        cascade_ok: cascade_invariants_hold(
            outcome,
            schedule,
            h.vertex_count(),
            ExtractionConfig::default().iteration_margin,
        ),
        max_iterations: outcome
            .levels()
            .iter()
            .map(|r| r.iterations)
            .max()
            .unwrap_or(0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrichotomySummary {
    pub hypergraph_hash: String,
    pub n: usize,
    pub k: usize,
    pub edges: usize,
    pub m: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub p1: usize,
    pub p2: usize,
    pub bad: usize,
    pub p1_fraction: f64,
    pub p2_fraction: f64,
    pub bad_fraction: f64,
    /// BAD outcomes by reason label.
    pub bad_reasons: BTreeMap<String, usize>,
    /// Mean `|D_0|` over P2 outcomes (0 when there are none).
    pub mean_container_size: f64,
    /// Mean `e(D_0)/e(H)` over P2 outcomes.
    pub mean_container_edge_fraction: f64,
    /// P2 outcomes passing `verify_container`.
    pub verified: usize,
    /// `verified / p2`, or 1 when there are no P2 outcomes.
    pub verify_pass_rate: f64,
    /// Outcomes whose cascade bookkeeping re-checks cleanly.
    pub cascade_checked: usize,
    pub max_loop_iterations: usize,
}

impl TrichotomySummary {
    /// Every P2 verified and every cascade re-check passed.
    pub fn invariants_hold(&self) -> bool {
        self.verified == self.p2 && self.cascade_checked == self.trials
    }
}

fn summarise(
    h: &Hypergraph,
    schedule: &ConstantSchedule,
    m: usize,
    seed: u64,
    results: &[Classified],
) -> TrichotomySummary {
    let count = |t: Tag| results.iter().filter(|r| r.tag == t).count();
    let (p1, p2, bad) = (count(Tag::P1), count(Tag::P2), count(Tag::Bad));
    let trials = results.len();
    let frac = |c: usize| {
        if trials == 0 {
            0.0
        } else {
            c as f64 / trials as f64
        }
    };
    let mut bad_reasons = BTreeMap::new();
    for label in results.iter().filter_map(|r| r.bad_label) {
        *bad_reasons.entry(label.to_string()).or_insert(0) += 1;
    }
    let p2s: Vec<&Classified> = results.iter().filter(|r| r.tag == Tag::P2).collect();
    let mean = |f: &dyn Fn(&Classified) -> f64| {
        if p2s.is_empty() {
            0.0
        } else {
            p2s.iter().map(|r| f(r)).sum::<f64>() / p2s.len() as f64
        }
    };
    let verified = results.iter().filter(|r| r.verified == Some(true)).count();
    TrichotomySummary {
        hypergraph_hash: h.content_hash(),
        n: h.vertex_count(),
        k: h.uniformity(),
        edges: h.edge_count(),
        m,
        epsilon: schedule.epsilon,
        trials,
        seed,
        p1,
        p2,
        bad,
        p1_fraction: frac(p1),
        p2_fraction: frac(p2),
        bad_fraction: frac(bad),
        bad_reasons,
        mean_container_size: mean(&|r| r.container_size as f64),
        mean_container_edge_fraction: mean(&|r| r.container_fraction),
        verified,
        verify_pass_rate: if p2 == 0 {
            1.0
        } else {
            verified as f64 / p2 as f64
        },
        cascade_checked: results.iter().filter(|r| r.cascade_ok).count(),
        max_loop_iterations: results.iter().map(|r| r.max_iterations).max().unwrap_or(0),
    }
}

/// Extraction on `trials` uniform m-sets. Trial `t` samples `I` and runs
/// the extraction from the stream `(seed, "trichotomy", t)`.
pub fn mc_trichotomy(
    h: &Hypergraph,
    m: usize,
    schedule: &ConstantSchedule,
    trials: usize,
    seed: u64,
) -> Result<TrichotomySummary, ExperimentError> {
    check_m(h, m)?;
    if trials < 1 {
        return Err(ExperimentError::InvalidParameter(
            "at least one trial is needed".into(),
        ));
    }
    let ex = Extractor::new(h, schedule, ExtractionConfig::default());
    let results: Vec<Classified> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, "trichotomy", t);
            let i = sample_uniform_mset(h.vertex_count(), m, &mut rng).expect("m checked");
            let outcome = ex.extract(&i, &mut rng);
            classify(&ex, &outcome, &i)
        })
        .collect();
    Ok(summarise(h, schedule, m, seed, &results))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadSubset {
    pub subset: Vec<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceSummary {
    pub summary: TrichotomySummary,
    /// Every BAD subset, in lexicographic order.
    pub bad_subsets: Vec<BadSubset>,
}

/// Classifies every m-subset. Subset `I` runs from the stream derived from
/// `(seed, I)`, so its class does not depend on enumeration order.
pub fn brute_force_scan(
    h: &Hypergraph,
    m: usize,
    schedule: &ConstantSchedule,
    seed: u64,
) -> Result<BruteForceSummary, ExperimentError> {
    check_m(h, m)?;
    let n = h.vertex_count();
    let count = binomial(n, m);
    if count > BRUTE_FORCE_LIMIT {
        return Err(ExperimentError::InstanceTooLarge {
            n,
            m,
            count,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let subsets: Vec<Vec<usize>> = (0..n).combinations(m).collect();
    let ex = Extractor::new(h, schedule, ExtractionConfig::default());
    let results: Vec<(Classified, Option<String>)> = subsets
        .par_iter()
        .map(|ids| {
            let i = VertexSet::from_ids(n, ids.iter().copied());
            let outcome = ex.extract_seeded(&i, seed);
            let reason = match &outcome {
                ExtractionOutcome::Bad { reason, .. } => Some(reason.to_string()),
                _ => None,
            };
            (classify(&ex, &outcome, &i), reason)
        })
        .collect();
    let bad_subsets = subsets
        .iter()
        .zip(&results)
        .filter_map(|(ids, (_, reason))| {
            reason.as_ref().map(|r| BadSubset {
                subset: ids.clone(),
                reason: r.clone(),
            })
        })
        .collect();
    let classified: Vec<Classified> = results.into_iter().map(|(c, _)| c).collect();
    Ok(BruteForceSummary {
        summary: summarise(h, schedule, m, seed, &classified),
        bad_subsets,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndependenceEstimate {
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub independent: usize,
    pub estimate: f64,
    /// Wilson 95% interval.
    pub lo: f64,
    pub hi: f64,
}

impl IndependenceEstimate {
    /// Binomial standard error of the estimate.
    pub fn standard_error(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.trials as f64).sqrt()
    }
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // The exact endpoints at 0 and n successes are 0 and 1.
    let lo = if successes == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}

/// Estimates `Pr[I independent]` for a uniform m-set `I`.
pub fn mc_independence(
    h: &Hypergraph,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<IndependenceEstimate, ExperimentError> {
    check_m(h, m)?;
    if trials < MIN_INDEPENDENCE_TRIALS {
        return Err(ExperimentError::InvalidParameter(format!(
            "{trials} trials; at least {MIN_INDEPENDENCE_TRIALS} are needed"
        )));
    }
    let n = h.vertex_count();
    let independent = (0..trials as u64)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = stream(seed, "independence", t);
            let i = sample_uniform_mset(n, m, &mut rng).expect("m checked");
            h.is_independent(&i)
        })
        .count();
    let (lo, hi) = wilson_interval(independent, trials, Z95);
    Ok(IndependenceEstimate {
        m,
        trials,
        seed,
        independent,
        estimate: independent as f64 / trials as f64,
        lo,
        hi,
    })
}

/// Exact `Pr[I independent]` by enumerating every m-subset.
pub fn exact_independence(h: &Hypergraph, m: usize) -> Result<(usize, u128), ExperimentError> {
    check_m(h, m)?;
    let n = h.vertex_count();
    let total = binomial(n, m);
    if total > BRUTE_FORCE_LIMIT {
        return Err(ExperimentError::InstanceTooLarge {
            n,
            m,
            count: total,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let independent = (0..n)
        .combinations(m)
        .filter(|ids| h.is_independent(&VertexSet::from_ids(n, ids.iter().copied())))
        .count();
    Ok((independent, total))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub seed: u64,
    /// Extractions per grid point.
    pub trials: usize,
    /// Samples per independence estimate.
    pub indep_trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub m: usize,
    pub mu: f64,
    pub delta: f64,
    pub bound: f64,
    pub p1: f64,
    pub p2: f64,
    pub bad: f64,
    pub indep_est: f64,
    pub indep_lo: f64,
    pub indep_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepInvariants {
    /// Estimate ≤ Janson bound + 3 standard errors at every grid point.
    pub janson_upper_bound: bool,
    /// Every P2 outcome verified and every cascade re-check passed.
    pub containers_verified: bool,
}

impl SweepInvariants {
    pub fn all(&self) -> bool {
        self.janson_upper_bound && self.containers_verified
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepManifest {
    pub schema_version: u32,
    pub columns: Vec<String>,
    pub crate_version: String,
    pub hypergraph_hash: String,
    pub n: usize,
    pub k: usize,
    pub edges: usize,
    pub m_grid: Vec<usize>,
    pub config: SweepConfig,
    pub schedule: ConstantSchedule,
    pub invariants: SweepInvariants,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub manifest: SweepManifest,
    pub csv_path: PathBuf,
    pub manifest_path: PathBuf,
}

pub const SWEEP_CSV: &str = "sweep.csv";
pub const SWEEP_MANIFEST: &str = "manifest.json";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Runs the Janson profile, trichotomy and independence estimate at each
/// `m` and writes `sweep.csv` and `manifest.json` into `out_dir`.
pub fn sweep_report(
    h: &Hypergraph,
    m_range: &[usize],
    schedule: &ConstantSchedule,
    config: &SweepConfig,
    out_dir: &Path,
) -> Result<SweepReport, ExperimentError> {
    for &m in m_range {
        check_m(h, m)?;
    }
    let census = pair_census(h);
    let mut rows = Vec::with_capacity(m_range.len());
    let mut invariants = SweepInvariants {
        janson_upper_bound: true,
        containers_verified: true,
    };
    for &m in m_range {
        let profile = JansonProfile::from_census(&census, m);
        let tri = mc_trichotomy(h, m, schedule, config.trials, config.seed)?;
        let indep = mc_independence(h, m, config.indep_trials, config.seed)?;
        invariants.janson_upper_bound &=
            indep.estimate <= profile.bound + 3.0 * indep.standard_error();
        invariants.containers_verified &= tri.invariants_hold();
        rows.push(SweepRow {
            m,
            mu: profile.mu,
            delta: profile.delta,
            bound: profile.bound,
            p1: tri.p1_fraction,
            p2: tri.p2_fraction,
            bad: tri.bad_fraction,
            indep_est: indep.estimate,
            indep_lo: indep.lo,
            indep_hi: indep.hi,
        });
    }
    let manifest = SweepManifest {
        schema_version: SWEEP_SCHEMA_VERSION,
        columns: SWEEP_COLUMNS.iter().map(|c| c.to_string()).collect(),
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
        hypergraph_hash: h.content_hash(),
        n: h.vertex_count(),
        k: h.uniformity(),
        edges: h.edge_count(),
        m_grid: m_range.to_vec(),
        config: config.clone(),
        schedule: schedule.clone(),
        invariants,
    };

    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let csv_path = out_dir.join(SWEEP_CSV);
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(&csv_path)?;
    writer.write_record(SWEEP_COLUMNS)?;
    for row in &rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(io_err(&csv_path))?;
    let manifest_path = out_dir.join(SWEEP_MANIFEST);
    let json = serde_json::to_string_pretty(&manifest)? + "\n";
    std::fs::write(&manifest_path, json).map_err(io_err(&manifest_path))?;
    Ok(SweepReport {
        rows,
        manifest,
        csv_path,
        manifest_path,
    })
}
