//! Randomised fingerprint extraction with the P1 / P2 / BAD trichotomy.
//!
//! 1. If `e(I) ≥ γ_k e(H) q^k` (and `e(I) > 0`) the input is dense: P1.
//! 2. Greedy deletion over the union-set families `S_k, …, S_{2k}` removes
//!    `X ⊆ I`, `|X| ≤ ⌊βm⌋`; `I' = I ∖ X`.
//! 3. For `k' = k−1 … 1`, saturating subsamples `W ⊆ I'` are added to
//!    `F_{k'}` until `e_{k'}(D_{k'}, I') < γ_{k'} e(H) q^{k'}`.
//! 4. `R = I' ∖ D_0` and `F = X ∪ R ∪ F_1 ∪ … ∪ F_{k−1}`, padded with the
//!    lowest ids of `I ∖ F` to exactly `⌈εm⌉`: P2.
//!
//! Anything that fails along the way is classified BAD with its reason.

use std::fmt;

use rand::Rng;

use super::cascade::{cascade, prune_level, ContainerTrace};
use super::deletion::{deletion_prune, DeletionFailure, DeletionMethod};
use super::fingerprint::{fingerprint_size, Fingerprint};
use super::saturation::{find_saturating_set, SaturationError, DEFAULT_MAX_RETRIES};
use super::schedule::ConstantSchedule;
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::janson::{pair_census, PairCensus};
use crate::seeds::{set_stream, StreamRng};

pub const DEFAULT_ITERATION_MARGIN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractionConfig {
    /// Subsamples per saturation search.
    pub max_retries: usize,
    /// Extra saturation rounds allowed beyond `⌈1/α⌉` per level.
    pub iteration_margin: usize,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            max_retries: DEFAULT_MAX_RETRIES,
            iteration_margin: DEFAULT_ITERATION_MARGIN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    P1,
    P2,
    Bad,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::P1 => "P1",
            Tag::P2 => "P2",
            Tag::Bad => "BAD",
        })
    }
}

/// What happened at one level of the saturation loop. Level `k` is
/// recorded too, with no iterations, to audit `e(I')` against its guard.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelRecord {
    pub level: usize,
    pub iterations: usize,
    /// `|D_before| − |D_after|` for each successful iteration.
    pub shrinks: Vec<usize>,
    /// Subsamples drawn by each successful saturation search.
    pub attempts: Vec<usize>,
    /// `e_{k'}(D_{k'}, I')` when the loop stopped (or gave up).
    pub exit_edges: usize,
    /// `γ_{k'} e(H) q^{k'}`.
    pub guard: f64,
}

impl LevelRecord {
    /// The loop-exit condition.
    pub fn guard_met(&self) -> bool {
        guard_met(self.exit_edges, self.guard)
    }
}

fn guard_met(edges: usize, guard: f64) -> bool {
    edges == 0 || (edges as f64) < guard
}

#[derive(Debug, Clone, PartialEq)]
pub enum BadReason {
    SaturationExhausted { level: usize, attempts: usize },
    DeletionBudgetExceeded(DeletionFailure),
    IterationLimit { level: usize, iterations: usize },
    FingerprintTooLarge { size: usize, cap: usize },
}

impl fmt::Display for BadReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BadReason::SaturationExhausted { level, attempts } => write!(
                f,
                "saturation-search exhausted at level {level} after {attempts} attempts"
            ),
            BadReason::DeletionBudgetExceeded(fail) => {
                write!(f, "deletion budget exceeded: {fail}")
            }
            BadReason::IterationLimit { level, iterations } => {
                write!(f, "iteration limit at level {level} ({iterations} rounds)")
            }
            BadReason::FingerprintTooLarge { size, cap } => {
                write!(f, "fingerprint too large: {size} > {cap}")
            }
        }
    }
}

impl BadReason {
    /// Short machine-readable label.
    pub fn label(&self) -> &'static str {
        match self {
            BadReason::SaturationExhausted { .. } => "saturation-exhausted",
            BadReason::DeletionBudgetExceeded(_) => "deletion-budget",
            BadReason::IterationLimit { .. } => "iteration-limit",
            BadReason::FingerprintTooLarge { .. } => "fingerprint-too-large",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct P2Certificate {
    pub fingerprint: Fingerprint,
    pub trace: ContainerTrace,
    pub residue: VertexSet,
    pub deleted: VertexSet,
    pub deletion_method: DeletionMethod,
    /// Levels `k, k−1, …, 1`.
    pub levels: Vec<LevelRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtractionOutcome {
    P1 {
        edges: usize,
        threshold: f64,
    },
    P2(Box<P2Certificate>),
    Bad {
        reason: BadReason,
        levels: Vec<LevelRecord>,
    },
}

impl ExtractionOutcome {
    pub fn tag(&self) -> Tag {
        match self {
            ExtractionOutcome::P1 { .. } => Tag::P1,
            ExtractionOutcome::P2(_) => Tag::P2,
            ExtractionOutcome::Bad { .. } => Tag::Bad,
        }
    }

    pub fn certificate(&self) -> Option<&P2Certificate> {
        match self {
            ExtractionOutcome::P2(cert) => Some(cert),
            _ => None,
        }
    }

    pub fn levels(&self) -> &[LevelRecord] {
        match self {
            ExtractionOutcome::P1 { .. } => &[],
            ExtractionOutcome::P2(cert) => &cert.levels,
            ExtractionOutcome::Bad { levels, .. } => levels,
        }
    }
}

/// Shared, immutable state for many extractions on one hypergraph.
pub struct Extractor<'a> {
    h: &'a Hypergraph,
    schedule: &'a ConstantSchedule,
    config: ExtractionConfig,
    /// Members of `S_k, …, S_{2k}`, in order of size.
    family: Vec<Vec<usize>>,
}

impl<'a> Extractor<'a> {
    pub fn new(
        h: &'a Hypergraph,
        schedule: &'a ConstantSchedule,
        config: ExtractionConfig,
    ) -> Self {
        Self::with_census(h, schedule, config, &pair_census(h))
    }

    pub fn with_census(
        h: &'a Hypergraph,
        schedule: &'a ConstantSchedule,
        config: ExtractionConfig,
        census: &PairCensus,
    ) -> Self {
        assert_eq!(
            schedule.k,
            h.uniformity(),
            "schedule and hypergraph disagree on k"
        );
        let family = census
            .sizes()
            .flat_map(|s| census.union_sets(s).iter().cloned())
            .collect();
        Extractor {
            h,
            schedule,
            config,
            family,
        }
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        self.h
    }

    pub fn schedule(&self) -> &ConstantSchedule {
        self.schedule
    }

    /// Extraction driven by the stream derived from `(master, I)`, so the
    /// result is a function of the set alone.
    pub fn extract_seeded(&self, i: &VertexSet, master: u64) -> ExtractionOutcome {
        let mut rng: StreamRng = set_stream(master, "extract", i);
        self.extract(i, &mut rng)
    }

    pub fn extract<R: Rng + ?Sized>(&self, i: &VertexSet, rng: &mut R) -> ExtractionOutcome {
        let h = self.h;
        let sched = self.schedule;
        let k = h.uniformity();
        let n = h.vertex_count();
        let m = i.len();
        assert!(m >= 1, "extraction needs a non-empty input");
        assert_eq!(i.universe(), n, "input set lives in a different universe");

        // Step 1: dense inputs.
        let dense = sched.guard(h, k, m);
        let e_i = h.induced_edge_count(i);
        if e_i > 0 && e_i as f64 >= dense {
            return ExtractionOutcome::P1 {
                edges: e_i,
                threshold: dense,
            };
        }

        // Step 2: deletion.
        let (deleted, deletion_method) = if k >= 2 {
            let budget = (sched.beta * m as f64 + 1e-9).floor() as usize;
            match deletion_prune(&self.family, i, m, sched.t_del, budget) {
                Ok(out) => (out.removed, out.method),
                Err(fail) => {
                    return ExtractionOutcome::Bad {
                        reason: BadReason::DeletionBudgetExceeded(fail),
                        levels: Vec::new(),
                    }
                }
            }
        } else {
            (VertexSet::empty(n), DeletionMethod::Greedy)
        };
        let i_prime = i.difference(&deleted);

        // Step 3: saturation, top level down.
        let mut levels = vec![LevelRecord {
            level: k,
            iterations: 0,
            shrinks: Vec::new(),
            attempts: Vec::new(),
            exit_edges: h.induced_edge_count(&i_prime),
            guard: dense,
        }];
        let mut tuple = vec![VertexSet::empty(n); k.saturating_sub(1)];
        let mut parent = h.all_vertices();
        let mut computed_levels = Vec::new();
        for level in (1..k).rev() {
            let t = sched.threshold(h, level, m);
            let guard = sched.guard(h, level, m);
            let alpha = sched.alpha(level);
            let limit = (1.0 / alpha).ceil() as usize + self.config.iteration_margin;
            let mut record = LevelRecord {
                level,
                iterations: 0,
                shrinks: Vec::new(),
                attempts: Vec::new(),
                exit_edges: 0,
                guard,
            };
            let mut f = VertexSet::empty(n);
            let mut d = prune_level(h, &parent, &f, level, t);
            loop {
                let edges = h.e_at_least(level, &d, &i_prime);
                record.exit_edges = edges;
                if guard_met(edges, guard) {
                    break;
                }
                if record.iterations >= limit {
                    let iterations = record.iterations;
                    levels.push(record);
                    return ExtractionOutcome::Bad {
                        reason: BadReason::IterationLimit { level, iterations },
                        levels,
                    };
                }
                record.iterations += 1;
                let found = match find_saturating_set(
                    h,
                    &i_prime,
                    &d,
                    level,
                    sched,
                    m,
                    self.config.max_retries,
                    rng,
                ) {
                    Ok(found) => found,
                    Err(SaturationError::SaturationFailure { attempts, .. }) => {
                        levels.push(record);
                        return ExtractionOutcome::Bad {
                            reason: BadReason::SaturationExhausted { level, attempts },
                            levels,
                        };
                    }
                    Err(err @ SaturationError::PreconditionViolated { .. }) => {
                        unreachable!("guard checked before searching: {err}")
                    }
                };
                f.union_with(&found.w);
                let next = prune_level(h, &parent, &f, level, t);
                assert!(next.is_subset(&d), "cascade level grew after saturation");
                let shrink = d.len() - next.len();
                assert!(
                    shrink as f64 >= alpha * n as f64 - 1e-9,
                    "saturation shrank level {level} by {shrink} < αN = {}",
                    alpha * n as f64
                );
                record.shrinks.push(shrink);
                record.attempts.push(found.attempts);
                d = next;
            }
            levels.push(record);
            tuple[level - 1] = f;
            computed_levels.push((level, d.clone()));
            parent = d;
        }

        // Step 4: container, residue and fingerprint.
        let trace = cascade(h, &tuple, &sched.cascade_thresholds(h, m));
        for (level, d) in &computed_levels {
            assert_eq!(trace.level(*level), d, "cascade replay diverged");
        }
        let residue = i_prime.difference(trace.container());
        let mut f = deleted.union(&residue);
        for part in &tuple {
            f.union_with(part);
        }
        let cap = fingerprint_size(sched.epsilon, m);
        if f.len() > cap {
            return ExtractionOutcome::Bad {
                reason: BadReason::FingerprintTooLarge { size: f.len(), cap },
                levels,
            };
        }
        let padding: Vec<usize> = i
            .iter()
            .filter(|&v| !f.contains(v))
            .take(cap - f.len())
            .collect();
        for v in padding {
            f.insert(v);
        }
        ExtractionOutcome::P2(Box::new(P2Certificate {
            fingerprint: Fingerprint {
                m,
                epsilon: sched.epsilon,
                k,
                f,
                tuple,
            },
            trace,
            residue,
            deleted,
            deletion_method,
            levels,
        }))
    }
}

/// One-shot extraction; builds the pair census on every call.
pub fn extract_fingerprint<R: Rng + ?Sized>(
    h: &Hypergraph,
    i: &VertexSet,
    schedule: &ConstantSchedule,
    rng: &mut R,
) -> ExtractionOutcome {
    Extractor::new(h, schedule, ExtractionConfig::default()).extract(i, rng)
}
