//! Independent verification of a fingerprint. The fingerprint is first
//! serialised and parsed back, and the container is recomputed from that
//! record alone, so nothing carried along by the extractor can leak in.

use serde::Serialize;
use thiserror::Error;

use super::cascade::compute_container;
use super::extraction::ExtractionOutcome;
use super::fingerprint::{fingerprint_size, Fingerprint};
use super::schedule::ConstantSchedule;
use crate::hypergraph::{Hypergraph, VertexSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("only P2 outcomes carry a fingerprint (got {0})")]
    NotP2(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    /// Content hash of the recomputed container (empty if the record did
    /// not parse).
    pub container_hash: String,
    pub container_size: usize,
    pub container_edges: usize,
    /// `ε e(H)`.
    pub edge_budget: f64,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn verify_container(
    h: &Hypergraph,
    i: &VertexSet,
    outcome: &ExtractionOutcome,
    schedule: &ConstantSchedule,
) -> Result<VerificationReport, VerifyError> {
    match outcome.certificate() {
        Some(cert) => Ok(verify_fingerprint(h, i, &cert.fingerprint, schedule)),
        None => Err(VerifyError::NotP2(outcome.tag().to_string())),
    }
}

/// Checks, by name:
/// - `record`: the text record parses back to the same fingerprint
/// - `schedule`: `k` and `ε` match the hypergraph and schedule, `m = |I|`
/// - `containment`: `I ⊆ F ∪ D_0`
/// - `sparsity`: `e(D_0) ≤ ε e(H)`
/// - `size`: `|F| = ⌈εm⌉`
/// - `tuple`: every `F_i ⊆ F`
/// - `subset`: `F ⊆ I`
pub fn verify_fingerprint(
    h: &Hypergraph,
    i: &VertexSet,
    fp: &Fingerprint,
    schedule: &ConstantSchedule,
) -> VerificationReport {
    let n = h.vertex_count();
    let edge_budget = schedule.epsilon * h.edge_count() as f64;
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| {
        checks.push(Check {
            name,
            passed,
            detail,
        })
    };

    let text = fp.to_text();
    let parsed = Fingerprint::from_text(&text, n);
    let fp = match parsed {
        Ok(back) => {
            let same = back.to_text() == text;
            push("record", same, "text record round-trips".into());
            back
        }
        Err(err) => {
            push("record", false, err.to_string());
            return VerificationReport {
                checks,
                container_hash: String::new(),
                container_size: 0,
                container_edges: 0,
                edge_budget,
            };
        }
    };

    let shape_ok = fp.k == h.uniformity()
        && fp.k == schedule.k
        && fp.epsilon == schedule.epsilon
        && fp.m == i.len()
        && i.universe() == n;
    push(
        "schedule",
        shape_ok,
        format!(
            "k = {} (H {}, schedule {}), epsilon = {} (schedule {}), m = {} (|I| = {})",
            fp.k,
            h.uniformity(),
            schedule.k,
            fp.epsilon,
            schedule.epsilon,
            fp.m,
            i.len()
        ),
    );
    if !shape_ok {
        return VerificationReport {
            checks,
            container_hash: String::new(),
            container_size: 0,
            container_edges: 0,
            edge_budget,
        };
    }

    let trace = compute_container(h, &fp, schedule);
    let container = trace.container();
    let covered = fp.f.union(container);
    let missing = i.difference(&covered);
    push(
        "containment",
        missing.is_empty(),
        format!("I \\ (F ∪ D_0) = {missing:?}"),
    );
    let edges = h.induced_edge_count(container);
    push(
        "sparsity",
        edges as f64 <= edge_budget,
        format!("e(D_0) = {edges}, budget {edge_budget}"),
    );
    let want = fingerprint_size(fp.epsilon, fp.m);
    push(
        "size",
        fp.f.len() == want,
        format!("|F| = {}, want {want}", fp.f.len()),
    );
    let stray: Vec<usize> = fp
        .tuple
        .iter()
        .enumerate()
        .filter(|(_, part)| !part.is_subset(&fp.f))
        .map(|(idx, _)| idx + 1)
        .collect();
    push(
        "tuple",
        stray.is_empty(),
        format!("levels not inside F: {stray:?}"),
    );
    let outside = fp.f.difference(i);
    push(
        "subset",
        outside.is_empty(),
        format!("F \\ I = {outside:?}"),
    );

    VerificationReport {
        checks,
        container_hash: container.content_hash(),
        container_size: container.len(),
        container_edges: edges,
        edge_budget,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::containers::extraction::extract_fingerprint;
    use crate::containers::schedule::{derive_schedule, ScheduleMode, ScheduleOverrides};
    use crate::generators::ap_hypergraph;
    use crate::hypergraph::tests::a5;
    use crate::seeds::stream;

    fn ints(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::from_ids(n, ids.iter().map(|&i| i - 1))
    }

    /// The A_5 cascade example: `t_2 = 5` and `t_0 = ε e(H) = 2`.
    #[test]
    fn a5_worked_example() {
        let h = a5();
        let mut o = ScheduleOverrides::default();
        o.lambda.insert(2, 5.0 / (4.0 * 0.36));
        let s = derive_schedule(3, 0.5, 1.0, ScheduleMode::Empirical, &o).unwrap();
        assert!((s.threshold(&h, 2, 3) - 5.0).abs() < 1e-12);
        let fp = Fingerprint {
            m: 3,
            epsilon: 0.5,
            k: 3,
            f: ints(5, &[1, 5]),
            tuple: vec![VertexSet::empty(5), ints(5, &[1, 5])],
        };
        let i = ints(5, &[1, 2, 5]);
        let report = verify_fingerprint(&h, &i, &fp, &s);
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.container_edges, 0);
        assert_eq!(report.container_size, 4);
        assert_eq!(report.container_hash, ints(5, &[1, 2, 4, 5]).content_hash());
        // 3 lies outside both F and the container.
        let bad = verify_fingerprint(&h, &ints(5, &[1, 3, 5]), &fp, &s);
        assert!(!bad.check("containment").unwrap().passed);
    }

    #[test]
    fn tampering_is_detected() {
        let h = ap_hypergraph(9, 3).unwrap();
        let s = crate::containers::presets::desk_ap();
        let i = VertexSet::from_ids(9, [0, 1, 3, 7]);
        let out =
            crate::containers::Extractor::new(&h, &s, Default::default()).extract_seeded(&i, 0);
        let mut fp = out.certificate().unwrap().fingerprint.clone();
        assert!(verify_fingerprint(&h, &i, &fp, &s).all_passed());
        let victim = fp.f.iter().next().unwrap();
        fp.f.remove(victim);
        let report = verify_fingerprint(&h, &i, &fp, &s);
        assert!(!report.all_passed());
        assert!(!report.check("size").unwrap().passed);
    }

    #[test]
    fn non_p2_is_rejected() {
        let h = ap_hypergraph(9, 3).unwrap();
        let s = derive_schedule(3, 0.5, 1.0, ScheduleMode::Empirical, &Default::default()).unwrap();
        let all = h.all_vertices();
        let out = extract_fingerprint(&h, &all, &s, &mut stream(0, "x", 0));
        assert!(matches!(
            verify_container(&h, &all, &out, &s),
            Err(VerifyError::NotP2(_))
        ));
    }
}
