//! Cross-module properties of the experiment pipeline.

use itertools::Itertools;
use proptest::prelude::*;

use hypercontainer::containers::{
    presets, verify_container, ConstantSchedule, ExtractionConfig, Extractor,
};
use hypercontainer::experiments::{
    brute_force_scan, mc_independence, mc_trichotomy, sweep_report, SweepConfig,
};
use hypercontainer::generators::{ap_hypergraph, random_k_graph, triangle_hypergraph};
use hypercontainer::janson::janson_bound;
use hypercontainer::seeds::stream;

/// Exhaustive fractions are matched by Monte Carlo within 3 binomial
/// standard errors.
#[test]
fn brute_force_and_monte_carlo_agree() {
    for (h, schedule, m) in [
        (ap_hypergraph(15, 3).unwrap(), presets::desk_ap(), 4),
        (triangle_hypergraph(6).unwrap(), presets::desk_triangle(), 6),
    ] {
        let exact = brute_force_scan(&h, m, &schedule, 2).unwrap().summary;
        let mc = mc_trichotomy(&h, m, &schedule, 20_000, 2).unwrap();
        for (p, est) in [
            (exact.p1_fraction, mc.p1_fraction),
            (exact.p2_fraction, mc.p2_fraction),
            (exact.bad_fraction, mc.bad_fraction),
        ] {
            let se = (p * (1.0 - p) / mc.trials as f64).sqrt();
            assert!(
                (p - est).abs() <= 3.0 * se + 1e-12,
                "exhaustive {p} vs sampled {est} (se {se})"
            );
        }
    }
}

/// The estimated independence probability stays below the Janson bound
/// plus three standard errors once `m > k`. The bound is a statement about
/// binomial random subsets; a uniform m-set with `m < k` is independent
/// with certainty, which `uniform_sets_below_k_exceed_the_bound` pins down.
#[test]
fn janson_bound_is_respected_on_a_grid() {
    for h in [
        ap_hypergraph(12, 3).unwrap(),
        triangle_hypergraph(6).unwrap(),
        random_k_graph(3, 14, 40, &mut stream(1, "grid", 0)).unwrap(),
    ] {
        for m in h.uniformity() + 1..=h.vertex_count() {
            let est = mc_independence(&h, m, 20_000, 3).unwrap();
            let bound = janson_bound(&h, m).unwrap().bound;
            assert!(
                est.estimate <= bound + 3.0 * est.standard_error(),
                "m={m}: {} > {bound}",
                est.estimate
            );
        }
    }
}

/// Exhaustive independence probability on A_9: below the bound for
/// `m > k`, equal to 1 (and above the bound) for `m < k`.
#[test]
fn exact_independence_against_janson() {
    let h = ap_hypergraph(9, 3).unwrap();
    for m in 1..=9 {
        let independent = (0..9)
            .combinations(m)
            .filter(|ids| h.edges().all(|e| !e.iter().all(|v| ids.contains(v))))
            .count();
        let total = (0..9).combinations(m).count();
        let exact = independent as f64 / total as f64;
        let bound = janson_bound(&h, m).unwrap().bound;
        if m > 3 {
            assert!(exact <= bound + 1e-12, "m={m}");
        } else if m < 3 {
            assert_eq!(exact, 1.0);
            assert!(bound < 1.0);
        }
    }
}

/// The sweep reports the invariant honestly when the grid includes `m < k`.
#[test]
fn uniform_sets_below_k_exceed_the_bound() {
    let h = ap_hypergraph(9, 3).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let cfg = SweepConfig {
        seed: 0,
        trials: 10,
        indep_trials: 1000,
    };
    let schedule = ConstantSchedule::empirical(3, 0.5, 1.0).unwrap();
    let low = sweep_report(&h, &[2], &schedule, &cfg, dir.path()).unwrap();
    assert!(!low.manifest.invariants.janson_upper_bound);
    assert_eq!(low.rows[0].indep_est, 1.0);
    let high = sweep_report(&h, &[4, 5, 6], &schedule, &cfg, dir.path()).unwrap();
    assert!(high.manifest.invariants.janson_upper_bound);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// On random 3-graphs, every P2 outcome verifies and extraction is a
    /// function of (hypergraph, set, seed).
    #[test]
    fn p2_outcomes_always_verify(
        seed in 0u64..1_000_000,
        n in 6usize..16,
        density in 0.05f64..0.5,
        eps in 0.2f64..0.9,
    ) {
        let max = n * (n - 1) * (n - 2) / 6;
        let edges = ((max as f64 * density) as usize).max(1);
        let h = random_k_graph(3, n, edges, &mut stream(seed, "graph", 0)).unwrap();
        let schedule = ConstantSchedule::empirical(3, eps, 1.0).unwrap();
        let ex = Extractor::new(&h, &schedule, ExtractionConfig::default());
        for t in 0..20 {
            let mut rng = stream(seed, "set", t);
            let m = 1 + (t as usize % n);
            let i = hypercontainer::generators::sample_uniform_mset(n, m, &mut rng).unwrap();
            let a = ex.extract_seeded(&i, seed);
            let b = ex.extract_seeded(&i, seed);
            prop_assert_eq!(&a, &b);
            if a.certificate().is_some() {
                let report = verify_container(&h, &i, &a, &schedule).unwrap();
                prop_assert!(report.all_passed(), "{:?}", report);
            }
        }
    }

    /// A P2 certificate covers its input with `F ∪ D_0`, and the container
    /// edge count respects the budget.
    #[test]
    fn p2_certificates_cover_their_input(seed in 0u64..1_000_000) {
        let h = ap_hypergraph(15, 3).unwrap();
        let schedule = presets::desk_ap();
        let ex = Extractor::new(&h, &schedule, ExtractionConfig::default());
        let mut rng = stream(seed, "indep", 0);
        let i = hypercontainer::generators::sample_uniform_mset(15, 4, &mut rng).unwrap();
        if let Some(cert) = ex.extract(&i, &mut rng).certificate() {
            let covered = cert.fingerprint.f.union(cert.trace.container());
            prop_assert!(i.is_subset(&covered));
            let budget = schedule.epsilon * h.edge_count() as f64;
            prop_assert!(h.induced_edge_count(cert.trace.container()) as f64 <= budget);
            prop_assert!(cert.fingerprint.f.is_subset(&i));
        }
    }
}
