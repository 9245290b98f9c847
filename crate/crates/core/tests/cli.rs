//! End-to-end runs of the command-line binary.

use std::path::Path;
use std::process::{Command, Output};

use hypercontainer::containers::{presets, Extractor};
use hypercontainer::generators::ap_hypergraph;
use hypercontainer::VertexSet;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercontainer"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_writes_a_parseable_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["gen", "--graph", "ap:9", "--out-dir", "res"]);
    assert!(out.status.success(), "{out:?}");
    let text = std::fs::read_to_string(dir.path().join("res/ap-9-3.edges")).unwrap();
    let h = hypercontainer::hypergraph::parse_edge_list(&text).unwrap();
    assert_eq!(h, ap_hypergraph(9, 3).unwrap());
}

#[test]
fn janson_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["janson", "--graph", "triangle:4", "--m", "2,3"],
    );
    assert!(out.status.success(), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("out/janson.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "m,mu,delta,delta_hat,bound,ratio");
    assert!(lines[2].starts_with("3,0.5,0.375,0.875,"), "{}", lines[2]);
}

#[test]
fn trichotomy_sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        vec![
            "--seed",
            "4",
            "trichotomy",
            "--graph",
            "triangle:6",
            "--preset",
            "desk-triangle",
            "--m",
            "4,6,8",
            "--trials",
            "300",
            "--sweep",
            "--indep-trials",
            "500",
            "--out-dir",
            out,
        ]
    };
    assert!(run(dir.path(), &args("a")).status.success());
    assert!(run(dir.path(), &args("b")).status.success());
    for f in [
        "sweep.csv",
        "manifest.json",
        "trichotomy.json",
        "schedule.toml",
    ] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs");
    }
    let csv = std::fs::read_to_string(dir.path().join("a/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn config_file_supplies_flags_and_command_line_wins() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "seed = 3\nm = [4]\ntrials = 500\npreset = \"desk-ap\"\nout_dir = \"cfg\"\nexact = true\n",
    )
    .unwrap();
    let out = run(
        dir.path(),
        &[
            "--config",
            "run.toml",
            "trichotomy",
            "--graph",
            "ap:15",
            "--trials",
            "200",
        ],
    );
    assert!(out.status.success(), "{out:?}");
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("cfg/trichotomy.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(json[0]["trials"], 200);
    assert_eq!(json[0]["seed"], 3);
    assert_eq!(json[0]["m"], 4);

    std::fs::write(dir.path().join("bad.toml"), "no_such_flag = 1\n").unwrap();
    let out = run(
        dir.path(),
        &["--config", "bad.toml", "janson", "--graph", "ap:5"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_fingerprint_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let h = ap_hypergraph(9, 3).unwrap();
    let schedule = presets::desk_ap();
    let i = VertexSet::from_ids(9, [0, 1, 3, 7]);
    let outcome = Extractor::new(&h, &schedule, Default::default()).extract_seeded(&i, 0);
    let fp = &outcome
        .certificate()
        .expect("P2 under the preset")
        .fingerprint;
    std::fs::write(dir.path().join("good.fp"), fp.to_text()).unwrap();
    let args = |file: &'static str| {
        [
            "verify-fingerprint",
            "--graph",
            "ap:9",
            "--preset",
            "desk-ap",
            "--fingerprint",
            file,
            "--subset",
            "0,1,3,7",
        ]
    };
    let good = run(dir.path(), &args("good.fp"));
    assert!(good.status.success(), "{good:?}");
    assert!(stdout(&good).contains("containment  pass"));

    let mut tampered = fp.clone();
    let v = tampered.f.iter().next().unwrap();
    tampered.f.remove(v);
    std::fs::write(dir.path().join("bad.fp"), tampered.to_text()).unwrap();
    let bad = run(dir.path(), &args("bad.fp"));
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAIL"));
}

#[test]
fn brute_independence_and_transfer_run_clean() {
    let dir = tempfile::tempdir().unwrap();
    let brute = run(dir.path(), &["brute", "--graph", "ap:5", "--m", "3"]);
    assert!(brute.status.success(), "{brute:?}");
    let scan: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/brute.json")).unwrap())
            .unwrap();
    assert_eq!(scan["summary"]["trials"], 10);

    let indep = run(
        dir.path(),
        &[
            "independence",
            "--graph",
            "ap:9",
            "--m",
            "4",
            "--trials",
            "20000",
            "--exact",
        ],
    );
    assert!(indep.status.success(), "{indep:?}");
    assert!(stdout(&indep).contains("exact 51/126"));

    let transfer = run(
        dir.path(),
        &[
            "removal-transfer",
            "--graph",
            "ap:9",
            "--removal-gamma",
            "1",
            "--removal-alpha",
            "0.6",
            "--p",
            "0.7",
            "--trials",
            "10",
        ],
    );
    assert!(transfer.status.success(), "{transfer:?}");

    // Not removable at this scale: reported as an error, not a pass.
    let audit = run(
        dir.path(),
        &[
            "removal-transfer",
            "--graph",
            "ap:9",
            "--removal-gamma",
            "1",
            "--removal-alpha",
            "0.12",
        ],
    );
    assert_eq!(audit.status.code(), Some(2));
}

#[test]
fn bad_arguments_fail() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!run(dir.path(), &["gen", "--graph", "cube:3"])
        .status
        .success());
    assert!(!run(dir.path(), &["trichotomy", "--graph", "ap:9"])
        .status
        .success());
    let proof_pin = run(
        dir.path(),
        &[
            "brute", "--graph", "ap:5", "--m", "2", "--mode", "proof", "--alpha", "0.1",
        ],
    );
    assert_eq!(proof_pin.status.code(), Some(2));
}
