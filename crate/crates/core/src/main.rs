use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{ArgAction, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;

use hypercontainer::cli::{load_flat_config, ConfigValue, LevelValues, Source};
use hypercontainer::containers::{
    derive_schedule, presets, verify_fingerprint, ConstantSchedule, Fingerprint, ScheduleMode,
    ScheduleOverrides,
};
use hypercontainer::experiments::{
    brute_force_scan, exact_independence, mc_independence, mc_trichotomy, sweep_report, SweepConfig,
};
use hypercontainer::hypergraph::{parse_edge_list, write_edge_list};
use hypercontainer::janson::{find_m0_with, pair_census, JansonProfile, M0Search};
use hypercontainer::removal::transference_experiment;
use hypercontainer::{Hypergraph, VertexSet};

/// Probabilistic hypergraph containers: Janson quantities, fingerprint
/// extraction and desk-scale verification.
#[derive(Parser)]
#[command(name = "hypercontainer", version)]
struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for result files.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Flat TOML file of `flag = value` pairs; flags on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// triangle:N, ap:N[:LEN], random:K:N:EDGES, copy:N:PATTERN_FILE or file:PATH.
    #[arg(long)]
    graph: Source,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Schedule file written by an earlier run.
    #[arg(long, conflicts_with = "preset")]
    schedule_file: Option<PathBuf>,
    /// Calibrated schedule: desk-ap or desk-triangle.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Janson constant B.
    #[arg(long = "b", default_value_t = 1.0)]
    b: f64,
    /// empirical or proof.
    #[arg(long, default_value = "empirical")]
    mode: ScheduleMode,
    /// Per-level alpha pins: one value for every level, or LEVEL=V[,LEVEL=V...].
    #[arg(long)]
    alpha: Option<LevelValues>,
    /// Per-level lambda pins (same syntax as --alpha).
    #[arg(long)]
    lambda: Option<LevelValues>,
    /// Per-level xi pins (same syntax as --alpha).
    #[arg(long)]
    xi: Option<LevelValues>,
    /// Per-level gamma pins (same syntax as --alpha).
    #[arg(long)]
    gamma: Option<LevelValues>,
    /// Deletion budget fraction: at most floor(beta m) deletions.
    #[arg(long)]
    beta: Option<f64>,
    /// Deletion threshold factor T.
    #[arg(long)]
    t_del: Option<f64>,
}

impl ScheduleArgs {
    fn resolve(&self, k: usize) -> anyhow::Result<ConstantSchedule> {
        let schedule = if let Some(path) = &self.schedule_file {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            ConstantSchedule::from_text(&text)?
        } else if let Some(name) = &self.preset {
            presets::by_name(name).with_context(|| {
                format!(
                    "unknown preset {name:?} (known: {})",
                    presets::NAMES.join(", ")
                )
            })?
        } else {
            let mut o = ScheduleOverrides::default();
            for (values, map) in [
                (&self.alpha, &mut o.alpha),
                (&self.lambda, &mut o.lambda),
                (&self.xi, &mut o.xi),
                (&self.gamma, &mut o.gamma),
            ] {
                if let Some(v) = values {
                    v.apply(map, k);
                }
            }
            o.beta = self.beta;
            o.t_del = self.t_del;
            derive_schedule(k, self.epsilon, self.b, self.mode, &o)?
        };
        if schedule.k != k {
            bail!("schedule is for k = {}, hypergraph has k = {k}", schedule.k);
        }
        Ok(schedule)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a hypergraph and write its edge list.
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
        /// Output file (default: <out-dir>/<name>.edges).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Janson profile per m, written to janson.csv, and m0.
    Janson {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated m values (default: 1..=N).
        #[arg(long, value_delimiter = ',', action = ArgAction::Set)]
        m: Vec<usize>,
        /// Janson constant B used for m0.
        #[arg(long = "b", default_value_t = 1.0)]
        b: f64,
    },
    /// Monte Carlo trichotomy per m; with --sweep also the CSV sweep.
    Trichotomy {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        schedule: ScheduleArgs,
        /// Comma-separated subset sizes m.
        #[arg(long, value_delimiter = ',', action = ArgAction::Set, required = true)]
        m: Vec<usize>,
        /// Sampled subsets per m.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Also write sweep.csv and manifest.json over the m grid.
        #[arg(long)]
        sweep: bool,
        /// Independence samples per sweep point.
        #[arg(long, default_value_t = 10_000)]
        indep_trials: usize,
    },
    /// Classify every m-subset.
    Brute {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        schedule: ScheduleArgs,
        /// Subset size m.
        #[arg(long)]
        m: usize,
    },
    /// Estimate Pr[I independent] against the Janson bound.
    Independence {
        #[command(flatten)]
        graph: GraphArgs,
        /// Subset size m.
        #[arg(long)]
        m: usize,
        /// Sampled subsets.
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Also count independent m-sets exhaustively.
        #[arg(long)]
        exact: bool,
    },
    /// Sparsified removability trials.
    RemovalTransfer {
        #[command(flatten)]
        graph: GraphArgs,
        /// Edge fraction: removability is audited at s = gamma e(H).
        #[arg(long = "removal-gamma")]
        removal_gamma: f64,
        /// Vertex fraction: removability is audited at r = floor(alpha N).
        #[arg(long = "removal-alpha")]
        removal_alpha: f64,
        /// Comma-separated vertex retention probabilities p.
        #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "0.5,0.7,0.9")]
        p: Vec<f64>,
        /// Random subsets W per p.
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Recompute a container from a fingerprint record and check it.
    VerifyFingerprint {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        schedule: ScheduleArgs,
        /// Fingerprint record file.
        #[arg(long)]
        fingerprint: PathBuf,
        /// The set I, as comma- or space-separated vertex ids.
        #[arg(long)]
        subset: String,
    },
}

/// The outcome of invariant checks for one run.
struct Checks(Vec<(String, bool)>);

impl Checks {
    fn new() -> Self {
        Checks(Vec::new())
    }

    fn push(&mut self, name: impl Into<String>, ok: bool) {
        self.0.push((name.into(), ok));
    }

    fn all(&self) -> bool {
        self.0.iter().all(|(_, ok)| *ok)
    }
}

fn command() -> clap::Command {
    Cli::command()
        .args_override_self(true)
        .mut_subcommands(|s| s.args_override_self(true))
}

/// Inserts config entries ahead of the user's own arguments so that the
/// latter override them.
fn merge_config(
    cmd: &clap::Command,
    path: &Path,
    raw: &[OsString],
    verb: &str,
) -> anyhow::Result<Vec<OsString>> {
    let config = load_flat_config(path)?;
    let sub = cmd.find_subcommand(verb).expect("parsed verb exists");
    let find = |c: &clap::Command, name: &str| {
        c.get_arguments()
            .find(|a| a.get_long() == Some(name))
            .cloned()
    };
    let mut globals = Vec::new();
    let mut locals = Vec::new();
    for (key, value) in &config {
        if key == "config" {
            bail!("{}: a config file cannot name another", path.display());
        }
        let (arg, target) = if let Some(arg) = find(cmd, key) {
            (arg, &mut globals)
        } else if let Some(arg) = find(sub, key) {
            (arg, &mut locals)
        } else if cmd.get_subcommands().any(|s| find(s, key).is_some()) {
            continue;
        } else {
            bail!("{}: unknown key {key:?}", path.display());
        };
        let flag = OsString::from(format!("--{key}"));
        match value {
            ConfigValue::Flag(true) if !arg.get_action().takes_values() => target.push(flag),
            ConfigValue::Flag(false) if !arg.get_action().takes_values() => {}
            ConfigValue::Value(v) if arg.get_action().takes_values() => {
                target.push(flag);
                target.push(v.into());
            }
            _ => bail!("{}: wrong kind of value for {key:?}", path.display()),
        }
    }
    let verb_at = raw
        .iter()
        .skip(1)
        .position(|a| a == verb)
        .map(|p| p + 1)
        .expect("verb present");
    let mut argv = vec![raw[0].clone()];
    argv.extend(globals);
    argv.extend(raw[1..verb_at].iter().cloned());
    argv.push(verb.into());
    argv.extend(locals);
    argv.extend(raw[verb_at + 1..].iter().cloned());
    Ok(argv)
}

/// The `--config` path and the verb, found without a full parse so that a
/// config file may supply required flags.
fn prescan(cmd: &clap::Command, raw: &[OsString]) -> Option<(PathBuf, String)> {
    let mut config = None;
    let mut verb = None;
    let mut args = raw.iter().skip(1);
    while let Some(arg) = args.next() {
        let text = arg.to_string_lossy();
        if let Some(path) = text.strip_prefix("--config=") {
            config = Some(PathBuf::from(path));
        } else if text == "--config" {
            config = args.next().map(PathBuf::from);
        } else if verb.is_none() && cmd.find_subcommand(text.as_ref()).is_some() {
            verb = Some(text.into_owned());
        }
    }
    Some((config?, verb?))
}

fn parse_cli() -> anyhow::Result<Cli> {
    let raw: Vec<OsString> = std::env::args_os().collect();
    let cmd = command();
    let argv = match prescan(&cmd, &raw) {
        Some((path, verb)) => merge_config(&cmd, &path, &raw, &verb)?,
        None => raw,
    };
    Ok(Cli::from_arg_matches(&cmd.get_matches_from(argv))?)
}

fn write_json<T: Serialize>(out_dir: &Path, name: &str, value: &T) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let path = out_dir.join(name);
    let text = serde_json::to_string_pretty(value)? + "\n";
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn write_schedule(out_dir: &Path, schedule: &ConstantSchedule) -> anyhow::Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join("schedule.toml");
    std::fs::write(&path, schedule.to_text()).with_context(|| format!("writing {}", path.display()))
}

fn parse_subset(text: &str, n: usize) -> anyhow::Result<VertexSet> {
    let mut set = VertexSet::empty(n);
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()) {
        if tok.is_empty() {
            continue;
        }
        let v: usize = tok
            .parse()
            .with_context(|| format!("bad vertex id {tok:?}"))?;
        if v >= n {
            bail!("vertex {v} outside [0, {n})");
        }
        set.insert(v);
    }
    Ok(set)
}

fn run(cli: Cli) -> anyhow::Result<Checks> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let out = &cli.out_dir;
    let seed = cli.seed;
    let mut checks = Checks::new();
    let build = |g: &GraphArgs| -> anyhow::Result<Hypergraph> {
        g.graph
            .build(seed)
            .with_context(|| format!("building {}", g.graph))
    };

    match &cli.command {
        Command::Gen { graph, output } => {
            let h = build(graph)?;
            let text = write_edge_list(&h);
            checks.push("edge-list round trip", parse_edge_list(&text)? == h);
            let path = output
                .clone()
                .unwrap_or_else(|| out.join(format!("{}.edges", graph.graph)));
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            println!(
                "{}: k = {}, N = {}, e = {}, hash {}",
                path.display(),
                h.uniformity(),
                h.vertex_count(),
                h.edge_count(),
                h.content_hash()
            );
        }
        Command::Janson { graph, m, b } => {
            let h = build(graph)?;
            let census = pair_census(&h);
            let grid: Vec<usize> = if m.is_empty() {
                (1..=h.vertex_count()).collect()
            } else {
                m.clone()
            };
            std::fs::create_dir_all(out)?;
            let path = out.join("janson.csv");
            let mut writer = csv::Writer::from_path(&path)?;
            writer.write_record(["m", "mu", "delta", "delta_hat", "bound", "ratio"])?;
            for &m in &grid {
                if m < 1 || m > h.vertex_count() {
                    bail!("m = {m} outside [1, {}]", h.vertex_count());
                }
                let p = JansonProfile::from_census(&census, m);
                checks.push(
                    format!("janson m={m}"),
                    p.mu >= 0.0 && p.delta >= 0.0 && (0.0..=1.0).contains(&p.bound),
                );
                writer.write_record([
                    m.to_string(),
                    p.mu.to_string(),
                    p.delta.to_string(),
                    p.delta_hat.to_string(),
                    p.bound.to_string(),
                    p.ratio().to_string(),
                ])?;
            }
            writer.flush()?;
            println!("{}: {} rows", path.display(), grid.len());
            match find_m0_with(&census, *b, M0Search::Audited) {
                Ok(r) => println!(
                    "m0 = {} (B = {b}, predicate monotone: {})",
                    r.m0,
                    r.monotone.unwrap_or(false)
                ),
                Err(e) => println!("m0: {e}"),
            }
        }
        Command::Trichotomy {
            graph,
            schedule,
            m,
            trials,
            sweep,
            indep_trials,
        } => {
            let h = build(graph)?;
            let sched = schedule.resolve(h.uniformity())?;
            write_schedule(out, &sched)?;
            let mut summaries = Vec::new();
            for &m in m {
                let s = mc_trichotomy(&h, m, &sched, *trials, seed)?;
                println!(
                    "m = {m}: P1 {:.4}  P2 {:.4}  BAD {:.4}  verified {}/{}  mean |D_0| {:.2}",
                    s.p1_fraction,
                    s.p2_fraction,
                    s.bad_fraction,
                    s.verified,
                    s.p2,
                    s.mean_container_size
                );
                checks.push(format!("trichotomy m={m}"), s.invariants_hold());
                summaries.push(s);
            }
            let path = write_json(out, "trichotomy.json", &summaries)?;
            println!("{}", path.display());
            if *sweep {
                let cfg = SweepConfig {
                    seed,
                    trials: *trials,
                    indep_trials: *indep_trials,
                };
                let report = sweep_report(&h, m, &sched, &cfg, out)?;
                checks.push(
                    "sweep Janson upper bound",
                    report.manifest.invariants.janson_upper_bound,
                );
                checks.push(
                    "sweep containers verified",
                    report.manifest.invariants.containers_verified,
                );
                println!(
                    "{} {}",
                    report.csv_path.display(),
                    report.manifest_path.display()
                );
            }
        }
        Command::Brute { graph, schedule, m } => {
            let h = build(graph)?;
            let sched = schedule.resolve(h.uniformity())?;
            write_schedule(out, &sched)?;
            let scan = brute_force_scan(&h, *m, &sched, seed)?;
            let s = &scan.summary;
            println!(
                "{} subsets: P1 {}  P2 {}  BAD {}  verified {}/{}",
                s.trials, s.p1, s.p2, s.bad, s.verified, s.p2
            );
            for bad in scan.bad_subsets.iter().take(10) {
                println!("  BAD {:?}: {}", bad.subset, bad.reason);
            }
            checks.push("brute-force invariants", s.invariants_hold());
            println!("{}", write_json(out, "brute.json", &scan)?.display());
        }
        Command::Independence {
            graph,
            m,
            trials,
            exact,
        } => {
            let h = build(graph)?;
            let est = mc_independence(&h, *m, *trials, seed)?;
            let profile = JansonProfile::from_census(&pair_census(&h), *m);
            let within = est.estimate <= profile.bound + 3.0 * est.standard_error();
            checks.push("Janson upper bound", within);
            println!(
                "estimate {:.6} [{:.6}, {:.6}], Janson bound {:.6}",
                est.estimate, est.lo, est.hi, profile.bound
            );
            #[derive(Serialize)]
            struct Report {
                estimate: hypercontainer::experiments::IndependenceEstimate,
                janson_bound: f64,
                exact: Option<(usize, u128)>,
            }
            let exact = if *exact {
                let (count, total) = exact_independence(&h, *m)?;
                let p = count as f64 / total as f64;
                println!(
                    "exact {count}/{total} = {p:.6} (inside interval: {})",
                    est.lo <= p && p <= est.hi
                );
                checks.push("exact probability within Janson bound", p <= profile.bound);
                Some((count, total))
            } else {
                None
            };
            let report = Report {
                estimate: est,
                janson_bound: profile.bound,
                exact,
            };
            println!(
                "{}",
                write_json(out, "independence.json", &report)?.display()
            );
        }
        Command::RemovalTransfer {
            graph,
            removal_gamma,
            removal_alpha,
            p,
            trials,
        } => {
            let h = build(graph)?;
            let mut reports = Vec::new();
            for &p in p {
                let r =
                    transference_experiment(&h, *removal_gamma, *removal_alpha, p, *trials, seed)?;
                println!(
                    "p = {p}: {}/{} trials removable (s = {:.4}, r = {}, sampled {})",
                    r.passed, r.trials, r.s_threshold, r.r_budget, r.sampled_trials
                );
                checks.push(
                    format!("transfer p={p} complete"),
                    r.records.len() == *trials,
                );
                reports.push(r);
            }
            println!("{}", write_json(out, "transfer.json", &reports)?.display());
        }
        Command::VerifyFingerprint {
            graph,
            schedule,
            fingerprint,
            subset,
        } => {
            let h = build(graph)?;
            let sched = schedule.resolve(h.uniformity())?;
            let text = std::fs::read_to_string(fingerprint)
                .with_context(|| format!("reading {}", fingerprint.display()))?;
            let fp = Fingerprint::from_text(&text, h.vertex_count())?;
            let i = parse_subset(subset, h.vertex_count())?;
            let report = verify_fingerprint(&h, &i, &fp, &sched);
            for c in &report.checks {
                println!(
                    "{:<12} {}  {}",
                    c.name,
                    if c.passed { "pass" } else { "FAIL" },
                    c.detail
                );
                checks.push(format!("verify {}", c.name), c.passed);
            }
            println!(
                "container |D_0| = {}, e(D_0) = {}, budget {}, hash {}",
                report.container_size,
                report.container_edges,
                report.edge_budget,
                report.container_hash
            );
            write_json(out, "verify.json", &report)?;
        }
    }
    Ok(checks)
}

fn main() -> ExitCode {
    let result = parse_cli().and_then(run);
    match result {
        Ok(checks) if checks.all() => ExitCode::SUCCESS,
        Ok(checks) => {
            for (name, _) in checks.0.iter().filter(|(_, ok)| !ok) {
                eprintln!("invariant failed: {name}");
            }
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
