//! Pieces of the command-line front end that are worth testing on their
//! own: hypergraph sources, per-level schedule values and the flat config
//! file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::generators::{ap_hypergraph, h_copy_hypergraph, random_k_graph, triangle_hypergraph};
use crate::hypergraph::read_edge_list;
use crate::hypergraph::Hypergraph;
use crate::seeds::stream;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad hypergraph source {0:?}: expected triangle:N, ap:N[:LEN], random:K:N:EDGES, copy:N:PATTERN_FILE or file:PATH")]
    BadSource(String),
    #[error("bad level values {0:?}: expected V or LEVEL=V[,LEVEL=V...]")]
    BadLevels(String),
    #[error("config {path}: {message}")]
    Config { path: PathBuf, message: String },
}

/// Where a hypergraph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Triangle(usize),
    Ap {
        n: usize,
        len: usize,
    },
    /// Drawn from the stream `(seed, "gen", 0)`.
    Random {
        k: usize,
        n: usize,
        edges: usize,
    },
    Copy {
        n: usize,
        pattern: PathBuf,
    },
    File(PathBuf),
}

impl FromStr for Source {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CliError::BadSource(s.to_string());
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let parts: Vec<&str> = rest.split(':').collect();
        match (kind, parts.as_slice()) {
            ("triangle", [n]) => Ok(Source::Triangle(num(n)?)),
            ("ap", [n]) => Ok(Source::Ap { n: num(n)?, len: 3 }),
            ("ap", [n, len]) => Ok(Source::Ap {
                n: num(n)?,
                len: num(len)?,
            }),
            ("random", [k, n, e]) => Ok(Source::Random {
                k: num(k)?,
                n: num(n)?,
                edges: num(e)?,
            }),
            ("copy", [n, pattern]) => Ok(Source::Copy {
                n: num(n)?,
                pattern: PathBuf::from(pattern),
            }),
            ("file", [_, ..]) => Ok(Source::File(PathBuf::from(rest))),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Triangle(n) => write!(f, "triangle-{n}"),
            Source::Ap { n, len } => write!(f, "ap-{n}-{len}"),
            Source::Random { k, n, edges } => write!(f, "random-{k}-{n}-{edges}"),
            Source::Copy { n, pattern } => write!(f, "copy-{n}-{}", file_stem(pattern)),
            Source::File(path) => write!(f, "{}", file_stem(path)),
        }
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "hypergraph".into())
}

impl Source {
    pub fn build(&self, seed: u64) -> anyhow::Result<Hypergraph> {
        Ok(match self {
            Source::Triangle(n) => triangle_hypergraph(*n)?,
            Source::Ap { n, len } => ap_hypergraph(*n, *len)?,
            Source::Random { k, n, edges } => {
                random_k_graph(*k, *n, *edges, &mut stream(seed, "gen", 0))?
            }
            Source::Copy { n, pattern } => h_copy_hypergraph(&read_edge_list(pattern)?, *n)?,
            Source::File(path) => read_edge_list(path)?,
        })
    }
}

/// A per-level schedule value: one number for every level, or explicit
/// `level=value` pairs.
#[derive(Debug, Clone, PartialEq)]
pub enum LevelValues {
    Uniform(f64),
    PerLevel(BTreeMap<usize, f64>),
}

impl FromStr for LevelValues {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CliError::BadLevels(s.to_string());
        if let Ok(v) = s.trim().parse::<f64>() {
            return Ok(LevelValues::Uniform(v));
        }
        let mut map = BTreeMap::new();
        for pair in s.split(',') {
            let (level, value) = pair.split_once('=').ok_or_else(bad)?;
            let level = level.trim().parse().map_err(|_| bad())?;
            let value = value.trim().parse().map_err(|_| bad())?;
            map.insert(level, value);
        }
        Ok(LevelValues::PerLevel(map))
    }
}

impl LevelValues {
    /// Writes the values into an override map for uniformity `k`.
    pub fn apply(&self, map: &mut BTreeMap<usize, f64>, k: usize) {
        match self {
            LevelValues::Uniform(v) => {
                for level in 1..=k {
                    map.insert(level, *v);
                }
            }
            LevelValues::PerLevel(values) => map.extend(values),
        }
    }
}

/// One entry of the config file, rendered as it would be typed.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigValue {
    Flag(bool),
    Value(String),
}

/// Reads a flat TOML file of `flag-name = value` pairs. Keys may use `-`
/// or `_`; arrays become comma-separated lists. Nested tables are rejected.
pub fn load_flat_config(path: &Path) -> Result<BTreeMap<String, ConfigValue>, CliError> {
    let err = |message: String| CliError::Config {
        path: path.to_path_buf(),
        message,
    };
    let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| err(e.to_string()))?;
    let scalar = |key: &str, v: &toml::Value| -> Result<String, CliError> {
        match v {
            toml::Value::String(s) => Ok(s.clone()),
            toml::Value::Integer(i) => Ok(i.to_string()),
            toml::Value::Float(f) => Ok(f.to_string()),
            _ => Err(err(format!("{key}: expected a string or number"))),
        }
    };
    let mut out = BTreeMap::new();
    for (key, value) in &table {
        let name = key.replace('_', "-");
        let rendered = match value {
            toml::Value::Boolean(b) => ConfigValue::Flag(*b),
            toml::Value::Array(items) => ConfigValue::Value(
                items
                    .iter()
                    .map(|v| scalar(key, v))
                    .collect::<Result<Vec<_>, _>>()?
                    .join(","),
            ),
            toml::Value::Table(_) => {
                return Err(err(format!("{key}: nested tables are not allowed")))
            }
            other => ConfigValue::Value(scalar(key, other)?),
        };
        out.insert(name, rendered);
    }
    Ok(out)
}
