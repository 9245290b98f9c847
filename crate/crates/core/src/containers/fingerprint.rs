//! Fingerprints and their text record.
//!
//! ```text
//! # fingerprint v1
//! m epsilon k
//! <F as sorted ids>
//! <F_1 as sorted ids>
//! ...
//! <F_{k-1} as sorted ids>
//! ```
//!
//! Leading `#` lines are comments; a set line may be empty. The vertex
//! universe is not part of the record, so parsing takes `N` from the
//! hypergraph the fingerprint belongs to.

use std::fmt::Write as _;

use thiserror::Error;

use crate::hypergraph::VertexSet;

pub const FINGERPRINT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FingerprintError {
    #[error("fingerprint line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("fingerprint is inconsistent: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint {
    pub m: usize,
    pub epsilon: f64,
    pub k: usize,
    pub f: VertexSet,
    /// `F_1, …, F_{k−1}`.
    pub tuple: Vec<VertexSet>,
}

/// `⌈ε m⌉`, robust to the rounding error in `ε m` itself.
pub fn fingerprint_size(epsilon: f64, m: usize) -> usize {
    let x = epsilon * m as f64;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

impl Fingerprint {
    /// `F_{k'}` for `k' ∈ [1, k−1]`.
    pub fn level(&self, level: usize) -> &VertexSet {
        &self.tuple[level - 1]
    }

    pub fn universe(&self) -> usize {
        self.f.universe()
    }

    /// Structural invariants: tuple length `k−1` and every `F_i ⊆ F`.
    /// The size `|F| = ⌈εm⌉` is checked separately by verification.
    pub fn check_shape(&self) -> Result<(), FingerprintError> {
        if self.k < 1 || self.tuple.len() != self.k - 1 {
            return Err(FingerprintError::Inconsistent(format!(
                "expected {} tuple entries for k = {}, found {}",
                self.k.saturating_sub(1),
                self.k,
                self.tuple.len()
            )));
        }
        if self.m < 1 || self.m > self.universe() {
            return Err(FingerprintError::Inconsistent(format!(
                "m = {} outside [1, {}]",
                self.m,
                self.universe()
            )));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# fingerprint v{FINGERPRINT_VERSION}\n");
        let _ = writeln!(out, "{} {} {}", self.m, self.epsilon, self.k);
        for set in std::iter::once(&self.f).chain(&self.tuple) {
            let ids: Vec<String> = set.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", ids.join(" "));
        }
        out
    }

    pub fn from_text(text: &str, universe: usize) -> Result<Self, FingerprintError> {
        let syntax = |line: usize, message: String| FingerprintError::Syntax { line, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .skip_while(|(_, l)| l.starts_with('#'));
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| syntax(1, "missing `m epsilon k` line".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [m, epsilon, k] = fields[..] else {
            return Err(syntax(line_no, "expected `m epsilon k`".into()));
        };
        let m: usize = m
            .parse()
            .map_err(|_| syntax(line_no, format!("bad m {m:?}")))?;
        let epsilon: f64 = epsilon
            .parse()
            .map_err(|_| syntax(line_no, format!("bad epsilon {epsilon:?}")))?;
        let k: usize = k
            .parse()
            .map_err(|_| syntax(line_no, format!("bad k {k:?}")))?;
        if k < 1 {
            return Err(syntax(line_no, "k must be at least 1".into()));
        }

        let mut sets = Vec::with_capacity(k);
        for index in 0..k {
            let (line_no, line) = lines
                .next()
                .ok_or_else(|| syntax(line_no + index + 1, "missing set line".into()))?;
            let mut set = VertexSet::empty(universe);
            for tok in line.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| syntax(line_no, format!("not a vertex id: {tok:?}")))?;
                if v >= universe {
                    return Err(syntax(
                        line_no,
                        format!("vertex {v} outside universe of size {universe}"),
                    ));
                }
                set.insert(v);
            }
            sets.push(set);
        }
        if let Some((line_no, extra)) = lines.find(|(_, l)| !l.is_empty()) {
            return Err(syntax(
                line_no,
                format!("unexpected trailing line {extra:?}"),
            ));
        }
        let f = sets.remove(0);
        let fp = Fingerprint {
            m,
            epsilon,
            k,
            f,
            tuple: sets,
        };
        fp.check_shape()?;
        Ok(fp)
    }
}
