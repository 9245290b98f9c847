//! Plain-text edge lists: a header line `k N M` followed by `M` lines of `k`
//! space-separated vertex ids.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use super::{Hypergraph, HypergraphError};

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("header declares {declared} edges but {found} were listed")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Invalid(#[from] HypergraphError),
}

fn syntax(line: usize, message: impl Into<String>) -> EdgeListError {
    EdgeListError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_ids(line_no: usize, line: &str) -> Result<Vec<usize>, EdgeListError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| syntax(line_no, format!("not a vertex id: {tok:?}")))
        })
        .collect()
}

/// Parses an edge list. Blank lines and lines starting with `#` are ignored.
pub fn parse_edge_list(text: &str) -> Result<Hypergraph, EdgeListError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_no, header) = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
    let header = parse_ids(header_no, header)?;
    let [k, n, m] = header[..] else {
        return Err(syntax(header_no, "header must be `k N M`"));
    };
    let mut edges = Vec::with_capacity(m);
    for (line_no, line) in lines {
        let ids = parse_ids(line_no, line)?;
        if ids.len() != k {
            return Err(syntax(
                line_no,
                format!("expected {k} ids, found {}", ids.len()),
            ));
        }
        edges.push(ids);
    }
    if edges.len() != m {
        return Err(EdgeListError::EdgeCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Ok(Hypergraph::build(k, n, edges)?)
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Hypergraph, EdgeListError> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

/// Canonical serialisation; edges are emitted in sorted order.
pub fn write_edge_list(h: &Hypergraph) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {}",
        h.uniformity(),
        h.vertex_count(),
        h.edge_count()
    );
    for e in h.edges() {
        let mut first = true;
        for v in e {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}
