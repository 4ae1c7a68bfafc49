//! The DGF text format.
//!
//! ```text
//! n 3
//! # comments and blank lines are ignored
//! 0 1
//! 1 2
//! 2 0
//! ```
//!
//! The first significant line declares the vertex count; every following one
//! declares a single arc `u v` with 0-based endpoints.

use std::fmt::Write as _;

use thiserror::Error;

use crate::digraph::{Digraph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DgfError {
    #[error("missing `n <count>` header")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

fn significant(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(line: usize, tok: Option<&str>, what: &str) -> Result<usize, DgfError> {
    let tok = tok.ok_or_else(|| DgfError::Syntax { line, message: format!("missing {what}") })?;
    tok.parse().map_err(|_| DgfError::Syntax { line, message: format!("invalid {what} `{tok}`") })
}

pub fn parse(text: &str) -> Result<Digraph, DgfError> {
    let mut lines = significant(text);
    let (hline, header) = lines.next().ok_or(DgfError::MissingHeader)?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("n") {
        return Err(DgfError::MissingHeader);
    }
    let n = parse_usize(hline, toks.next(), "vertex count")?;
    if toks.next().is_some() {
        return Err(DgfError::Syntax { line: hline, message: "trailing tokens after vertex count".into() });
    }
    if n == 0 {
        return Err(DgfError::Graph { line: hline, source: GraphError::Empty });
    }

    let mut seen = vec![false; n * n];
    let mut arcs = Vec::new();
    for (line, l) in lines {
        let mut toks = l.split_whitespace();
        let u = parse_usize(line, toks.next(), "tail")?;
        let v = parse_usize(line, toks.next(), "head")?;
        if toks.next().is_some() {
            return Err(DgfError::Syntax { line, message: "expected exactly two vertices".into() });
        }
        let err = |source| DgfError::Graph { line, source };
        if u >= n {
            return Err(err(GraphError::VertexOutOfRange { vertex: u, n }));
        }
        if v >= n {
            return Err(err(GraphError::VertexOutOfRange { vertex: v, n }));
        }
        if u == v {
            return Err(err(GraphError::LoopArc(u)));
        }
        if std::mem::replace(&mut seen[u * n + v], true) {
            return Err(err(GraphError::DuplicateArc(u, v)));
        }
        arcs.push((u, v));
    }
    Digraph::new(n, arcs).map_err(|source| DgfError::Graph { line: hline, source })
}

/// Serializes with arcs in lexicographic order.
pub fn write(d: &Digraph) -> String {
    let mut out = String::with_capacity(8 + d.arc_count() * 6);
    let _ = writeln!(out, "n {}", d.n());
    for (u, v) in d.arcs() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
