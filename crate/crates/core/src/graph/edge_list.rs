//! Plain-text edge lists: a header line `n m` followed by `m` lines `u v`.
//!
//! Lines starting with `#` and blank lines are skipped on input. Output is
//! canonical: one edge per line with `u < v`, sorted, every line terminated by
//! `\n`.

use std::fmt::Write;

use super::{Graph, MAX_VERTICES};
use crate::error::{Error, Result};

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let parse = |tok: Option<&str>| -> Result<usize> {
        let tok = tok.ok_or_else(|| Error::Parse { line: lineno, msg: "expected two integers".into() })?;
        tok.parse().map_err(|_| Error::Parse { line: lineno, msg: format!("not a nonnegative integer: {tok:?}") })
    };
    let a = parse(it.next())?;
    let b = parse(it.next())?;
    if it.next().is_some() {
        return Err(Error::Parse { line: lineno, msg: "trailing tokens".into() });
    }
    Ok((a, b))
}

pub fn read_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let (n, m) = parse_pair(header, hline)?;
    if n > MAX_VERTICES {
        return Err(Error::Parse { line: hline, msg: format!("n = {n} exceeds {MAX_VERTICES}") });
    }

    let mut edges = Vec::with_capacity(m);
    for (lineno, line) in lines {
        if edges.len() == m {
            return Err(Error::Parse { line: lineno, msg: format!("more than the declared {m} edges") });
        }
        let (u, v) = parse_pair(line, lineno)?;
        if u >= n || v >= n {
            return Err(Error::Parse { line: lineno, msg: format!("vertex index out of range 0..{n}") });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            msg: format!("declared {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = String::with_capacity(8 * (edges.len() + 1));
    let _ = writeln!(out, "{} {}", g.n(), edges.len());
    for (u, v) in edges {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
