//! Line-oriented text format for complexes.
//!
//! ```text
//! # key value
//! v <id> <label>
//! s <id> <id> ...
//! ```
//!
//! Header lines start with `#`, vertices are listed by id and `s` lines list
//! the maximal simplices, sorted.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::homology::{Simplex, SimplicialComplex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("vertex ids must be 0..n in order; found {0}")]
    VertexIds(u32),
}

/// Renders `complex` with `header` entries first (in key order).
pub fn write_complex(complex: &SimplicialComplex, header: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    for (k, v) in header {
        let _ = writeln!(out, "# {k} {v}");
    }
    for (i, l) in complex.labels.iter().enumerate() {
        let _ = writeln!(out, "v {i} {l}");
    }
    for f in complex.facets() {
        let ids: Vec<String> = f.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "s {}", ids.join(" "));
    }
    out
}

pub fn parse_complex(text: &str) -> Result<(BTreeMap<String, String>, SimplicialComplex), ParseError> {
    let mut header = BTreeMap::new();
    let mut labels = Vec::new();
    let mut facets: Vec<Simplex> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let err = |msg: &str| ParseError::Syntax { line, msg: msg.to_string() };
        let raw = raw.trim_end();
        if raw.is_empty() {
            continue;
        }
        if let Some(rest) = raw.strip_prefix('#') {
            let rest = rest.trim_start();
            let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
            header.insert(k.to_string(), v.trim().to_string());
            continue;
        }
        let (tag, rest) = raw.split_once(' ').ok_or_else(|| err("expected a tag and fields"))?;
        match tag {
            "v" => {
                let (id, label) = rest.split_once(' ').unwrap_or((rest, ""));
                let id: u32 = id.parse().map_err(|_| err("bad vertex id"))?;
                if id as usize != labels.len() {
                    return Err(ParseError::VertexIds(id));
                }
                labels.push(label.to_string());
            }
            "s" => {
                let mut s: Simplex = rest.split_whitespace().map(str::parse).collect::<Result<_, _>>().map_err(|_| err("bad simplex"))?;
                s.sort_unstable();
                if s.windows(2).any(|w| w[0] == w[1]) {
                    return Err(err("repeated vertex in simplex"));
                }
                if s.iter().any(|&v| v as usize >= labels.len()) {
                    return Err(err("simplex uses an undeclared vertex"));
                }
                facets.push(s);
            }
            _ => return Err(err("unknown tag")),
        }
    }
    Ok((header, SimplicialComplex::from_simplices(labels, facets)))
}
