//! Text edge-list and JSON forms of hypergraphs and pattern families.
//!
//! Text form:
//!
//! ```text
//! r=2 n=3
//! 0 1
//! 0 2 x3
//! ```
//!
//! One edge per line, an optional trailing `xM` token gives the multiplicity.
//! Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, PatternFamily, UniformHypergraph, Vertex};

pub fn parse_text(input: &str) -> Result<UniformHypergraph> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `r=<r> n=<n>` header"))?;
    let (r, n) = parse_header(header_line, header)?;

    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for (line, text) in lines {
        let mut verts = Vec::with_capacity(r);
        let mut mult = 1u32;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        for (i, tok) in tokens.iter().enumerate() {
            if let Some(m) = tok.strip_prefix('x') {
                if i + 1 != tokens.len() {
                    return Err(Error::parse(line, "multiplicity token must come last"));
                }
                mult = m
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad multiplicity `{tok}`")))?;
                if mult == 0 {
                    return Err(Error::parse(line, "multiplicity must be positive"));
                }
            } else {
                let v: Vertex = tok
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad vertex id `{tok}`")))?;
                verts.push(v);
            }
        }
        let edge = UniformHypergraph::checked_edge(r, n, verts)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        if !seen.insert(edge.clone()) {
            return Err(Error::parse(line, format!("duplicate edge {edge}")));
        }
        edges.push((Vec::from(edge), mult));
    }
    UniformHypergraph::from_multiedges(r, n, edges)
}

fn parse_header(line: usize, header: &str) -> Result<(usize, usize)> {
    let mut r = None;
    let mut n = None;
    for tok in header.split_whitespace() {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("bad header token `{tok}`")))?;
        let value: usize = value
            .parse()
            .map_err(|_| Error::parse(line, format!("bad header value `{tok}`")))?;
        match key {
            "r" => r = Some(value),
            "n" => n = Some(value),
            _ => return Err(Error::parse(line, format!("unknown header key `{key}`"))),
        }
    }
    match (r, n) {
        (Some(r), Some(n)) if r >= 2 => Ok((r, n)),
        (Some(r), Some(_)) => Err(Error::parse(line, format!("uniformity {r} is below 2"))),
        _ => Err(Error::parse(line, "header must give both r and n")),
    }
}

/// Normalized text form: header, then edges in colex order.
pub fn to_text(h: &UniformHypergraph) -> String {
    let mut out = format!("r={} n={}\n", h.r(), h.n());
    for (e, m) in h.iter() {
        write_edge(&mut out, e);
        if m > 1 {
            let _ = write!(out, " x{m}");
        }
        out.push('\n');
    }
    out
}

fn write_edge(out: &mut String, e: &Edge) {
    for (i, v) in e.vertices().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v}");
    }
}

pub fn parse_json(input: &str) -> Result<UniformHypergraph> {
    Ok(serde_json::from_str(input)?)
}

pub fn to_json(h: &UniformHypergraph) -> String {
    serde_json::to_string(h).expect("hypergraph serializes")
}

pub fn parse_family_json(input: &str) -> Result<PatternFamily> {
    Ok(serde_json::from_str(input)?)
}

pub fn family_to_json(f: &PatternFamily) -> String {
    serde_json::to_string(f).expect("family serializes")
}

/// Parses either form, picking JSON when the first non-blank character is `{`.
pub fn parse_any(input: &str) -> Result<UniformHypergraph> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}
