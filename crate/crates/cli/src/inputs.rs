//! Host, pattern and matroid specifications given on the command line.

use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use wsat_core::combinatorics::binom;
use wsat_core::count_matroid::CountMatroid;
use wsat_core::hyper_tools::appendix_family;
use wsat_core::io::parse_any;
use wsat_core::linear_matroid::{hyper_clique_assignment, hyperconnectivity, VectorAssignment};
use wsat_core::matroid::{GroundSet, MatroidOracle};
use wsat_core::patterns::{make_biclique, make_clique, make_cycle, make_dumbbell};
use wsat_core::{EdgeInstance, UniformHypergraph};

use crate::MatroidArgs;

fn numbers(parts: &[&str], spec: &str) -> Result<Vec<usize>> {
    parts
        .iter()
        .map(|p| p.parse::<usize>().with_context(|| format!("bad number {p:?} in {spec:?}")))
        .collect()
}

/// `clique:<n>[:<r>]`, `dumbbell:<k>`, `biclique:<s>:<t>`, `cycle:<l>`,
/// `appendix:<r>:<v1>:<v2>`, or a path to a text or JSON hypergraph file.
pub fn hypergraph(spec: &str) -> Result<UniformHypergraph> {
    let mut parts = spec.split(':');
    let head = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    let built = match (head, rest.len()) {
        ("clique", 1 | 2) => {
            let a = numbers(&rest, spec)?;
            make_clique(a[0], a.get(1).copied().unwrap_or(2))
        }
        ("dumbbell", 1) => make_dumbbell(numbers(&rest, spec)?[0]),
        ("biclique", 2) => {
            let a = numbers(&rest, spec)?;
            make_biclique(a[0], a[1])
        }
        ("cycle", 1) => make_cycle(numbers(&rest, spec)?[0]),
        ("appendix", 3) => {
            let a = numbers(&rest, spec)?;
            appendix_family(a[0], a[1], a[2])
        }
        ("clique" | "dumbbell" | "biclique" | "cycle" | "appendix", _) => bail!("wrong number of parameters in {spec:?}"),
        _ => {
            let text = fs::read_to_string(spec).with_context(|| format!("cannot read {spec:?}"))?;
            parse_any(&text)
        }
    };
    Ok(built?)
}

/// Builds one matroid on the instances of `host`. `pattern_n` is the largest pattern order,
/// used for the default dimension of linear matroids.
pub fn matroid(spec: &str, host: &UniformHypergraph, args: &MatroidArgs, pattern_n: usize) -> Result<Box<dyn MatroidOracle>> {
    match spec {
        "count" => {
            let q = match (args.q, args.k) {
                (Some(q), _) => q,
                (None, Some(k)) => binom(k as u64, 2) as u32,
                (None, None) => bail!("--matroid count needs --q or --k"),
            };
            Ok(Box::new(CountMatroid::new(host, q)?))
        }
        "linear" => Ok(Box::new(linear(host, args, pattern_n)?)),
        _ => match spec.strip_prefix("file:") {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("cannot read {path:?}"))?;
                Ok(Box::new(VectorAssignment::from_json(host, &text)?))
            }
            None => bail!("unknown matroid {spec:?}; expected count, linear or file:<path>"),
        },
    }
}

/// The generic construction on the complete host, restricted to the edges present in `host`.
fn linear(host: &UniformHypergraph, args: &MatroidArgs, pattern_n: usize) -> Result<VectorAssignment> {
    let (n, r) = (host.n(), host.r());
    let d = match args.d {
        Some(d) => d,
        None if pattern_n > r => pattern_n - r,
        None => bail!("--matroid linear needs --d"),
    };
    let complete = if r == 2 {
        hyperconnectivity(n, d, args.prime, args.seed)?
    } else {
        hyper_clique_assignment(n, r, d + r, args.prime, args.seed)?
    };
    if complete.ground().host() == host {
        return Ok(complete);
    }
    let full = complete.ground();
    let vectors = GroundSet::new(host)
        .elements()
        .iter()
        .map(|inst| {
            let base = EdgeInstance {
                edge: inst.edge.clone(),
                instance: 0,
            };
            full.index_of(&base)
                .map(|i| complete.vector(i).to_vec())
                .ok_or_else(|| anyhow!("host edge {} is outside K_{n}", inst.edge))
        })
        .collect::<Result<Vec<_>>>()?;
    let label = format!("{} restricted to the host", complete.describe());
    Ok(VectorAssignment::new(host, args.prime, complete.dim(), vectors, label)?)
}

/// `n:f` pairs separated by commas or whitespace, or a file holding such pairs.
pub fn samples(spec: &str) -> Result<Vec<(i64, i64)>> {
    let text = match fs::read_to_string(spec) {
        Ok(t) => t,
        Err(_) => spec.to_string(),
    };
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (n, f) = pair.split_once(':').ok_or_else(|| anyhow!("sample {pair:?} is not of the form n:f"))?;
            Ok((n.parse().context("bad sample n")?, f.parse().context("bad sample value")?))
        })
        .collect()
}
