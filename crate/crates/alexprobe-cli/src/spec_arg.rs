//! Parsing of the `--space` argument.
//!
//! Three forms are accepted:
//!
//! * inline grammar: `name key=value ...`, e.g. `sphere r=1`,
//!   `euclidean dim=3`, `hyperbolic rmax=3`, `normed p=1.5`, `normed p=inf`,
//!   `graph file=edges.json`, `explicit file=matrix.txt`;
//! * inline JSON: a `{"kind": ...}` document;
//! * `@path`: a file containing the JSON document.
//!
//! Graphs and explicit matrices always come from files: graphs as JSON
//! `{"vertices": N, "edges": [[u, v, w], ...]}`, matrices in the usual
//! matrix text format.

use alexprobe::metric::{parse_matrix, validate_metric, DEFAULT_TRIANGLE_SLACK};
use alexprobe::spaces::{PNorm, SpaceSpec, DEFAULT_HYPERBOLIC_RMAX};
use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fs;

const GRAMMAR_HINT: &str = "see README.md, section \"Space specifications\", for the schema";

pub fn parse_space_arg(arg: &str) -> Result<SpaceSpec> {
    let text = arg.trim();
    let spec = if let Some(path) = text.strip_prefix('@') {
        let doc = fs::read_to_string(path).with_context(|| format!("reading space spec {path}"))?;
        serde_json::from_str(doc.trim()).with_context(|| format!("parsing {path}; {GRAMMAR_HINT}"))?
    } else if text.starts_with('{') {
        serde_json::from_str(text).with_context(|| GRAMMAR_HINT.to_string())?
    } else {
        parse_inline(text)?
    };
    spec.validate().map_err(|e| anyhow!("{e}; {GRAMMAR_HINT}"))?;
    Ok(spec)
}

#[derive(Deserialize)]
struct GraphFile {
    vertices: usize,
    edges: Vec<(usize, usize, f64)>,
}

fn parse_inline(text: &str) -> Result<SpaceSpec> {
    let mut tokens = text.split_whitespace();
    let name = tokens
        .next()
        .ok_or_else(|| anyhow!("empty space spec; {GRAMMAR_HINT}"))?
        .to_ascii_lowercase();
    let mut kv = BTreeMap::new();
    for token in tokens {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| anyhow!("expected key=value, got '{token}'; {GRAMMAR_HINT}"))?;
        kv.insert(key.to_ascii_lowercase(), value.to_string());
    }
    let mut take = |key: &str| kv.remove(key);
    let spec = match name.as_str() {
        "euclidean" => {
            let dim = match take("dim") {
                Some(v) => v.parse().context("dim must be an integer")?,
                None => 3,
            };
            SpaceSpec::Euclidean { dim }
        }
        "sphere" => {
            let r = match take("r") {
                Some(v) => v.parse().context("r must be a number")?,
                None => 1.0,
            };
            SpaceSpec::Sphere { r }
        }
        "hyperbolic" => {
            let rmax = match take("rmax") {
                Some(v) => v.parse().context("rmax must be a number")?,
                None => DEFAULT_HYPERBOLIC_RMAX,
            };
            SpaceSpec::Hyperbolic { rmax }
        }
        "normed" => {
            let raw = take("p").ok_or_else(|| anyhow!("normed needs p=...; {GRAMMAR_HINT}"))?;
            let p = PNorm::parse(&raw).ok_or_else(|| anyhow!("invalid p value '{raw}'"))?;
            SpaceSpec::Normed { p }
        }
        "graph" => {
            let path = take("file")
                .ok_or_else(|| anyhow!("graph specs need file=...; {GRAMMAR_HINT}"))?;
            let doc = fs::read_to_string(&path).with_context(|| format!("reading graph {path}"))?;
            let g: GraphFile =
                serde_json::from_str(doc.trim()).with_context(|| format!("parsing {path}"))?;
            SpaceSpec::Graph {
                vertices: g.vertices,
                edges: g.edges,
            }
        }
        "explicit" => {
            let path = take("file")
                .ok_or_else(|| anyhow!("explicit specs need file=...; {GRAMMAR_HINT}"))?;
            let doc = fs::read_to_string(&path).with_context(|| format!("reading matrix {path}"))?;
            let rows = parse_matrix(&doc).with_context(|| format!("parsing {path}"))?;
            let matrix = validate_metric(&rows, DEFAULT_TRIANGLE_SLACK)
                .with_context(|| format!("validating {path}"))?;
            SpaceSpec::Explicit { matrix }
        }
        other => bail!(
            "unknown space '{other}' (expected euclidean, sphere, hyperbolic, normed, graph, \
             or explicit); {GRAMMAR_HINT}"
        ),
    };
    if let Some(key) = kv.keys().next() {
        bail!("unknown key '{key}' for space '{name}'; {GRAMMAR_HINT}");
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_forms() {
        assert_eq!(
            parse_space_arg("euclidean dim=3").unwrap(),
            SpaceSpec::Euclidean { dim: 3 }
        );
        assert_eq!(
            parse_space_arg("sphere r=1").unwrap(),
            SpaceSpec::Sphere { r: 1.0 }
        );
        assert_eq!(
            parse_space_arg("hyperbolic").unwrap(),
            SpaceSpec::Hyperbolic { rmax: DEFAULT_HYPERBOLIC_RMAX }
        );
        assert_eq!(
            parse_space_arg("normed p=inf").unwrap(),
            SpaceSpec::Normed { p: PNorm::Infinity }
        );
        assert!(parse_space_arg("torus r=1").is_err());
        assert!(parse_space_arg("sphere radius=1").is_err());
        assert!(parse_space_arg("sphere r=-1").is_err());
    }

    #[test]
    fn inline_json() {
        assert_eq!(
            parse_space_arg(r#"{"kind":"normed","p":1.5}"#).unwrap(),
            SpaceSpec::Normed { p: PNorm::Finite(1.5) }
        );
    }
}
