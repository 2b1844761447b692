//! The line-oriented graph text format and report serialization helpers.
//!
//! Format (UTF-8, `#` starts a comment):
//!
//! ```text
//! target <id>              # exactly once
//! node <id> [weight]       # weight defaults to 0
//! edge <u> <v> [mult]      # default 1; repeated lines add
//! ```
//!
//! Nodes referenced only by edges get weight 0. Parsing enforces class
//! membership with a diagnostic naming an offending node.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{GraphError, MultiDigraph, NodeId, TargetedGraph, WeightVector};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {0}: syntax error: {1}")]
    Syntax(usize, String),
    #[error("line {0}: duplicate target declaration")]
    DuplicateTarget(usize),
    #[error("missing target declaration")]
    MissingTarget,
    #[error("node {0} cannot reach the target")]
    NotInClass(NodeId),
    #[error("line {0}: negative weight {1}")]
    NegativeWeight(usize, f64),
    #[error("line {0}: zero edge multiplicity")]
    ZeroMultiplicity(usize),
    #[error("line {0}: duplicate node declaration for {1}")]
    DuplicateNode(usize, NodeId),
}

pub fn parse_graph(text: &str) -> Result<TargetedGraph, ParseError> {
    let mut graph = MultiDigraph::new();
    let mut weights = WeightVector::new();
    let mut declared: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut target: Option<NodeId> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let keyword = parts.next().unwrap();
        let rest: Vec<&str> = parts.collect();
        let parse_id = |s: &str| {
            NodeId::new(s).map_err(|_| ParseError::Syntax(lineno, format!("bad node id {s:?}")))
        };
        match keyword {
            "target" => {
                let [id] = rest[..] else {
                    return Err(ParseError::Syntax(
                        lineno,
                        "expected: target <id>".to_string(),
                    ));
                };
                if target.is_some() {
                    return Err(ParseError::DuplicateTarget(lineno));
                }
                let id = parse_id(id)?;
                graph.add_node(id.clone());
                target = Some(id);
            }
            "node" => {
                let (id, weight) = match rest[..] {
                    [id] => (id, 0.0),
                    [id, w] => {
                        let w: f64 = w.parse().map_err(|_| {
                            ParseError::Syntax(lineno, format!("bad weight {w:?}"))
                        })?;
                        (id, w)
                    }
                    _ => {
                        return Err(ParseError::Syntax(
                            lineno,
                            "expected: node <id> [weight]".to_string(),
                        ))
                    }
                };
                if weight < 0.0 {
                    return Err(ParseError::NegativeWeight(lineno, weight));
                }
                let id = parse_id(id)?;
                if declared.contains_key(&id) {
                    return Err(ParseError::DuplicateNode(lineno, id));
                }
                declared.insert(id.clone(), lineno);
                graph.add_node(id.clone());
                weights
                    .set(id, weight)
                    .map_err(|_| ParseError::NegativeWeight(lineno, weight))?;
            }
            "edge" => {
                let (u, v, mult) = match rest[..] {
                    [u, v] => (u, v, 1u64),
                    [u, v, m] => {
                        let m: u64 = m.parse().map_err(|_| {
                            ParseError::Syntax(lineno, format!("bad multiplicity {m:?}"))
                        })?;
                        (u, v, m)
                    }
                    _ => {
                        return Err(ParseError::Syntax(
                            lineno,
                            "expected: edge <u> <v> [multiplicity]".to_string(),
                        ))
                    }
                };
                if mult == 0 {
                    return Err(ParseError::ZeroMultiplicity(lineno));
                }
                let u = parse_id(u)?;
                let v = parse_id(v)?;
                graph.add_node(u.clone());
                graph.add_node(v.clone());
                graph
                    .add_edges(&u, &v, mult)
                    .expect("endpoints just added");
            }
            other => {
                return Err(ParseError::Syntax(
                    lineno,
                    format!("unknown keyword {other:?}"),
                ));
            }
        }
    }

    let target = target.ok_or(ParseError::MissingTarget)?;
    TargetedGraph::new(graph, target, weights).map_err(|e| match e {
        GraphError::NotInClass(v) => ParseError::NotInClass(v),
        other => ParseError::Syntax(0, other.to_string()),
    })
}

/// Serializes a graph so that `parse_graph` round-trips to an equal value.
pub fn serialize_graph(g: &TargetedGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("target {}\n", g.target()));
    for v in g.graph().nodes() {
        let w = g.weights().get(v);
        if v == g.target() && w == 0.0 {
            continue; // already declared by the target line
        }
        if w == 0.0 {
            out.push_str(&format!("node {v}\n"));
        } else {
            // Shortest exact representation, so weights survive the trip
            // bit for bit.
            out.push_str(&format!("node {v} {w}\n"));
        }
    }
    for (u, v, m) in g.graph().edges() {
        if m == 1 {
            out.push_str(&format!("edge {u} {v}\n"));
        } else {
            out.push_str(&format!("edge {u} {v} {m}\n"));
        }
    }
    out
}

/// Formats with 12 significant digits, locale-independent, no trailing
/// noise. Integers print without an exponent or decimal point.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let formatted = format!("{:.11e}", x);
    // Round-trip through the 12-digit form so equal outputs are
    // byte-identical, then print compactly.
    let rounded: f64 = formatted.parse().expect("valid float literal");
    if rounded == rounded.trunc() && rounded.abs() < 1e15 {
        format!("{}", rounded as i64)
    } else {
        let s = format!("{rounded}");
        if s.len() <= 18 {
            s
        } else {
            formatted
        }
    }
}

/// Rounds to 12 significant digits for stable JSON output.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{:.11e}", x).parse().expect("valid float literal")
}
