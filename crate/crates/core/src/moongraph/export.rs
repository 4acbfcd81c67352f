//! DOT and line-delimited JSON serialization of relation graphs.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Edge, GraphError, Node, Origin, RelationGraph};
use crate::exactalg::rational::{format_rational, parse_rational};
use crate::qseries::QSeries;
use crate::ratfun::parse_ratfun;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    JsonLines,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "jsonlines" => Ok(ExportFormat::JsonLines),
            other => Err(format!("unknown format {other:?} (expected dot or jsonlines)")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Record {
    Node { name: String, origin: Origin, area: Option<String>, coeffs: Vec<String> },
    Edge { from: String, to: String, d: usize, r: u32, f: String, verified_to: i64 },
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn export_graph(g: &RelationGraph, format: ExportFormat) -> String {
    match format {
        ExportFormat::Dot => to_dot(g),
        ExportFormat::JsonLines => to_jsonlines(g),
    }
}

fn to_dot(g: &RelationGraph) -> String {
    let mut out = String::from("digraph relations {\n");
    for n in &g.nodes {
        match n.origin {
            Origin::Catalog => writeln!(out, "  {};", quote(&n.name)),
            Origin::Synthetic => writeln!(out, "  {} [style=dashed];", quote(&n.name)),
        }
        .expect("string write");
    }
    for e in &g.edges {
        writeln!(out, "  {} -> {} [label=\"d={},r={}\"];", quote(&e.from), quote(&e.to), e.d, e.r)
            .expect("string write");
    }
    out.push_str("}\n");
    out
}

fn to_jsonlines(g: &RelationGraph) -> String {
    let mut out = String::new();
    let nodes = g.nodes.iter().map(|n| Record::Node {
        name: n.name.clone(),
        origin: n.origin,
        area: n.area.as_ref().map(format_rational),
        coeffs: n.series.coeffs().iter().map(format_rational).collect(),
    });
    let edges = g.edges.iter().map(|e| Record::Edge {
        from: e.from.clone(),
        to: e.to.clone(),
        d: e.d,
        r: e.r,
        f: e.f.to_string(),
        verified_to: e.verified_to,
    });
    for rec in nodes.chain(edges) {
        out.push_str(&serde_json::to_string(&rec).expect("records serialize"));
        out.push('\n');
    }
    out
}

/// Reads the jsonlines export back.
pub fn import_graph(text: &str) -> Result<RelationGraph, GraphError> {
    let mut g = RelationGraph::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| GraphError::Import { line: line_no, msg };
        let rec: Record = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        match rec {
            Record::Node { name, origin, area, coeffs } => {
                let area = match area {
                    Some(a) => Some(parse_rational(&a).ok_or_else(|| err(format!("bad area {a:?}")))?),
                    None => None,
                };
                let coeffs = coeffs
                    .iter()
                    .map(|c| parse_rational(c).ok_or_else(|| err(format!("bad coefficient {c:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                if coeffs.is_empty() {
                    return Err(err("node without coefficients".into()));
                }
                if g.node(&name).is_ok() {
                    return Err(err(format!("duplicate node {name:?}")));
                }
                g.nodes.push(Node { name, series: QSeries::new(coeffs), origin, area });
            }
            Record::Edge { from, to, d, r, f, verified_to } => {
                let f = parse_ratfun(&f).map_err(|e| err(e.to_string()))?;
                for end in [&from, &to] {
                    if g.node(end).is_err() {
                        return Err(err(format!("edge refers to unknown node {end:?}")));
                    }
                }
                if f.degree() != d || r == 0 {
                    return Err(err(format!("edge label d={d}, r={r} does not match its function")));
                }
                let edge = Edge { from, to, d, r, f, verified_to };
                if !g.add_edge(edge) {
                    return Err(err("duplicate (from, to, r) edge".into()));
                }
            }
        }
    }
    Ok(g)
}
