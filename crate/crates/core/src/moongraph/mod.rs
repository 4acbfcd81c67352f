//! Relation graphs over a catalog of q-series.
//!
//! An edge `j1 -(d, r)-> j2` records `j1(q^r) = f(j2(q))` with `deg f = d`.

mod catalog;
mod export;
mod modpoly;
mod refine;

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomp::decompose_one_level;
use crate::exactalg::Rational;
use crate::qseries::QSeries;
use crate::ratfun::RatFun;
use crate::relate::{degree_from_areas, find_relation, verify_relation, RelateError, Relation};

pub use catalog::{load_catalog, parse_catalog, CatalogEntry, CatalogError};
pub use export::{export_graph, import_graph, ExportFormat};
pub use modpoly::{find_modular_relations, modular_polynomial, modular_vanishing_order, ModularRelation};
pub use refine::{refine_graph, RefineOutcome, SplitRecord, IDENTITY_PREFIX};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("nodes {0:?} and {1:?} share an identity prefix but differ later")]
    KeyCollision(String, String),
    #[error("the two relations use the same power k = {0}")]
    IdenticalK(u32),
    #[error("graph line {line}: {msg}")]
    Import { line: usize, msg: String },
    #[error("catalog is empty")]
    EmptyCatalog,
}

impl GraphError {
    /// Stable machine-readable category.
    pub fn category(&self) -> &'static str {
        match self {
            GraphError::Catalog(_) => "catalog",
            GraphError::UnknownNode(_) => "unknown-node",
            GraphError::Verification(_) => "verification",
            GraphError::KeyCollision(..) => "key-collision",
            GraphError::IdenticalK(_) => "identical-k",
            GraphError::Import { .. } => "graph-format",
            GraphError::EmptyCatalog => "empty-catalog",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Catalog,
    Synthetic,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::Catalog => "catalog",
            Origin::Synthetic => "synthetic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub series: QSeries,
    pub origin: Origin,
    pub area: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub d: usize,
    pub r: u32,
    pub f: RatFun,
    pub verified_to: i64,
}

impl Edge {
    fn from_relation(from: &str, to: &str, rel: Relation) -> Self {
        Edge {
            from: from.to_string(),
            to: to.to_string(),
            d: rel.f.degree(),
            r: rel.r,
            f: rel.f,
            verified_to: rel.verified_to,
        }
    }

    pub fn key(&self) -> (&str, &str, u32) {
        (&self.from, &self.to, self.r)
    }

    pub fn label(&self) -> String {
        format!("{} -> {} [d={},r={}]", self.from, self.to, self.d, self.r)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl RelationGraph {
    pub fn from_catalog(catalog: &[CatalogEntry]) -> Self {
        let nodes = catalog
            .iter()
            .map(|c| Node {
                name: c.name.clone(),
                series: c.series.clone(),
                origin: Origin::Catalog,
                area: Some(c.area.clone()),
            })
            .collect();
        RelationGraph { nodes, edges: Vec::new() }
    }

    pub fn node(&self, name: &str) -> Result<&Node, GraphError> {
        self.nodes.iter().find(|n| n.name == name).ok_or_else(|| GraphError::UnknownNode(name.to_string()))
    }

    /// Adds `edge` unless its `(from, to, r)` triple is present.
    pub fn add_edge(&mut self, edge: Edge) -> bool {
        if self.edges.iter().any(|e| e.key() == edge.key()) {
            return false;
        }
        self.edges.push(edge);
        true
    }

    pub fn sort_edges(&mut self) {
        self.edges.sort_by(|a, b| a.key().cmp(&b.key()));
    }

    /// Recomputes `from(q^r) − f(to(q))` and returns the highest exponent
    /// through which it vanishes, with the certified precision.
    pub fn check_edge(&self, edge: &Edge) -> Result<(i64, bool), GraphError> {
        let s1 = &self.node(&edge.from)?.series;
        let s2 = &self.node(&edge.to)?.series;
        let rel = Relation { r: edge.r, f: edge.f.clone(), e: edge.d as u32, verified_to: 0 };
        let upto = verify_relation(s1, s2, &rel);
        let full = crate::qseries::eval_ratfun_at_series(&edge.f, s2)
            .map(|v| s1.substitute_power(edge.r).sub(&v))
            .is_ok_and(|diff| diff.is_zero());
        Ok((upto, full))
    }
}

/// Line-delimited report record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ReportEntry {
    Skip { from: String, to: String, reason: String },
    Warning { from: String, to: String, r: u32, message: String },
    Synthetic { name: String, matches: Option<String> },
    Fixpoint { rounds: usize },
}

impl ReportEntry {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report entries serialize")
    }
}

/// Runs the relation search on every ordered pair with an integral area
/// ratio `e ≤ e_max`. Identity relations are not recorded.
pub fn build_graph(
    catalog: &[CatalogEntry],
    e_max: u32,
) -> Result<(RelationGraph, Vec<ReportEntry>), GraphError> {
    if catalog.is_empty() {
        return Err(GraphError::EmptyCatalog);
    }
    let pairs: Vec<(usize, usize)> = (0..catalog.len())
        .flat_map(|i| (0..catalog.len()).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .collect();
    let outcomes: Vec<Result<Edge, String>> =
        pairs.par_iter().map(|&(i, j)| relate_pair(&catalog[i], &catalog[j], e_max)).collect();
    let mut graph = RelationGraph::from_catalog(catalog);
    let mut report = Vec::new();
    for ((i, j), outcome) in pairs.into_iter().zip(outcomes) {
        match outcome {
            Ok(edge) => {
                graph.add_edge(edge);
            }
            Err(reason) => report.push(ReportEntry::Skip {
                from: catalog[i].name.clone(),
                to: catalog[j].name.clone(),
                reason,
            }),
        }
    }
    graph.sort_edges();
    Ok((graph, report))
}

fn relate_pair(a: &CatalogEntry, b: &CatalogEntry, e_max: u32) -> Result<Edge, String> {
    let e = match degree_from_areas(&a.area, &b.area) {
        Ok(Some(e)) => e,
        Ok(None) => return Err("area ratio is not a positive integer".into()),
        Err(err) => return Err(err.to_string()),
    };
    if e > e_max {
        return Err(format!("degree {e} exceeds e_max {e_max}"));
    }
    let need = 2 * e as usize + 1;
    if a.series.prec() < need || b.series.prec() < need {
        return Err(format!("precision below {need} for degree {e}"));
    }
    match find_relation(&a.series, &b.series, e) {
        Ok(Some(rel)) if rel.f == RatFun::identity() => Err("identity relation".into()),
        Ok(Some(rel)) => Ok(Edge::from_relation(&a.name, &b.name, rel)),
        Ok(None) => Err(format!("no relation of degree {e}")),
        Err(RelateError::Underdetermined) => Err(format!("degree {e} system is underdetermined")),
        Err(err) => Err(err.to_string()),
    }
}

/// All simple paths `from → to` through edges whose function admits no
/// decomposition, longest first.
pub fn maximal_chains(g: &RelationGraph, from: &str, to: &str) -> Result<Vec<Vec<Edge>>, GraphError> {
    g.node(from)?;
    g.node(to)?;
    if from == to {
        return Ok(vec![Vec::new()]);
    }
    let indecomposable: Vec<bool> = g
        .edges
        .par_iter()
        .map(|e| e.d < 4 || decompose_one_level(&e.f).map_or(true, |d| d.is_empty()))
        .collect();
    let mut out_edges: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        if indecomposable[i] {
            out_edges.entry(e.from.as_str()).or_default().push(i);
        }
    }
    let mut paths = Vec::new();
    let mut stack = Vec::new();
    let mut visited = vec![from.to_string()];
    walk(g, &out_edges, from, to, &mut visited, &mut stack, &mut paths);
    paths.sort_by(|a: &Vec<Edge>, b: &Vec<Edge>| {
        b.len().cmp(&a.len()).then_with(|| {
            let ka: Vec<_> = a.iter().map(Edge::key).collect();
            let kb: Vec<_> = b.iter().map(Edge::key).collect();
            ka.cmp(&kb)
        })
    });
    Ok(paths)
}

fn walk(
    g: &RelationGraph,
    out_edges: &HashMap<&str, Vec<usize>>,
    at: &str,
    to: &str,
    visited: &mut Vec<String>,
    stack: &mut Vec<usize>,
    paths: &mut Vec<Vec<Edge>>,
) {
    if at == to {
        paths.push(stack.iter().map(|&i| g.edges[i].clone()).collect());
        return;
    }
    for &i in out_edges.get(at).map(Vec::as_slice).unwrap_or(&[]) {
        let next = g.edges[i].to.as_str();
        if visited.iter().any(|v| v == next) {
            continue;
        }
        visited.push(next.to_string());
        stack.push(i);
        walk(g, out_edges, next, to, visited, stack, paths);
        stack.pop();
        visited.pop();
    }
}

/// Composite relation along a path: `(∏ r, f_1 ∘ f_2 ∘ …)`.
pub fn compose_path(path: &[Edge]) -> Option<(u32, RatFun)> {
    let mut it = path.iter().rev();
    let last = it.next()?;
    let mut f = last.f.clone();
    let mut r = last.r;
    for e in it {
        f = e.f.compose(&f).expect("edge functions are not constant");
        r *= e.r;
    }
    Some((r, f))
}
