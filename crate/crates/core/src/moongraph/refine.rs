//! Splitting edges along decompositions of their functions.
//!
//! For an edge `j1(q^r) = f(j2)` and a split `f = g ∘ h`, the series
//! `t = h(j2)` is moved by a unit `w` to the shape `q^(−s) + 0 + …`. When
//! it is a series in `q^s` and `s | r`, `w(t) = j3(q^s)` defines the
//! intermediate node and the edge is replaced by `j1 -(g∘w⁻¹, r/s)-> j3`
//! and `j3 -(w∘h, s)-> j2`.

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{Edge, GraphError, Node, Origin, RelationGraph, ReportEntry};
use crate::decomp::{decompose_one_level, Decomposition};
use crate::exactalg::Rational;
use crate::qseries::{eval_ratfun_at_series, power_support, GeneralLaurent, QSeries};
use crate::ratfun::MoebiusUnit;

/// Number of coefficients after the constant term used to identify nodes.
pub const IDENTITY_PREFIX: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitRecord {
    pub original: Edge,
    pub outer: Edge,
    pub inner: Edge,
}

#[derive(Clone, Debug)]
pub struct RefineOutcome {
    pub graph: RelationGraph,
    pub report: Vec<ReportEntry>,
    pub rounds: usize,
    pub splits: Vec<SplitRecord>,
}

/// Splits edges until no edge function decomposes along an admissible
/// intermediate series.
pub fn refine_graph(g: &RelationGraph) -> Result<RefineOutcome, GraphError> {
    let mut graph = g.clone();
    let mut report = Vec::new();
    let mut splits = Vec::new();
    let mut synthetic = 0usize;
    let bound: usize = graph.edges.iter().map(|e| log2_ceil(e.d)).sum::<usize>() + 1;
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > bound {
            return Err(GraphError::Verification(format!("no fixpoint within {bound} rounds")));
        }
        let decompositions: Vec<Vec<Decomposition>> = graph
            .edges
            .par_iter()
            .map(|e| if e.d < 4 { Vec::new() } else { decompose_one_level(&e.f).unwrap_or_default() })
            .collect();
        let mut changed = false;
        let mut next = RelationGraph { nodes: graph.nodes.clone(), edges: Vec::new() };
        for (edge, decs) in graph.edges.iter().zip(decompositions) {
            let mut replaced = false;
            for dec in &decs {
                match split_edge(&mut next, edge, dec, &mut synthetic)? {
                    Ok((outer, inner)) => {
                        next.add_edge(outer.clone());
                        next.add_edge(inner.clone());
                        splits.push(SplitRecord { original: edge.clone(), outer, inner });
                        replaced = true;
                    }
                    Err(message) => report.push(ReportEntry::Warning {
                        from: edge.from.clone(),
                        to: edge.to.clone(),
                        r: edge.r,
                        message: format!("split through {} skipped: {message}", dec.inner),
                    }),
                }
            }
            if replaced {
                changed = true;
            } else {
                next.add_edge(edge.clone());
            }
        }
        next.sort_edges();
        graph = next;
        if !changed {
            break;
        }
    }
    for node in graph.nodes.iter().filter(|n| n.origin == Origin::Synthetic) {
        report.push(ReportEntry::Synthetic { name: node.name.clone(), matches: None });
    }
    report.push(ReportEntry::Fixpoint { rounds });
    dedupe_warnings(&mut report);
    Ok(RefineOutcome { graph, report, rounds, splits })
}

fn log2_ceil(d: usize) -> usize {
    (usize::BITS - d.saturating_sub(1).leading_zeros()) as usize
}

fn dedupe_warnings(report: &mut Vec<ReportEntry>) {
    let mut seen = Vec::new();
    report.retain(|entry| {
        if seen.contains(entry) {
            false
        } else {
            seen.push(entry.clone());
            true
        }
    });
}

/// Outer `Err` aborts refinement; inner `Err` is a skipped split.
fn split_edge(
    graph: &mut RelationGraph,
    edge: &Edge,
    dec: &Decomposition,
    synthetic: &mut usize,
) -> Result<Result<(Edge, Edge), String>, GraphError> {
    let s2 = graph.node(&edge.to)?.series.clone();
    let t = match eval_ratfun_at_series(&dec.inner, &s2) {
        Ok(t) => t,
        Err(e) => return Ok(Err(e.to_string())),
    };
    let Some((w, t)) = pole_normalize(&t) else {
        return Ok(Err("inner series is constant to precision".into()));
    };
    let s = -t.lead_exp();
    let support = power_support(&t).expect("nonzero");
    if support as i64 % s != 0 {
        return Ok(Err(format!("inner series has a pole of order {s} but is not a series in q^{s}")));
    }
    let s = s as u32;
    if edge.r % s != 0 {
        return Ok(Err(format!("power {s} does not divide r = {}", edge.r)));
    }
    let j3 = QSeries::from_laurent(&t.compress(s).expect("support checked")).expect("monic 1/q");
    if j3.prec() < 1 {
        return Ok(Err("intermediate series has no certified coefficients past q^0".into()));
    }
    let mut inner_f = w.compose_left(&dec.inner);
    let mut outer_f = w.inverse().compose_right(&dec.outer);
    let name = match find_matching(graph, &j3)? {
        Some(existing) => {
            let shift = MoebiusUnit::translation(existing.series.coeff(0).clone());
            inner_f = shift.compose_left(&inner_f);
            outer_f = shift.inverse().compose_right(&outer_f);
            existing.name.clone()
        }
        None => {
            *synthetic += 1;
            let name = fresh_name(graph, synthetic);
            graph.nodes.push(Node { name: name.clone(), series: j3, origin: Origin::Synthetic, area: None });
            name
        }
    };
    let outer = Edge {
        from: edge.from.clone(),
        to: name.clone(),
        d: outer_f.degree(),
        r: edge.r / s,
        f: outer_f,
        verified_to: 0,
    };
    let inner =
        Edge { from: name, to: edge.to.clone(), d: inner_f.degree(), r: s, f: inner_f, verified_to: 0 };
    let mut verified = Vec::new();
    for mut e in [outer, inner] {
        let (upto, full) = graph.check_edge(&e)?;
        if !full {
            return Err(GraphError::Verification(format!(
                "{} (from splitting {}) vanishes only through q^{upto}",
                e.label(),
                edge.label()
            )));
        }
        e.verified_to = upto;
        verified.push(e);
    }
    let inner = verified.pop().expect("two edges");
    let outer = verified.pop().expect("two edges");
    Ok(Ok((outer, inner)))
}

fn fresh_name(graph: &RelationGraph, counter: &mut usize) -> String {
    loop {
        let name = format!("X{counter}");
        if graph.node(&name).is_err() {
            return name;
        }
        *counter += 1;
    }
}

/// A unit `w` with `w(t) = q^(−s) + 0·q^0 + …`, and `w(t)`.
fn pole_normalize(t: &GeneralLaurent) -> Option<(MoebiusUnit, GeneralLaurent)> {
    let one = Rational::one();
    let zero = Rational::zero();
    let (pre, polar) = if t.lead_exp() < 0 {
        (MoebiusUnit::identity(), t.clone())
    } else {
        let t0 = t.coeff(0);
        let u = t.sub(&GeneralLaurent::constant(t0.clone()));
        if u.is_zero() {
            return None;
        }
        let flip = MoebiusUnit::new(zero.clone(), one.clone(), one.clone(), -t0).expect("unit");
        (flip, GeneralLaurent::constant(one.clone()).div(&u).ok()?)
    };
    if polar.lead_exp() >= 0 {
        return None;
    }
    let lc = polar.leading_coeff()?.clone();
    let c0 = polar.coeff(0);
    let post = MoebiusUnit::new(one, -&c0, zero, lc.clone()).expect("unit");
    let normalized = polar.sub(&GeneralLaurent::constant(c0)).scale(&lc.recip());
    Some((post.then_apply(&pre), normalized))
}

/// Existing node whose coefficients `c_1 … c_16` agree with `series`
/// (within the common precision). Agreement on that prefix followed by a
/// later difference is reported as a collision.
fn find_matching<'a>(graph: &'a RelationGraph, series: &QSeries) -> Result<Option<&'a Node>, GraphError> {
    for node in &graph.nodes {
        let common = node.series.prec().min(series.prec());
        if common < 1 {
            continue;
        }
        let key_end = common.min(IDENTITY_PREFIX);
        let same = |k: usize| node.series.coeff(k) == series.coeff(k);
        if (1..=key_end).all(same) {
            if !(1..=common).all(same) {
                return Err(GraphError::KeyCollision(node.name.clone(), "new intermediate".into()));
            }
            return Ok(Some(node));
        }
    }
    Ok(None)
}
