use moonrel::decomp::decompose_one_level;
use moonrel::moongraph::{
    build_graph, compose_path, export_graph, find_modular_relations, import_graph, load_catalog,
    maximal_chains, modular_vanishing_order, refine_graph, CatalogEntry, Edge, ExportFormat, Node, Origin,
    RelationGraph, ReportEntry,
};
use moonrel::qseries::inner_series_solve;
use moonrel::ratfun::parse_ratfun;

const FLAGSHIP: &str = "x^3*(x+6)^3*(x^2-6*x+36)^3/((x-3)^3*(x^2+3*x+9)^3)";

fn catalog(name: &str) -> Vec<CatalogEntry> {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    load_catalog(std::io::BufReader::new(std::fs::File::open(path).unwrap())).unwrap()
}

fn rounds_bound(g: &RelationGraph) -> usize {
    g.edges.iter().map(|e| (e.d as f64).log2().ceil() as usize).sum::<usize>() + 1
}

/// Every edge of `before` is reproduced by some maximal chain of `after`,
/// with the same power product and the same composed function.
fn assert_conserved(before: &RelationGraph, after: &RelationGraph) {
    for e in &before.edges {
        let paths = maximal_chains(after, &e.from, &e.to).unwrap();
        let hit = paths.iter().any(|p| {
            let (r, f) = compose_path(p).unwrap();
            let d: usize = p.iter().map(|x| x.d).product();
            r == e.r && d == e.d && f == e.f
        });
        assert!(hit, "{} not reproduced by any chain", e.label());
    }
}

fn assert_edges_verify(g: &RelationGraph) {
    for e in &g.edges {
        let (upto, full) = g.check_edge(e).unwrap();
        assert!(full, "{} vanishes only through q^{upto}", e.label());
    }
}

#[test]
fn hidden_intermediate_becomes_synthetic_node() {
    let cat = catalog("synthetic/chain4.jsonl");
    let (g, _) = build_graph(&cat, 12).unwrap();
    let out = refine_graph(&g).unwrap();
    assert!(out.rounds <= rounds_bound(&g));
    let synthetic: Vec<&Node> = out.graph.nodes.iter().filter(|n| n.origin == Origin::Synthetic).collect();
    assert_eq!(synthetic.len(), 1);
    let x = &synthetic[0].name;
    let incident: Vec<&Edge> = out.graph.edges.iter().filter(|e| &e.from == x || &e.to == x).collect();
    assert!(incident.len() >= 2);
    assert_edges_verify(&out.graph);
    for s in &out.splits {
        assert_eq!(s.outer.f.compose(&s.inner.f).unwrap(), s.original.f);
        assert_eq!(s.outer.r * s.inner.r, s.original.r);
        assert_eq!(s.outer.d * s.inner.d, s.original.d);
    }
    assert_conserved(&g, &out.graph);
    assert!(out.report.contains(&ReportEntry::Synthetic { name: x.clone(), matches: None }));

    // the hidden series B agrees with the synthetic node up to its constant term
    let full = catalog("synthetic/chain5.jsonl");
    let b = &full.iter().find(|c| c.name == "B").unwrap().series;
    let node = &synthetic[0].series;
    for k in 1..node.prec().min(b.prec()) {
        assert_eq!(node.coeff(k), b.coeff(k));
    }
}

#[test]
fn visible_intermediate_is_reused() {
    let cat = catalog("synthetic/chain5.jsonl");
    let (g, _) = build_graph(&cat, 12).unwrap();
    let out = refine_graph(&g).unwrap();
    assert!(out.graph.nodes.iter().all(|n| n.origin == Origin::Catalog));
    assert_eq!(out.graph.nodes.len(), 5);
    assert_edges_verify(&out.graph);
    assert_conserved(&g, &out.graph);
    for e in &out.graph.edges {
        assert!(e.d < 4 || decompose_one_level(&e.f).unwrap().is_empty(), "{} still splits", e.label());
    }
}

#[test]
fn moonshine_catalog_graph() {
    let cat = catalog("moonshine.jsonl");
    let (g, report) = build_graph(&cat, 12).unwrap();
    let labels: Vec<String> = g.edges.iter().map(Edge::label).collect();
    assert_eq!(
        labels,
        ["1A -> 2B [d=3,r=1]", "1A -> 3B [d=4,r=1]", "1A -> 4C [d=6,r=1]", "2B -> 4C [d=2,r=1]"]
    );
    assert!(report.iter().all(|r| matches!(r, ReportEntry::Skip { .. })));
    let out = refine_graph(&g).unwrap();
    assert!(out.graph.nodes.iter().all(|n| n.origin == Origin::Catalog));
    assert_conserved(&g, &out.graph);
}

/// `j(q^3) = f(s)` for the flagship degree-12 function.
fn flagship_graph() -> RelationGraph {
    let j = catalog("moonshine.jsonl").remove(0);
    let f = parse_ratfun(FLAGSHIP).unwrap();
    let s = inner_series_solve(&f, &j.series.substitute_power(3)).unwrap().truncate(40);
    let mut g = RelationGraph::default();
    for (name, series) in [("1A", j.series.clone()), ("S", s)] {
        g.nodes.push(Node { name: name.into(), series, origin: Origin::Catalog, area: None });
    }
    let mut edge = Edge { from: "1A".into(), to: "S".into(), d: 12, r: 3, f, verified_to: 0 };
    let (upto, full) = g.check_edge(&edge).unwrap();
    assert!(full);
    edge.verified_to = upto;
    g.edges.push(edge);
    g
}

#[test]
fn flagship_edge_refines_into_both_chains() {
    let g = flagship_graph();
    let out = refine_graph(&g).unwrap();
    assert!(out.rounds <= rounds_bound(&g));
    assert_eq!(out.graph.nodes.len(), 5);
    assert_edges_verify(&out.graph);
    assert_conserved(&g, &out.graph);
    let paths = maximal_chains(&out.graph, "1A", "S").unwrap();
    let mut lengths: Vec<usize> = paths.iter().map(Vec::len).collect();
    lengths.dedup();
    assert_eq!(lengths, [3, 2]);
    for p in &paths {
        let d: usize = p.iter().map(|e| e.d).product();
        assert_eq!(d, 12);
    }
}

#[test]
fn export_reingestion_is_identical() {
    let out = refine_graph(&flagship_graph()).unwrap();
    let text = export_graph(&out.graph, ExportFormat::JsonLines);
    let back = import_graph(&text).unwrap();
    assert_eq!(back, out.graph);
    assert_eq!(export_graph(&back, ExportFormat::Dot), export_graph(&out.graph, ExportFormat::Dot));
}

#[test]
fn double_relation_gives_vanishing_modular_polynomial() {
    let cat = catalog("moonshine.jsonl");
    let found = find_modular_relations(&cat, "2B", 12).unwrap();
    assert!(!found.is_empty());
    let s = &cat.iter().find(|c| c.name == "2B").unwrap().series;
    for m in &found {
        let (upto, prec) = modular_vanishing_order(&m.p, s, m.k1, m.k2).unwrap();
        assert_eq!(upto, prec);
        assert!(prec > 0);
    }
}
