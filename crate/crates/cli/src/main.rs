use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use moonrel::decomp::{
    chains_up_to_symmetry, decompose_one_level, ChainClass, DecompError, DecompositionChain,
};
use moonrel::exactalg::rational::format_rational;
use moonrel::moongraph::{
    build_graph, compose_path, export_graph, find_modular_relations, import_graph, load_catalog,
    maximal_chains, modular_vanishing_order, refine_graph, CatalogEntry, ExportFormat, GraphError, Origin,
    RelationGraph,
};
use moonrel::qseries::QSeries;
use moonrel::ratfun::{parse_ratfun, RatFun};
use moonrel::relate::{
    degree_from_areas, find_all_relations, find_relation, find_relation_up_to, verify_relation, RelateError,
    Relation,
};

#[derive(Parser)]
#[command(name = "moonrel", version, about = "Rational-function decompositions and q-series relations")]
struct Cli {
    /// Re-check every printed result before exiting.
    #[arg(long, global = true)]
    verify: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One-level decompositions of a rational function, or its complete chains.
    Decompose {
        function: String,
        #[arg(long)]
        chains: bool,
    },
    /// Search for s1(q^r) = f(s2(q)) between two catalog entries.
    Relate {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, conflicts_with = "emax")]
        e: Option<u32>,
        #[arg(long)]
        emax: Option<u32>,
        /// Report every r that admits a relation, not only the lowest.
        #[arg(long)]
        all_r: bool,
    },
    /// Relate every ordered pair of a catalog and write the graph.
    GraphBuild {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 24)]
        emax: u32,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Split edges along decompositions until a fixpoint is reached.
    GraphRefine {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Maximal chains of indecomposable edges between two nodes.
    Chains {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Polynomial relations between s(q^k1) and s(q^k2) from double relations.
    Modpoly {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 24)]
        emax: u32,
    },
    /// Print a graph as DOT or jsonlines.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        format: ExportFormat,
    },
}

enum Failure {
    Usage(String),
    Data { category: &'static str, msg: String },
}

fn data(category: &'static str, msg: impl ToString) -> Failure {
    Failure::Data { category, msg: msg.to_string() }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        data(e.category(), e)
    }
}

impl From<RelateError> for Failure {
    fn from(e: RelateError) -> Self {
        let category = match e {
            RelateError::Underdetermined => "underdetermined-system",
            RelateError::InsufficientPrecision { .. } => "insufficient-precision",
            RelateError::NonpositiveArea => "nonpositive-area",
            RelateError::ZeroDegree => "zero-degree",
            RelateError::Series(_) => "series",
        };
        data(category, e)
    }
}

impl From<DecompError> for Failure {
    fn from(e: DecompError) -> Self {
        data("decomposition", e)
    }
}

/// Whether the command produced a result.
enum Found {
    Yes,
    No,
}

type Outcome = Result<Found, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let mut out = String::new();
    let result = run(&cli, &mut out);
    print!("{out}");
    let _ = std::io::stdout().flush();
    match result {
        Ok(Found::Yes) => ExitCode::SUCCESS,
        Ok(Found::No) => ExitCode::from(3),
        Err(Failure::Usage(msg)) => {
            eprintln!("error[usage]: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data { category, msg }) => {
            eprintln!("error[{category}]: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, out: &mut String) -> Outcome {
    match &cli.command {
        Command::Decompose { function, chains } => decompose(function, *chains, cli.verify, out),
        Command::Relate { catalog, from, to, e, emax, all_r } => {
            let catalog = read_catalog(catalog)?;
            relate(&catalog, from, to, *e, *emax, *all_r, cli.verify, out)
        }
        Command::GraphBuild { catalog, out: path, emax, jobs, report } => {
            if let Some(n) = jobs {
                if *n == 0 {
                    return Err(Failure::Usage("--jobs must be positive".into()));
                }
                rayon::ThreadPoolBuilder::new()
                    .num_threads(*n)
                    .build_global()
                    .map_err(|e| data("internal", e))?;
            }
            let catalog = read_catalog(catalog)?;
            let (graph, entries) = build_graph(&catalog, *emax)?;
            if cli.verify {
                verify_graph(&graph)?;
            }
            write_file(path, &export_graph(&graph, ExportFormat::JsonLines))?;
            if let Some(report) = report {
                write_file(report, &report_lines(entries.iter().map(|e| e.to_json_line())))?;
            }
            out.push_str(&format!("nodes {} edges {}\n", graph.nodes.len(), graph.edges.len()));
            Ok(Found::Yes)
        }
        Command::GraphRefine { input, out: path, report } => {
            let graph = read_graph(input)?;
            let outcome = refine_graph(&graph)?;
            if cli.verify {
                verify_graph(&outcome.graph)?;
            }
            write_file(path, &export_graph(&outcome.graph, ExportFormat::JsonLines))?;
            write_file(report, &report_lines(outcome.report.iter().map(|e| e.to_json_line())))?;
            out.push_str(&format!(
                "nodes {} edges {} rounds {}\n",
                outcome.graph.nodes.len(),
                outcome.graph.edges.len(),
                outcome.rounds
            ));
            for node in outcome.graph.nodes.iter().filter(|n| n.origin == Origin::Synthetic) {
                out.push_str(&format!("synthetic {}: {}\n", node.name, format_series(&node.series, 8)));
            }
            Ok(Found::Yes)
        }
        Command::Chains { input, from, to } => {
            let graph = read_graph(input)?;
            let paths = maximal_chains(&graph, from, to)?;
            if paths.is_empty() {
                out.push_str("none\n");
                return Ok(Found::No);
            }
            for (i, path) in paths.iter().enumerate() {
                let (r, f) = compose_path(path).ok_or_else(|| data("verification", "empty path"))?;
                let labels: Vec<String> = path.iter().map(|e| e.label()).collect();
                out.push_str(&format!("chain {} (length {}): {}\n", i + 1, path.len(), labels.join("; ")));
                out.push_str(&format!("  composite: r={r} d={} f={f}\n", f.degree()));
                if cli.verify {
                    let s1 = &graph.node(from)?.series;
                    let s2 = &graph.node(to)?.series;
                    let rel = Relation { r, e: f.degree() as u32, f, verified_to: 0 };
                    out.push_str(&format!("  verified through q^{}\n", verify_relation(s1, s2, &rel)));
                }
            }
            Ok(Found::Yes)
        }
        Command::Modpoly { catalog, target, emax } => {
            let catalog = read_catalog(catalog)?;
            let found = find_modular_relations(&catalog, target, *emax)?;
            if found.is_empty() {
                out.push_str("none\n");
                return Ok(Found::No);
            }
            let s = &entry(&catalog, target)?.series;
            for m in &found {
                out.push_str(&format!("via {}: k1={} k2={} P(x,y) = {}\n", m.via, m.k1, m.k2, m.p));
                if cli.verify {
                    let (upto, prec) =
                        modular_vanishing_order(&m.p, s, m.k1, m.k2).map_err(|e| data("series", e))?;
                    if upto < prec {
                        return Err(data("verification", format!("P vanishes only through q^{upto}")));
                    }
                    out.push_str(&format!("  vanishes through q^{upto}\n"));
                }
            }
            Ok(Found::Yes)
        }
        Command::Export { input, format } => {
            let graph = read_graph(input)?;
            out.push_str(&export_graph(&graph, *format));
            Ok(Found::Yes)
        }
    }
}

fn decompose(text: &str, chains: bool, verify: bool, out: &mut String) -> Outcome {
    let f = parse_ratfun(text).map_err(|e| data("parse", e))?;
    if f.degree() < 2 {
        out.push_str("indecomposable\n");
        return Ok(Found::No);
    }
    if chains {
        let classes = chains_up_to_symmetry(&f)?;
        for (i, class) in classes.iter().enumerate() {
            let chain = shortest_member(class);
            let degrees: Vec<String> = chain.degrees().iter().map(usize::to_string).collect();
            out.push_str(&format!(
                "chain {} (length {}, degrees {}):\n",
                i + 1,
                chain.len(),
                degrees.join(",")
            ));
            for c in &chain.components {
                out.push_str(&format!("  {c}\n"));
            }
            if verify {
                check_equal(&chain.compose(), &f)?;
            }
        }
        if classes.iter().all(|c| c.representative.len() < 2) {
            return Ok(Found::No);
        }
        return Ok(Found::Yes);
    }
    let decs = decompose_one_level(&f)?;
    if decs.is_empty() {
        out.push_str("indecomposable\n");
        return Ok(Found::No);
    }
    for d in &decs {
        out.push_str(&format!("outer {} | inner {}\n", d.outer, d.inner));
        if verify {
            check_equal(&d.compose(), &f)?;
        }
    }
    Ok(Found::Yes)
}

#[allow(clippy::too_many_arguments)]
fn relate(
    catalog: &[CatalogEntry],
    from: &str,
    to: &str,
    e: Option<u32>,
    emax: Option<u32>,
    all_r: bool,
    verify: bool,
    out: &mut String,
) -> Outcome {
    let a = entry(catalog, from)?;
    let b = entry(catalog, to)?;
    let degree = match (e, emax) {
        (Some(e), _) => Some(e),
        (None, Some(_)) => None,
        (None, None) => match degree_from_areas(&a.area, &b.area)? {
            Some(e) => Some(e),
            None => {
                out.push_str("none\n");
                return Ok(Found::No);
            }
        },
    };
    if degree == Some(0) {
        return Err(Failure::Usage("--e must be positive".into()));
    }
    let relations: Vec<Relation> = match (degree, emax) {
        (Some(e), _) if all_r => find_all_relations(&a.series, &b.series, e)?,
        (Some(e), _) => find_relation(&a.series, &b.series, e)?.into_iter().collect(),
        (None, Some(m)) if all_r => {
            let mut all = Vec::new();
            for e in 1..=m {
                match find_all_relations(&a.series, &b.series, e) {
                    Ok(found) => all.extend(found),
                    Err(RelateError::InsufficientPrecision { .. }) => break,
                    Err(err) => return Err(err.into()),
                }
            }
            all
        }
        (None, Some(m)) => find_relation_up_to(&a.series, &b.series, m)?.into_iter().collect(),
        (None, None) => unreachable!("degree resolved above"),
    };
    if relations.is_empty() {
        out.push_str("none\n");
        return Ok(Found::No);
    }
    for rel in &relations {
        out.push_str(&format!("r={} e={} f={} verified_to={}\n", rel.r, rel.e, rel.f, rel.verified_to));
        if verify {
            let f = parse_ratfun(&rel.f.to_string()).map_err(|e| data("parse", e))?;
            let again = Relation { f, ..rel.clone() };
            let upto = verify_relation(&a.series, &b.series, &again);
            if upto < rel.verified_to {
                return Err(data(
                    "verification",
                    format!("reparsed relation vanishes only through q^{upto}"),
                ));
            }
        }
    }
    Ok(Found::Yes)
}

/// The member with the shortest printed components.
fn shortest_member(class: &ChainClass) -> &DecompositionChain {
    let width = |c: &DecompositionChain| c.components.iter().map(|f| f.to_string().len()).sum::<usize>();
    class.members.iter().min_by_key(|c| width(c)).unwrap_or(&class.representative)
}

fn check_equal(composed: &RatFun, f: &RatFun) -> Result<(), Failure> {
    if composed == f {
        Ok(())
    } else {
        Err(data("verification", format!("components compose to {composed}, not {f}")))
    }
}

fn verify_graph(g: &RelationGraph) -> Result<(), Failure> {
    for e in &g.edges {
        let (upto, full) = g.check_edge(e)?;
        if !full {
            return Err(data("verification", format!("{} vanishes only through q^{upto}", e.label())));
        }
    }
    Ok(())
}

fn entry<'a>(catalog: &'a [CatalogEntry], name: &str) -> Result<&'a CatalogEntry, Failure> {
    catalog.iter().find(|c| c.name == name).ok_or_else(|| GraphError::UnknownNode(name.to_string()).into())
}

/// `exp:coeff` pairs, starting with the implicit `-1:1`.
fn format_series(s: &QSeries, terms: usize) -> String {
    let mut parts = vec!["-1:1".to_string()];
    for k in 0..s.prec().min(terms) {
        parts.push(format!("{k}:{}", format_rational(s.coeff(k))));
    }
    parts.push(format!("O({})", s.prec()));
    parts.join(" ")
}

fn report_lines(lines: impl Iterator<Item = String>) -> String {
    let mut text = String::new();
    for line in lines {
        text.push_str(&line);
        text.push('\n');
    }
    text
}

fn read_catalog(path: &Path) -> Result<Vec<CatalogEntry>, Failure> {
    let file = fs::File::open(path).map_err(|e| data("io", format!("{}: {e}", path.display())))?;
    load_catalog(BufReader::new(file)).map_err(|e| GraphError::from(e).into())
}

fn read_graph(path: &Path) -> Result<RelationGraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| data("io", format!("{}: {e}", path.display())))?;
    Ok(import_graph(&text)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| data("io", format!("{}: {e}", path.display())))
}
