use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use coalition_core::coalition::{
    max_coalition_number, verify_partition, BoundPolicy, CertificateJson, CoalitionCertificate,
    Partition, SolveStatus, SolverConfig,
};
use coalition_core::domination::DominationKind;
use coalition_core::families::{cn_cycle_upper, rc_cycle_expected, FamilySpec};
use coalition_core::graph::{parse_graph6_stream, Graph};
use coalition_core::survey::{
    expected_connected_count, survey, table_diff, table_rc, tree_corpus, Layout, SurveyOptions,
    SurveyRecord,
};

#[derive(Parser)]
#[command(
    name = "rcoal",
    version,
    about = "Coalition and restrained coalition numbers of graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute C(G) and/or RC(G) for one or more graphs.
    Solve {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long, value_enum, default_value_t = KindArg::Both)]
        kind: KindArg,
        /// Print the optimal partition with a justification per class.
        #[arg(long)]
        certificate: bool,
        /// One JSON object per graph instead of text.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Check a partition (assignment file) or a certificate (JSON) against a graph.
    Verify {
        #[command(flatten)]
        graph: GraphSource,
        /// Whitespace-separated class index for vertices 0..n-1.
        #[arg(
            long,
            conflicts_with = "certificate",
            required_unless_present = "certificate"
        )]
        assignment: Option<PathBuf>,
        /// Certificate JSON as printed by `solve --json --certificate`.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = KindArg::Restrained)]
        kind: KindArg,
    },
    /// Per-graph invariants as CSV.
    Survey {
        /// graph6 file, one graph per line.
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, requires = "max_n")]
        family: Option<CorpusFamily>,
        #[arg(long, default_value_t = 1)]
        min_n: usize,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Reproduce a distribution table as CSV.
    Tables {
        /// 1: d over connected graphs, 2: RC over trees, 3: d over trees.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
        #[arg(long)]
        max_n: usize,
        /// Defaults to 6, 4 and 3 for tables 1, 2 and 3.
        #[arg(long)]
        min_n: Option<usize>,
        /// graph6 corpus files for table 1 (default: <data-dir>/connected<n>.g6).
        #[arg(long)]
        input: Vec<PathBuf>,
        #[arg(long, default_value = "data")]
        data_dir: PathBuf,
        /// Print "." for empty cells.
        #[arg(long)]
        paper_style: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare RC(C_n) from the solver with the closed formula.
    Cycles {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Start every search at n instead of the known bounds.
        #[arg(long)]
        order_only: bool,
    },
    /// Coalition graph of a partition in DOT. Without --assignment the
    /// optimal partition found by the solver is used.
    Dot {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long)]
        assignment: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = KindArg::Restrained)]
        kind: KindArg,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    #[arg(long)]
    graph6: Option<String>,
    /// Edge list such as "0-1 1-2 2-0"; the order is one more than the
    /// largest endpoint unless --order is given.
    #[arg(long)]
    edges: Option<String>,
    /// path:N, cycle:N, star:N, complete:N or kbip:R,S
    #[arg(long)]
    family: Option<FamilySpec>,
    /// graph6 file, one graph per line.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    /// Stop each search after this many seconds.
    #[arg(long)]
    time_budget: Option<f64>,
    #[arg(long)]
    node_budget: Option<u64>,
    /// Only use the trivial bound n.
    #[arg(long)]
    order_only: bool,
    /// Number of vertices for --edges.
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    /// Per-graph time budget in seconds.
    #[arg(long, default_value_t = 10.0)]
    time_budget: f64,
    #[arg(long)]
    sequential: bool,
    /// Only use the trivial bound n.
    #[arg(long)]
    order_only: bool,
}

impl RunArgs {
    fn options(&self) -> Result<SurveyOptions, Failure> {
        let mut o = if self.order_only {
            SurveyOptions::unbounded()
        } else {
            SurveyOptions::default()
        };
        o.config.time_budget = Some(seconds(self.time_budget)?);
        o.parallel = !self.sequential;
        o.keep_certificates = false;
        Ok(o)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Dominating,
    Restrained,
    Both,
}

impl KindArg {
    fn kinds(self) -> &'static [DominationKind] {
        match self {
            KindArg::Dominating => &[DominationKind::Dominating],
            KindArg::Restrained => &[DominationKind::Restrained],
            KindArg::Both => &DominationKind::ALL,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CorpusFamily {
    Trees,
    Paths,
    Cycles,
}

/// Exit code 1 for a violated rule or mismatch, 2 for bad input.
enum Failure {
    Violation(String),
    Usage(String),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn seconds(s: f64) -> Result<Duration, Failure> {
    Duration::try_from_secs_f64(s).map_err(|e| usage(format!("bad time budget {s}: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn read_graph6_file(path: &Path) -> Result<Vec<Graph>, Failure> {
    parse_graph6_stream(&read(path)?)
        .map_err(|(line, e)| usage(format!("{}:{line}: {e}", path.display())))
}

fn parse_edges(text: &str, order: Option<usize>) -> Result<Graph, Failure> {
    let mut edges = Vec::new();
    for tok in text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
    {
        let (a, b) = tok
            .split_once('-')
            .ok_or_else(|| usage(format!("edge {tok:?} is not of the form u-v")))?;
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| usage(format!("bad vertex {s:?} in edge {tok:?}")))
        };
        edges.push((parse(a)?, parse(b)?));
    }
    let n = order.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Graph::from_edges(n, &edges).map_err(|e| usage(e.to_string()))
}

fn load_graphs(src: &GraphSource, order: Option<usize>) -> Result<Vec<(String, Graph)>, Failure> {
    if let Some(s) = &src.graph6 {
        let g = Graph::from_graph6(s).map_err(|e| usage(e.to_string()))?;
        return Ok(vec![(s.clone(), g)]);
    }
    if let Some(e) = &src.edges {
        let g = parse_edges(e, order)?;
        return Ok(vec![(g.to_graph6(), g)]);
    }
    if let Some(f) = &src.family {
        let g = f.build().map_err(|e| usage(e.to_string()))?;
        return Ok(vec![(f.to_string(), g)]);
    }
    let path = src.file.as_ref().expect("clap requires one graph source");
    Ok(read_graph6_file(path)?
        .into_iter()
        .enumerate()
        .map(|(i, g)| (i.to_string(), g))
        .collect())
}

fn load_one(src: &GraphSource) -> Result<(String, Graph), Failure> {
    let mut graphs = load_graphs(src, None)?;
    if graphs.len() != 1 {
        return Err(usage(format!(
            "expected exactly one graph, got {}",
            graphs.len()
        )));
    }
    Ok(graphs.pop().unwrap())
}

fn read_assignment(path: &Path) -> Result<Partition, Failure> {
    let labels = read(path)?
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| usage(format!("{}: bad class index {t:?}", path.display())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Partition::from_assignment(labels).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn status_str(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::BudgetExceeded => "budget exceeded",
    }
}

fn print_certificate(cert: &CoalitionCertificate) {
    for (i, j) in cert.justification.iter().enumerate() {
        let why = match j {
            coalition_core::coalition::Justification::SelfSufficient => "self".to_string(),
            coalition_core::coalition::Justification::Partner(p) => format!("partner {p}"),
        };
        println!("    class {i} {}: {why}", cert.partition.class(i));
    }
}

fn cmd_solve(
    src: &GraphSource,
    kind: KindArg,
    certificate: bool,
    as_json: bool,
    args: &SolverArgs,
) -> Result<(), Failure> {
    let mut config = SolverConfig {
        node_budget: args.node_budget,
        ..SolverConfig::default()
    };
    if let Some(t) = args.time_budget {
        config.time_budget = Some(seconds(t)?);
    }
    if args.order_only {
        config.bounds = BoundPolicy::OrderOnly;
    }
    for (id, g) in load_graphs(src, args.order)? {
        let mut results = Vec::new();
        for &k in kind.kinds() {
            let r = max_coalition_number(&g, k, &config);
            if let Some(cert) = &r.certificate {
                cert.verify(&g).map_err(|v| {
                    Failure::Violation(format!("{id}: solver certificate rejected: {v}"))
                })?;
            }
            results.push(r);
        }
        if as_json {
            let results: Vec<_> = results
                .iter()
                .map(|r| {
                    let mut o = json!({
                        "kind": r.kind,
                        "status": status_str(r.status),
                        "value": r.value,
                        "upper_bound": r.upper_bound,
                        "nodes": r.stats.nodes,
                    });
                    if certificate {
                        o["certificate"] = json!(r.certificate.as_ref().map(|c| c.to_json()));
                    }
                    o
                })
                .collect();
            let line =
                json!({"id": id, "graph6": g.to_graph6(), "n": g.order(), "results": results});
            println!("{line}");
        } else {
            println!("{id} n={} graph6={}", g.order(), g.to_graph6());
            for r in &results {
                let value = r.value.map_or_else(|| "-".to_string(), |v| v.to_string());
                println!(
                    "  {}: {value} ({}; upper bound {}; {} nodes)",
                    r.kind,
                    status_str(r.status),
                    r.upper_bound,
                    r.stats.nodes
                );
                if certificate {
                    if let Some(c) = &r.certificate {
                        print_certificate(c);
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_verify(
    src: &GraphSource,
    assignment: Option<&Path>,
    certificate: Option<&Path>,
    kind: KindArg,
) -> Result<(), Failure> {
    let (_, g) = load_one(src)?;
    let certs: Vec<Result<CoalitionCertificate, String>> = if let Some(path) = certificate {
        let parsed: CertificateJson = serde_json::from_str(&read(path)?)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        if parsed.n != g.order() {
            return Err(usage(format!(
                "certificate is for {} vertices, graph has {}",
                parsed.n,
                g.order()
            )));
        }
        let kind = parsed.kind;
        vec![CoalitionCertificate::from_json(&parsed)
            .and_then(|c| c.verify(&g).map(|_| c))
            .map_err(|v| format!("{kind}: {v}"))]
    } else {
        let p = read_assignment(assignment.expect("clap requires a partition"))?;
        if p.order() != g.order() {
            return Err(usage(format!(
                "assignment covers {} vertices, graph has {}",
                p.order(),
                g.order()
            )));
        }
        kind.kinds()
            .iter()
            .map(|&k| verify_partition(&g, &p, k).map_err(|v| format!("{k}: {v}")))
            .collect()
    };
    let mut failed = Vec::new();
    for c in certs {
        match c {
            Ok(c) => {
                println!(
                    "valid {} coalition partition with {} classes",
                    c.kind,
                    c.value()
                );
                print_certificate(&c);
            }
            Err(e) => {
                println!("violation: {e}");
                failed.push(e);
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(failed.join("; ")))
    }
}

fn family_corpus(
    family: CorpusFamily,
    min_n: usize,
    max_n: usize,
) -> Result<Vec<(String, Graph)>, Failure> {
    let specs: Vec<FamilySpec> = match family {
        CorpusFamily::Trees => {
            return tree_corpus(min_n.max(1), max_n).map_err(|e| usage(e.to_string()));
        }
        CorpusFamily::Paths => (min_n.max(1)..=max_n).map(FamilySpec::Path).collect(),
        CorpusFamily::Cycles => (min_n.max(3)..=max_n).map(FamilySpec::Cycle).collect(),
    };
    specs
        .into_iter()
        .map(|s| Ok((s.to_string(), s.build().map_err(|e| usage(e.to_string()))?)))
        .collect()
}

/// Any published bound broken by a record is reported as a violation.
fn check_bounds(records: &[SurveyRecord]) -> Result<(), Failure> {
    let broken: Vec<String> = records
        .iter()
        .flat_map(|r| {
            r.bound_violations()
                .into_iter()
                .map(move |v| format!("{}: {v}", r.id))
        })
        .collect();
    if broken.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "bound violations: {}",
            broken.join("; ")
        )))
    }
}

fn cmd_survey(
    input: Option<&Path>,
    family: Option<CorpusFamily>,
    min_n: usize,
    max_n: Option<usize>,
    output: Option<&Path>,
    run: &RunArgs,
) -> Result<(), Failure> {
    let corpus = match (input, family) {
        (Some(path), _) => read_graph6_file(path)?
            .into_iter()
            .enumerate()
            .map(|(i, g)| (i.to_string(), g))
            .collect(),
        (None, Some(f)) => family_corpus(f, min_n, max_n.expect("clap requires --max-n"))?,
        (None, None) => unreachable!("clap requires a corpus"),
    };
    let records = survey(&corpus, &run.options()?);
    let mut csv = String::from(SurveyRecord::CSV_HEADER);
    csv.push('\n');
    for r in &records {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    match output {
        Some(p) => {
            fs::write(p, csv).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?
        }
        None => print!("{csv}"),
    }
    let flagged = records.iter().filter(|r| r.flag().is_some()).count();
    if flagged > 0 {
        eprintln!("{flagged} of {} records flagged", records.len());
    }
    check_bounds(&records)
}

/// Loads the connected-graph corpus and refuses it unless every order has
/// the known number of graphs.
fn connected_corpus(
    inputs: &[PathBuf],
    data_dir: &Path,
    min_n: usize,
    max_n: usize,
) -> Result<Vec<(String, Graph)>, Failure> {
    let paths: Vec<PathBuf> = if inputs.is_empty() {
        (min_n..=max_n)
            .map(|n| data_dir.join(format!("connected{n}.g6")))
            .collect()
    } else {
        inputs.to_vec()
    };
    let mut by_order: BTreeMap<usize, Vec<Graph>> = BTreeMap::new();
    for p in &paths {
        if !p.exists() {
            return Err(usage(format!(
                "missing corpus {} (generate it with tools/gen_connected_graphs.py)",
                p.display()
            )));
        }
        for g in read_graph6_file(p)? {
            if (min_n..=max_n).contains(&g.order()) {
                by_order.entry(g.order()).or_default().push(g);
            }
        }
    }
    let mut corpus = Vec::new();
    for n in min_n..=max_n {
        let graphs = by_order.remove(&n).unwrap_or_default();
        if let Some(expected) = expected_connected_count(n) {
            if graphs.len() != expected {
                return Err(usage(format!(
                    "corpus for n={n} has {} graphs, expected {expected}",
                    graphs.len()
                )));
            }
        }
        corpus.extend(
            graphs
                .into_iter()
                .enumerate()
                .map(|(i, g)| (format!("G{n}-{i}"), g)),
        );
    }
    Ok(corpus)
}

#[allow(clippy::too_many_arguments)]
fn cmd_tables(
    table: u8,
    min_n: Option<usize>,
    max_n: usize,
    inputs: &[PathBuf],
    data_dir: &Path,
    paper_style: bool,
    run: &RunArgs,
) -> Result<(), Failure> {
    let min_n = min_n.unwrap_or(match table {
        1 => 6,
        2 => 4,
        _ => 3,
    });
    if min_n > max_n {
        return Err(usage(format!("--min-n {min_n} exceeds --max-n {max_n}")));
    }
    let corpus = if table == 1 {
        connected_corpus(inputs, data_dir, min_n, max_n)?
    } else {
        tree_corpus(min_n, max_n).map_err(|e| usage(e.to_string()))?
    };
    let records = survey(&corpus, &run.options()?);
    let flagged: Vec<String> = records
        .iter()
        .filter_map(|r| r.flag().map(|f| format!("{} ({f})", r.id)))
        .collect();
    if !flagged.is_empty() {
        return Err(Failure::Violation(format!(
            "{} rows flagged, table not reported: {}",
            flagged.len(),
            flagged.join(", ")
        )));
    }
    check_bounds(&records)?;
    let (dist, layout) = match table {
        1 => (
            table_diff(&records),
            Layout::OrdersAsRows {
                total_label: "graphs",
            },
        ),
        2 => (
            table_rc(&records),
            Layout::OrdersAsColumns {
                total_label: "total",
            },
        ),
        _ => (
            table_diff(&records),
            Layout::OrdersAsColumns {
                total_label: "trees",
            },
        ),
    };
    let dist = dist.map_err(|e| Failure::Violation(e.to_string()))?;
    print!("{}", dist.to_csv(layout, paper_style));
    Ok(())
}

fn cmd_cycles(from: usize, to: usize, order_only: bool) -> Result<(), Failure> {
    if from < 3 || from > to || to > 64 {
        return Err(usage("cycles need 3 <= from <= to <= 64"));
    }
    let mut mismatches = 0;
    for n in from..=to {
        let g = FamilySpec::Cycle(n)
            .build()
            .map_err(|e| usage(e.to_string()))?;
        let expected = rc_cycle_expected(n).map_err(|e| usage(e.to_string()))?;
        let mut config = SolverConfig::default();
        if order_only {
            config.bounds = BoundPolicy::OrderOnly;
        } else {
            config.upper_bound = Some(cn_cycle_upper(n).map_err(|e| usage(e.to_string()))?);
        }
        let r = max_coalition_number(&g, DominationKind::Restrained, &config);
        let verified = r.certificate.as_ref().is_some_and(|c| c.verify(&g).is_ok());
        let ok = verified && r.value == Some(expected);
        if !ok {
            mismatches += 1;
        }
        let computed = r.value.map_or_else(|| "-".to_string(), |v| v.to_string());
        println!(
            "{n}, {computed}, {expected}, {}",
            if ok { "MATCH" } else { "MISMATCH" }
        );
    }
    if mismatches > 0 {
        return Err(Failure::Violation(format!(
            "{mismatches} cycles disagree with the formula"
        )));
    }
    Ok(())
}

fn cmd_dot(src: &GraphSource, assignment: Option<&Path>, kind: KindArg) -> Result<(), Failure> {
    let kind = match kind {
        KindArg::Dominating => DominationKind::Dominating,
        KindArg::Restrained => DominationKind::Restrained,
        KindArg::Both => return Err(usage("dot renders one kind at a time")),
    };
    let (id, g) = load_one(src)?;
    let partition = match assignment {
        Some(p) => {
            let p = read_assignment(p)?;
            verify_partition(&g, &p, kind).map_err(|v| Failure::Violation(v.to_string()))?;
            p
        }
        None => {
            let r = max_coalition_number(&g, kind, &SolverConfig::default());
            r.certificate
                .ok_or_else(|| {
                    Failure::Violation(format!(
                        "{id}: no {kind} coalition partition ({})",
                        status_str(r.status)
                    ))
                })?
                .partition
        }
    };
    let dot = coalition_core::survey::export_dot(&g, &partition, kind)
        .map_err(|e| usage(e.to_string()))?;
    print!("{dot}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Solve {
            graph,
            kind,
            certificate,
            json,
            solver,
        } => cmd_solve(graph, *kind, *certificate, *json, solver),
        Command::Verify {
            graph,
            assignment,
            certificate,
            kind,
        } => cmd_verify(graph, assignment.as_deref(), certificate.as_deref(), *kind),
        Command::Survey {
            input,
            family,
            min_n,
            max_n,
            output,
            run,
        } => cmd_survey(
            input.as_deref(),
            *family,
            *min_n,
            *max_n,
            output.as_deref(),
            run,
        ),
        Command::Tables {
            table,
            max_n,
            min_n,
            input,
            data_dir,
            paper_style,
            run,
        } => cmd_tables(*table, *min_n, *max_n, input, data_dir, *paper_style, run),
        Command::Cycles {
            from,
            to,
            order_only,
        } => cmd_cycles(*from, *to, *order_only),
        Command::Dot {
            graph,
            assignment,
            kind,
        } => cmd_dot(graph, assignment.as_deref(), *kind),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
