//! Thin command-line front end: file I/O, dispatch, and report formatting.
//! All mathematics lives in the library.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qsym::action::{diagonal_action, doubling_action, verify_action, ActionKind};
use qsym::algebra::{dimension, normal_form, parse_word};
use qsym::census::{selfcheck_canonical_equivalence, SelfcheckSummary};
use qsym::certifier::{certify, Certificate, CertifyOptions, Verdict};
use qsym::families::{make_family, match_families};
use qsym::graph::{
    adjacency_matrix, canonical_ordering, check_property_r, parse_graph, DirectedMultigraph,
    EdgeId, PropertyRReport, VertexId,
};
use qsym::report::{InputStamp, Report};

// --- argument surface -------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "qsym",
    version,
    about = "Decide structural rigidity of directed multigraphs and certify that \
             the quantum symmetry of the graph C*-algebra collapses to circle rotations"
)]
struct Cli {
    /// Emit a JSON report envelope instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the structural requirements (no long cycles, spanning path,
    /// no parallel edges) with witnesses.
    CheckR {
        /// Graph file.
        graph: PathBuf,
    },
    /// Canonical vertex ordering and the adjacency matrix it induces.
    Order {
        /// Graph file.
        graph: PathBuf,
    },
    /// Produce a rigidity certificate: verdict, rules used, and optionally a
    /// replayable derivation.
    Certify {
        /// Graph file.
        graph: PathBuf,
        #[command(flatten)]
        flags: CertifyFlags,
    },
    /// Certify, then annotate with every named family pattern the graph
    /// matches and the standard C*-algebra it presents.
    Classify {
        /// Graph file.
        graph: PathBuf,
        #[command(flatten)]
        flags: CertifyFlags,
    },
    /// Normal form of a *-algebra word (atoms `p.v`, `S.e`, `S*.e`).
    Nf {
        /// Graph file.
        graph: PathBuf,
        /// Whitespace-separated atoms, e.g. "S.e12 S*.e12 p.1".
        word: String,
    },
    /// Linear dimension of the graph C*-algebra (finite for acyclic graphs).
    Dim {
        /// Graph file.
        graph: PathBuf,
    },
    /// Emit a named family instance as a graph file plus metadata.
    Family {
        /// Family token, e.g. P, T, L_odd, L_bar, M, K2, L2prime.
        name: String,
        /// Integer parameters (arity depends on the family).
        params: Vec<usize>,
    },
    /// Verify that an action's images satisfy every defining relation.
    VerifyAction {
        /// Graph file.
        graph: PathBuf,
        #[command(flatten)]
        action: ActionChoice,
    },
    /// DOT description of the graph for rendering.
    EmitDot {
        /// Graph file.
        graph: PathBuf,
    },
    /// Exhaustively check, over every small connected graph, that the
    /// structural test agrees with a brute-force canonical-ordering search.
    Selfcheck,
}

#[derive(Args)]
struct CertifyFlags {
    /// Record the full derivation (replayable steps) in the certificate.
    #[arg(long)]
    trace: bool,
    /// Disable the transposition rule; some graphs then come out INCONCLUSIVE.
    #[arg(long)]
    no_antipode: bool,
    /// Cap on enumerated unit-partition selectors
    /// (overrides the QSYM_SELECTOR_CAP environment variable).
    #[arg(long, value_name = "N")]
    selector_cap: Option<usize>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ActionChoice {
    /// Check the independent circle rotations (one circle per edge).
    #[arg(long)]
    diagonal: bool,
    /// Check the swap action on two parallel edges.
    #[arg(long, num_args = 2, value_names = ["E1", "E2"])]
    doubling: Option<Vec<String>>,
}

// --- payloads ---------------------------------------------------------------------------

#[derive(Serialize)]
struct OrderPayload {
    /// Vertex order making the adjacency upper triangular with unit
    /// superdiagonal; absent when no such order exists.
    ordering: Option<Vec<VertexId>>,
    /// True when `matrix` is in that canonical shape.
    canonical: bool,
    /// Adjacency under `ordering` when present, else under input order.
    matrix: Vec<Vec<u32>>,
}

#[derive(Serialize)]
struct ClassifyPayload {
    #[serde(flatten)]
    certificate: Certificate,
    /// Named family patterns the graph matches, in registry order.
    families: Vec<FamilyMatchPayload>,
    /// Standard C*-algebra presented by the graph, when a match names one.
    #[serde(skip_serializing_if = "Option::is_none")]
    algebra_label: Option<String>,
}

#[derive(Serialize)]
struct FamilyMatchPayload {
    name: String,
    parameters: Vec<usize>,
    algebra_label: String,
    citation: String,
}

#[derive(Serialize)]
struct NfPayload {
    word: String,
    normal_form: String,
    terms: Vec<NfTerm>,
}

#[derive(Serialize)]
struct NfTerm {
    coefficient: String,
    monomial: String,
}

#[derive(Serialize)]
struct DimPayload {
    dimension: u64,
}

#[derive(Serialize)]
struct FamilyPayload {
    name: String,
    parameters: Vec<usize>,
    algebra_label: String,
    citation: String,
    expected_verdict: Verdict,
    vertices: usize,
    edges: usize,
    adjacency: Vec<Vec<u32>>,
    graph_file: String,
}

#[derive(Serialize)]
struct VerifyActionPayload {
    action: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pair: Option<(EdgeId, EdgeId)>,
    passed: bool,
    checks: Vec<qsym::action::ActionCheck>,
}

#[derive(Serialize)]
struct DotPayload {
    dot: String,
}

#[derive(Serialize)]
struct SelfcheckPayload {
    passed: bool,
    #[serde(flatten)]
    summary: SelfcheckSummary,
}

// --- plumbing ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_graph(path: &Path) -> Result<(DirectedMultigraph, InputStamp), String> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let text = String::from_utf8(bytes)
        .map_err(|_| format!("{}: not valid UTF-8", path.display()))?;
    let g = parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let stamp = InputStamp::new(path.display().to_string(), text.as_bytes());
    Ok((g, stamp))
}

fn certify_options(flags: &CertifyFlags) -> Result<CertifyOptions, String> {
    let mut opts = CertifyOptions {
        record_trace: flags.trace,
        use_antipode: !flags.no_antipode,
        ..CertifyOptions::default()
    };
    if let Some(cap) = flags.selector_cap {
        opts.selector_cap = cap;
    } else if let Ok(raw) = std::env::var("QSYM_SELECTOR_CAP") {
        opts.selector_cap = raw
            .trim()
            .parse()
            .map_err(|_| format!("QSYM_SELECTOR_CAP must be a nonnegative integer, got `{raw}`"))?;
    }
    Ok(opts)
}

/// Write to stdout, exiting quietly when the reader has closed the pipe
/// (e.g. `qsym certify g.graph | head -1`).
fn write_out(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|()| out.flush()).is_err() {
        std::process::exit(0);
    }
}

fn emit<T: Serialize>(
    json: bool,
    command: &str,
    input: Option<InputStamp>,
    started: Instant,
    payload: &T,
    plain: String,
) {
    if json {
        let report = Report::new(command, input, payload, started.elapsed().as_millis());
        write_out(&report.to_json());
    } else {
        write_out(&format!("{}\n", plain.trim_end()));
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let started = Instant::now();
    match &cli.command {
        Command::CheckR { graph } => {
            let (g, stamp) = load_graph(graph)?;
            let report = check_property_r(&g).map_err(|e| e.to_string())?;
            let plain = render_check_r(&report);
            emit(cli.json, "check-r", Some(stamp), started, &report, plain);
            Ok(ExitCode::SUCCESS)
        }
        Command::Order { graph } => {
            let (g, stamp) = load_graph(graph)?;
            let ordering = canonical_ordering(&g);
            let order_ref: Vec<VertexId> = match &ordering {
                Some(o) => o.clone(),
                None => g.vertex_ids().to_vec(),
            };
            let matrix = adjacency_matrix(&g, &order_ref).map_err(|e| e.to_string())?;
            let payload = OrderPayload {
                ordering: ordering.clone(),
                canonical: matrix.is_canonical(),
                matrix: matrix.entries.clone(),
            };
            let plain = render_order(&payload);
            emit(cli.json, "order", Some(stamp), started, &payload, plain);
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { graph, flags } => {
            let (g, stamp) = load_graph(graph)?;
            let opts = certify_options(flags)?;
            let cert = certify(&g, &opts).map_err(|e| e.to_string())?;
            let plain = render_certificate(&cert);
            emit(cli.json, "certify", Some(stamp), started, &cert, plain);
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { graph, flags } => {
            let (g, stamp) = load_graph(graph)?;
            let opts = certify_options(flags)?;
            let certificate = certify(&g, &opts).map_err(|e| e.to_string())?;
            let families: Vec<FamilyMatchPayload> = match_families(&g)
                .into_iter()
                .map(|f| FamilyMatchPayload {
                    name: f.name,
                    parameters: f.parameters,
                    algebra_label: f.algebra_label,
                    citation: f.citation,
                })
                .collect();
            let algebra_label = families
                .iter()
                .map(|f| &f.algebra_label)
                .find(|l| !l.is_empty())
                .cloned();
            let payload = ClassifyPayload { certificate, families, algebra_label };
            let mut plain = render_certificate(&payload.certificate);
            plain.push_str(&render_family_matches(&payload));
            emit(cli.json, "classify", Some(stamp), started, &payload, plain);
            Ok(ExitCode::SUCCESS)
        }
        Command::Nf { graph, word } => {
            let (g, stamp) = load_graph(graph)?;
            let atoms = parse_word(word).map_err(|e| e.to_string())?;
            let nf = normal_form(&g, &atoms).map_err(|e| e.to_string())?;
            let payload = NfPayload {
                word: word.clone(),
                normal_form: nf.to_string(),
                terms: nf
                    .terms()
                    .iter()
                    .map(|(m, c)| NfTerm {
                        coefficient: c.to_string(),
                        monomial: m.to_string(),
                    })
                    .collect(),
            };
            let plain = payload.normal_form.clone();
            emit(cli.json, "nf", Some(stamp), started, &payload, plain);
            Ok(ExitCode::SUCCESS)
        }
        Command::Dim { graph } => {
            let (g, stamp) = load_graph(graph)?;
            let dim = dimension(&g).map_err(|e| e.to_string())?;
            let payload = DimPayload { dimension: dim };
            emit(cli.json, "dim", Some(stamp), started, &payload, dim.to_string());
            Ok(ExitCode::SUCCESS)
        }
        Command::Family { name, params } => {
            let spec = make_family(name, params).map_err(|e| e.to_string())?;
            let matrix = adjacency_matrix(&spec.graph, spec.graph.vertex_ids())
                .expect("natural order");
            let payload = FamilyPayload {
                name: spec.name,
                parameters: spec.parameters,
                algebra_label: spec.algebra_label,
                citation: spec.citation,
                expected_verdict: spec.expected_verdict,
                vertices: spec.graph.vertex_count(),
                edges: spec.graph.edge_count(),
                adjacency: matrix.entries,
                graph_file: spec.graph.to_file_string(),
            };
            let plain = render_family(&payload);
            emit(cli.json, "family", None, started, &payload, plain);
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyAction { graph, action } => {
            let (g, stamp) = load_graph(graph)?;
            let (kind, spec) = if action.diagonal {
                ("diagonal", diagonal_action(&g))
            } else {
                let pair = action.doubling.as_ref().expect("group requires one choice");
                let e1 = EdgeId::new(pair[0].clone());
                let e2 = EdgeId::new(pair[1].clone());
                ("doubling", doubling_action(&g, &e1, &e2).map_err(|e| e.to_string())?)
            };
            let report = verify_action(&g, &spec).map_err(|e| e.to_string())?;
            let pair = match &spec.kind {
                ActionKind::Doubling { pair } => Some(pair.clone()),
                ActionKind::Diagonal => None,
            };
            let payload = VerifyActionPayload {
                action: kind,
                pair,
                passed: report.passed,
                checks: report.checks,
            };
            let plain = render_action(&payload);
            emit(cli.json, "verify-action", Some(stamp), started, &payload, plain);
            Ok(if payload.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::EmitDot { graph } => {
            let (g, stamp) = load_graph(graph)?;
            let payload = DotPayload { dot: g.emit_dot() };
            let plain = payload.dot.clone();
            emit(cli.json, "emit-dot", Some(stamp), started, &payload, plain);
            Ok(ExitCode::SUCCESS)
        }
        Command::Selfcheck => {
            let summary = selfcheck_canonical_equivalence();
            let payload = SelfcheckPayload { passed: summary.passed(), summary };
            let plain = render_selfcheck(&payload);
            emit(cli.json, "selfcheck", None, started, &payload, plain);
            Ok(if payload.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

// --- plain-text rendering -----------------------------------------------------------------

fn render_ids<T: AsRef<str>>(ids: impl IntoIterator<Item = T>) -> String {
    ids.into_iter().map(|s| s.as_ref().to_owned()).collect::<Vec<_>>().join(" ")
}

fn render_matrix(rows: &[Vec<u32>]) -> String {
    rows.iter()
        .map(|row| row.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn render_check_r(r: &PropertyRReport) -> String {
    let mut out = String::new();
    if r.holds {
        out.push_str("requirement (R): holds\n");
    } else {
        let tags: Vec<String> = r.violated.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("requirement (R): violated {{{}}}\n", tags.join(", ")));
    }
    if let Some(cycle) = &r.cycle {
        out.push_str(&format!(
            "cycle: {}\n",
            render_ids(cycle.iter().map(|e| e.as_str()))
        ));
    }
    if let Some((a, b)) = &r.parallel_pair {
        out.push_str(&format!("parallel pair: {} {}\n", a.as_str(), b.as_str()));
    }
    if let Some(path) = &r.spanning_path {
        out.push_str(&format!(
            "spanning path: {}\n",
            render_ids(path.iter().map(|e| e.as_str()))
        ));
    }
    if let Some(order) = &r.ordering {
        out.push_str(&format!(
            "ordering: {}\n",
            render_ids(order.iter().map(|v| v.as_str()))
        ));
    }
    out
}

fn render_order(p: &OrderPayload) -> String {
    let mut out = String::new();
    match &p.ordering {
        Some(order) => out.push_str(&format!(
            "ordering: {}\n",
            render_ids(order.iter().map(|v| v.as_str()))
        )),
        None => out.push_str("no canonical ordering; adjacency under input order\n"),
    }
    out.push_str(&render_matrix(&p.matrix));
    out.push('\n');
    out
}

fn render_certificate(c: &Certificate) -> String {
    let mut out = format!("verdict: {}\n", c.verdict);
    if !c.rules_used.is_empty() {
        let rules: Vec<&str> = c.rules_used.iter().map(String::as_str).collect();
        out.push_str(&format!("rules used: {}\n", rules.join(", ")));
    }
    if !c.steps.is_empty() {
        out.push_str(&format!("derivation steps: {}\n", c.steps.len()));
    }
    if !c.residual_pairs.is_empty() {
        let pairs: Vec<String> = c
            .residual_pairs
            .iter()
            .map(|(a, b)| format!("({}, {})", a.as_str(), b.as_str()))
            .collect();
        out.push_str(&format!("residual pairs: {}\n", pairs.join(" ")));
    }
    for cite in &c.citations {
        out.push_str(&format!("citation: {cite}\n"));
    }
    if let Some(action) = &c.action {
        if let ActionKind::Doubling { pair: (a, b) } = &action.kind {
            out.push_str(&format!(
                "refuting action: doubling on {} ∥ {}\n",
                a.as_str(),
                b.as_str()
            ));
        }
    }
    for note in &c.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}

fn render_family_matches(p: &ClassifyPayload) -> String {
    let mut out = String::new();
    for f in &p.families {
        let params = if f.parameters.is_empty() {
            String::new()
        } else {
            format!(
                "({})",
                f.parameters.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
            )
        };
        if f.algebra_label.is_empty() {
            out.push_str(&format!("family: {}{params}\n", f.name));
        } else {
            out.push_str(&format!("family: {}{params} — {}\n", f.name, f.algebra_label));
        }
    }
    out
}

fn render_family(p: &FamilyPayload) -> String {
    let params = if p.parameters.is_empty() {
        String::new()
    } else {
        format!(
            "({})",
            p.parameters.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
        )
    };
    let mut out = format!("# family: {}{params}\n", p.name);
    if !p.algebra_label.is_empty() {
        out.push_str(&format!("# algebra: {}\n", p.algebra_label));
    }
    out.push_str(&format!("# expected verdict: {}\n", p.expected_verdict));
    out.push_str(&p.graph_file);
    out
}

fn render_action(p: &VerifyActionPayload) -> String {
    let mut out = match &p.pair {
        Some((a, b)) => format!("action: doubling on {} ∥ {}\n", a.as_str(), b.as_str()),
        None => "action: diagonal (independent circle per edge)\n".to_owned(),
    };
    for check in &p.checks {
        if check.ok {
            out.push_str(&format!("ok   {}\n", check.relation));
        } else {
            let detail = check.detail.as_deref().unwrap_or("failed");
            out.push_str(&format!("FAIL {}: {detail}\n", check.relation));
        }
    }
    out.push_str(&format!("passed: {}\n", p.passed));
    out
}

fn render_selfcheck(p: &SelfcheckPayload) -> String {
    let mut out = String::new();
    for class in &p.summary.classes {
        out.push_str(&format!(
            "{} vertices, multiplicities ≤ {}: {} connected graphs, {} satisfying, {} mismatches\n",
            class.vertices,
            class.max_multiplicity,
            class.graphs,
            class.satisfying,
            class.mismatches.len()
        ));
        for m in &class.mismatches {
            out.push_str(&format!("  mismatch: {}\n", render_matrix_inline(m)));
        }
    }
    out.push_str(&format!(
        "total: {} graphs, {} mismatches — {}\n",
        p.summary.total_graphs,
        p.summary.total_mismatches,
        if p.passed { "equivalence holds" } else { "EQUIVALENCE FAILED" }
    ));
    out
}

fn render_matrix_inline(rows: &[Vec<u32>]) -> String {
    let body = rows
        .iter()
        .map(|row| row.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ");
    format!("[{body}]")
}
