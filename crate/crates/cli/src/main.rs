use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use zigzag_core::colim::direct_limit;
use zigzag_core::oracle::pi1_rank;
use zigzag_core::span::components;
use zigzag_core::stages::{cycle_diagnostic, stage_word_bijection};
use zigzag_core::suite::{run_suite, CheckOptions, CheckResult};
use zigzag_core::words::{self, parse_word, Strategy};
use zigzag_core::{build_stages, FiniteSpan, Vertex};

#[derive(Parser)]
#[command(
    name = "zigzag",
    version,
    about = "Path spaces of pushouts over finite spans"
)]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sizes, components and fundamental group rank.
    Info { file: PathBuf },
    /// Stage cardinalities, gluing data and the word bijection status.
    Stages {
        file: PathBuf,
        #[arg(long)]
        up_to: usize,
    },
    /// Reduced words to an endpoint in canonical order.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        endpoint: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Normal form of a word.
    Reduce {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Direct limit of the stage diagram over one endpoint.
    Limit {
        file: PathBuf,
        #[arg(long)]
        up_to: usize,
        #[arg(long)]
        endpoint: String,
    },
    /// Run every invariant suite.
    Check {
        file: PathBuf,
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 4)]
        stages: usize,
    },
}

/// A finished command: what to print and whether every check held.
struct Output {
    text: String,
    json: serde_json::Value,
    ok: bool,
}

fn load(path: &PathBuf) -> Result<FiniteSpan, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    FiniteSpan::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn vertex(span: &FiniteSpan, label: &str) -> Result<Vertex, String> {
    span.find_vertex(label).map_err(|e| e.to_string())
}

fn vertex_key(span: &FiniteSpan, v: Vertex) -> String {
    match v {
        Vertex::A(_) => format!("A:{}", span.vertex_label(v)),
        Vertex::B(_) => format!("B:{}", span.vertex_label(v)),
    }
}

#[derive(Serialize)]
struct ComponentJson {
    vertices: Vec<String>,
    edges: usize,
    rank: usize,
    basepoint: bool,
}

fn info(span: &FiniteSpan) -> Output {
    let graph = span.realize();
    let base = graph
        .id_of(Vertex::A(span.basepoint()))
        .expect("basepoint is a vertex");
    let base_label = span.vertex_label(Vertex::A(span.basepoint()));
    let mut text = format!(
        "A={} B={} S={} basepoint={base_label}\n",
        span.a_len(),
        span.b_len(),
        span.edge_count()
    );
    let mut comps = Vec::new();
    for (i, c) in components(&graph).iter().enumerate() {
        let edges = graph.edges.iter().filter(|(x, _)| c.contains(*x)).count();
        let entry = ComponentJson {
            vertices: c
                .vertices
                .iter()
                .map(|&v| vertex_key(span, graph.vertices[v]))
                .collect(),
            edges,
            rank: edges - c.tree.len(),
            basepoint: c.contains(base),
        };
        let _ = writeln!(
            text,
            "component {i}: {} edges={} rank={}{}",
            entry.vertices.join(" "),
            entry.edges,
            entry.rank,
            if entry.basepoint { " base" } else { "" }
        );
        comps.push(entry);
    }
    let rank = pi1_rank(&graph, base);
    let _ = writeln!(text, "pi1_rank={rank}");
    let json = serde_json::json!({
        "command": "info",
        "a": span.a_len(),
        "b": span.b_len(),
        "edges": span.edge_count(),
        "basepoint": base_label,
        "components": comps,
        "pi1_rank": rank,
    });
    Output {
        text,
        json,
        ok: true,
    }
}

#[derive(Serialize)]
struct FiberJson {
    vertex: String,
    size: usize,
}

#[derive(Serialize)]
struct StageRow {
    n: usize,
    fibers: Vec<FiberJson>,
    glue: usize,
    cycles: usize,
    bijection: bool,
}

fn stages(span: &FiniteSpan, up_to: usize) -> Output {
    let stages = build_stages(span, up_to);
    let report = stage_word_bijection(&stages, up_to);
    let mut text = String::new();
    let mut rows = Vec::new();
    for n in 0..=up_to {
        let fibers: Vec<FiberJson> = span
            .vertices()
            .map(|v| FiberJson {
                vertex: vertex_key(span, v),
                size: stages.cardinality(n, v),
            })
            .collect();
        let row = StageRow {
            n,
            glue: stages.stage(n).glue_count(),
            cycles: cycle_diagnostic(&stages, n).iter().map(|c| c.cycles).sum(),
            bijection: !report.mismatches.iter().any(|m| m.stage() == Some(n)),
            fibers,
        };
        let _ = write!(text, "n={n}");
        for (v, f) in span.vertices().zip(&row.fibers) {
            let side = if v.is_a() { "A" } else { "B" };
            let _ = write!(text, " |P_{side}({})|={}", span.vertex_label(v), f.size);
        }
        let _ = writeln!(
            text,
            " glue={} cycles={} bijection={}",
            row.glue,
            row.cycles,
            if row.bijection { "ok" } else { "fail" }
        );
        rows.push(row);
    }
    let mismatches: Vec<String> = report.mismatches.iter().map(|m| m.to_string()).collect();
    for m in &mismatches {
        let _ = writeln!(text, "mismatch: {m}");
    }
    let json = serde_json::json!({
        "command": "stages",
        "up_to": up_to,
        "rows": rows,
        "mismatches": mismatches,
    });
    Output {
        text,
        json,
        ok: report.is_ok(),
    }
}

fn enumerate(span: &FiniteSpan, endpoint: &str, max_len: usize) -> Result<Output, String> {
    let v = vertex(span, endpoint)?;
    let list: Vec<String> = words::enumerate(span, v, max_len)
        .iter()
        .map(|w| w.display(span).to_string())
        .collect();
    let text: String = list.iter().map(|w| format!("{w}\n")).collect();
    let json = serde_json::json!({
        "command": "enumerate",
        "endpoint": vertex_key(span, v),
        "max_len": max_len,
        "words": list,
    });
    Ok(Output {
        text,
        json,
        ok: true,
    })
}

fn reduce(span: &FiniteSpan, word: &str) -> Result<Output, String> {
    let w = parse_word(span, word).map_err(|e| e.to_string())?;
    let (normal, rewrites) =
        words::reduce_with(span, &w, Strategy::Leftmost).map_err(|e| e.to_string())?;
    let shown = normal.display(span).to_string();
    let json = serde_json::json!({
        "command": "reduce",
        "input": w.display(span).to_string(),
        "normal_form": shown,
        "rewrites": rewrites,
        "endpoint": vertex_key(span, words::endpoint(span, &normal)),
    });
    Ok(Output {
        text: format!("{shown}\n"),
        json,
        ok: true,
    })
}

#[derive(Serialize)]
struct ClassJson {
    class: usize,
    stage: usize,
    element: usize,
    word: String,
}

fn limit(span: &FiniteSpan, up_to: usize, endpoint: &str) -> Result<Output, String> {
    let v = vertex(span, endpoint)?;
    let stages = build_stages(span, up_to);
    let limit = direct_limit(&stages.diagram(v));
    let report = stage_word_bijection(&stages, up_to);
    let classes: Vec<ClassJson> = (0..limit.class_count())
        .map(|class| {
            let (stage, element) = limit.representative(class);
            let word = report
                .tables
                .get(stage)
                .and_then(|t| t.fiber(v).get(element))
                .map_or_else(|| "?".to_string(), |w| w.display(span).to_string());
            ClassJson {
                class,
                stage,
                element,
                word,
            }
        })
        .collect();
    let mut text = format!("classes={}\n", classes.len());
    for c in &classes {
        let _ = writeln!(
            text,
            "class {}: stage={} element={} word={}",
            c.class, c.stage, c.element, c.word
        );
    }
    let json = serde_json::json!({
        "command": "limit",
        "endpoint": vertex_key(span, v),
        "up_to": up_to,
        "classes": classes.len(),
        "representatives": classes,
    });
    Ok(Output {
        text,
        json,
        ok: report.is_ok(),
    })
}

fn check(span: &FiniteSpan, opts: CheckOptions) -> Output {
    let report = run_suite(span, &opts);
    let mut text = String::new();
    for CheckResult {
        name,
        passed,
        detail,
    } in &report.results
    {
        let tag = if *passed { "PASS" } else { "FAIL" };
        let _ = writeln!(text, "{tag} {name}: {detail}");
    }
    let failed = report.results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(
        text,
        "passed={} failed={failed}",
        report.results.len() - failed
    );
    let json = serde_json::json!({
        "command": "check",
        "seed": opts.seed,
        "max_len": opts.max_len,
        "stages": opts.stages,
        "oracle": opts.oracle,
        "passed": report.passed(),
        "results": report.results,
    });
    Output {
        text,
        json,
        ok: report.passed(),
    }
}

fn run(cli: Cli) -> Result<Output, String> {
    match cli.command {
        Command::Info { file } => Ok(info(&load(&file)?)),
        Command::Stages { file, up_to } => Ok(stages(&load(&file)?, up_to)),
        Command::Enumerate {
            file,
            endpoint,
            max_len,
        } => enumerate(&load(&file)?, &endpoint, max_len),
        Command::Reduce { file, word } => reduce(&load(&file)?, &word),
        Command::Limit {
            file,
            up_to,
            endpoint,
        } => limit(&load(&file)?, up_to, &endpoint),
        Command::Check {
            file,
            oracle,
            seed,
            max_len,
            stages,
        } => {
            let span = load(&file)?;
            let opts = CheckOptions {
                seed,
                max_len,
                stages,
                oracle,
                ..CheckOptions::default()
            };
            Ok(check(&span, opts))
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            let body = if json {
                let mut body = serde_json::to_string_pretty(&out.json).expect("values serialize");
                body.push('\n');
                body
            } else {
                out.text
            };
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
