use std::path::Path;
use std::time::Instant;

use gretl_core::case::{bundled_fixtures, load_fixtures, run_case, CaseError};
use gretl_core::io::{export_dot, graph_to_string, load_graph, trace_to_string, IoError};
use gretl_core::query::{all_packages, parse_query, EmptyScope, Environment, SyntaxError};
use gretl_core::transform::{parse_transformation, ExecutionContext};
use log::{debug, info};

use crate::report::{error_line, paint, Failure, GREEN, RED};

type Outcome = Result<bool, Failure>;

fn io_failure(path: &Path, e: IoError) -> Failure {
    let location = match &e {
        IoError::Parse { line, column, .. } if *line > 0 => {
            format!("{}:{line}:{column}", path.display())
        }
        _ => path.display().to_string(),
    };
    Failure::new(e.kind(), location, e)
}

fn syntax_failure(origin: &str, e: SyntaxError) -> Failure {
    Failure::new(
        "SyntaxError",
        format!("{origin}:{}:{}", e.line, e.column),
        e.message,
    )
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::new("IoError", path.display().to_string(), e))
}

pub fn transform(
    source: &Path,
    rules: &Path,
    out: &Path,
    dot: Option<&Path>,
    trace: Option<&Path>,
) -> Outcome {
    let started = Instant::now();
    let graph = load_graph(source).map_err(|e| io_failure(source, e))?;
    info!(
        "loaded {}: {} vertices, {} edges",
        source.display(),
        graph.vertex_count(),
        graph.edge_count()
    );
    let text = std::fs::read_to_string(rules)
        .map_err(|e| Failure::new("IoError", rules.display().to_string(), e))?;
    let origin = rules.display().to_string();
    let t = parse_transformation(&text).map_err(|e| syntax_failure(&origin, e))?;

    let mut ctx = ExecutionContext::new(&graph, t.imports.clone());
    for (index, s) in t.statements.iter().enumerate() {
        ctx.apply(&s.kind).map_err(|e| {
            Failure::new(
                e.kind(),
                format!("{origin}:{}", s.line),
                format!("statement {index}: {e}"),
            )
        })?;
        debug!(
            "statement {index} ({}) at line {}: {} vertices, {} edges",
            s.kind.operation(),
            s.line,
            ctx.target.vertex_count(),
            ctx.target.edge_count()
        );
    }
    write(out, &graph_to_string(&ctx.target))?;
    if let Some(p) = dot {
        write(p, &export_dot(&ctx.target))?;
    }
    if let Some(p) = trace {
        write(p, &trace_to_string(&ctx))?;
    }
    info!(
        "wrote {}: {} vertices, {} edges in {:.3}s",
        out.display(),
        ctx.target.vertex_count(),
        ctx.target.edge_count(),
        started.elapsed().as_secs_f64()
    );
    Ok(true)
}

pub fn validate(source: &Path) -> Outcome {
    let graph = load_graph(source).map_err(|e| io_failure(source, e))?;
    println!(
        "valid {}: {} vertices, {} edges",
        source.display(),
        graph.vertex_count(),
        graph.edge_count()
    );
    Ok(true)
}

pub fn query(source: &Path, text: &str) -> Outcome {
    let graph = load_graph(source).map_err(|e| io_failure(source, e))?;
    let expr = parse_query(text).map_err(|e| syntax_failure("query", e))?;
    let imports = all_packages(graph.schema());
    let value = Environment::new(&graph, &imports, &EmptyScope)
        .eval(&expr)
        .map_err(|e| Failure::new(e.kind(), "query", e))?;
    println!("{}", graph.render_value(&value));
    Ok(true)
}

pub fn case(dir: Option<&Path>) -> Outcome {
    let fixtures = match dir {
        Some(d) => load_fixtures(d).map_err(|e| io_failure(d, e))?,
        None => bundled_fixtures(),
    };
    let mut all_passed = true;
    for f in &fixtures {
        let id = &f.manifest.id;
        match run_case(f) {
            Ok(run) => {
                eprintln!("time {id} {:.3}s", run.elapsed.as_secs_f64());
                if run.passed() {
                    println!("{} {id}", paint("PASS", GREEN));
                } else {
                    all_passed = false;
                    println!("{} {id}", paint("FAIL", RED));
                    for d in &run.diffs {
                        println!("  {d}");
                    }
                }
            }
            Err(e) => {
                all_passed = false;
                println!("{} {id}", paint("FAIL", RED));
                error_line(&case_failure(&f.manifest.source, e));
            }
        }
    }
    Ok(all_passed)
}

fn case_failure(source: &str, e: CaseError) -> Failure {
    match e {
        CaseError::Exec(x) => Failure::new(
            x.kind(),
            format!("ExtractStateMachines.gretl:{}", x.line),
            x,
        ),
        CaseError::Syntax(s) => syntax_failure("ExtractStateMachines.gretl", s),
        CaseError::Io(io) => io_failure(Path::new(source), io),
    }
}
