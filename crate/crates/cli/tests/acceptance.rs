//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use gretl_core::case::{
    bundled_fixtures, isomorphic, reference_transformation, run_case, DUPLICATE_STATE_GRAPH,
};
use gretl_core::io::{graph_from_str, graph_to_string};
use gretl_core::query::{all_packages, the_element, EmptyScope, Environment, QueryError};
use gretl_core::testkit::{oracle_reachable, random_graph, random_path};
use gretl_core::transform::{execute, parse_transformation, ExecutionContext};
use gretl_core::{ElementRef, Graph, Value, VertexId};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gretl-mini"))
        .env("GRETL_MINI_COLOR", "0")
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn rules_path() -> PathBuf {
    fixtures_dir().join("ExtractStateMachines.gretl")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn case_reproduction() -> Check {
    let out = run(&["case"]);
    let text = stdout(&out);
    ensure(out.status.success(), || {
        format!("case exited {:?}: {text}", out.status)
    })?;
    ensure(text == "PASS A\nPASS B\nPASS C\n", || {
        format!("unexpected output {text:?}")
    })?;
    for f in bundled_fixtures() {
        let r = run_case(&f).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{}: {:?}", f.manifest.id, r.diffs))?;
    }
    Ok("fixtures A, B, C match their goldens with zero diffs".into())
}

fn conciseness() -> Check {
    let text = reference_transformation();
    let lines = text.lines().filter(|l| !l.trim().is_empty()).count();
    ensure(lines <= 45, || format!("{lines} non-empty lines"))?;
    let t = parse_transformation(text).map_err(|e| e.to_string())?;
    let ops: Vec<&str> = t.statements.iter().map(|s| s.kind.operation()).collect();
    let expected = [
        "Binding",
        "CreateVertexClass",
        "CreateAttribute",
        "CreateEdgeClass",
        "CreateAttribute",
        "SetAttributes",
        "SetAttributes",
        "CreateAttribute",
    ];
    ensure(ops == expected, || format!("statements {ops:?}"))?;
    ensure(t.imports.len() == 6, || {
        format!("{} imports", t.imports.len())
    })?;
    Ok(format!(
        "{lines} non-empty lines, {} statements, {} imports",
        ops.len(),
        t.imports.len()
    ))
}

fn performance() -> Check {
    let out = run(&["case"]);
    let mut times = Vec::new();
    for line in stderr(&out).lines().filter(|l| l.starts_with("time ")) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let secs: f64 = parts[2]
            .trim_end_matches('s')
            .parse()
            .map_err(|_| line.to_string())?;
        ensure(secs < 2.0, || format!("{} took {secs}s", parts[1]))?;
        times.push(format!("{}={secs:.3}s", parts[1]));
    }
    ensure(times.len() == 3, || {
        format!("expected 3 timings, got {times:?}")
    })?;
    Ok(times.join(" "))
}

fn path_oracle() -> Check {
    let mut slowest = Duration::ZERO;
    for seed in 0..200u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 30, 60);
        let start: BTreeSet<VertexId> = g.vertex_ids().filter(|_| rng.gen_bool(0.3)).collect();
        let path = random_path(&mut rng, 4);
        let imports = all_packages(g.schema());
        let t = Instant::now();
        let got = Environment::new(&g, &imports, &EmptyScope)
            .eval_path(&start, &path)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let took = t.elapsed();
        slowest = slowest.max(took);
        let want = oracle_reachable(&g, &start, &path);
        ensure(got == want, || format!("seed {seed}: path {path}"))?;
        ensure(took < Duration::from_millis(100), || {
            format!("seed {seed} took {took:?}")
        })?;
    }
    Ok(format!(
        "200 seeds agree, slowest {:.2}ms",
        slowest.as_secs_f64() * 1e3
    ))
}

fn name_of(g: &Graph, v: &Value) -> Option<String> {
    let Value::Vertex(v) = v else { return None };
    match g.get_attribute(ElementRef::Vertex(*v), "name") {
        Ok(Value::String(s)) => Some(s),
        _ => None,
    }
}

fn names_of_class(g: &Graph, class: &str) -> BTreeSet<String> {
    let id = g.schema().vertex_class_id(class).expect("class exists");
    g.vertices_of(id)
        .into_iter()
        .filter_map(|v| name_of(g, &Value::Vertex(v)))
        .collect()
}

fn trigger_partition() -> Check {
    let t = parse_transformation(reference_transformation()).map_err(|e| e.to_string())?;
    let mut cases = BTreeSet::new();
    let mut total = 0;
    for f in bundled_fixtures() {
        let id = &f.manifest.id;
        let g = graph_from_str(&f.source).map_err(|e| e.to_string())?;
        let ctx = execute(&t, &g).map_err(|e| e.to_string())?;
        let constants = names_of_class(&g, "members.EnumConstant");
        let classes = names_of_class(&g, "classifiers.Class");
        for (archetype, edge) in ctx.trace.img("Transition").into_iter().flatten() {
            let Value::Tuple(parts) = archetype else {
                return Err(format!("{id}: transition archetype is not a tuple"));
            };
            let method = name_of(&g, &parts[1]).unwrap_or_default();
            let trigger = match ctx.target.get_attribute(*edge, "trigger") {
                Ok(Value::String(s)) => s,
                other => return Err(format!("{id}: trigger {other:?}")),
            };
            let rules = [
                (method != "run" && trigger == method, "method"),
                (method == "run" && constants.contains(&trigger), "switch"),
                (method == "run" && classes.contains(&trigger), "catch"),
                (method == "run" && trigger == "--", "default"),
            ];
            let matched: Vec<&str> = rules.iter().filter(|r| r.0).map(|r| r.1).collect();
            ensure(matched.len() == 1, || {
                format!("{id}: trigger {trigger} matches {matched:?}")
            })?;
            let src = name_of(&g, &parts[0]).unwrap_or_default();
            let dst = name_of(&g, &parts[2]).unwrap_or_default();
            let listed = f.manifest.transitions.iter().any(|m| {
                m.src == src
                    && m.dst == dst
                    && m.method == method
                    && m.trigger == trigger
                    && m.case == matched[0]
            });
            ensure(listed, || {
                format!("{id}: {src} -> {dst} ({trigger}) not in manifest")
            })?;
            cases.insert(matched[0]);
            total += 1;
        }
    }
    ensure(cases.len() == 4, || format!("cases exercised: {cases:?}"))?;
    Ok(format!(
        "{total} transitions, each in exactly one of {cases:?}"
    ))
}

fn trace_bijectivity() -> Check {
    let t = parse_transformation(reference_transformation()).map_err(|e| e.to_string())?;
    let mut checkpoints = 0;
    for f in bundled_fixtures() {
        let id = &f.manifest.id;
        let g = graph_from_str(&f.source).map_err(|e| e.to_string())?;
        let mut ctx = ExecutionContext::new(&g, t.imports.clone());
        for st in &t.statements {
            ctx.apply(&st.kind).map_err(|e| format!("{id}: {e}"))?;
            ctx.trace
                .check_inverse()
                .map_err(|e| format!("{id}: {e}"))?;
            ctx.target.validate().map_err(|e| format!("{id}: {e}"))?;
            checkpoints += 1;
        }
        let states = ctx.trace.img("State").map_or(0, |m| m.len());
        let transitions = ctx.trace.img("Transition").map_or(0, |m| m.len());
        ensure(states == f.manifest.states.len(), || {
            format!("{id}: {states} states")
        })?;
        ensure(transitions == f.manifest.transitions.len(), || {
            format!("{id}: {transitions} transitions")
        })?;
        for (archetype, edge) in ctx.trace.img("Transition").into_iter().flatten() {
            ensure(matches!(archetype, Value::Tuple(p) if p.len() == 4), || {
                format!("{id}: archetype {archetype:?}")
            })?;
            ensure(
                ctx.trace.image("Transition", archetype) == Some(*edge),
                || format!("{id}: image lookup"),
            )?;
            ensure(
                ctx.trace.archetype("Transition", *edge) == Some(archetype),
                || format!("{id}: archetype lookup"),
            )?;
        }
    }
    Ok(format!(
        "{checkpoints} statement checkpoints bijective and valid"
    ))
}

fn error_parts(o: &Output) -> Vec<String> {
    stderr(o)
        .lines()
        .find(|l| l.starts_with("ERROR "))
        .map(|l| l.splitn(4, ' ').map(str::to_string).collect())
        .unwrap_or_default()
}

fn the_element_contract() -> Check {
    let empty = the_element(Value::Set(BTreeSet::new()));
    let two = the_element(Value::Set([Value::Integer(1), Value::Integer(2)].into()));
    ensure(empty == Err(QueryError::NotSingleton(0)), || {
        format!("size 0: {empty:?}")
    })?;
    ensure(two == Err(QueryError::NotSingleton(2)), || {
        format!("size 2: {two:?}")
    })?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let src = dir.path().join("dup.json");
    std::fs::write(&src, DUPLICATE_STATE_GRAPH).map_err(|e| e.to_string())?;
    let out_path = dir.path().join("out.json");
    let o = run(&[
        "transform",
        "--source",
        s(&src),
        "--rules",
        s(&rules_path()),
        "--out",
        s(&out_path),
    ]);
    let parts = error_parts(&o);
    ensure(o.status.code() == Some(1), || {
        format!("exit {:?}", o.status)
    })?;
    ensure(
        parts.get(1).map(String::as_str) == Some("NotSingleton"),
        || stderr(&o),
    )?;
    ensure(!out_path.exists(), || {
        "target written despite failure".into()
    })?;
    Ok(format!(
        "duplicate State aborts with `{}`",
        stderr(&o).trim()
    ))
}

fn round_trip_and_determinism() -> Check {
    for seed in 0..100u64 {
        let g = random_graph(&mut StdRng::seed_from_u64(1000 + seed), 30, 60);
        let text = graph_to_string(&g);
        let back = graph_from_str(&text).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(isomorphic(&g, &back), || {
            format!("seed {seed}: not isomorphic")
        })?;
        ensure(graph_to_string(&back) == text, || {
            format!("seed {seed}: text differs")
        })?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for fixture in ["A", "B", "C"] {
        let src = fixtures_dir().join(format!("{fixture}.graph.json"));
        let mut runs = Vec::new();
        for round in 0..2 {
            let stem = dir.path().join(format!("{fixture}{round}"));
            let files = ["json", "dot", "trace"].map(|ext| stem.with_extension(ext));
            let o = run(&[
                "transform",
                "--source",
                s(&src),
                "--rules",
                s(&rules_path()),
                "--out",
                s(&files[0]),
                "--dot",
                s(&files[1]),
                "--trace",
                s(&files[2]),
            ]);
            ensure(o.status.success(), || stderr(&o))?;
            let mut bytes = o.stdout.clone();
            for f in &files {
                bytes.extend(std::fs::read(f).map_err(|e| e.to_string())?);
            }
            runs.push(bytes);
        }
        ensure(runs[0] == runs[1], || {
            format!("{fixture}: outputs differ between runs")
        })?;
    }
    Ok("100 random graphs round-trip; repeated transforms byte-identical".into())
}

fn negative_paths() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let src = fixtures_dir().join("A.graph.json");
    let states = "import classifiers.*;\n\
        CreateVertexClass S <== from c: V{Class} with c.name = \"Locked\" or c.name = \"Unlocked\" reportSet c end;\n";
    let cases = [
        (
            "UnknownAttribute",
            format!("{states}SetAttributes S.name <== from c: keySet(img_S) reportMap c -> c.name end;\n"),
        ),
        (
            "UnknownArchetype",
            format!(
                "{states}CreateEdgeClass L from S to S\n  <== from c: keySet(img_S), d: V{{Class}} reportSet tup(c, d), c, d end;\n"
            ),
        ),
        (
            "MapKeyConflict",
            format!("{states}CreateAttribute S.name : String <== from c: keySet(img_S) reportMap 1 -> c.name end;\n"),
        ),
    ];
    let mut seen = Vec::new();
    for (kind, rules) in cases {
        let rules_file = dir.path().join(format!("{kind}.gretl"));
        std::fs::write(&rules_file, rules).map_err(|e| e.to_string())?;
        let o = run(&[
            "transform",
            "--source",
            s(&src),
            "--rules",
            s(&rules_file),
            "--out",
            s(&dir.path().join("out.json")),
        ]);
        let err = stderr(&o);
        let parts = error_parts(&o);
        ensure(o.status.code() == Some(1), || {
            format!("{kind}: exit {:?}", o.status)
        })?;
        ensure(parts.len() == 4 && parts[0] == "ERROR", || {
            format!("{kind}: {err}")
        })?;
        ensure(parts[1] == kind, || format!("expected {kind}: {err}"))?;
        let location = format!("{}:3", rules_file.display());
        ensure(parts[2] == location, || {
            format!("{kind}: location {}", parts[2])
        })?;
        ensure(err.lines().count() == 1, || {
            format!("{kind}: multi-line stderr")
        })?;
        ensure(o.stdout.is_empty(), || format!("{kind}: stdout not empty"))?;
        seen.push(kind);
    }
    Ok(format!("error lines for {}", seen.join(", ")))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("end-to-end case reproduction", case_reproduction),
        ("conciseness", conciseness),
        ("performance", performance),
        ("path engine oracle equivalence", path_oracle),
        ("trigger partition", trigger_partition),
        ("trace bijectivity", trace_bijectivity),
        ("theElement contract", the_element_contract),
        ("round trip and determinism", round_trip_and_determinism),
        ("negative paths", negative_paths),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
