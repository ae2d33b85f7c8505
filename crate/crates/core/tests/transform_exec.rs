use std::collections::BTreeSet;

use gretl_core::case::{
    bundled_fixtures, isomorphic, reference_transformation, DUPLICATE_STATE_GRAPH,
};
use gretl_core::io::{graph_from_str, graph_to_string};
use gretl_core::transform::{
    execute, parse_transformation, ExecError, ExecutionContext, StatementKind,
};
use gretl_core::{ElementRef, Graph, Value};

const IMPORTS: &str = "import classifiers.*; import members.*; import modifiers.*;\n";

fn fixture(id: &str) -> Graph {
    let f = bundled_fixtures()
        .into_iter()
        .find(|f| f.manifest.id == id)
        .unwrap();
    graph_from_str(&f.source).unwrap()
}

fn run<'s>(source: &'s Graph, rules: &str) -> Result<ExecutionContext<'s>, ExecError> {
    execute(
        &parse_transformation(&format!("{IMPORTS}{rules}")).unwrap(),
        source,
    )
}

fn fails(source: &Graph, rules: &str) -> (usize, &'static str) {
    let e = run(source, rules)
        .err()
        .expect("transformation should fail");
    (e.index, e.kind())
}

const STATES: &str = "CreateVertexClass S <== from c: V{Class} with c.name <> \"State\" and c.name <> \"Exception\" reportSet c end;\n";

#[test]
fn empty_transformation() {
    let g = fixture("A");
    let ctx = run(&g, "").unwrap();
    assert_eq!(ctx.target.vertex_count() + ctx.target.edge_count(), 0);
    assert_eq!(ctx.target.schema().vertex_classes().count(), 0);
    assert_eq!(ctx.trace.classes().count(), 0);
}

#[test]
fn trace_map_before_creation() {
    let g = fixture("A");
    let rules = "x := 1;\nCreateAttribute State.name : String <== from c: keySet(img_State) reportMap c -> c.name end;";
    let rules2 = "x := 1;\nCreateVertexClass T <== keySet(img_State);";
    assert_eq!(fails(&g, rules).1, "UnknownClass");
    assert_eq!(fails(&g, rules2), (1, "UnknownTraceMap"));
}

#[test]
fn global_bindings() {
    let g = fixture("A");
    assert_eq!(fails(&g, "x := 1; x := 2;"), (1, "DuplicateBinding"));
    assert_eq!(fails(&g, "img_S := 1;"), (0, "ReservedName"));
    let dup = graph_from_str(DUPLICATE_STATE_GRAPH).unwrap();
    let t = parse_transformation(reference_transformation()).unwrap();
    let e = execute(&t, &dup).err().unwrap();
    assert_eq!((e.index, e.kind()), (0, "NotSingleton"));
    let ctx = run(
        &g,
        "s := theElement(from c: V{Class} with c.name = \"State\" reportSet c end);",
    )
    .unwrap();
    assert_eq!(
        ctx.globals["s"],
        Value::Vertex(
            g.find("State")
                .map(|r| match r {
                    ElementRef::Vertex(v) => v,
                    _ => unreachable!(),
                })
                .unwrap()
        )
    );
}

#[test]
fn create_vertex_class_results() {
    let g = fixture("A");
    let ctx = run(
        &g,
        "CreateVertexClass E <== from c: V{Class} with c.name = \"nope\" reportSet c end;",
    )
    .unwrap();
    assert!(ctx.target.schema().vertex_class_id("E").is_some());
    assert_eq!(ctx.target.vertex_count(), 0);
    assert_eq!(ctx.trace.img("E").unwrap().len(), 0);
    assert_eq!(
        fails(
            &g,
            "CreateVertexClass M <== from c: V{Class} reportMap c -> 1 end;"
        ),
        (0, "NotASet")
    );
    assert_eq!(
        fails(&g, &format!("{STATES}{STATES}")),
        (1, "DuplicateClassName")
    );
}

#[test]
fn create_edge_class_checks_triples() {
    let g = fixture("A");
    let ok = format!(
        "{STATES}CreateEdgeClass L from S to S <== from c: keySet(img_S) reportSet c, c, c end;"
    );
    let ctx = run(&g, &ok).unwrap();
    assert_eq!(ctx.target.edge_count(), 2);
    let unknown = format!(
        "{STATES}CreateEdgeClass L from S to S <== from c: keySet(img_S), m: c <>--{{members}} reportSet m, m, c end;"
    );
    assert_eq!(fails(&g, &unknown), (1, "UnknownArchetype"));
    let dup = format!(
        "{STATES}CreateEdgeClass L from S to S <== from c, d: keySet(img_S) reportSet 1, c, d end;"
    );
    assert_eq!(fails(&g, &dup), (1, "DuplicateArchetype"));
    let pairs = format!(
        "{STATES}CreateEdgeClass L from S to S <== from c: keySet(img_S) reportSet c, c end;"
    );
    assert_eq!(fails(&g, &pairs), (1, "NotTripleSet"));
    let plain =
        format!("{STATES}CreateEdgeClass L from S to S <== from c: keySet(img_S) reportSet c end;");
    assert_eq!(fails(&g, &plain), (1, "NotTripleSet"));
}

#[test]
fn attribute_statements() {
    let g = fixture("A");
    let name =
        "CreateAttribute S.name : String <== from c: keySet(img_S) reportMap c -> c.name end;";
    let ctx = run(&g, &format!("{STATES}{name}")).unwrap();
    let names: BTreeSet<Value> = ctx
        .target
        .vertex_ids()
        .map(|v| {
            ctx.target
                .get_attribute(ElementRef::Vertex(v), "name")
                .unwrap()
        })
        .collect();
    assert_eq!(
        names,
        BTreeSet::from([Value::str("Locked"), Value::str("Unlocked")])
    );

    assert_eq!(
        fails(&g, &format!("{STATES}{name}{name}")),
        (2, "DuplicateAttribute")
    );
    let bad_key = "CreateAttribute S.n : String <== from c: V{Class} reportMap c -> c.name end;";
    assert_eq!(
        fails(&g, &format!("{STATES}{bad_key}")),
        (1, "UnknownArchetype")
    );
    let not_map = "CreateAttribute S.n : String <== from c: keySet(img_S) reportSet c end;";
    assert_eq!(fails(&g, &format!("{STATES}{not_map}")), (1, "NotAMap"));
    let domain =
        "CreateAttribute S.n : Integer <== from c: keySet(img_S) reportMap c -> c.name end;";
    assert_eq!(
        fails(&g, &format!("{STATES}{domain}")),
        (1, "DomainMismatch")
    );
    let early = "SetAttributes S.name <== from c: keySet(img_S) reportMap c -> c.name end;";
    assert_eq!(
        fails(&g, &format!("{STATES}{early}")),
        (1, "UnknownAttribute")
    );

    // A default covers elements the map leaves out; SetAttributes touches only listed ones.
    let rules = format!(
        "{STATES}CreateAttribute S.tag : String = '\"none\"' <== from c: keySet(img_S) with c.name = \"Locked\" reportMap c -> \"L\" end;\n\
         SetAttributes S.tag <== from c: keySet(img_S) with c.name = \"Unlocked\" reportMap c -> \"U\" end;"
    );
    let ctx = run(&g, &rules).unwrap();
    let tags: BTreeSet<Value> = ctx
        .target
        .vertex_ids()
        .map(|v| {
            ctx.target
                .get_attribute(ElementRef::Vertex(v), "tag")
                .unwrap()
        })
        .collect();
    assert_eq!(tags, BTreeSet::from([Value::str("L"), Value::str("U")]));
    let ctx = run(
        &g,
        &format!("{STATES}CreateAttribute S.tag : String = '\"none\"';"),
    )
    .unwrap();
    for v in ctx.target.vertex_ids() {
        assert_eq!(
            ctx.target
                .get_attribute(ElementRef::Vertex(v), "tag")
                .unwrap(),
            Value::str("none")
        );
    }
}

#[test]
fn add_sub_class() {
    let g = fixture("A");
    let rules = format!(
        "{STATES}CreateVertexClass Base <== from c: V{{Enumeration}} reportSet c end;\n\
         CreateAttribute Base.label : String;\nAddSubClass S Base;"
    );
    let ctx = run(&g, &rules).unwrap();
    let s = ctx.target.schema();
    assert!(s.vertex_conforms(
        s.vertex_class_id("S").unwrap(),
        s.vertex_class_id("Base").unwrap()
    ));
    let v = ctx.target.vertices_of(s.vertex_class_id("S").unwrap())[0];
    assert_eq!(
        ctx.target
            .get_attribute(ElementRef::Vertex(v), "label")
            .unwrap(),
        Value::Undefined
    );
    // Trace maps stay per class.
    assert_eq!(ctx.trace.img("Base").unwrap().len(), 1);
    assert_eq!(ctx.trace.img("S").unwrap().len(), 2);
    assert_eq!(
        fails(&g, &format!("{STATES}AddSubClass S S;")),
        (1, "InheritanceCycle")
    );
    assert_eq!(
        fails(&g, &format!("{STATES}AddSubClass S Nope;")),
        (1, "UnknownClass")
    );
}

#[test]
fn reference_transformation_shape() {
    let text = reference_transformation();
    assert!(text.lines().filter(|l| !l.trim().is_empty()).count() <= 45);
    let t = parse_transformation(text).unwrap();
    assert_eq!(t.imports.len(), 6);
    let ops: Vec<&str> = t.statements.iter().map(|s| s.kind.operation()).collect();
    assert_eq!(
        ops,
        [
            "Binding",
            "CreateVertexClass",
            "CreateAttribute",
            "CreateEdgeClass",
            "CreateAttribute",
            "SetAttributes",
            "SetAttributes",
            "CreateAttribute"
        ]
    );
    let StatementKind::CreateAttribute { default, .. } = &t.statements[4].kind else {
        panic!()
    };
    assert_eq!(default, &Some(Value::str("--")));
}

#[test]
fn fixture_a_archetypes() {
    let g = fixture("A");
    let t = parse_transformation(reference_transformation()).unwrap();
    let ctx = execute(&t, &g).unwrap();
    let keys: BTreeSet<String> = ctx
        .trace
        .img("State")
        .unwrap()
        .keys()
        .map(|a| g.render_value(a))
        .collect();
    assert_eq!(
        keys,
        BTreeSet::from(["Locked".to_string(), "Unlocked".to_string()])
    );
    let transitions = ctx.trace.img("Transition").unwrap();
    assert_eq!(transitions.len(), 4);
    let coin = transitions
        .keys()
        .find(|a| g.render_value(a) == "[Locked, Locked.coin, Unlocked, Unlocked.Instance]")
        .expect("coin transition archetype");
    let Value::Tuple(parts) = coin else { panic!() };
    assert_eq!(parts.len(), 4);
    let e = ctx.trace.image("Transition", coin).unwrap();
    assert_eq!(
        ctx.target.get_attribute(e, "trigger").unwrap(),
        Value::str("coin")
    );
    assert_eq!(
        ctx.target.get_attribute(e, "action").unwrap(),
        Value::str("UNLOCK")
    );
}

#[test]
fn invariants_hold_after_every_statement() {
    let t = parse_transformation(reference_transformation()).unwrap();
    for f in bundled_fixtures() {
        let g = graph_from_str(&f.source).unwrap();
        let before = g.fingerprint();
        let mut ctx = ExecutionContext::new(&g, t.imports.clone());
        for s in &t.statements {
            ctx.apply(&s.kind).unwrap();
            ctx.trace.check_inverse().unwrap();
            ctx.target.validate().unwrap();
            assert!(ctx.target.multiplicity_violations().is_empty());
            for class in ctx.trace.classes() {
                let id = ctx.target.schema().lookup(class).unwrap();
                let created = match id {
                    gretl_core::graph::ClassRef::Vertex(c) => ctx.target.vertices_of(c).len(),
                    gretl_core::graph::ClassRef::Edge(c) => ctx.target.edges_of(c).len(),
                };
                assert_eq!(ctx.trace.img(class).unwrap().len(), created);
            }
        }
        assert_eq!(g.fingerprint(), before);
        assert_eq!(
            ctx.trace.img("State").unwrap().len(),
            f.manifest.states.len()
        );
        assert_eq!(
            ctx.trace.img("Transition").unwrap().len(),
            f.manifest.transitions.len()
        );
    }
}

#[test]
fn re_execution_is_deterministic() {
    let t = parse_transformation(reference_transformation()).unwrap();
    for f in bundled_fixtures() {
        let g = graph_from_str(&f.source).unwrap();
        let a = execute(&t, &g).unwrap();
        let b = execute(&t, &g).unwrap();
        assert!(isomorphic(&a.target, &b.target));
        assert_eq!(graph_to_string(&a.target), graph_to_string(&b.target));
        for class in a.trace.classes() {
            let ka: Vec<_> = a.trace.img(class).unwrap().keys().collect();
            let kb: Vec<_> = b.trace.img(class).unwrap().keys().collect();
            assert_eq!(ka, kb);
        }
    }
}
