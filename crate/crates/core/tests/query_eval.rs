use std::collections::{BTreeMap, BTreeSet};

use gretl_core::graph::{ClassRef, EdgeClassSpec, EdgeKind};
use gretl_core::query::{
    all_packages, is_empty, key_set, parse_query, resolve_type, the_element, tup, Arrow,
    EmptyScope, Environment, Expr, PathExpr, QueryError,
};
use gretl_core::{Domain, ElementRef, Graph, Schema, Value, VertexId};

/// Packages `p` and `q` each declare a class named `Item`; `p` also has a
/// small class hierarchy with a containment chain.
fn sample() -> (Graph, Vec<VertexId>) {
    let mut s = Schema::new("Sample");
    let named = s.add_vertex_class("p.Named", true).unwrap();
    let class = s.add_vertex_class("p.Class", false).unwrap();
    let iface = s.add_vertex_class("p.Iface", false).unwrap();
    s.add_vertex_class("p.Item", false).unwrap();
    s.add_vertex_class("q.Item", false).unwrap();
    for c in [class, iface] {
        s.add_specialization(ClassRef::Vertex(c), ClassRef::Vertex(named))
            .unwrap();
    }
    s.add_attribute(ClassRef::Vertex(named), "name", Domain::String, None)
        .unwrap();
    let extends = s
        .add_edge_class(
            EdgeClassSpec::new("p.Extends", class, class)
                .roles(None, Some("extends"))
                .kind(EdgeKind::Containment),
        )
        .unwrap();
    let uses = s
        .add_edge_class(EdgeClassSpec::new("p.Uses", named, named).roles(None, Some("uses")))
        .unwrap();
    let mut g = Graph::new(s);
    let mut vs = Vec::new();
    for (i, n) in ["A", "B", "C", "D"].iter().enumerate() {
        let c = if i == 3 { iface } else { class };
        let v = g.create_vertex(c).unwrap();
        g.set_attribute(ElementRef::Vertex(v), "name", Value::str(*n))
            .unwrap();
        vs.push(v);
    }
    // A extends B extends C; C uses D.
    g.create_edge(extends, vs[0], vs[1]).unwrap();
    g.create_edge(extends, vs[1], vs[2]).unwrap();
    g.create_edge(uses, vs[2], vs[3]).unwrap();
    (g, vs)
}

fn run(g: &Graph, imports: &[String], text: &str) -> Result<Value, QueryError> {
    let expr = parse_query(text).expect("parse");
    Environment::new(g, imports, &EmptyScope).eval(&expr)
}

fn set(items: impl IntoIterator<Item = Value>) -> Value {
    Value::Set(items.into_iter().collect())
}

#[test]
fn builtins_on_examples() {
    assert_eq!(
        the_element(set([Value::Integer(4)])).unwrap(),
        Value::Integer(4)
    );
    assert_eq!(
        the_element(set([])).unwrap_err(),
        QueryError::NotSingleton(0)
    );
    assert_eq!(
        the_element(set([Value::Integer(1), Value::Integer(2)])).unwrap_err(),
        QueryError::NotSingleton(2)
    );
    assert!(matches!(
        the_element(Value::Integer(1)).unwrap_err(),
        QueryError::NotACollection { .. }
    ));
    assert_eq!(is_empty(&set([])).unwrap(), Value::Boolean(true));
    assert_eq!(
        is_empty(&Value::Map(BTreeMap::new())).unwrap(),
        Value::Boolean(true)
    );
    assert_eq!(
        is_empty(&set([Value::Integer(1)])).unwrap(),
        Value::Boolean(false)
    );
    let m: BTreeMap<_, _> = [(Value::str("k"), Value::Integer(1))].into();
    assert_eq!(key_set(Value::Map(m)).unwrap(), set([Value::str("k")]));
    assert_eq!(
        tup(vec![Value::Integer(1), Value::str("a")]).unwrap(),
        Value::Tuple(vec![Value::Integer(1), Value::str("a")])
    );
    assert!(tup(vec![]).is_err());
}

#[test]
fn type_resolution_respects_imports() {
    let (g, _) = sample();
    let s = g.schema();
    let p = vec!["p".to_string()];
    assert!(resolve_type("p.Class", &[], s).is_ok());
    assert!(matches!(
        resolve_type("Class", &[], s),
        Err(QueryError::UnknownType(_))
    ));
    assert!(resolve_type("Class", &p, s).is_ok());
    assert!(resolve_type("Item", &p, s).is_ok());
    let both = vec!["p".to_string(), "q".to_string()];
    assert!(matches!(
        resolve_type("Item", &both, s),
        Err(QueryError::AmbiguousType { .. })
    ));
    assert!(matches!(
        resolve_type("Nope", &both, s),
        Err(QueryError::UnknownType(_))
    ));
}

#[test]
fn comprehensions_report_sets_maps_and_tuples() {
    let (g, vs) = sample();
    let imports = all_packages(g.schema());
    let names = run(&g, &imports, "from c: V{Class} reportSet c.name end").unwrap();
    assert_eq!(names, set(["A", "B", "C"].map(Value::str)));

    let map = run(&g, &imports, "from c: V{Class} reportMap c.name -> c end").unwrap();
    let Value::Map(m) = map else { panic!() };
    assert_eq!(m.get(&Value::str("A")), Some(&Value::Vertex(vs[0])));

    let pairs = run(
        &g,
        &imports,
        "from a, b: V{Class} with a -->{extends} b reportSet a.name, b.name end",
    )
    .unwrap();
    assert_eq!(
        pairs,
        set([
            Value::Tuple(vec![Value::str("A"), Value::str("B")]),
            Value::Tuple(vec![Value::str("B"), Value::str("C")]),
        ])
    );

    let bound = run(
        &g,
        &imports,
        "from c: V{Class} with n = \"B\" reportSet c end where n := c.name",
    )
    .unwrap();
    assert_eq!(bound, set([Value::Vertex(vs[1])]));
}

#[test]
fn report_map_key_conflict_is_an_error() {
    let (g, _) = sample();
    let imports = all_packages(g.schema());
    let err = run(&g, &imports, "from c: V{Class} reportMap 1 -> c.name end").unwrap_err();
    assert_eq!(err.kind(), "MapKeyConflict");
    // Equal values under one key are fine.
    let ok = run(&g, &imports, "from c: V{Class} reportMap 1 -> 2 end").unwrap();
    assert_eq!(
        ok,
        Value::Map([(Value::Integer(1), Value::Integer(2))].into())
    );
}

#[test]
fn path_forms() {
    let (g, vs) = sample();
    let imports = all_packages(g.schema());
    let v = |i: usize| Value::Vertex(vs[i]);
    let chain = run(
        &g,
        &imports,
        "from a: V{Class} with a.name = \"A\" reportSet a -->{extends}+ end",
    )
    .unwrap();
    assert_eq!(chain, set([set([v(1), v(2)])]));

    let backward = run(
        &g,
        &imports,
        "-->{extends}+ theElement(from x: V{Iface} reportSet x end)",
    );
    assert_eq!(backward.unwrap(), set([]));
    let backward = run(
        &g,
        &imports,
        "-->{extends}* -->{uses} theElement(from x: V{Iface} reportSet x end)",
    );
    assert_eq!(backward.unwrap(), set([v(0), v(1), v(2)]));

    let everything = run(&g, &imports, "<>--").unwrap();
    assert_eq!(everything, set([v(1), v(2)]));

    let restricted = run(&g, &imports, "-->+ & {Iface}").unwrap();
    assert_eq!(restricted, set([v(3)]));
}

#[test]
fn eval_path_examples() {
    let (g, vs) = sample();
    let imports = all_packages(g.schema());
    let env = Environment::new(&g, &imports, &EmptyScope);
    let start = BTreeSet::from([vs[0]]);
    let plus = PathExpr::Iterate(
        Box::new(PathExpr::step(Arrow::Forward, Some("extends"))),
        gretl_core::query::Repeat::Plus,
    );
    assert_eq!(
        env.eval_path(&start, &plus).unwrap(),
        BTreeSet::from([vs[1], vs[2]])
    );
    assert!(env.eval_path_exists(vs[0], &plus, vs[2]).unwrap());
    assert!(!env.eval_path_exists(vs[2], &plus, vs[0]).unwrap());

    // `<>--*` from an isolated vertex yields just that vertex.
    let star = PathExpr::Iterate(
        Box::new(PathExpr::step(Arrow::Containment, None)),
        gretl_core::query::Repeat::Star,
    );
    let isolated = BTreeSet::from([vs[3]]);
    assert_eq!(env.eval_path(&isolated, &star).unwrap(), isolated);
}

#[test]
fn queries_do_not_mutate_and_are_deterministic() {
    let (g, _) = sample();
    let imports = all_packages(g.schema());
    let before = g.fingerprint();
    let q = "from a, b: V{Named} with a -->* b reportSet a.name, b.name end";
    let first = run(&g, &imports, q).unwrap();
    for _ in 0..5 {
        assert_eq!(run(&g, &imports, q).unwrap(), first);
    }
    assert_eq!(g.fingerprint(), before);
}

#[test]
fn errors_have_kinds() {
    let (g, _) = sample();
    let imports = all_packages(g.schema());
    assert_eq!(
        run(&g, &imports, "x").unwrap_err().kind(),
        "UnboundVariable"
    );
    assert_eq!(
        run(&g, &imports, "frob(1)").unwrap_err().kind(),
        "UnknownFunction"
    );
    assert_eq!(
        run(&g, &imports, "V{Item}").unwrap_err().kind(),
        "AmbiguousType"
    );
    assert_eq!(
        run(&g, &imports, "tup(1)[3]").unwrap_err().kind(),
        "IndexOutOfRange"
    );
}

#[test]
fn subclass_chain_on_fixture() {
    let f = &gretl_core::case::bundled_fixtures()[0];
    let g = gretl_core::io::graph_from_str(&f.source).unwrap();
    let imports = all_packages(g.schema());
    let v = |k: &str| match g.find(k) {
        Some(ElementRef::Vertex(v)) => v,
        _ => panic!("{k}"),
    };
    let Expr::Path { path, .. } =
        parse_query("x <>--{extends} <>--{classifierReferences} -->{target}").unwrap()
    else {
        panic!()
    };
    let env = Environment::new(&g, &imports, &EmptyScope);
    assert_eq!(
        env.eval_path(&BTreeSet::from([v("Locked")]), &path)
            .unwrap(),
        BTreeSet::from([v("State")])
    );
    // A vertex without edges reaches nothing along a non-empty path.
    assert!(!env
        .eval_path_exists(v("Event.COIN"), &path, v("Event.COIN"))
        .unwrap());
}
