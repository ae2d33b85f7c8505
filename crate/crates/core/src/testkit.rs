//! Random graphs, random path expressions, and an independent reachability
//! oracle for them. Only built for tests and with the `testkit` feature.
//!
//! The oracle compiles a path expression into a Thompson automaton and
//! explores the product of graph and automaton breadth-first. It shares no
//! code with the set-based evaluator in `query::path`.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{ClassRef, EdgeClassSpec, EdgeKind, ElementRef, Graph, Schema, VertexClassId};
use crate::query::{Arrow, Expr, PathExpr, Repeat, Restriction};
use crate::value::{Domain, Value, VertexId};

pub const TYPE_NAMES: &[&str] = &["Node", "A", "B", "C"];
pub const ROLES: &[&str] = &["a", "b", "c"];
pub const NAMES: &[&str] = &["x", "y", "z"];

/// A small schema exercising inheritance, both edge kinds and shared role names.
///
/// `Node` is abstract with subclasses `A` and `B`; `C` stands alone.
pub fn random_schema() -> Schema {
    let mut s = Schema::new("Random");
    let node = s.add_vertex_class("Node", true).unwrap();
    let a = s.add_vertex_class("A", false).unwrap();
    let b = s.add_vertex_class("B", false).unwrap();
    let c = s.add_vertex_class("C", false).unwrap();
    s.add_specialization(ClassRef::Vertex(a), ClassRef::Vertex(node))
        .unwrap();
    s.add_specialization(ClassRef::Vertex(b), ClassRef::Vertex(node))
        .unwrap();
    s.add_attribute(ClassRef::Vertex(node), "name", Domain::String, None)
        .unwrap();
    s.add_attribute(ClassRef::Vertex(c), "name", Domain::String, None)
        .unwrap();
    s.add_attribute(
        ClassRef::Vertex(c),
        "weight",
        Domain::Integer,
        Some(Value::Integer(0)),
    )
    .unwrap();
    let spec = |name: &str, from, to, role: Option<&str>, kind| {
        EdgeClassSpec::new(name, from, to)
            .roles(None, role)
            .kind(kind)
    };
    s.add_edge_class(spec("Ea", node, node, Some("a"), EdgeKind::Containment))
        .unwrap();
    let eb = s
        .add_edge_class(spec("Eb", node, c, Some("b"), EdgeKind::Plain))
        .unwrap();
    s.add_edge_class(spec("Ec", c, node, Some("c"), EdgeKind::Containment))
        .unwrap();
    s.add_edge_class(spec("Ed", node, node, None, EdgeKind::Plain))
        .unwrap();
    s.add_edge_class(spec("Ef", c, c, Some("a"), EdgeKind::Plain))
        .unwrap();
    s.add_attribute(
        ClassRef::Edge(eb),
        "flag",
        Domain::Boolean,
        Some(Value::Boolean(false)),
    )
    .unwrap();
    s
}

/// A random graph over [`random_schema`] with at most the given sizes.
pub fn random_graph(rng: &mut impl Rng, max_vertices: usize, max_edges: usize) -> Graph {
    let mut g = Graph::new(random_schema());
    let concrete: Vec<VertexClassId> = ["A", "B", "C"]
        .iter()
        .map(|n| g.schema().vertex_class_id(n).unwrap())
        .collect();
    let n = rng.gen_range(1..=max_vertices.max(1));
    for _ in 0..n {
        let class = *concrete.choose(rng).unwrap();
        let v = g.create_vertex(class).unwrap();
        if rng.gen_bool(0.8) {
            let name = *NAMES.choose(rng).unwrap();
            g.set_attribute(ElementRef::Vertex(v), "name", Value::str(name))
                .unwrap();
        }
        if g.vertex(v).class == concrete[2] && rng.gen_bool(0.5) {
            g.set_attribute(
                ElementRef::Vertex(v),
                "weight",
                Value::Integer(rng.gen_range(-5..50)),
            )
            .unwrap();
        }
    }
    let edge_classes: Vec<_> = g.schema().edge_classes().map(|(id, _)| id).collect();
    let m = rng.gen_range(0..=max_edges);
    for _ in 0..m {
        let ec = *edge_classes.choose(rng).unwrap();
        let (from_class, to_class) = {
            let c = g.schema().edge_class(ec);
            (c.from, c.to)
        };
        let froms = g.vertices_of(from_class);
        let tos = g.vertices_of(to_class);
        if froms.is_empty() || tos.is_empty() {
            continue;
        }
        let from = *froms.choose(rng).unwrap();
        let to = *tos.choose(rng).unwrap();
        let e = g.create_edge(ec, from, to).unwrap();
        if g.schema().edge_class(ec).qualified_name == "Eb" && rng.gen_bool(0.5) {
            g.set_attribute(ElementRef::Edge(e), "flag", Value::Boolean(true))
                .unwrap();
        }
    }
    g
}

fn random_leaf(rng: &mut impl Rng) -> PathExpr {
    if rng.gen_bool(0.6) {
        let arrow = if rng.gen_bool(0.5) {
            Arrow::Forward
        } else {
            Arrow::Containment
        };
        let role = if rng.gen_bool(0.7) {
            Some(*ROLES.choose(rng).unwrap())
        } else {
            None
        };
        PathExpr::step(arrow, role)
    } else {
        let k = rng.gen_range(1..=2);
        let types: Vec<String> = TYPE_NAMES
            .choose_multiple(rng, k)
            .map(|t| t.to_string())
            .collect();
        let predicate = if rng.gen_bool(0.3) {
            Some(Box::new(random_predicate(rng)))
        } else {
            None
        };
        PathExpr::Restrict(Restriction { types, predicate })
    }
}

fn random_predicate(rng: &mut impl Rng) -> Expr {
    let name_of_this = Expr::Attr(Box::new(Expr::Var("thisVertex".into())), "name".into());
    let lit = Expr::Literal(Value::str(*NAMES.choose(rng).unwrap()));
    match rng.gen_range(0..3) {
        0 => Expr::Eq(Box::new(name_of_this), Box::new(lit)),
        1 => Expr::NotEq(Box::new(name_of_this), Box::new(lit)),
        _ => Expr::Not(Box::new(Expr::Eq(Box::new(name_of_this), Box::new(lit)))),
    }
}

/// A random path of nesting depth at most `depth` (at least 1), in the
/// canonical shape the parser produces, so printing and re-parsing it
/// yields the same tree.
pub fn random_path(rng: &mut impl Rng, depth: usize) -> PathExpr {
    if depth <= 1 || rng.gen_bool(0.25) {
        return random_leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => {
            let n = rng.gen_range(2..=3);
            PathExpr::Seq((0..n).map(|_| sequence_item(rng, depth - 1)).collect())
        }
        1 => {
            let n = rng.gen_range(2..=3);
            PathExpr::Alt((0..n).map(|_| alternative(rng, depth - 1)).collect())
        }
        2 => {
            let repeat = if rng.gen_bool(0.5) {
                Repeat::Plus
            } else {
                Repeat::Star
            };
            PathExpr::Iterate(Box::new(sequence_item(rng, depth - 1)), repeat)
        }
        _ => PathExpr::Group(Box::new(random_path(rng, depth - 1))),
    }
}

// Sequence items and iteration bodies must not be bare sequences or alternatives.
fn sequence_item(rng: &mut impl Rng, depth: usize) -> PathExpr {
    match random_path(rng, depth) {
        p @ (PathExpr::Seq(_) | PathExpr::Alt(_)) => {
            if p.depth() < depth {
                PathExpr::Group(Box::new(p))
            } else {
                random_leaf(rng)
            }
        }
        p => p,
    }
}

fn alternative(rng: &mut impl Rng, depth: usize) -> PathExpr {
    match random_path(rng, depth) {
        p @ PathExpr::Alt(_) => {
            if p.depth() < depth {
                PathExpr::Group(Box::new(p))
            } else {
                random_leaf(rng)
            }
        }
        p => p,
    }
}

/// Thompson automaton transitions.
enum Move<'p> {
    Epsilon(usize),
    Edge {
        arrow: Arrow,
        role: Option<&'p str>,
        to: usize,
    },
    Test {
        restriction: &'p Restriction,
        to: usize,
    },
}

struct Automaton<'p> {
    moves: Vec<Vec<Move<'p>>>,
}

impl<'p> Automaton<'p> {
    fn state(&mut self) -> usize {
        self.moves.push(Vec::new());
        self.moves.len() - 1
    }

    fn build(&mut self, path: &'p PathExpr, from: usize, to: usize) {
        match path {
            PathExpr::Step { arrow, role } => self.moves[from].push(Move::Edge {
                arrow: *arrow,
                role: role.as_deref(),
                to,
            }),
            PathExpr::Restrict(r) => self.moves[from].push(Move::Test { restriction: r, to }),
            PathExpr::Group(inner) => self.build(inner, from, to),
            PathExpr::Seq(items) => {
                let mut current = from;
                for (i, item) in items.iter().enumerate() {
                    let next = if i + 1 == items.len() {
                        to
                    } else {
                        self.state()
                    };
                    self.build(item, current, next);
                    current = next;
                }
                if items.is_empty() {
                    self.moves[from].push(Move::Epsilon(to));
                }
            }
            PathExpr::Alt(items) => {
                for item in items {
                    self.build(item, from, to);
                }
            }
            PathExpr::Iterate(body, repeat) => {
                let enter = self.state();
                let leave = self.state();
                self.moves[from].push(Move::Epsilon(enter));
                self.build(body, enter, leave);
                self.moves[leave].push(Move::Epsilon(enter));
                self.moves[leave].push(Move::Epsilon(to));
                if *repeat == Repeat::Star {
                    self.moves[from].push(Move::Epsilon(to));
                }
            }
        }
    }
}

fn oracle_conforms(schema: &Schema, class: VertexClassId, type_name: &str) -> bool {
    let mut stack = vec![class];
    let mut seen = BTreeSet::new();
    while let Some(c) = stack.pop() {
        if !seen.insert(c) {
            continue;
        }
        let vc = schema.vertex_class(c);
        if vc.qualified_name == type_name {
            return true;
        }
        stack.extend(vc.superclasses.iter().copied());
    }
    false
}

fn oracle_predicate(graph: &Graph, v: VertexId, p: &Expr) -> bool {
    fn value(graph: &Graph, v: VertexId, e: &Expr) -> Value {
        match e {
            Expr::Literal(x) => x.clone(),
            Expr::Attr(base, name) if matches!(**base, Expr::Var(ref n) if n == "thisVertex") => {
                graph.get_attribute(ElementRef::Vertex(v), name).unwrap()
            }
            other => panic!("oracle cannot evaluate {other}"),
        }
    }
    match p {
        Expr::Literal(Value::Boolean(b)) => *b,
        Expr::Not(inner) => !oracle_predicate(graph, v, inner),
        Expr::And(a, b) => oracle_predicate(graph, v, a) && oracle_predicate(graph, v, b),
        Expr::Or(a, b) => oracle_predicate(graph, v, a) || oracle_predicate(graph, v, b),
        Expr::Eq(a, b) | Expr::NotEq(a, b) => {
            let (x, y) = (value(graph, v, a), value(graph, v, b));
            if x == Value::Undefined || y == Value::Undefined {
                return false;
            }
            (x == y) == matches!(p, Expr::Eq(..))
        }
        other => panic!("oracle cannot evaluate {other}"),
    }
}

/// Product-automaton reachability: every vertex `u` such that some walk from
/// a start vertex to `u` spells a word of the path language.
pub fn oracle_reachable(
    graph: &Graph,
    start: &BTreeSet<VertexId>,
    path: &PathExpr,
) -> BTreeSet<VertexId> {
    let mut nfa = Automaton { moves: Vec::new() };
    let initial = nfa.state();
    let accept = nfa.state();
    nfa.build(path, initial, accept);

    let states = nfa.moves.len();
    let mut seen = vec![false; graph.vertex_count() * states];
    let mut queue = VecDeque::new();
    for &v in start {
        seen[v.index() * states + initial] = true;
        queue.push_back((v, initial));
    }
    let mut out = BTreeSet::new();
    while let Some((v, q)) = queue.pop_front() {
        if q == accept {
            out.insert(v);
        }
        let mut visit = |u: VertexId, r: usize, queue: &mut VecDeque<(VertexId, usize)>| {
            let slot = u.index() * states + r;
            if !seen[slot] {
                seen[slot] = true;
                queue.push_back((u, r));
            }
        };
        for m in &nfa.moves[q] {
            match m {
                Move::Epsilon(r) => visit(v, *r, &mut queue),
                Move::Test { restriction, to } => {
                    let class = graph.vertex(v).class;
                    let typed = restriction
                        .types
                        .iter()
                        .any(|t| oracle_conforms(graph.schema(), class, t));
                    let ok = typed
                        && restriction
                            .predicate
                            .as_ref()
                            .is_none_or(|p| oracle_predicate(graph, v, p));
                    if ok {
                        visit(v, *to, &mut queue);
                    }
                }
                Move::Edge { arrow, role, to } => {
                    for e in graph.edge_ids() {
                        let edge = graph.edge(e);
                        if edge.from != v {
                            continue;
                        }
                        let ec = graph.schema().edge_class(edge.class);
                        let kind_ok = *arrow == Arrow::Forward || ec.kind == EdgeKind::Containment;
                        let role_ok = role.is_none_or(|r| ec.to_role.as_deref() == Some(r));
                        if kind_ok && role_ok {
                            visit(edge.to, *to, &mut queue);
                        }
                    }
                }
            }
        }
    }
    out
}
