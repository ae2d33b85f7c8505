//! Order-insensitive graph comparison.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{split_qualified, ClassRef, ElementRef, Graph, Schema};
use crate::value::{EdgeId, Value, VertexId};

type Label = (String, BTreeMap<String, Value>);

fn vertex_label(g: &Graph, v: VertexId) -> Label {
    let class = g
        .schema()
        .vertex_class(g.vertex(v).class)
        .qualified_name
        .clone();
    (class, g.attribute_values(ElementRef::Vertex(v)))
}

fn edge_label(g: &Graph, e: EdgeId) -> Label {
    let class = g
        .schema()
        .edge_class(g.edge(e).class)
        .qualified_name
        .clone();
    (class, g.attribute_values(ElementRef::Edge(e)))
}

/// Edge labels between each ordered vertex pair, sorted.
fn adjacency(g: &Graph) -> BTreeMap<(VertexId, VertexId), Vec<Label>> {
    let mut out: BTreeMap<_, Vec<Label>> = BTreeMap::new();
    for e in g.edge_ids() {
        let edge = g.edge(e);
        out.entry((edge.from, edge.to))
            .or_default()
            .push(edge_label(g, e));
    }
    for labels in out.values_mut() {
        labels.sort();
    }
    out
}

fn schema_lines(s: &Schema) -> BTreeSet<String> {
    let attrs = |class: ClassRef| {
        s.visible_attributes(class)
            .into_iter()
            .map(|(_, a)| {
                format!(
                    "{}: {}{}",
                    a.name,
                    a.domain,
                    a.default
                        .as_ref()
                        .map_or(String::new(), |d| format!(" = {d:?}"))
                )
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut out = BTreeSet::new();
    for (id, c) in s.vertex_classes() {
        out.insert(format!(
            "vertex class {}{} ({})",
            c.qualified_name,
            if c.is_abstract { " abstract" } else { "" },
            attrs(ClassRef::Vertex(id))
        ));
    }
    for (id, c) in s.edge_classes() {
        out.insert(format!(
            "edge class {}{} {} [{}] -> {} [{}] {} {}..{} ({})",
            c.qualified_name,
            if c.is_abstract { " abstract" } else { "" },
            s.vertex_class(c.from).qualified_name,
            c.from_role.as_deref().unwrap_or(""),
            s.vertex_class(c.to).qualified_name,
            c.to_role.as_deref().unwrap_or(""),
            c.kind.name(),
            c.from_multiplicity,
            c.to_multiplicity,
            attrs(ClassRef::Edge(id))
        ));
    }
    out
}

struct Matcher {
    exp_adj: BTreeMap<(VertexId, VertexId), Vec<Label>>,
    act_adj: BTreeMap<(VertexId, VertexId), Vec<Label>>,
    order: Vec<VertexId>,
    candidates: BTreeMap<VertexId, Vec<VertexId>>,
    mapping: BTreeMap<VertexId, VertexId>,
    used: BTreeSet<VertexId>,
}

impl Matcher {
    fn between(
        adj: &BTreeMap<(VertexId, VertexId), Vec<Label>>,
        a: VertexId,
        b: VertexId,
    ) -> &[Label] {
        adj.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    fn consistent(&self, u: VertexId, x: VertexId) -> bool {
        let same =
            |a, b, c, d| Self::between(&self.exp_adj, a, b) == Self::between(&self.act_adj, c, d);
        if !same(u, u, x, x) {
            return false;
        }
        self.mapping
            .iter()
            .all(|(&w, &y)| same(u, w, x, y) && same(w, u, y, x))
    }

    fn search(&mut self, depth: usize) -> bool {
        let Some(&u) = self.order.get(depth) else {
            return true;
        };
        for x in self.candidates[&u].clone() {
            if self.used.contains(&x) || !self.consistent(u, x) {
                continue;
            }
            self.mapping.insert(u, x);
            self.used.insert(x);
            if self.search(depth + 1) {
                return true;
            }
            self.mapping.remove(&u);
            self.used.remove(&x);
        }
        false
    }
}

/// Label of a vertex plus the multisets of its outgoing and incoming edge labels.
fn signature(g: &Graph, v: VertexId) -> (Label, Vec<Label>, Vec<Label>) {
    let mut out: Vec<Label> = Vec::new();
    let mut inc: Vec<Label> = Vec::new();
    for e in g.edge_ids() {
        let edge = g.edge(e);
        if edge.from == v {
            out.push(edge_label(g, e));
        }
        if edge.to == v {
            inc.push(edge_label(g, e));
        }
    }
    out.sort();
    inc.sort();
    (vertex_label(g, v), out, inc)
}

/// Whether the two graphs are isomorphic, comparing classes and all
/// attribute values (defaults included) but not ids or element order.
pub fn isomorphic(expected: &Graph, actual: &Graph) -> bool {
    if expected.vertex_count() != actual.vertex_count()
        || expected.edge_count() != actual.edge_count()
    {
        return false;
    }
    let act_sigs: Vec<_> = actual
        .vertex_ids()
        .map(|x| (x, signature(actual, x)))
        .collect();
    let mut candidates = BTreeMap::new();
    for u in expected.vertex_ids() {
        let sig = signature(expected, u);
        let c: Vec<VertexId> = act_sigs
            .iter()
            .filter(|(_, s)| *s == sig)
            .map(|(x, _)| *x)
            .collect();
        if c.is_empty() {
            return false;
        }
        candidates.insert(u, c);
    }
    let mut order: Vec<VertexId> = expected.vertex_ids().collect();
    order.sort_by_key(|u| candidates[u].len());
    let mut m = Matcher {
        exp_adj: adjacency(expected),
        act_adj: adjacency(actual),
        order,
        candidates,
        mapping: BTreeMap::new(),
        used: BTreeSet::new(),
    };
    m.search(0)
}

fn describe_vertex(g: &Graph, v: VertexId) -> String {
    let class = &g.schema().vertex_class(g.vertex(v).class).qualified_name;
    match g.get_attribute(ElementRef::Vertex(v), "name") {
        Ok(Value::String(n)) => format!("{} {n:?}", split_qualified(class).1),
        _ => format!("{} {}", split_qualified(class).1, g.vertex(v).key),
    }
}

fn attribute_diffs(
    prefix: &str,
    exp: &BTreeMap<String, Value>,
    act: &BTreeMap<String, Value>,
    out: &mut Vec<String>,
) {
    let names: BTreeSet<&String> = exp.keys().chain(act.keys()).collect();
    for n in names {
        let (e, a) = (exp.get(n), act.get(n));
        if e != a {
            let show = |v: Option<&Value>| v.map_or("nothing".to_string(), |v| format!("{v:?}"));
            out.push(format!(
                "{prefix}: {n} expected {}, found {}",
                show(e),
                show(a)
            ));
        }
    }
}

/// Differences between an expected and an actual graph, one line each.
/// Empty exactly when the graphs are isomorphic and the schemas agree.
pub fn compare_graphs(expected: &Graph, actual: &Graph) -> Vec<String> {
    let mut out = Vec::new();
    let (es, as_) = (
        schema_lines(expected.schema()),
        schema_lines(actual.schema()),
    );
    for missing in es.difference(&as_) {
        out.push(format!("missing {missing}"));
    }
    for extra in as_.difference(&es) {
        out.push(format!("unexpected {extra}"));
    }
    if out.is_empty() && isomorphic(expected, actual) {
        return out;
    }

    // Pair vertices by class and name, then edges by class and endpoints.
    let key = |g: &Graph, v| describe_vertex(g, v);
    let mut pool: BTreeMap<String, Vec<VertexId>> = BTreeMap::new();
    for x in actual.vertex_ids() {
        pool.entry(key(actual, x)).or_default().push(x);
    }
    let mut mapping = BTreeMap::new();
    for u in expected.vertex_ids() {
        let k = key(expected, u);
        match pool
            .get_mut(&k)
            .and_then(|xs| (!xs.is_empty()).then(|| xs.remove(0)))
        {
            Some(x) => {
                mapping.insert(u, x);
                attribute_diffs(
                    &format!("vertex {k}"),
                    &expected.attribute_values(ElementRef::Vertex(u)),
                    &actual.attribute_values(ElementRef::Vertex(x)),
                    &mut out,
                );
            }
            None => out.push(format!("missing vertex {k}")),
        }
    }
    for (k, xs) in &pool {
        for _ in xs {
            out.push(format!("unexpected vertex {k}"));
        }
    }
    let mut unused: BTreeSet<EdgeId> = actual.edge_ids().collect();
    for e in expected.edge_ids() {
        let edge = expected.edge(e);
        let (class, attrs) = edge_label(expected, e);
        let what = format!(
            "edge {} {} ({} -> {})",
            split_qualified(&class).1,
            edge.key,
            describe_vertex(expected, edge.from),
            describe_vertex(expected, edge.to)
        );
        let (Some(&from), Some(&to)) = (mapping.get(&edge.from), mapping.get(&edge.to)) else {
            out.push(format!("missing {what}"));
            continue;
        };
        let candidates: Vec<EdgeId> = unused
            .iter()
            .copied()
            .filter(|&f| {
                let fe = actual.edge(f);
                fe.from == from && fe.to == to && edge_label(actual, f).0 == class
            })
            .collect();
        let exact = candidates
            .iter()
            .copied()
            .find(|&f| edge_label(actual, f).1 == attrs);
        match exact.or(candidates.first().copied()) {
            Some(f) => {
                unused.remove(&f);
                attribute_diffs(&what, &attrs, &edge_label(actual, f).1, &mut out);
            }
            None => out.push(format!("missing {what}")),
        }
    }
    for f in unused {
        let fe = actual.edge(f);
        out.push(format!(
            "unexpected edge {} {} ({} -> {})",
            split_qualified(&edge_label(actual, f).0).1,
            fe.key,
            describe_vertex(actual, fe.from),
            describe_vertex(actual, fe.to)
        ));
    }
    if out.is_empty() {
        out.push("graphs are not isomorphic".into());
    }
    out
}
