use std::collections::BTreeMap;
use std::fmt::Write;

use crate::graph::{split_qualified, ElementRef, Graph};
use crate::transform::ExecutionContext;
use crate::value::Value;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn plain(graph: &Graph, v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => graph.render_value(other),
    }
}

/// DOT rendering. Vertices are labelled with their class and `name`;
/// edges with their class and any `trigger` and `action` values.
pub fn export_dot(graph: &Graph) -> String {
    let schema = graph.schema();
    let mut out = String::from("digraph G {\n");
    for v in graph.vertex_ids() {
        let vx = graph.vertex(v);
        let mut label = split_qualified(&schema.vertex_class(vx.class).qualified_name)
            .1
            .to_string();
        let values = graph.attribute_values(ElementRef::Vertex(v));
        if let Some(name) = values.get("name").filter(|n| !n.is_undefined()) {
            let _ = write!(label, "\n{}", plain(graph, name));
        }
        let _ = writeln!(out, "  {} [label={}];", quote(&vx.key), quote(&label));
    }
    for e in graph.edge_ids() {
        let ex = graph.edge(e);
        let mut label = split_qualified(&schema.edge_class(ex.class).qualified_name)
            .1
            .to_string();
        let values = graph.attribute_values(ElementRef::Edge(e));
        for key in ["trigger", "action"] {
            if let Some(v) = values.get(key).filter(|v| !v.is_undefined()) {
                let _ = write!(label, "\n{key}: {}", plain(graph, v));
            }
        }
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&graph.vertex(ex.from).key),
            quote(&graph.vertex(ex.to).key),
            quote(&label)
        );
    }
    out.push_str("}\n");
    out
}

/// The img maps as JSON: `img_<Class>` → archetype rendering → target id.
/// Archetypes render with source ids; tuples as bracketed lists.
pub fn trace_to_string(ctx: &ExecutionContext) -> String {
    let mut doc: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    for class in ctx.trace.classes() {
        let entries = ctx
            .trace
            .img(class)
            .into_iter()
            .flatten()
            .map(|(a, e)| {
                (
                    ctx.source.render_value(a),
                    ctx.target.key_of(*e).to_string(),
                )
            })
            .collect();
        doc.insert(format!("img_{class}"), entries);
    }
    let mut text = serde_json::to_string_pretty(&doc).expect("trace is JSON");
    text.push('\n');
    text
}
