//! Regular path expressions as set transformers.
//!
//! Every construct maps a vertex set to the vertex set reachable from it and
//! distributes over union, so iteration is a frontier fixpoint: each round
//! only expands vertices that were not reached before.

use std::collections::BTreeSet;

use super::ast::{Arrow, PathExpr, Repeat, Restriction};
use super::error::QueryError;
use super::eval::Evaluator;
use crate::graph::EdgeKind;
use crate::value::{Value, VertexId};

impl Evaluator<'_> {
    pub(super) fn image(
        &mut self,
        start: &BTreeSet<VertexId>,
        path: &PathExpr,
    ) -> Result<BTreeSet<VertexId>, QueryError> {
        match path {
            PathExpr::Step { arrow, role } => Ok(self.step(start, *arrow, role.as_deref())),
            PathExpr::Restrict(r) => self.restrict(start, r),
            PathExpr::Seq(items) => {
                let mut current = start.clone();
                for item in items {
                    if current.is_empty() {
                        break;
                    }
                    current = self.image(&current, item)?;
                }
                Ok(current)
            }
            PathExpr::Alt(items) => {
                let mut out = BTreeSet::new();
                for item in items {
                    out.extend(self.image(start, item)?);
                }
                Ok(out)
            }
            PathExpr::Group(inner) => self.image(start, inner),
            PathExpr::Iterate(body, repeat) => {
                let mut reached = match repeat {
                    Repeat::Star => start.clone(),
                    Repeat::Plus => BTreeSet::new(),
                };
                let mut frontier = start.clone();
                while !frontier.is_empty() {
                    let next = self.image(&frontier, body)?;
                    frontier = next.difference(&reached).copied().collect();
                    reached.extend(frontier.iter().copied());
                }
                Ok(reached)
            }
        }
    }

    fn step(
        &self,
        start: &BTreeSet<VertexId>,
        arrow: Arrow,
        role: Option<&str>,
    ) -> BTreeSet<VertexId> {
        let graph = self.env.graph;
        let schema = graph.schema();
        let mut out = BTreeSet::new();
        for &v in start {
            for &e in graph.outgoing(v) {
                let edge = graph.edge(e);
                let class = schema.edge_class(edge.class);
                if arrow == Arrow::Containment && class.kind != EdgeKind::Containment {
                    continue;
                }
                if let Some(r) = role {
                    if class.to_role.as_deref() != Some(r) {
                        continue;
                    }
                }
                out.insert(edge.to);
            }
        }
        out
    }

    fn restrict(
        &mut self,
        start: &BTreeSet<VertexId>,
        r: &Restriction,
    ) -> Result<BTreeSet<VertexId>, QueryError> {
        let graph = self.env.graph;
        let mut keep = vec![false; graph.schema().vertex_classes().count()];
        for t in &r.types {
            for (k, m) in keep.iter_mut().zip(self.type_mask(t)?) {
                *k |= *m;
            }
        }
        let mut out = BTreeSet::new();
        for &v in start {
            if !keep[graph.vertex(v).class.0 as usize] {
                continue;
            }
            if let Some(p) = &r.predicate {
                self.push("thisVertex", Value::Vertex(v));
                let verdict = self.eval(p).and_then(|x| self.truthy(&x));
                self.pop();
                if !verdict? {
                    continue;
                }
            }
            out.insert(v);
        }
        Ok(out)
    }
}
