//! Graphviz output.

use std::fmt::Write;

use num_bigint::BigInt;

use crate::fibergraph::{ComponentId, Edge, FiberGraph, ReducedGraph};

/// Anything with labelled vertices and (multi)edges that can be drawn.
pub trait DotSource {
    /// `(id, genus, mult, self-intersection)` in id order.
    fn dot_vertices(&self) -> Vec<(ComponentId, BigInt, BigInt, BigInt)>;
    fn dot_edges(&self) -> &[Edge];
}

impl DotSource for FiberGraph {
    fn dot_vertices(&self) -> Vec<(ComponentId, BigInt, BigInt, BigInt)> {
        self.components()
            .map(|c| {
                // an irreducible fiber is numerically trivial, so C² = 0 there
                let s = self.self_intersection(&c.id).unwrap_or_default();
                (c.id.clone(), c.genus.clone(), c.mult.clone(), s)
            })
            .collect()
    }

    fn dot_edges(&self) -> &[Edge] {
        self.edges()
    }
}

impl DotSource for ReducedGraph {
    /// Multiplicity 1; `s` is minus the number of points met on other
    /// components, as for a reduced fiber.
    fn dot_vertices(&self) -> Vec<(ComponentId, BigInt, BigInt, BigInt)> {
        self.components()
            .map(|(id, genus)| {
                let meets = self.edges().iter().filter(|e| e.touches(id) && !e.is_loop()).count();
                (id.clone(), genus.clone(), BigInt::from(1), -BigInt::from(meets))
            })
            .collect()
    }

    fn dot_edges(&self) -> &[Edge] {
        self.edges()
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' | '\\' => {
                out.push('\\');
                out.push(ch);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(ch),
        }
    }
    out.push('"');
    out
}

/// Undirected DOT graph, one statement per vertex and per edge, sorted.
pub fn emit_dot<G: DotSource + ?Sized>(g: &G) -> String {
    let mut out = String::from("graph fiber {\n");
    for (id, genus, mult, s) in g.dot_vertices() {
        let label = format!("{id} g={genus} m={mult} s={s}");
        writeln!(out, "  {} [label={}];", quote(id.as_str()), quote(&label)).unwrap();
    }
    for e in g.dot_edges() {
        let (a, b) = e.ends();
        writeln!(out, "  {} -- {};", quote(a.as_str()), quote(b.as_str())).unwrap();
    }
    out.push_str("}\n");
    out
}
