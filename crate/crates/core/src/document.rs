//! JSON interchange format for fiber graphs.
//!
//! ```json
//! {
//!   "residue_char": 0,
//!   "components": [{"id": "F", "genus": 1, "mult": 2}, {"id": "E", "genus": 0, "mult": 1}],
//!   "edges": [["F", "E"], ["F", "E"]],
//!   "splitting": {"F": 1}
//! }
//! ```
//!
//! Integers may be arbitrarily large. Repeated edges encode parallel
//! intersection points; `splitting` is optional. An optional `twists` map
//! from edge index (as a string) to shift completes a [`SplittingPlan`].

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use crate::arith::is_prime_u64;
use crate::basechange::SplittingPlan;
use crate::error::{Error, Result};
use crate::fibergraph::{Component, ComponentId, Edge, FiberGraph, ReducedGraph};
use crate::json::number;

/// A parsed document: the graph and its optional splitting plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDocument {
    pub graph: FiberGraph,
    pub splitting: Option<SplittingPlan>,
}

impl GraphDocument {
    pub fn new(graph: FiberGraph) -> Self {
        GraphDocument { graph, splitting: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

impl Serialize for GraphDocument {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("residue_char", &self.graph.residue_char())?;
        map.serialize_entry("components", &ComponentList(&self.graph))?;
        map.serialize_entry("edges", &EdgeList(self.graph.edges()))?;
        if let Some(plan) = &self.splitting {
            let copies: Map<String, Value> = plan
                .iter()
                .map(|(id, c)| (id.to_string(), Value::Number(number(c))))
                .collect();
            map.serialize_entry("splitting", &copies)?;
            if plan.twists().next().is_some() {
                let twists: Map<String, Value> = plan
                    .twists()
                    .map(|(e, t)| (e.to_string(), Value::Number(number(t))))
                    .collect();
                map.serialize_entry("twists", &twists)?;
            }
        }
        map.end()
    }
}

impl Serialize for FiberGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("residue_char", &self.residue_char())?;
        map.serialize_entry("components", &ComponentList(self))?;
        map.serialize_entry("edges", &EdgeList(self.edges()))?;
        map.end()
    }
}

impl Serialize for ReducedGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Vertex<'a>(&'a ComponentId, &'a BigInt);
        impl Serialize for Vertex<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(2))?;
                map.serialize_entry("id", self.0)?;
                map.serialize_entry("genus", &number(self.1))?;
                map.end()
            }
        }
        let vertices: Vec<Vertex> = self.components().map(|(id, g)| Vertex(id, g)).collect();
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("components", &vertices)?;
        map.serialize_entry("edges", &EdgeList(self.edges()))?;
        map.serialize_entry("pa", &number(&self.pa()))?;
        map.end()
    }
}

struct ComponentList<'a>(&'a FiberGraph);

impl Serialize for ComponentList<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in self.0.components() {
            seq.serialize_element(&ComponentEntry(c))?;
        }
        seq.end()
    }
}

struct ComponentEntry<'a>(&'a Component);

impl Serialize for ComponentEntry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("id", &self.0.id)?;
        map.serialize_entry("genus", &number(&self.0.genus))?;
        map.serialize_entry("mult", &number(&self.0.mult))?;
        map.end()
    }
}

struct EdgeList<'a>(&'a [Edge]);

impl Serialize for EdgeList<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for e in self.0 {
            let (a, b) = e.ends();
            seq.serialize_element(&[a, b])?;
        }
        seq.end()
    }
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn invariant(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Invariant {
        path: path.into(),
        message: message.into(),
    }
}

fn integer(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| schema(path, format!("expected an integer, found {n}"))),
        other => Err(schema(path, format!("expected an integer, found {}", kind(other)))),
    }
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| schema(path, format!("expected a string, found {}", kind(v))))
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let map = v
        .as_object()
        .ok_or_else(|| schema(path, format!("expected an object, found {}", kind(v))))?;
    if let Some(key) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        let at = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
        return Err(schema(at, "unknown field"));
    }
    Ok(map)
}

fn field<'a>(map: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    let at = if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
    map.get(key).ok_or_else(|| schema(at, "missing field"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema(path, format!("expected an array, found {}", kind(v))))
}

/// Parses a document, reporting the line and column of syntax errors and
/// the field path of schema and invariant errors.
pub fn parse(text: &str) -> Result<GraphDocument> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let top = object(&root, "", &["residue_char", "components", "edges", "splitting", "twists"])?;

    let p = integer(field(top, "", "residue_char")?, "residue_char")?;
    if p.is_negative() {
        return Err(schema("residue_char", format!("{p} < 0")));
    }
    let p = p
        .to_u64()
        .ok_or_else(|| schema("residue_char", format!("{p} exceeds 64 bits")))?;
    if p != 0 && !is_prime_u64(p) {
        return Err(schema("residue_char", format!("{p} is neither 0 nor prime")));
    }

    let mut comps = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (i, entry) in array(field(top, "", "components")?, "components")?.iter().enumerate() {
        let path = format!("components[{i}]");
        let map = object(entry, &path, &["id", "genus", "mult"])?;
        let id = string(field(map, &path, "id")?, &format!("{path}.id"))?;
        let genus = integer(field(map, &path, "genus")?, &format!("{path}.genus"))?;
        let mult = integer(field(map, &path, "mult")?, &format!("{path}.mult"))?;
        if genus.is_negative() {
            return Err(schema(format!("{path}.genus"), format!("{genus} < 0")));
        }
        if mult < BigInt::from(1) {
            return Err(schema(format!("{path}.mult"), format!("{mult} < 1")));
        }
        if !seen.insert(id.to_string()) {
            return Err(invariant(format!("{path}.id"), format!("duplicate id `{id}`")));
        }
        comps.push(Component::new(id, genus, mult));
    }
    if comps.is_empty() {
        return Err(schema("components", "at least one component is required"));
    }

    let mut edges = Vec::new();
    for (i, entry) in array(field(top, "", "edges")?, "edges")?.iter().enumerate() {
        let path = format!("edges[{i}]");
        let pair = array(entry, &path)?;
        if pair.len() != 2 {
            return Err(schema(&path, format!("expected two ids, found {}", pair.len())));
        }
        let a = string(&pair[0], &format!("{path}[0]"))?;
        let b = string(&pair[1], &format!("{path}[1]"))?;
        for (j, end) in [a, b].into_iter().enumerate() {
            if !seen.contains(end) {
                return Err(invariant(format!("{path}[{j}]"), format!("unknown component `{end}`")));
            }
        }
        if a == b {
            return Err(invariant(&path, format!("self-loop at `{a}`")));
        }
        edges.push((a.to_string(), b.to_string()));
    }

    let mut plan = None;
    if let Some(v) = top.get("splitting").filter(|v| !v.is_null()) {
        let plan = plan.get_or_insert_with(SplittingPlan::new);
        read_copies(v, "splitting", Some(&seen), plan)?;
    }
    if let Some(v) = top.get("twists").filter(|v| !v.is_null()) {
        let plan = plan.get_or_insert_with(SplittingPlan::new);
        read_twists(v, "twists", Some(edges.len()), plan)?;
    }
    let splitting = plan;

    let graph = FiberGraph::new(p, comps, edges).map_err(|e| invariant("", e.to_string()))?;
    Ok(GraphDocument { graph, splitting })
}

fn read_copies(
    v: &Value,
    path: &str,
    known: Option<&std::collections::BTreeSet<String>>,
    plan: &mut SplittingPlan,
) -> Result<()> {
    let map = v
        .as_object()
        .ok_or_else(|| schema(path, format!("expected an object, found {}", kind(v))))?;
    for (id, c) in map {
        let at = if path.is_empty() { id.clone() } else { format!("{path}.{id}") };
        if known.is_some_and(|k| !k.contains(id.as_str())) {
            return Err(invariant(&at, format!("unknown component `{id}`")));
        }
        let c = integer(c, &at)?;
        if c < BigInt::from(1) {
            return Err(schema(&at, format!("{c} < 1")));
        }
        plan.insert(ComponentId::from(id.as_str()), c);
    }
    Ok(())
}

fn read_twists(v: &Value, path: &str, edge_count: Option<usize>, plan: &mut SplittingPlan) -> Result<()> {
    let map = v
        .as_object()
        .ok_or_else(|| schema(path, format!("expected an object, found {}", kind(v))))?;
    for (key, t) in map {
        let at = format!("{path}.{key}");
        let edge: usize = key
            .parse()
            .map_err(|_| schema(&at, "twist keys are edge indices"))?;
        if edge_count.is_some_and(|n| edge >= n) {
            return Err(invariant(&at, format!("no edge with index {edge}")));
        }
        plan.insert_twist(edge, integer(t, &at)?);
    }
    Ok(())
}

/// Parses a splitting plan on its own: either a bare `{"id": copies, ...}`
/// map or the `{"copies": {...}, "twists": {...}}` form found in reports.
pub fn parse_plan(text: &str) -> Result<SplittingPlan> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let map = root
        .as_object()
        .ok_or_else(|| schema("", format!("expected an object, found {}", kind(&root))))?;
    let mut plan = SplittingPlan::new();
    let structured = !map.is_empty()
        && map
            .iter()
            .all(|(k, v)| (k == "copies" || k == "twists") && v.is_object());
    if structured {
        if let Some(v) = map.get("copies") {
            read_copies(v, "copies", None, &mut plan)?;
        }
        if let Some(v) = map.get("twists") {
            read_twists(v, "twists", None, &mut plan)?;
        }
    } else {
        read_copies(&root, "", None, &mut plan)?;
    }
    Ok(plan)
}
