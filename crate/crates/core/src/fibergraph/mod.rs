//! Weighted dual graphs of special fibers.
//!
//! A [`FiberGraph`] records the irreducible components of the special fiber
//! (genus and multiplicity) and one edge per intersection point. Parallel
//! edges are ordinary: two components may meet in several points.
//! Self-intersections are never stored. They follow from the fiber relation
//! `C · X_k = 0`, i.e. `mult(C) · C² = -Σ mult(neighbour)`, so every rewrite
//! keeps them coherent for free.
//!
//! Self-loops (a component meeting itself) are rejected by
//! [`FiberGraph::new`]. They only appear transiently, after contracting the
//! middle of a two-edge loop, and such graphs report `is_snc() == false`.

mod reduced;
mod validate;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};
use crate::iso;

pub use reduced::{reduced_pa, ReducedGraph};
pub use validate::{validate, CheckKind, CheckResult, ValidationReport};

/// Opaque, stable identifier of a component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComponentId(String);

impl ComponentId {
    pub fn new(id: impl Into<String>) -> Self {
        ComponentId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ComponentId {
    fn from(s: &str) -> Self {
        ComponentId(s.to_owned())
    }
}

impl From<String> for ComponentId {
    fn from(s: String) -> Self {
        ComponentId(s)
    }
}

impl From<&ComponentId> for ComponentId {
    fn from(id: &ComponentId) -> Self {
        id.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: ComponentId,
    /// Arithmetic genus of the (smooth) component.
    pub genus: BigInt,
    /// Multiplicity in the fiber divisor.
    pub mult: BigInt,
}

impl Component {
    pub fn new(id: impl Into<ComponentId>, genus: impl Into<BigInt>, mult: impl Into<BigInt>) -> Self {
        Component {
            id: id.into(),
            genus: genus.into(),
            mult: mult.into(),
        }
    }
}

/// One intersection point, stored with its endpoints in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(ComponentId, ComponentId);

impl Edge {
    pub fn new(a: impl Into<ComponentId>, b: impl Into<ComponentId>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn ends(&self) -> (&ComponentId, &ComponentId) {
        (&self.0, &self.1)
    }

    pub fn is_loop(&self) -> bool {
        self.0 == self.1
    }

    pub fn touches(&self, c: &ComponentId) -> bool {
        &self.0 == c || &self.1 == c
    }

    /// The endpoint opposite to `c`, if `c` is an endpoint.
    pub fn other(&self, c: &ComponentId) -> Option<&ComponentId> {
        if &self.0 == c {
            Some(&self.1)
        } else if &self.1 == c {
            Some(&self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberGraph {
    residue_char: u64,
    components: BTreeMap<ComponentId, Component>,
    /// Sorted multiset of intersection points.
    edges: Vec<Edge>,
}

impl FiberGraph {
    /// Builds a strict SNC fiber graph.
    ///
    /// Rejects duplicate ids, negative genus, multiplicity < 1, unknown edge
    /// endpoints, self-loops and a residue characteristic that is neither 0
    /// nor prime. Connectivity and self-intersection integrality are left to
    /// [`validate`], which reports rather than rejects.
    pub fn new<I, E, A, B>(residue_char: u64, components: I, edges: E) -> Result<Self>
    where
        I: IntoIterator<Item = Component>,
        E: IntoIterator<Item = (A, B)>,
        A: Into<ComponentId>,
        B: Into<ComponentId>,
    {
        let edges: Vec<Edge> = edges.into_iter().map(|(a, b)| Edge::new(a, b)).collect();
        if let Some(e) = edges.iter().find(|e| e.is_loop()) {
            return Err(Error::SelfLoop(e.0.clone()));
        }
        Self::from_parts(residue_char, components, edges)
    }

    /// Like [`FiberGraph::new`] but admits self-loops (nodal components).
    pub(crate) fn from_parts(
        residue_char: u64,
        components: impl IntoIterator<Item = Component>,
        mut edges: Vec<Edge>,
    ) -> Result<Self> {
        if residue_char != 0 && !is_prime_u64(residue_char) {
            return Err(Error::InvalidGraph(format!(
                "residue characteristic {residue_char} is neither 0 nor prime"
            )));
        }
        let mut map = BTreeMap::new();
        for c in components {
            if c.genus.is_negative() {
                return Err(Error::InvalidComponent {
                    id: c.id,
                    reason: format!("genus {} < 0", c.genus),
                });
            }
            if c.mult < BigInt::one() {
                return Err(Error::InvalidComponent {
                    id: c.id,
                    reason: format!("multiplicity {} < 1", c.mult),
                });
            }
            if map.contains_key(&c.id) {
                return Err(Error::DuplicateComponent(c.id));
            }
            map.insert(c.id.clone(), c);
        }
        if map.is_empty() {
            return Err(Error::EmptyGraph);
        }
        for e in &edges {
            for end in [&e.0, &e.1] {
                if !map.contains_key(end) {
                    return Err(Error::UnknownComponent(end.clone()));
                }
            }
        }
        edges.sort();
        Ok(FiberGraph {
            residue_char,
            components: map,
            edges,
        })
    }

    pub fn residue_char(&self) -> u64 {
        self.residue_char
    }

    /// Components in ascending id order.
    pub fn components(&self) -> impl Iterator<Item = &Component> + '_ {
        self.components.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &ComponentId> + '_ {
        self.components.keys()
    }

    pub fn component(&self, id: &ComponentId) -> Result<&Component> {
        self.components
            .get(id)
            .ok_or_else(|| Error::UnknownComponent(id.clone()))
    }

    pub fn contains(&self, id: &ComponentId) -> bool {
        self.components.contains_key(id)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// No component meets itself.
    pub fn is_snc(&self) -> bool {
        !self.edges.iter().any(Edge::is_loop)
    }

    pub fn mult(&self, id: &ComponentId) -> Result<&BigInt> {
        Ok(&self.component(id)?.mult)
    }

    pub fn incident<'a>(&'a self, c: &'a ComponentId) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.touches(c))
    }

    /// Number of branch points on `c`; a self-loop counts twice.
    pub fn valence(&self, c: &ComponentId) -> usize {
        self.incident(c).map(|e| if e.is_loop() { 2 } else { 1 }).sum()
    }

    pub fn loop_count(&self, c: &ComponentId) -> usize {
        self.incident(c).filter(|e| e.is_loop()).count()
    }

    /// Other endpoints of the non-loop edges at `c`, with repetition.
    pub fn neighbours<'a>(&'a self, c: &'a ComponentId) -> impl Iterator<Item = &'a ComponentId> + 'a {
        self.incident(c)
            .filter(|e| !e.is_loop())
            .filter_map(move |e| e.other(c))
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.components.keys().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for n in self.neighbours(c) {
                if seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen.len() == self.components.len()
    }

    /// Σ over non-loop edges at `c` of the opposite multiplicity.
    fn neighbour_sum(&self, c: &ComponentId) -> BigInt {
        self.neighbours(c).map(|n| &self.components[n].mult).sum()
    }

    /// `C²` as an exact rational; zero on a single-component fiber.
    pub fn self_intersection_ratio(&self, c: &ComponentId) -> Result<BigRational> {
        let mult = self.mult(c)?.clone();
        if self.len() == 1 {
            return Ok(BigRational::zero());
        }
        Ok(BigRational::new(-self.neighbour_sum(c), mult))
    }

    /// `C² = -(Σ neighbour multiplicities) / mult(C)`.
    pub fn self_intersection(&self, c: &ComponentId) -> Result<BigInt> {
        let mult = self.mult(c)?;
        if self.len() == 1 {
            return Err(Error::SelfIntersectionUndefined);
        }
        let sum = self.neighbour_sum(c);
        let (q, r) = sum.div_rem(mult);
        if !r.is_zero() {
            return Err(Error::NonIntegralSelfIntersection {
                id: c.clone(),
                mult: mult.clone(),
                sum,
            });
        }
        Ok(-q)
    }

    /// Arithmetic genus of the fiber by adjunction:
    /// `1 + ½ Σ m_i (2 p_a(C_i) - 2 - C_i²)`, where `p_a` counts nodes of
    /// nodal components.
    pub fn genus(&self) -> Result<BigInt> {
        let two = BigInt::from(2);
        let mut twice = BigRational::zero();
        for c in self.components.values() {
            let pa = &c.genus + BigInt::from(self.loop_count(&c.id));
            let c2 = self.self_intersection_ratio(&c.id)?;
            let term = BigRational::from_integer(&two * pa - &two) - c2;
            twice += BigRational::from_integer(c.mult.clone()) * term;
        }
        let genus = BigRational::one() + twice / BigRational::from_integer(two);
        if !genus.is_integer() || genus.is_negative() {
            return Err(Error::NonIntegralGenus(genus.to_string()));
        }
        Ok(genus.to_integer())
    }

    /// An id not yet used in the graph, derived from `base`.
    pub fn fresh_id(&self, base: &str) -> ComponentId {
        if !self.components.contains_key(&ComponentId::from(base)) {
            return ComponentId::from(base);
        }
        (1u64..)
            .map(|k| ComponentId::new(format!("{base}{k}")))
            .find(|id| !self.components.contains_key(id))
            .expect("unbounded id supply")
    }

    /// Blows up the intersection point `e`: a new rational component of
    /// multiplicity `mult(A) + mult(B)` replaces the edge. Returns the new
    /// graph and the id of the exceptional component.
    pub fn blow_up_edge(&self, e: &Edge) -> Result<(FiberGraph, ComponentId)> {
        let pos = self
            .edges
            .iter()
            .position(|x| x == e)
            .ok_or_else(|| Error::InvalidParams(format!("edge {e} not in graph")))?;
        let (a, b) = e.ends();
        let mult = self.mult(a)? + self.mult(b)?;
        let x = self.fresh_id("X");
        let mut comps: Vec<Component> = self.components.values().cloned().collect();
        comps.push(Component::new(x.clone(), 0, mult));
        let mut edges = self.edges.clone();
        edges.remove(pos);
        edges.push(Edge::new(x.clone(), a.clone()));
        edges.push(Edge::new(x.clone(), b.clone()));
        Ok((FiberGraph::from_parts(self.residue_char, comps, edges)?, x))
    }

    /// Blows up a point of `c` lying on no other component: a new rational
    /// leaf of multiplicity `mult(c)` attached to `c`.
    pub fn blow_up_point(&self, c: &ComponentId) -> Result<(FiberGraph, ComponentId)> {
        let mult = self.mult(c)?.clone();
        let x = self.fresh_id("X");
        let mut comps: Vec<Component> = self.components.values().cloned().collect();
        comps.push(Component::new(x.clone(), 0, mult));
        let mut edges = self.edges.clone();
        edges.push(Edge::new(x.clone(), c.clone()));
        Ok((FiberGraph::from_parts(self.residue_char, comps, edges)?, x))
    }

    /// Same graph with component `c` and all its edges removed, plus `extra`.
    pub(crate) fn without(&self, c: &ComponentId, extra: impl IntoIterator<Item = Edge>) -> Result<FiberGraph> {
        let comps = self.components.values().filter(|x| &x.id != c).cloned();
        let mut edges: Vec<Edge> = self.edges.iter().filter(|e| !e.touches(c)).cloned().collect();
        edges.extend(extra);
        FiberGraph::from_parts(self.residue_char, comps, edges)
    }

    /// Graph isomorphism preserving genus, multiplicity and edge
    /// multiplicities (ids are ignored; the residue characteristic must agree).
    pub fn is_isomorphic(&self, other: &FiberGraph) -> bool {
        self.residue_char == other.residue_char && iso::isomorphic(&self.labelled(), &other.labelled())
    }

    fn labelled(&self) -> iso::Labelled<(BigInt, BigInt)> {
        iso::Labelled::build(
            self.components.values().map(|c| (c.id.clone(), (c.genus.clone(), c.mult.clone()))),
            &self.edges,
        )
    }
}
