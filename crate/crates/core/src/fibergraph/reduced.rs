use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Signed;

use super::{ComponentId, Edge};
use crate::error::{Error, Result};
use crate::iso;

/// Dual graph of a reduced nodal curve. Self-loops are nodes of an
/// irreducible component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGraph {
    components: BTreeMap<ComponentId, BigInt>,
    edges: Vec<Edge>,
}

impl ReducedGraph {
    pub fn new<I, C, E, A, B>(components: I, edges: E) -> Result<Self>
    where
        I: IntoIterator<Item = (C, BigInt)>,
        C: Into<ComponentId>,
        E: IntoIterator<Item = (A, B)>,
        A: Into<ComponentId>,
        B: Into<ComponentId>,
    {
        let mut map = BTreeMap::new();
        for (id, genus) in components {
            let id = id.into();
            if genus.is_negative() {
                return Err(Error::InvalidComponent {
                    id,
                    reason: format!("genus {genus} < 0"),
                });
            }
            if map.insert(id.clone(), genus).is_some() {
                return Err(Error::DuplicateComponent(id));
            }
        }
        if map.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut edges: Vec<Edge> = edges.into_iter().map(|(a, b)| Edge::new(a, b)).collect();
        for e in &edges {
            let (a, b) = e.ends();
            for end in [a, b] {
                if !map.contains_key(end) {
                    return Err(Error::UnknownComponent(end.clone()));
                }
            }
        }
        edges.sort();
        Ok(ReducedGraph { components: map, edges })
    }

    /// `(id, genus)` in ascending id order.
    pub fn components(&self) -> impl Iterator<Item = (&ComponentId, &BigInt)> + '_ {
        self.components.iter()
    }

    pub fn genus_of(&self, id: &ComponentId) -> Option<&BigInt> {
        self.components.get(id)
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

    /// Branch count at `c`; a self-loop contributes two.
    pub fn valence(&self, c: &ComponentId) -> usize {
        self.edges
            .iter()
            .filter(|e| e.touches(c))
            .map(|e| if e.is_loop() { 2 } else { 1 })
            .sum()
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_loop()).count()
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.components.keys().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for e in self.edges.iter().filter(|e| e.touches(c)) {
                let n = e.other(c).expect("incident edge");
                if seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen.len() == self.components.len()
    }

    /// Arithmetic genus: Σ genus + first Betti number `|E| - |V| + 1`.
    pub fn pa(&self) -> BigInt {
        let genus_sum: BigInt = self.components.values().sum();
        genus_sum + BigInt::from(self.edges.len()) - BigInt::from(self.components.len()) + 1
    }

    /// Every genus-0 vertex has valence ≥ 3.
    pub fn is_stable(&self) -> bool {
        self.components
            .iter()
            .all(|(id, g)| g.is_positive() || self.valence(id) >= 3)
    }

    pub(crate) fn remove_vertex(&mut self, c: &ComponentId) {
        self.components.remove(c);
        self.edges.retain(|e| !e.touches(c));
    }

    pub(crate) fn push_edge(&mut self, e: Edge) {
        let pos = self.edges.partition_point(|x| x < &e);
        self.edges.insert(pos, e);
    }

    pub fn is_isomorphic(&self, other: &ReducedGraph) -> bool {
        iso::isomorphic(&self.labelled(), &other.labelled())
    }

    fn labelled(&self) -> iso::Labelled<BigInt> {
        iso::Labelled::build(
            self.components.iter().map(|(id, g)| (id.clone(), g.clone())),
            &self.edges,
        )
    }
}

/// `p_a` of a nodal curve from its dual graph.
pub fn reduced_pa(g: &ReducedGraph) -> BigInt {
    g.pa()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn pa_examples() {
        let one_loop = ReducedGraph::new([("A", b(2))], [("A", "A")]).unwrap();
        assert_eq!(reduced_pa(&one_loop), b(3));
        let tree = ReducedGraph::new([("A", b(2)), ("B", b(2))], [("A", "B")]).unwrap();
        assert_eq!(tree.pa(), b(4));
        let rose = ReducedGraph::new([("A", b(0))], [("A", "A"), ("A", "A"), ("A", "A")]).unwrap();
        assert_eq!(rose.pa(), b(3));
        assert_eq!(rose.valence(&"A".into()), 6);
        assert!(rose.is_stable());
    }

    #[test]
    fn isomorphism_ignores_ids() {
        let g = ReducedGraph::new([("A", b(2)), ("B", b(0))], [("A", "B"), ("B", "B")]).unwrap();
        let h = ReducedGraph::new([("x", b(0)), ("y", b(2))], [("x", "x"), ("y", "x")]).unwrap();
        let k = ReducedGraph::new([("x", b(0)), ("y", b(2))], [("y", "y"), ("y", "x")]).unwrap();
        assert!(g.is_isomorphic(&h));
        assert!(!g.is_isomorphic(&k));
    }
}
