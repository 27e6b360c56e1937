//! Isomorphism of small vertex-labelled multigraphs.
//!
//! Vertices are first bucketed by an invariant (label, loop count, sorted
//! neighbour-multiplicity profile); a backtracking search then assigns them
//! in BFS order so every partial map is checked against already-placed
//! neighbours. Dual graphs here have at most a few hundred vertices.

use std::collections::BTreeMap;

use crate::fibergraph::{ComponentId, Edge};

pub(crate) struct Labelled<L> {
    labels: Vec<L>,
    /// `adj[i][j]` = number of edges between `i` and `j`; diagonal holds loops.
    adj: Vec<Vec<usize>>,
}

impl<L: Ord + Clone> Labelled<L> {
    pub(crate) fn build(vertices: impl IntoIterator<Item = (ComponentId, L)>, edges: &[Edge]) -> Self {
        let mut index = BTreeMap::new();
        let mut labels = Vec::new();
        for (id, label) in vertices {
            index.insert(id, labels.len());
            labels.push(label);
        }
        let n = labels.len();
        let mut adj = vec![vec![0; n]; n];
        for e in edges {
            let (a, b) = e.ends();
            let (i, j) = (index[a], index[b]);
            adj[i][j] += 1;
            if i != j {
                adj[j][i] += 1;
            }
        }
        Labelled { labels, adj }
    }

    fn invariant(&self, v: usize) -> (L, usize, Vec<usize>) {
        let mut profile: Vec<usize> = (0..self.labels.len())
            .filter(|&u| u != v && self.adj[v][u] > 0)
            .map(|u| self.adj[v][u])
            .collect();
        profile.sort_unstable();
        (self.labels[v].clone(), self.adj[v][v], profile)
    }
}

pub(crate) fn isomorphic<L: Ord + Clone>(a: &Labelled<L>, b: &Labelled<L>) -> bool {
    let n = a.labels.len();
    if n != b.labels.len() {
        return false;
    }
    let inv_a: Vec<_> = (0..n).map(|v| a.invariant(v)).collect();
    let inv_b: Vec<_> = (0..n).map(|v| b.invariant(v)).collect();
    let mut sorted_a = inv_a.clone();
    let mut sorted_b = inv_b.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return false;
    }

    // BFS order over `a`, restarting per connected component.
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for root in 0..n {
        if placed[root] {
            continue;
        }
        placed[root] = true;
        let mut head = order.len();
        order.push(root);
        while head < order.len() {
            let v = order[head];
            head += 1;
            for u in 0..n {
                if !placed[u] && a.adj[v][u] > 0 {
                    placed[u] = true;
                    order.push(u);
                }
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search(a, b, &inv_a, &inv_b, &order, 0, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn search<L: Ord + Clone, I: PartialEq>(
    a: &Labelled<L>,
    b: &Labelled<L>,
    inv_a: &[I],
    inv_b: &[I],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..b.labels.len() {
        if used[w] || inv_a[v] != inv_b[w] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| a.adj[v][u] == b.adj[w][map[u]]);
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if search(a, b, inv_a, inv_b, order, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}
