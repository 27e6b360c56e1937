//! Tame base change of degree `n` followed by normalization and minimal
//! desingularization, carried out on the dual graph.
//!
//! Over a component `C` of multiplicity `m` the normalized pullback is a
//! cyclic cover of degree `gcd(m, n)`, split into `c` copies of multiplicity
//! `m / gcd(m, n)`. Above a node joining multiplicities `a` and `b` lie
//! `d = gcd(a, b, n)` points; each copy of `C` carries `d / c` of them and is
//! ramified there with index `gcd(m, n) / d`. Riemann–Hurwitz then fixes the
//! genus of every copy.
//!
//! The copy count `c` is forced for rational components (the local monodromy
//! generates a subgroup of index `gcd` of the point counts). For components
//! of positive genus it also depends on global monodromy, which the dual
//! graph cannot see; a [`SplittingPlan`] supplies it, defaulting to 1, and
//! [`search_splittings`] enumerates every consistent choice.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{char_divides, divisors, gcd, gcd3, to_count};
use crate::error::{Error, Result};
use crate::fibergraph::{validate, Component, ComponentId, Edge, FiberGraph};
use crate::localmodel::{node_params, resolve_node, QuotientSingularityParams};

/// Global data the dual graph cannot see.
///
/// `copies` fixes the number of connected components of the cover above a
/// component (rational components have a forced count and may only repeat
/// it). `twists` shifts how the points above a node are matched with the
/// copies of its two ends: point `k` above edge `e` (index into the sorted
/// edge list) lies on copy `k mod c_A` of the a-side and copy
/// `(k + t_e) mod c_B` of the b-side. Only cycles of the graph make twists
/// matter.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplittingPlan {
    copies: BTreeMap<ComponentId, BigInt>,
    twists: BTreeMap<usize, BigInt>,
}

impl SplittingPlan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, id: impl Into<ComponentId>, copies: impl Into<BigInt>) -> Self {
        self.copies.insert(id.into(), copies.into());
        self
    }

    pub fn with_twist(mut self, edge: usize, shift: impl Into<BigInt>) -> Self {
        self.twists.insert(edge, shift.into());
        self
    }

    pub fn insert(&mut self, id: ComponentId, copies: BigInt) {
        self.copies.insert(id, copies);
    }

    pub fn insert_twist(&mut self, edge: usize, shift: BigInt) {
        self.twists.insert(edge, shift);
    }

    pub fn get(&self, id: &ComponentId) -> Option<&BigInt> {
        self.copies.get(id)
    }

    pub fn twist(&self, edge: usize) -> Option<&BigInt> {
        self.twists.get(&edge)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ComponentId, &BigInt)> + '_ {
        self.copies.iter()
    }

    pub fn twists(&self) -> impl Iterator<Item = (usize, &BigInt)> + '_ {
        self.twists.iter().map(|(e, t)| (*e, t))
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty() && self.twists.is_empty()
    }
}

impl Serialize for SplittingPlan {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        struct Copies<'a>(&'a BTreeMap<ComponentId, BigInt>);
        impl Serialize for Copies<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (id, c) in self.0 {
                    map.serialize_entry(id, &crate::json::number(c))?;
                }
                map.end()
            }
        }
        struct Twists<'a>(&'a BTreeMap<usize, BigInt>);
        impl Serialize for Twists<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (e, t) in self.0 {
                    map.serialize_entry(&e.to_string(), &crate::json::number(t))?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("copies", &Copies(&self.copies))?;
        map.serialize_entry("twists", &Twists(&self.twists))?;
        map.end()
    }
}

/// How one base component lifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverData {
    pub base_id: ComponentId,
    #[serde(serialize_with = "crate::json::int")]
    pub copies: BigInt,
    #[serde(serialize_with = "crate::json::int")]
    pub copy_mult: BigInt,
    #[serde(serialize_with = "crate::json::int")]
    pub copy_genus: BigInt,
    /// Degree of each copy over the base component.
    #[serde(serialize_with = "crate::json::int")]
    pub copy_degree: BigInt,
    pub copy_ids: Vec<ComponentId>,
}

/// Common value of `gcd(a_i, a_{i+1}, n)` along a chain `a_0, …, a_{l+1}`.
pub fn chain_split_count(mults: &[BigInt], n: &BigInt) -> Result<BigInt> {
    if mults.is_empty() || !n.is_positive() {
        return Err(Error::InvalidParams("chain_split_count needs mults and n ≥ 1".into()));
    }
    if mults.len() == 1 {
        return Ok(gcd(&mults[0], n));
    }
    let ds: Vec<BigInt> = mults.windows(2).map(|w| gcd3(&w[0], &w[1], n)).collect();
    if ds.iter().any(|d| d != &ds[0]) {
        return Err(Error::InconsistentChain(ds));
    }
    Ok(ds[0].clone())
}

/// Genus of each of the `c` copies above a component of genus `genus` and
/// multiplicity `m`, by Riemann–Hurwitz:
/// `2g' - 2 = δ(2g - 2) + Σ_x (d_x / c)(gcd(m,n)/d_x - 1)` with `δ = gcd(m,n)/c`.
///
/// `node_data` lists the branch multiplicities `(a_x, b_x)` of every node on
/// the component.
pub fn cover_genus(
    genus: &BigInt,
    m: &BigInt,
    n: &BigInt,
    c: &BigInt,
    node_data: &[(BigInt, BigInt)],
) -> Result<BigInt> {
    if !c.is_positive() {
        return Err(Error::InconsistentSplitting(format!("copy count {c} < 1")));
    }
    let total = gcd(m, n);
    if !(&total % c).is_zero() {
        return Err(Error::InconsistentSplitting(format!(
            "{c} copies do not divide the cover degree {total}"
        )));
    }
    let two = BigInt::from(2);
    let mut twice_minus_two = &total * (&two * genus - &two);
    for (a, b) in node_data {
        let d = gcd3(a, b, n);
        if !(&d % c).is_zero() {
            return Err(Error::InconsistentSplitting(format!(
                "{c} copies cannot share the {d} points above a node evenly"
            )));
        }
        twice_minus_two += &total - d;
    }
    let (per_copy, rem) = twice_minus_two.div_rem(c);
    let (half, odd) = (per_copy + &two).div_rem(&two);
    if !rem.is_zero() || !odd.is_zero() || half.is_negative() {
        return Err(Error::InconsistentSplitting(format!(
            "Riemann–Hurwitz gives no integral genus for {c} copies"
        )));
    }
    Ok(half)
}

/// A point of the normalized fiber lying above a node of the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodePoint {
    /// Index of the node in the base graph's sorted edge list.
    pub base_edge: usize,
    /// Which of the `gcd(a, b, n)` points above the node.
    pub index: usize,
    /// Copy of the smaller-id endpoint (the a-branch).
    pub a_side: ComponentId,
    /// Copy of the larger-id endpoint (the b-branch).
    pub b_side: ComponentId,
    pub params: QuotientSingularityParams,
}

/// Special fiber of the normalized base change, before resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizedFiber {
    #[serde(serialize_with = "crate::json::int")]
    pub degree: BigInt,
    pub residue_char: u64,
    pub covers: Vec<CoverData>,
    pub points: Vec<NodePoint>,
}

impl NormalizedFiber {
    pub fn copy_count(&self) -> usize {
        self.covers.iter().map(|c| c.copy_ids.len()).sum()
    }

    pub fn singular_points(&self) -> impl Iterator<Item = &NodePoint> + '_ {
        self.points.iter().filter(|p| !p.params.is_regular())
    }

    pub fn is_connected(&self) -> bool {
        let ids: Vec<&ComponentId> = self.covers.iter().flat_map(|c| &c.copy_ids).collect();
        let Some(&start) = ids.first() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for p in &self.points {
                let next = if &p.a_side == x {
                    &p.b_side
                } else if &p.b_side == x {
                    &p.a_side
                } else {
                    continue;
                };
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        seen.len() == ids.len()
    }

    /// Dual graph of the minimal desingularization: every singular point is
    /// replaced by its Jung–Hirzebruch chain, running from the b-side copy to
    /// the a-side copy.
    pub fn resolve(&self) -> Result<FiberGraph> {
        let mut used: BTreeSet<ComponentId> = BTreeSet::new();
        let mut comps = Vec::new();
        for cover in &self.covers {
            for id in &cover.copy_ids {
                used.insert(id.clone());
                comps.push(Component::new(id.clone(), cover.copy_genus.clone(), cover.copy_mult.clone()));
            }
        }
        let mut edges = Vec::new();
        for point in &self.points {
            if point.params.is_regular() {
                edges.push(Edge::new(point.a_side.clone(), point.b_side.clone()));
                continue;
            }
            let chain = resolve_node(&point.params, &point.params.a_dd, &point.params.b_dd)?;
            let mut prev = point.b_side.clone();
            for (j, entry) in chain.entries.iter().enumerate() {
                let id = unique(&mut used, format!("E[{}.{}]{}", point.base_edge, point.index, j + 1));
                comps.push(Component::new(id.clone(), 0, entry.mu.clone()));
                edges.push(Edge::new(prev, id.clone()));
                prev = id;
            }
            edges.push(Edge::new(prev, point.a_side.clone()));
        }
        FiberGraph::from_parts(self.residue_char, comps, edges)
    }
}

fn unique(used: &mut BTreeSet<ComponentId>, mut name: String) -> ComponentId {
    while used.contains(&ComponentId::from(name.as_str())) {
        name.push('*');
    }
    let id = ComponentId::from(name);
    used.insert(id.clone());
    id
}

fn node_data(g: &FiberGraph, c: &ComponentId) -> Vec<(BigInt, BigInt)> {
    let m = g.mult(c).expect("known id");
    g.neighbours(c)
        .map(|x| (m.clone(), g.mult(x).expect("edge end").clone()))
        .collect()
}

/// gcd of the cover degree and all point counts above nodes on `c`.
fn max_copies(g: &FiberGraph, c: &ComponentId, n: &BigInt) -> BigInt {
    let mut acc = gcd(g.mult(c).expect("known id"), n);
    for (a, b) in node_data(g, c) {
        acc = gcd(&acc, &gcd3(&a, &b, n));
    }
    acc
}

fn copy_count(g: &FiberGraph, c: &Component, n: &BigInt, plan: &SplittingPlan) -> Result<BigInt> {
    let bound = max_copies(g, &c.id, n);
    if c.genus.is_zero() {
        if let Some(req) = plan.get(&c.id) {
            if req != &bound {
                return Err(Error::InconsistentSplitting(format!(
                    "rational component `{}` has exactly {bound} copies, plan asks for {req}",
                    c.id
                )));
            }
        }
        return Ok(bound);
    }
    let copies = plan.get(&c.id).cloned().unwrap_or_else(BigInt::one);
    if !copies.is_positive() || !(&bound % &copies).is_zero() {
        return Err(Error::InconsistentSplitting(format!(
            "`{}` cannot split into {copies} copies (must divide {bound})",
            c.id
        )));
    }
    Ok(copies)
}

fn check_input(g: &FiberGraph, n: &BigInt) -> Result<()> {
    if !n.is_positive() {
        return Err(Error::InvalidParams(format!("degree {n} < 1")));
    }
    if char_divides(g.residue_char(), n) {
        return Err(Error::WildDegree {
            p: g.residue_char(),
            n: n.clone(),
        });
    }
    let report = validate(g);
    if !report.is_valid() {
        return Err(Error::InvalidGraph(report.failures().join(", ")));
    }
    Ok(())
}

/// Normalized pullback of `g` along a tame extension of degree `n`.
pub fn normalize(g: &FiberGraph, n: &BigInt, plan: &SplittingPlan) -> Result<NormalizedFiber> {
    check_input(g, n)?;
    if let Some((id, _)) = plan.iter().find(|(id, _)| !g.contains(id)) {
        return Err(Error::UnknownComponent(id.clone()));
    }
    if let Some((e, _)) = plan.twists().find(|(e, _)| *e >= g.edges().len()) {
        return Err(Error::InvalidParams(format!("twist on edge {e}, graph has {}", g.edges().len())));
    }
    let mut used = BTreeSet::new();
    let mut covers = Vec::with_capacity(g.len());
    let mut copies_of: BTreeMap<&ComponentId, Vec<ComponentId>> = BTreeMap::new();
    for c in g.components() {
        let copies = copy_count(g, c, n, plan)?;
        let genus = cover_genus(&c.genus, &c.mult, n, &copies, &node_data(g, &c.id))?;
        let total = gcd(&c.mult, n);
        let count = to_count(&copies)?;
        let copy_ids: Vec<ComponentId> = if count == 1 {
            vec![unique(&mut used, format!("{}'", c.id))]
        } else {
            (0..count)
                .map(|k| unique(&mut used, format!("{}'{}", c.id, k)))
                .collect()
        };
        copies_of.insert(&c.id, copy_ids.clone());
        covers.push(CoverData {
            base_id: c.id.clone(),
            copy_mult: &c.mult / &total,
            copy_genus: genus,
            copy_degree: &total / &copies,
            copies,
            copy_ids,
        });
    }

    let mut points = Vec::new();
    for (e_idx, e) in g.edges().iter().enumerate() {
        let (a_id, b_id) = e.ends();
        let params = node_params(g.mult(a_id)?, g.mult(b_id)?, n, g.residue_char())?;
        let count = to_count(&params.point_count)?;
        let (a_copies, b_copies) = (&copies_of[a_id], &copies_of[b_id]);
        let shift = plan
            .twist(e_idx)
            .map(|t| to_count(&t.mod_floor(&BigInt::from(b_copies.len()))))
            .transpose()?
            .unwrap_or(0);
        for k in 0..count {
            points.push(NodePoint {
                base_edge: e_idx,
                index: k,
                a_side: a_copies[k % a_copies.len()].clone(),
                b_side: b_copies[(k + shift) % b_copies.len()].clone(),
                params: params.clone(),
            });
        }
    }

    Ok(NormalizedFiber {
        degree: n.clone(),
        residue_char: g.residue_char(),
        covers,
        points,
    })
}

/// Dual graph of the minimal desingularization of the normalized base change.
///
/// Fails when the plan yields a disconnected fiber or one that breaks the
/// fiber relation or genus conservation.
pub fn transform(g: &FiberGraph, n: &BigInt, plan: &SplittingPlan) -> Result<FiberGraph> {
    let normalized = normalize(g, n, plan)?;
    if !normalized.is_connected() {
        return Err(Error::DisconnectedResult);
    }
    let resolved = normalized.resolve()?;
    let report = validate(&resolved);
    if !report.is_valid() {
        return Err(Error::InconsistentSplitting(report.failures().join(", ")));
    }
    let before = g.genus()?;
    if report.genus.as_ref() != Some(&before) {
        return Err(Error::InconsistentSplitting(format!(
            "genus changed from {before} to {:?}",
            report.genus
        )));
    }
    Ok(resolved)
}

/// Edges outside the BFS spanning tree rooted at the smallest id. Twists on
/// tree edges can always be absorbed by relabelling copies.
fn cycle_edges(g: &FiberGraph) -> Vec<usize> {
    let Some(root) = g.ids().next() else {
        return Vec::new();
    };
    let mut seen = BTreeSet::from([root]);
    let mut tree = BTreeSet::new();
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for (i, e) in g.edges().iter().enumerate() {
            if let Some(y) = e.other(x).filter(|_| e.touches(x)) {
                if seen.insert(y) {
                    tree.insert(i);
                    queue.push_back(y);
                }
            }
        }
    }
    (0..g.edges().len()).filter(|i| !tree.contains(i)).collect()
}

/// Calls `f` with every tuple `(i_0, …)` where `i_j < sizes[j]`, in
/// lexicographic order.
fn for_each_index(sizes: &[usize], mut f: impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if sizes.contains(&0) {
        return Ok(());
    }
    let mut cursor = vec![0usize; sizes.len()];
    loop {
        f(&cursor)?;
        let mut pos = sizes.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < sizes[pos] {
                break;
            }
            cursor[pos] = 0;
        }
    }
}

/// Every splitting plan under which the base change is consistent, with the
/// resulting graphs, in lexicographic plan order.
///
/// Copy counts range over the divisors allowed for each positive-genus
/// component; twists range over the non-tree edges whose two ends both
/// split.
pub fn search_splittings(g: &FiberGraph, n: &BigInt) -> Result<Vec<(SplittingPlan, FiberGraph)>> {
    check_input(g, n)?;
    let choices: Vec<(ComponentId, Vec<BigInt>)> = g
        .components()
        .filter(|c| c.genus.is_positive())
        .map(|c| (c.id.clone(), divisors(&max_copies(g, &c.id, n))))
        .collect();
    let sizes: Vec<usize> = choices.iter().map(|(_, ds)| ds.len()).collect();
    let loops = cycle_edges(g);

    let mut out = Vec::new();
    for_each_index(&sizes, |cursor| {
        let base = choices
            .iter()
            .zip(cursor)
            .fold(SplittingPlan::new(), |p, ((id, ds), &i)| p.with(id.clone(), ds[i].clone()));
        let mut counts = BTreeMap::new();
        for c in g.components() {
            match copy_count(g, c, n, &base) {
                Ok(k) => counts.insert(&c.id, k),
                Err(Error::InconsistentSplitting(_)) => return Ok(()),
                Err(e) => return Err(e),
            };
        }
        let twisted: Vec<(usize, usize)> = loops
            .iter()
            .map(|&i| {
                let (a, b) = g.edges()[i].ends();
                to_count(&gcd(&counts[a], &counts[b])).map(|m| (i, m))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|&(_, m)| m > 1)
            .collect();
        let ranges: Vec<usize> = twisted.iter().map(|&(_, m)| m).collect();
        for_each_index(&ranges, |shifts| {
            let plan = twisted
                .iter()
                .zip(shifts)
                .fold(base.clone(), |p, (&(e, _), &t)| p.with_twist(e, t as u64));
            match transform(g, n, &plan) {
                Ok(graph) => out.push((plan, graph)),
                Err(Error::InconsistentSplitting(_) | Error::DisconnectedResult) => {}
                Err(e) => return Err(e),
            }
            Ok(())
        })
    })?;
    if out.is_empty() {
        Err(Error::EmptyResult)
    } else {
        Ok(out)
    }
}
