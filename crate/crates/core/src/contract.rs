//! Blowing down (-1)-curves inside chains until the fiber is reduced, then
//! collapsing unstable rational vertices.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibergraph::{ComponentId, Edge, FiberGraph, ReducedGraph};

/// One blow-down: the component, its multiplicity and its self-intersection
/// at the moment it was contracted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionStep {
    pub id: ComponentId,
    #[serde(serialize_with = "crate::json::int")]
    pub mult: BigInt,
    #[serde(serialize_with = "crate::json::int")]
    pub self_intersection: BigInt,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ContractionTrace {
    pub steps: Vec<ContractionStep>,
}

impl ContractionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.id.as_str()).collect()
    }
}

/// Blows down the rational (-1)-curve `c`.
///
/// `c` must meet the rest of the fiber in two points (or in one, for a leaf).
/// Its two neighbours become adjacent; when both points lie on the same
/// component the result carries a self-loop and is no longer SNC.
pub fn contract_component(g: &FiberGraph, c: &ComponentId) -> Result<FiberGraph> {
    let comp = g.component(c)?;
    let refuse = |reason: String| Error::NotContractible {
        id: c.clone(),
        reason,
    };
    if !comp.genus.is_zero() {
        return Err(refuse(format!("genus {} > 0", comp.genus)));
    }
    if g.loop_count(c) > 0 {
        return Err(refuse("component meets itself".into()));
    }
    let s = g
        .self_intersection(c)
        .map_err(|e| refuse(format!("no self-intersection: {e}")))?;
    if s != -BigInt::one() {
        return Err(refuse(format!("self-intersection {s}, expected -1")));
    }
    let nbrs: Vec<ComponentId> = g.neighbours(c).cloned().collect();
    let extra = match nbrs.as_slice() {
        [_] => None,
        [x, y] => Some(Edge::new(x.clone(), y.clone())),
        _ => return Err(refuse(format!("meets the rest in {} points", nbrs.len()))),
    };
    g.without(c, extra)
}

/// Runs of adjacent non-reduced components, each sorted by id, ordered by
/// their smallest id.
fn non_reduced_runs(g: &FiberGraph) -> Result<Vec<Vec<ComponentId>>> {
    let heavy: BTreeSet<&ComponentId> = g
        .components()
        .filter(|c| c.mult > BigInt::one())
        .map(|c| &c.id)
        .collect();
    for id in &heavy {
        let c = g.component(id)?;
        if !c.genus.is_zero() || g.loop_count(id) > 0 || g.valence(id) != 2 {
            return Err(Error::PreconditionViolated(format!(
                "non-reduced component `{id}` (genus {}, valence {}) is not a chain member",
                c.genus,
                g.valence(id)
            )));
        }
    }
    let mut seen = BTreeSet::new();
    let mut runs = Vec::new();
    for &start in &heavy {
        if !seen.insert(start) {
            continue;
        }
        let mut run = vec![start.clone()];
        let mut stack = vec![start];
        let mut touches_reduced = false;
        while let Some(x) = stack.pop() {
            for y in g.neighbours(x) {
                if !heavy.contains(y) {
                    touches_reduced = true;
                } else if seen.insert(y) {
                    run.push(y.clone());
                    stack.push(y);
                }
            }
        }
        if !touches_reduced {
            return Err(Error::PreconditionViolated(format!(
                "chain through `{start}` never reaches a reduced component"
            )));
        }
        run.sort();
        runs.push(run);
    }
    Ok(runs)
}

/// Contracts non-reduced chain components one at a time until every
/// multiplicity is 1.
///
/// In each step the first chain (by smallest id) loses its component of
/// largest multiplicity, smallest id first on ties; that component must
/// exceed both neighbours and be a (-1)-curve.
pub fn contract_chains(g: &FiberGraph) -> Result<(FiberGraph, ContractionTrace)> {
    let mut current = g.clone();
    let mut trace = ContractionTrace::default();
    loop {
        let runs = non_reduced_runs(&current)?;
        let Some(run) = runs.first() else {
            return Ok((current, trace));
        };
        let target = run
            .iter()
            .max_by(|x, y| {
                let (mx, my) = (current.mult(x).unwrap(), current.mult(y).unwrap());
                mx.cmp(my).then_with(|| y.cmp(x))
            })
            .expect("runs are non-empty")
            .clone();
        let mult = current.mult(&target)?.clone();
        if let Some(n) = current.neighbours(&target).find(|n| current.mult(n).unwrap() >= &mult) {
            return Err(Error::PreconditionViolated(format!(
                "`{target}` (mult {mult}) does not exceed its neighbour `{n}`"
            )));
        }
        let s = current.self_intersection(&target)?;
        if s != -BigInt::one() {
            return Err(Error::PreconditionViolated(format!(
                "`{target}` has self-intersection {s}, expected -1"
            )));
        }
        current = contract_component(&current, &target)?;
        trace.steps.push(ContractionStep {
            id: target,
            mult,
            self_intersection: s,
        });
    }
}

fn reduced_of(g: &FiberGraph) -> Result<ReducedGraph> {
    ReducedGraph::new(
        g.components().map(|c| (c.id.clone(), c.genus.clone())),
        g.edges().iter().map(|e| {
            let (a, b) = e.ends();
            (a.clone(), b.clone())
        }),
    )
}

/// One stabilization step: drops the smallest-id rational vertex of valence
/// at most 2, joining its two branches when it has two. `None` once stable.
pub fn stabilize_step(g: &ReducedGraph) -> Result<Option<ReducedGraph>> {
    let Some(v) = g
        .components()
        .find(|(id, genus)| genus.is_zero() && g.valence(id) <= 2)
        .map(|(id, _)| id.clone())
    else {
        return Ok(None);
    };
    let incident: Vec<&Edge> = g.edges().iter().filter(|e| e.touches(&v)).collect();
    let joined = match incident.as_slice() {
        [] | [_] => None,
        [e, f] => Some(Edge::new(
            e.other(&v).expect("incident").clone(),
            f.other(&v).expect("incident").clone(),
        )),
        _ => {
            return Err(Error::InvalidGraph(format!(
                "rational vertex `{v}` is an isolated loop"
            )))
        }
    };
    if g.len() == 1 {
        return Err(Error::InvalidGraph(format!("cannot remove the last vertex `{v}`")));
    }
    let mut next = g.clone();
    next.remove_vertex(&v);
    if let Some(e) = joined {
        next.push_edge(e);
    }
    Ok(Some(next))
}

/// Stable dual graph of a reduced fiber of genus at least 2.
pub fn to_stable(g: &FiberGraph) -> Result<ReducedGraph> {
    if let Some(c) = g.components().find(|c| !c.mult.is_one()) {
        return Err(Error::PreconditionViolated(format!(
            "`{}` has multiplicity {}",
            c.id, c.mult
        )));
    }
    let genus = g.genus()?;
    if genus < BigInt::from(2) {
        return Err(Error::GenusTooSmall(genus));
    }
    let mut current = reduced_of(g)?;
    while let Some(next) = stabilize_step(&current)? {
        current = next;
    }
    Ok(current)
}
