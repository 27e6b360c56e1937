//! Principal components, maximal chains and Saito's tameness criterion.
//!
//! A component is *principal* when it has positive genus or meets the rest
//! of the fiber in more than two points. Everything else is a rational curve
//! with at most two contacts and lives on a chain. When the criterion holds,
//! the lcm of the principal multiplicities is the degree of the minimal tame
//! extension realizing stable reduction.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{char_divides, lcm_all};
use crate::error::{Error, Result};
use crate::fibergraph::{validate, ComponentId, FiberGraph};

pub fn is_principal(g: &FiberGraph, c: &ComponentId) -> Result<bool> {
    let comp = g.component(c)?;
    Ok(comp.genus.is_positive() || g.valence(c) > 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationReason {
    NotRational,
    WrongContactCount,
    PDivisibleNeighbor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub id: ComponentId,
    pub reason: ViolationReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaitoReport {
    pub satisfied: bool,
    pub violations: Vec<Violation>,
}

/// Checks that every component with multiplicity divisible by `p` is
/// rational, meets the rest of the fiber in exactly two points, and has
/// neighbours of multiplicity prime to `p`.
pub fn saito_check(g: &FiberGraph) -> SaitoReport {
    let p = g.residue_char();
    let mut violations = Vec::new();
    for c in g.components() {
        if !char_divides(p, &c.mult) {
            continue;
        }
        if !c.genus.is_zero() {
            violations.push(Violation {
                id: c.id.clone(),
                reason: ViolationReason::NotRational,
            });
        }
        if g.valence(&c.id) != 2 {
            violations.push(Violation {
                id: c.id.clone(),
                reason: ViolationReason::WrongContactCount,
            });
        }
        if g.neighbours(&c.id).any(|n| char_divides(p, &g.component(n).expect("edge end").mult)) {
            violations.push(Violation {
                id: c.id.clone(),
                reason: ViolationReason::PDivisibleNeighbor,
            });
        }
    }
    SaitoReport {
        satisfied: violations.is_empty(),
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipalSet {
    pub ids: BTreeSet<ComponentId>,
    #[serde(serialize_with = "crate::json::int")]
    pub minimal_degree: BigInt,
}

/// Principal components and the lcm of their multiplicities.
///
/// Requires a valid graph of genus ≥ 2 satisfying Saito's criterion.
pub fn minimal_degree(g: &FiberGraph) -> Result<PrincipalSet> {
    let report = validate(g);
    if !report.is_valid() {
        return Err(Error::InvalidGraph(report.failures().join(", ")));
    }
    let saito = saito_check(g);
    if !saito.satisfied {
        return Err(Error::SaitoViolated(describe(&saito)));
    }
    if !report.pipeline_ready() {
        return Err(Error::NoPrincipalComponents);
    }
    let ids: BTreeSet<ComponentId> = g
        .ids()
        .filter(|c| is_principal(g, c).expect("known id"))
        .cloned()
        .collect();
    if ids.is_empty() {
        return Err(Error::NoPrincipalComponents);
    }
    let minimal_degree = lcm_all(ids.iter().map(|c| g.mult(c).expect("known id")));
    Ok(PrincipalSet { ids, minimal_degree })
}

pub(crate) fn describe(report: &SaitoReport) -> String {
    report
        .violations
        .iter()
        .map(|v| format!("{} ({:?})", v.id, v.reason))
        .collect::<Vec<_>>()
        .join(", ")
}

/// A maximal chain of non-principal components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    /// Members in order along the chain.
    pub members: Vec<ComponentId>,
    /// Outer component met by the first member, if any.
    pub start: Option<ComponentId>,
    /// Outer component met by the last member, if any.
    pub end: Option<ComponentId>,
    /// The members close up on themselves.
    pub is_loop: bool,
}

impl Chain {
    /// Multiplicities `[a_0, a_1, …, a_l, a_{l+1}]`, outer ends included when present.
    pub fn mults(&self, g: &FiberGraph) -> Vec<BigInt> {
        self.start
            .iter()
            .chain(&self.members)
            .chain(self.end.iter())
            .map(|c| g.mult(c).expect("chain member").clone())
            .collect()
    }
}

/// Decomposes the non-principal components of `g` into maximal chains,
/// ordered by their smallest member id.
pub fn maximal_chains(g: &FiberGraph) -> Vec<Chain> {
    let chain_set: BTreeSet<&ComponentId> = g
        .ids()
        .filter(|c| !is_principal(g, c).expect("known id"))
        .collect();
    let inside = |c: &ComponentId| g.neighbours(c).filter(|n| chain_set.contains(n)).count();
    let outside = |c: &ComponentId| -> Vec<ComponentId> {
        g.neighbours(c).filter(|n| !chain_set.contains(n)).cloned().collect()
    };

    let mut seen: BTreeSet<&ComponentId> = BTreeSet::new();
    let mut chains = Vec::new();
    for &c in &chain_set {
        if seen.contains(c) {
            continue;
        }
        // Gather the connected piece of the chain subgraph containing c.
        let mut piece = vec![c];
        let mut stack = vec![c];
        seen.insert(c);
        while let Some(x) = stack.pop() {
            for n in g.neighbours(x) {
                if let Some(&n) = chain_set.get(n) {
                    if seen.insert(n) {
                        piece.push(n);
                        stack.push(n);
                    }
                }
            }
        }
        piece.sort();
        let start = piece.iter().copied().find(|x| inside(x) < 2);
        let is_loop = start.is_none();
        let first = start.unwrap_or(piece[0]);

        let mut members = vec![first.clone()];
        let mut prev: Option<&ComponentId> = None;
        let mut cur = first;
        loop {
            let next = g
                .neighbours(cur)
                .filter(|n| chain_set.contains(n))
                .find(|n| Some(*n) != prev && !members.contains(n));
            match next {
                Some(n) => {
                    prev = Some(cur);
                    cur = n;
                    members.push(n.clone());
                }
                None => break,
            }
        }

        let (start_outer, end_outer) = if is_loop {
            (None, None)
        } else if members.len() == 1 {
            let out = outside(first);
            (out.first().cloned(), out.get(1).cloned())
        } else {
            (
                outside(first).first().cloned(),
                outside(members.last().expect("non-empty")).first().cloned(),
            )
        };
        chains.push(Chain {
            members,
            start: start_outer,
            end: end_outer,
            is_loop,
        });
    }
    chains
}

/// Every maximal chain is open and meets a principal component at one end at least.
pub fn check_chains(g: &FiberGraph) -> Result<()> {
    for chain in maximal_chains(g) {
        if chain.is_loop || (chain.start.is_none() && chain.end.is_none()) {
            let names: Vec<&str> = chain.members.iter().map(ComponentId::as_str).collect();
            return Err(Error::ChainCondition(format!("[{}]", names.join(", "))));
        }
    }
    Ok(())
}
