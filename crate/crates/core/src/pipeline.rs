//! End-to-end stable reduction: validate, check Saito's criterion, take the
//! minimal tame degree, base change and resolve, blow down chains, stabilize.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::arith::divisors;
use crate::basechange::{search_splittings, transform, SplittingPlan};
use crate::contract::{contract_chains, to_stable, ContractionTrace};
use crate::error::{Error, Result};
use crate::fibergraph::{validate, CheckResult, ComponentId, FiberGraph, ReducedGraph};
use crate::saito::{minimal_degree, saito_check};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum StageGraph {
    Fiber(FiberGraph),
    Reduced(ReducedGraph),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub stage: String,
    pub graph: StageGraph,
    pub checks: Vec<CheckResult>,
}

impl Stage {
    fn new(stage: &str, graph: StageGraph, checks: Vec<CheckResult>) -> Result<Self> {
        if let Some(failed) = checks.iter().find(|c| !c.passed) {
            return Err(Error::StageCheckFailed {
                stage: stage.into(),
                check: failed.name.clone(),
            });
        }
        Ok(Stage {
            stage: stage.into(),
            graph,
            checks,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    #[serde(serialize_with = "crate::json::int")]
    pub input_genus: BigInt,
    #[serde(serialize_with = "crate::json::int")]
    pub degree_n: BigInt,
    pub principal: Vec<ComponentId>,
    /// `input`, `resolved`, `semi-stable`, `stable`.
    pub stages: Vec<Stage>,
    pub stable_graph: ReducedGraph,
    pub plans_considered: Vec<SplittingPlan>,
    pub trace: ContractionTrace,
}

impl PipelineReport {
    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.stage == name)
    }
}

fn genus_check(name: &str, got: Option<&BigInt>, want: &BigInt) -> CheckResult {
    CheckResult::from_bool(name, got == Some(want), || match got {
        Some(g) => format!("genus {g}, expected {want}"),
        None => "genus undefined".into(),
    })
}

struct Outcome {
    resolved: FiberGraph,
    semi_stable: FiberGraph,
    trace: ContractionTrace,
    stable: ReducedGraph,
}

fn finish(resolved: FiberGraph) -> Result<Outcome> {
    let (semi_stable, trace) = contract_chains(&resolved)?;
    let stable = to_stable(&semi_stable)?;
    Ok(Outcome {
        resolved,
        semi_stable,
        trace,
        stable,
    })
}

/// Computes the stable dual graph.
///
/// With a plan, only that splitting is used. Without one, every consistent
/// plan is tried; they must agree on the stable graph up to isomorphism,
/// otherwise the distinct answers are returned in
/// [`Error::AmbiguousSplitting`].
pub fn run(g: &FiberGraph, plan: Option<&SplittingPlan>) -> Result<PipelineReport> {
    let principal = minimal_degree(g)?;
    let n = principal.minimal_degree.clone();
    let input_genus = g.genus()?;

    let mut input_checks = validate(g).checks;
    let saito = saito_check(g);
    input_checks.push(CheckResult::from_bool("saito", saito.satisfied, || {
        crate::saito::describe(&saito)
    }));
    let input = Stage::new("input", StageGraph::Fiber(g.clone()), input_checks)?;

    let candidates: Vec<(SplittingPlan, FiberGraph)> = match plan {
        Some(p) => vec![(p.clone(), transform(g, &n, p)?)],
        None => search_splittings(g, &n)?,
    };
    let plans_considered: Vec<SplittingPlan> = candidates.iter().map(|(p, _)| p.clone()).collect();
    let mut outcomes = Vec::with_capacity(candidates.len());
    for (_, resolved) in candidates {
        outcomes.push(finish(resolved)?);
    }

    let mut distinct: Vec<&ReducedGraph> = Vec::new();
    for o in &outcomes {
        if !distinct.iter().any(|s| s.is_isomorphic(&o.stable)) {
            distinct.push(&o.stable);
        }
    }
    if distinct.len() > 1 {
        return Err(Error::AmbiguousSplitting(distinct.into_iter().cloned().collect()));
    }
    let Outcome {
        resolved,
        semi_stable,
        trace,
        stable,
    } = outcomes.swap_remove(0);

    let mut resolved_checks = validate(&resolved).checks;
    resolved_checks.push(genus_check("genus-conserved", resolved.genus().ok().as_ref(), &input_genus));
    let resolved = Stage::new("resolved", StageGraph::Fiber(resolved), resolved_checks)?;

    let semi_checks = vec![
        CheckResult::from_bool("connected", semi_stable.is_connected(), || "fiber is disconnected".into()),
        CheckResult::new(
            "reduced",
            semi_stable
                .components()
                .filter(|c| !c.mult.is_one())
                .map(|c| format!("`{}` has multiplicity {}", c.id, c.mult))
                .collect(),
        ),
        genus_check("genus-conserved", semi_stable.genus().ok().as_ref(), &input_genus),
    ];
    let semi = Stage::new("semi-stable", StageGraph::Fiber(semi_stable), semi_checks)?;

    let stable_checks = vec![
        CheckResult::from_bool("connected", stable.is_connected(), || "graph is disconnected".into()),
        CheckResult::from_bool("stable", stable.is_stable(), || {
            "a rational vertex has valence < 3".into()
        }),
        genus_check("pa-conserved", Some(&stable.pa()), &input_genus),
    ];
    let stable_stage = Stage::new("stable", StageGraph::Reduced(stable.clone()), stable_checks)?;

    Ok(PipelineReport {
        input_genus,
        degree_n: n,
        principal: principal.ids.into_iter().collect(),
        stages: vec![input, resolved, semi, stable_stage],
        stable_graph: stable,
        plans_considered,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeOutcome {
    #[serde(serialize_with = "crate::json::int")]
    pub divisor: BigInt,
    /// Some consistent splitting reached an all-multiplicity-1 fiber.
    pub semi_stable: bool,
    pub detail: String,
}

/// Tries every proper divisor `d` of the minimal degree: base change of
/// degree `d` followed by chain contraction. Minimality means none of them
/// reaches a reduced fiber.
pub fn probe_minimality(g: &FiberGraph) -> Result<Vec<ProbeOutcome>> {
    let n = minimal_degree(g)?.minimal_degree;
    let mut out = Vec::new();
    for d in divisors(&n) {
        if d == n {
            continue;
        }
        let outcome = match search_splittings(g, &d) {
            Err(e) => ProbeOutcome {
                divisor: d,
                semi_stable: false,
                detail: format!("base change failed: {e}"),
            },
            Ok(found) => {
                let mut reached = None;
                let mut last_err = String::new();
                for (plan, graph) in &found {
                    match contract_chains(graph) {
                        Ok((semi, _)) if semi.components().all(|c| c.mult.is_one()) => {
                            reached = Some(plan.clone());
                            break;
                        }
                        Ok(_) => last_err = "non-reduced components remain".into(),
                        Err(e) => last_err = e.to_string(),
                    }
                }
                match reached {
                    Some(plan) => ProbeOutcome {
                        divisor: d,
                        semi_stable: true,
                        detail: format!("reduced fiber reached with plan {plan:?}"),
                    },
                    None => {
                        let max = found
                            .iter()
                            .flat_map(|(_, h)| h.components().map(|c| c.mult.clone()))
                            .max()
                            .unwrap_or_else(BigInt::one);
                        ProbeOutcome {
                            divisor: d,
                            semi_stable: false,
                            detail: format!("max multiplicity {max} after base change; {last_err}"),
                        }
                    }
                }
            }
        };
        out.push(outcome);
    }
    Ok(out)
}
