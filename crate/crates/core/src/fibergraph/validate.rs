use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::FiberGraph;
use crate::arith::char_divides;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Connected,
    NoSelfLoops,
    IntegralSelfIntersection,
    /// No edge has both endpoint multiplicities divisible by p.
    TameNodes,
    IntegralGenus,
    /// Not a validity condition; the pipeline needs genus ≥ 2.
    GenusAtLeastTwo,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Connected => "connected",
            CheckKind::NoSelfLoops => "no-self-loops",
            CheckKind::IntegralSelfIntersection => "integral-self-intersection",
            CheckKind::TameNodes => "tame-nodes",
            CheckKind::IntegralGenus => "integral-genus",
            CheckKind::GenusAtLeastTwo => "genus-at-least-two",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, details: Vec<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: details.is_empty(),
            details,
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult::new(name, Vec::new())
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            CheckResult::pass(name)
        } else {
            CheckResult::new(name, vec![detail()])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    /// Fiber genus, when adjunction gives a non-negative integer.
    #[serde(serialize_with = "crate::json::opt_int")]
    pub genus: Option<BigInt>,
    /// Necessary-condition failures for minimality of the SNC model.
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn check(&self, kind: CheckKind) -> &CheckResult {
        self.checks
            .iter()
            .find(|c| c.name == kind.as_str())
            .expect("every kind is checked")
    }

    /// All structural checks pass (genus ≥ 2 not required).
    pub fn is_valid(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.name != CheckKind::GenusAtLeastTwo.as_str())
            .all(|c| c.passed)
    }

    pub fn pipeline_ready(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.details.join("; ")))
            .collect()
    }
}

/// Runs every structural check on `g` and reports the outcome of each.
pub fn validate(g: &FiberGraph) -> ValidationReport {
    let mut checks = Vec::new();
    checks.push(CheckResult::from_bool(CheckKind::Connected.as_str(), g.is_connected(), || {
        "fiber is disconnected".into()
    }));

    let loops: Vec<String> = g
        .edges()
        .iter()
        .filter(|e| e.is_loop())
        .map(|e| format!("component `{}` meets itself", e.ends().0))
        .collect();
    checks.push(CheckResult::new(CheckKind::NoSelfLoops.as_str(), loops));

    let mut non_integral = Vec::new();
    if g.len() > 1 {
        for c in g.components() {
            if g.self_intersection(&c.id).is_err() {
                let ratio = g.self_intersection_ratio(&c.id).expect("known id");
                non_integral.push(format!("`{}`: C² = {}", c.id, ratio));
            }
        }
    }
    checks.push(CheckResult::new(
        CheckKind::IntegralSelfIntersection.as_str(),
        non_integral,
    ));

    let p = g.residue_char();
    let wild: Vec<String> = g
        .edges()
        .iter()
        .filter(|e| {
            let (a, b) = e.ends();
            char_divides(p, &g.components[a].mult) && char_divides(p, &g.components[b].mult)
        })
        .map(|e| format!("both multiplicities at {e} divisible by {p}"))
        .collect();
    checks.push(CheckResult::new(CheckKind::TameNodes.as_str(), wild));

    let genus = g.genus();
    checks.push(CheckResult::from_bool(CheckKind::IntegralGenus.as_str(), genus.is_ok(), || {
        genus.as_ref().err().map(|e| e.to_string()).unwrap_or_default()
    }));
    let genus = genus.ok();
    let two = BigInt::from(2);
    checks.push(CheckResult::from_bool(
        CheckKind::GenusAtLeastTwo.as_str(),
        genus.as_ref().is_some_and(|x| *x >= two),
        || match &genus {
            Some(x) => format!("genus {x} < 2"),
            None => "genus undefined".into(),
        },
    ));

    let mut warnings = Vec::new();
    if g.len() > 1 {
        for c in g.components() {
            if c.genus.is_zero()
                && g.valence(&c.id) <= 2
                && g.self_intersection(&c.id).is_ok_and(|s| s == -BigInt::one())
            {
                warnings.push(format!(
                    "`{}` is a rational (-1)-curve meeting the rest in at most two points; the model may not be minimal",
                    c.id
                ));
            }
        }
    }

    ValidationReport {
        checks,
        genus,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibergraph::Component;

    #[test]
    fn irreducible_fiber_is_valid() {
        let g = FiberGraph::new(0, [Component::new("C", 2, 1)], Vec::<(&str, &str)>::new()).unwrap();
        let r = validate(&g);
        assert!(r.pipeline_ready(), "{r:?}");
        assert_eq!(r.genus, Some(BigInt::from(2)));
    }

    #[test]
    fn fe_fixture_is_valid() {
        let g = FiberGraph::new(
            5,
            [Component::new("F", 1, 2), Component::new("E", 0, 1)],
            [("F", "E"), ("F", "E")],
        )
        .unwrap();
        let r = validate(&g);
        assert!(r.pipeline_ready(), "{r:?}");
        assert_eq!(r.genus, Some(BigInt::from(3)));
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn wild_node_is_flagged() {
        let g = FiberGraph::new(
            2,
            [Component::new("A", 1, 2), Component::new("B", 1, 2)],
            [("A", "B"), ("A", "B")],
        )
        .unwrap();
        let r = validate(&g);
        assert!(!r.check(CheckKind::TameNodes).passed);
        assert!(r.check(CheckKind::IntegralSelfIntersection).passed);
        assert!(!r.is_valid());
    }

    #[test]
    fn disconnected_and_non_integral() {
        let g = FiberGraph::new(
            0,
            [Component::new("A", 1, 2), Component::new("B", 1, 1), Component::new("C", 1, 1)],
            [("A", "B")],
        )
        .unwrap();
        let r = validate(&g);
        assert!(!r.check(CheckKind::Connected).passed);
        assert!(!r.check(CheckKind::IntegralSelfIntersection).passed);
    }

    #[test]
    fn minus_one_chain_member_warns() {
        let g = FiberGraph::new(
            0,
            [Component::new("A", 1, 1), Component::new("E", 0, 2), Component::new("B", 1, 1)],
            [("A", "E"), ("E", "B")],
        )
        .unwrap();
        let r = validate(&g);
        assert!(r.is_valid());
        assert_eq!(r.warnings.len(), 1);
    }
}
