//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use common::*;
use stabred::basechange::{search_splittings, transform};
use stabred::contract::{contract_chains, contract_component};
use stabred::localmodel::{chain_multiplicities, jung_hirzebruch, node_params, resolve_node};
use stabred::pipeline::StageGraph;
use stabred::saito::{saito_check, ViolationReason};
use stabred::{probe_minimality, run, Error, FiberGraph, ReducedGraph, SplittingPlan};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn jh_exhaustive() -> Outcome {
    let mut pairs = 0;
    for n in 2..=200i64 {
        for r in 1..n {
            if n.gcd(&r) != 1 {
                continue;
            }
            let terms = jung_hirzebruch(&b(n), &b(r)).map_err(|e| format!("({n},{r}): {e}"))?;
            ensure!(terms.iter().all(|t| *t >= b(2)), "({n},{r}): term below 2 in {terms:?}");
            let value = eval_hj(&terms);
            ensure!(value == BigRational::new(b(n), b(r)), "({n},{r}): evaluates to {value}");
            pairs += 1;
        }
    }
    Ok(format!("{pairs} coprime pairs"))
}

fn a_series() -> Outcome {
    for k in 2..=50i64 {
        let params = node_params(&b(1), &b(1), &b(k), 0).map_err(|e| e.to_string())?;
        let chain = resolve_node(&params, &params.a_dd, &params.b_dd).map_err(|e| e.to_string())?;
        ensure!(chain.len() as i64 == k - 1, "k={k}: chain length {}", chain.len());
        ensure!(
            chain.entries.iter().all(|e| e.b == b(2) && e.mu == b(1)),
            "k={k}: {:?}",
            chain.entries
        );
    }
    Ok("k = 2..=50".into())
}

fn multiplicity_oracle() -> Outcome {
    let mut rng = rng(0x6d75);
    for case in 0..500 {
        let n = rng.gen_range(2..=60i64);
        let r = loop {
            let r = rng.gen_range(1..n);
            if n.gcd(&r) == 1 {
                break r;
            }
        };
        let m2 = rng.gen_range(1..=40i64);
        let m1 = (-r * m2).mod_floor(&n) + n * rng.gen_range(0..=3i64);
        let m1 = if m1 == 0 { n } else { m1 };
        let bs = jung_hirzebruch(&b(n), &b(r)).map_err(|e| e.to_string())?;
        let mus = chain_multiplicities(&bs, &b(m2), &b(m1))
            .map_err(|e| format!("case {case} (n={n}, r={r}, m2={m2}, m1={m1}): {e}"))?;
        let oracle = dense_chain_solve(&bs, &b(m2), &b(m1));
        ensure!(
            mus.iter().zip(&oracle).all(|(x, y)| BigRational::from_integer(x.clone()) == *y),
            "case {case}: {mus:?} vs oracle {oracle:?}"
        );
        let ext: Vec<BigInt> = std::iter::once(b(m2)).chain(mus.iter().cloned()).chain([b(m1)]).collect();
        ensure!(mus.iter().all(|m| *m >= b(1)), "case {case}: non-positive {mus:?}");
        for j in 1..ext.len() - 1 {
            ensure!(
                &ext[j - 1] + &ext[j + 1] == &bs[j - 1] * &ext[j],
                "case {case}: recurrence fails at {j}"
            );
        }
        let gcds: BTreeSet<BigInt> = ext.windows(2).map(|w| w[0].gcd(&w[1])).collect();
        ensure!(gcds.len() == 1, "case {case}: adjacent gcds {gcds:?}");
    }
    Ok("500 cases".into())
}

fn saito_fixtures() -> Outcome {
    use ViolationReason::*;
    let cases: Vec<(&str, FiberGraph, Vec<(&str, ViolationReason)>)> = vec![
        ("fe p=0", fe(0), vec![]),
        ("fe p=2", fe(2), vec![("F", NotRational)]),
        ("bridge p=2", bridge(2), vec![]),
        ("chain 1,3,2,1 p=3", chain(3, &[1, 3, 2, 1]), vec![]),
        ("hub p=3", hub(3), vec![("H", WrongContactCount)]),
        (
            "hub6 p=2",
            hub6(2),
            vec![
                ("B", WrongContactCount),
                ("B", PDivisibleNeighbor),
                ("H", WrongContactCount),
                ("H", PDivisibleNeighbor),
            ],
        ),
        (
            "hub6 p=3",
            hub6(3),
            vec![
                ("A", WrongContactCount),
                ("A", PDivisibleNeighbor),
                ("H", WrongContactCount),
                ("H", PDivisibleNeighbor),
            ],
        ),
        ("irreducible p=2", irreducible(2), vec![]),
    ];
    for (name, g, expected) in &cases {
        let report = saito_check(g);
        let got: BTreeSet<(String, ViolationReason)> =
            report.violations.iter().map(|v| (v.id.to_string(), v.reason)).collect();
        let want: BTreeSet<(String, ViolationReason)> =
            expected.iter().map(|(id, r)| (id.to_string(), *r)).collect();
        ensure!(got == want, "{name}: got {got:?}, expected {want:?}");
        ensure!(report.satisfied == expected.is_empty(), "{name}: verdict mismatch");
    }
    Ok(format!("{} fixtures", cases.len()))
}

fn fe_pipeline() -> Outcome {
    let g = fe(5);
    let report = run(&g, None).map_err(|e| e.to_string())?;
    ensure!(report.degree_n == b(2), "n = {}", report.degree_n);
    let resolved = transform(&g, &b(2), &SplittingPlan::new()).map_err(|e| e.to_string())?;
    let expected = graph(5, &[("F'", 2, 1), ("E'", 0, 1)], &[("F'", "E'"), ("F'", "E'")]);
    ensure!(resolved == expected, "transform gave {resolved:?}");
    let stable = ReducedGraph::new([("S", b(2))], [("S", "S")]).unwrap();
    ensure!(report.stable_graph.is_isomorphic(&stable), "stable graph {:?}", report.stable_graph);
    ensure!(
        oracle_pa(&report.stable_graph) == b(3) && oracle_genus(&g) == Some(b(3)),
        "p_a / genus mismatch"
    );
    Ok("n=2, F'(2,1)=E'(0,1), genus-2 vertex with a loop, p_a=3".into())
}

/// Checks every stage of `report` against the oracle genus `want`.
fn stages_conserve(report: &stabred::PipelineReport, want: &BigInt) -> Result<(), String> {
    for stage in &report.stages {
        let got = match &stage.graph {
            StageGraph::Fiber(h) => oracle_genus(h),
            StageGraph::Reduced(r) => Some(oracle_pa(r)),
        };
        ensure!(got.as_ref() == Some(want), "stage {}: genus {got:?}, expected {want}", stage.stage);
    }
    ensure!(oracle_pa(&report.stable_graph) == *want, "stable p_a differs");
    Ok(())
}

fn genus_conservation() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(0x9e1);
    let (mut ambiguous, mut nontrivial) = (0, 0);
    for case in 0..200 {
        let g = if case % 2 == 0 {
            random_ramified_graph(&mut rng, 4)
        } else {
            random_saito_graph(&mut rng, 4)
        };
        let want = oracle_genus(&g).ok_or_else(|| format!("case {case}: oracle genus undefined"))?;
        match run(&g, None) {
            Ok(report) => {
                if report.degree_n > b(1) {
                    nontrivial += 1;
                }
                stages_conserve(&report, &want).map_err(|e| format!("case {case}: {e}"))?;
            }
            Err(Error::AmbiguousSplitting(graphs)) => {
                ambiguous += 1;
                ensure!(graphs.iter().all(|s| oracle_pa(s) == want), "case {case}: ambiguous p_a");
                let n = stabred::saito::minimal_degree(&g).unwrap().minimal_degree;
                for (plan, _) in search_splittings(&g, &n).map_err(|e| e.to_string())? {
                    let report = run(&g, Some(&plan)).map_err(|e| format!("case {case} {plan:?}: {e}"))?;
                    stages_conserve(&report, &want).map_err(|e| format!("case {case} {plan:?}: {e}"))?;
                }
            }
            Err(e) => return Err(format!("case {case}: {e}")),
        }
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(60), "took {took:?}");
    Ok(format!(
        "200 graphs ({nontrivial} with n > 1, {ambiguous} ambiguous, checked per plan) in {:.2}s",
        took.as_secs_f64()
    ))
}

fn minimality_probe() -> Outcome {
    let fixtures = [
        ("fe", fe(0)),
        ("fe p=5", fe(5)),
        ("hub", hub(0)),
        ("hub_a2", hub_a2(0)),
        ("hub6", hub6(0)),
        ("hub6 p=5", hub6(5)),
        ("bridge", bridge(2)),
        ("irreducible", irreducible(0)),
    ];
    let mut probed = 0;
    for (name, g) in &fixtures {
        run(g, None).map_err(|e| format!("{name}: {e}"))?;
        for outcome in probe_minimality(g).map_err(|e| format!("{name}: {e}"))? {
            ensure!(!outcome.semi_stable, "{name}: degree {} already reduced", outcome.divisor);
            probed += 1;
        }
    }
    Ok(format!("{} fixtures, {probed} proper divisors", fixtures.len()))
}

fn round_trip() -> Outcome {
    let mut rng = rng(0xb10);
    let mut done = 0;
    while done < 200 {
        let p = [0, 2, 3, 5][rng.gen_range(0..4)];
        let base = random_reduced(&mut rng, p);
        let g = random_blow_ups(&mut rng, base, 3);
        if g.edges().is_empty() {
            continue;
        }
        let e = g.edges()[rng.gen_range(0..g.edges().len())].clone();
        let before = oracle_genus(&g);
        let (up, x) = g.blow_up_edge(&e).map_err(|e| e.to_string())?;
        ensure!(oracle_genus(&up) == before, "blow-up changed genus of {g:?}");
        let down = contract_component(&up, &x).map_err(|e| e.to_string())?;
        ensure!(down.is_isomorphic(&g), "round trip differs for edge {e} of {g:?}");
        ensure!(oracle_genus(&down) == before, "contraction changed genus");
        done += 1;
    }
    Ok("200 random graphs".into())
}

fn contraction_traces() -> Outcome {
    let cases: Vec<(&str, FiberGraph, Vec<(&str, i64)>)> = vec![
        ("1,2,1", chain(0, &[1, 2, 1]), vec![("E1", 2)]),
        ("1,3,2,1", chain(0, &[1, 3, 2, 1]), vec![("E1", 3), ("E2", 2)]),
        (
            "loop",
            graph(0, &[("C", 1, 1), ("E", 0, 2)], &[("C", "E"), ("C", "E")]),
            vec![("E", 2)],
        ),
    ];
    for (name, g, expected) in &cases {
        let (out, trace) = contract_chains(g).map_err(|e| format!("{name}: {e}"))?;
        let got: Vec<(String, BigInt)> = trace.steps.iter().map(|s| (s.id.to_string(), s.mult.clone())).collect();
        let want: Vec<(String, BigInt)> = expected.iter().map(|(id, m)| (id.to_string(), b(*m))).collect();
        ensure!(got == want, "{name}: trace {got:?}");
        ensure!(
            trace.steps.iter().all(|s| s.self_intersection == -BigInt::one()),
            "{name}: a step was not a (-1)-curve"
        );
        ensure!(out.components().all(|c| c.mult.is_one()), "{name}: not reduced");
        ensure!(oracle_genus(&out) == oracle_genus(g), "{name}: genus changed");
    }
    let loop_out = contract_chains(&cases[2].1).unwrap().0;
    ensure!(loop_out.loop_count(&"C".into()) == 1, "loop case gave no self-loop");
    Ok("3 fixtures".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("continued fractions exhaustive for n <= 200", jh_exhaustive),
        ("A_{k-1} chains for k in 2..=50", a_series),
        ("chain multiplicities against dense solve", multiplicity_oracle),
        ("tameness criterion fixtures", saito_fixtures),
        ("F/E pipeline fixture", fe_pipeline),
        ("genus conservation on random graphs", genus_conservation),
        ("minimality probe on fixtures", minimality_probe),
        ("blow-up / contract round trip", round_trip),
        ("chain contraction traces", contraction_traces),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
