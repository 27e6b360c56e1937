#![allow(dead_code)]

use num_bigint::BigInt;
use stabred::{Component, FiberGraph};

pub fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn graph(p: u64, comps: &[(&str, i64, i64)], edges: &[(&str, &str)]) -> FiberGraph {
    FiberGraph::new(
        p,
        comps.iter().map(|&(id, g, m)| Component::new(id, g, m)),
        edges.iter().copied(),
    )
    .unwrap()
}

/// F(g=1, m=2) meeting E(g=0, m=1) twice.
pub fn fe(p: u64) -> FiberGraph {
    graph(p, &[("F", 1, 2), ("E", 0, 1)], &[("F", "E"), ("F", "E")])
}

/// Rational hub of multiplicity 3 with two reduced rational leaves and a
/// reduced genus-2 tail.
pub fn hub(p: u64) -> FiberGraph {
    graph(
        p,
        &[("H", 0, 3), ("T1", 0, 1), ("T2", 0, 1), ("T3", 2, 1)],
        &[("H", "T1"), ("H", "T2"), ("H", "T3")],
    )
}

/// Hub with an elliptic tail T3 carrying a further elliptic component U.
pub fn hub_a2(p: u64) -> FiberGraph {
    graph(
        p,
        &[("H", 0, 3), ("T1", 0, 1), ("T2", 0, 1), ("T3", 1, 1), ("U", 1, 1)],
        &[("H", "T1"), ("H", "T2"), ("H", "T3"), ("T3", "U")],
    )
}

/// Rational hub of multiplicity 6 with leaves of multiplicity 3 and 2 and an
/// elliptic tail.
pub fn hub6(p: u64) -> FiberGraph {
    graph(
        p,
        &[("H", 0, 6), ("A", 0, 3), ("B", 0, 2), ("C", 1, 1)],
        &[("H", "A"), ("H", "B"), ("H", "C")],
    )
}

/// Two elliptic components joined through a chain of multiplicities 1, 2, 1.
pub fn bridge(p: u64) -> FiberGraph {
    graph(
        p,
        &[("A", 1, 1), ("E", 0, 2), ("B", 1, 1)],
        &[("A", "E"), ("E", "B")],
    )
}

/// Path `A - E1 - … - Ek - B` with elliptic ends and rational interior.
pub fn chain(p: u64, mults: &[i64]) -> FiberGraph {
    let last = mults.len() - 1;
    let ids: Vec<String> = (0..mults.len())
        .map(|i| match i {
            0 => "A".to_string(),
            i if i == last => "B".to_string(),
            i => format!("E{i}"),
        })
        .collect();
    let comps = mults.iter().enumerate().map(|(i, &m)| {
        let genus = if i == 0 || i == last { 1 } else { 0 };
        Component::new(ids[i].as_str(), genus, m)
    });
    let edges: Vec<(String, String)> = ids.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    FiberGraph::new(p, comps, edges).unwrap()
}

pub fn irreducible(p: u64) -> FiberGraph {
    graph(p, &[("C", 2, 1)], &[])
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabred::saito::saito_check;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected reduced multigraph on 1–4 vertices without self-loops.
pub fn random_reduced(rng: &mut ChaCha8Rng, p: u64) -> FiberGraph {
    let k = rng.gen_range(1..=4);
    let ids: Vec<String> = (0..k).map(|i| format!("C{i}")).collect();
    let comps: Vec<(String, i64)> = ids.iter().map(|id| (id.clone(), rng.gen_range(0..=2))).collect();
    let mut edges = Vec::new();
    for i in 1..k {
        edges.push((ids[rng.gen_range(0..i)].clone(), ids[i].clone()));
    }
    if k > 1 {
        for _ in 0..rng.gen_range(0..=2) {
            let a = rng.gen_range(0..k);
            let b = (a + rng.gen_range(1..k)) % k;
            edges.push((ids[a].clone(), ids[b].clone()));
        }
    }
    FiberGraph::new(p, comps.iter().map(|(id, g)| Component::new(id.as_str(), *g, 1)), edges).unwrap()
}

/// Applies up to `max_steps` random blow-ups of nodes and smooth points.
pub fn random_blow_ups(rng: &mut ChaCha8Rng, mut g: FiberGraph, max_steps: usize) -> FiberGraph {
    for _ in 0..rng.gen_range(0..=max_steps) {
        if !g.edges().is_empty() && rng.gen_bool(0.6) {
            let e = g.edges()[rng.gen_range(0..g.edges().len())].clone();
            g = g.blow_up_edge(&e).unwrap().0;
        } else {
            let ids: Vec<_> = g.ids().cloned().collect();
            let c = &ids[rng.gen_range(0..ids.len())];
            g = g.blow_up_point(c).unwrap().0;
        }
    }
    g
}

/// Random multigraph on 1–5 vertices with multiplicities up to 6; usually
/// fails the fiber relation, callers filter.
pub fn random_weighted(rng: &mut ChaCha8Rng, p: u64) -> Option<FiberGraph> {
    let k = rng.gen_range(1..=5);
    let ids: Vec<String> = (0..k).map(|i| format!("V{i}")).collect();
    let mut edges = Vec::new();
    for i in 1..k {
        edges.push((ids[rng.gen_range(0..i)].clone(), ids[i].clone()));
    }
    if k > 1 {
        for _ in 0..rng.gen_range(0..=2) {
            let a = rng.gen_range(0..k);
            let b = (a + rng.gen_range(1..k)) % k;
            edges.push((ids[a].clone(), ids[b].clone()));
        }
    }
    let comps: Vec<Component> = ids
        .iter()
        .map(|id| Component::new(id.as_str(), if rng.gen_bool(0.6) { 0 } else { rng.gen_range(1..=2) }, rng.gen_range(1..=6)))
        .collect();
    let g = FiberGraph::new(p, comps, edges).unwrap();
    stabred::validate(&g).is_valid().then_some(g)
}

/// A random valid graph of genus ≥ 2 satisfying Saito's criterion.
pub fn random_saito_graph(rng: &mut ChaCha8Rng, max_steps: usize) -> FiberGraph {
    loop {
        let p = [0, 2, 3, 5][rng.gen_range(0..4)];
        let base = if rng.gen_bool(0.5) {
            random_reduced(rng, p)
        } else {
            match random_weighted(rng, p) {
                Some(g) => g,
                None => continue,
            }
        };
        let g = random_blow_ups(rng, base, max_steps);
        if stabred::validate(&g).pipeline_ready() && saito_check(&g).satisfied {
            return g;
        }
    }
}

// ── independent oracles ────────────────────────────────────────────────

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use stabred::ReducedGraph;

/// Exact value of `b_1 - 1/(b_2 - 1/(… - 1/b_k))`, folded from the back.
pub fn eval_hj(terms: &[BigInt]) -> BigRational {
    let mut acc = BigRational::from_integer(terms[terms.len() - 1].clone());
    for b in terms[..terms.len() - 1].iter().rev() {
        acc = BigRational::from_integer(b.clone()) - acc.recip();
    }
    acc
}

/// Solves `μ_{j-1} - b_j μ_j + μ_{j+1} = 0` (boundary `μ_0 = left`,
/// `μ_{k+1} = right`) by dense Gauss–Jordan elimination.
pub fn dense_chain_solve(bs: &[BigInt], left: &BigInt, right: &BigInt) -> Vec<BigRational> {
    let k = bs.len();
    let mut m = vec![vec![BigRational::zero(); k + 1]; k];
    for j in 0..k {
        m[j][j] = -BigRational::from_integer(bs[j].clone());
        if j > 0 {
            m[j][j - 1] = BigRational::one();
        }
        if j + 1 < k {
            m[j][j + 1] = BigRational::one();
        }
    }
    m[0][k] -= BigRational::from_integer(left.clone());
    m[k - 1][k] -= BigRational::from_integer(right.clone());
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r][col].is_zero()).expect("nonsingular");
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=k {
                    let v = &m[col][c] * &f;
                    m[r][c] -= v;
                }
            }
        }
    }
    m.into_iter().map(|row| row[k].clone()).collect()
}

/// Genus of a fiber from its intersection matrix, computed without the
/// library's intersection code. `None` when adjunction is not integral.
pub fn oracle_genus(g: &FiberGraph) -> Option<BigInt> {
    let comps: Vec<_> = g.components().collect();
    let idx = |id: &stabred::ComponentId| comps.iter().position(|c| &c.id == id).unwrap();
    let k = comps.len();
    let mut meet = vec![vec![0i64; k]; k];
    let mut loops = vec![0i64; k];
    for e in g.edges() {
        let (a, b) = e.ends();
        let (i, j) = (idx(a), idx(b));
        if i == j {
            loops[i] += 1;
        } else {
            meet[i][j] += 1;
            meet[j][i] += 1;
        }
    }
    let mut total = BigRational::zero();
    for i in 0..k {
        let mi = BigRational::from_integer(comps[i].mult.clone());
        let off: BigRational = (0..k)
            .map(|j| BigRational::from_integer(BigInt::from(meet[i][j]) * &comps[j].mult))
            .sum();
        let self_int = if k == 1 { BigRational::zero() } else { -off / &mi };
        let pa = BigRational::from_integer(&comps[i].genus + BigInt::from(loops[i]));
        let two = BigRational::from_integer(BigInt::from(2));
        total += mi * (&two * pa - &two - self_int);
    }
    let g2 = total / BigRational::from_integer(BigInt::from(2)) + BigRational::one();
    (g2.is_integer() && !g2.is_negative()).then(|| g2.to_integer())
}

/// Sum of genera plus the cycle rank.
pub fn oracle_pa(g: &ReducedGraph) -> BigInt {
    let genera: BigInt = g.components().map(|(_, x)| x.clone()).sum();
    genera + BigInt::from(g.edges().len() as i64 - g.len() as i64 + 1)
}

/// Like [`random_saito_graph`] but with minimal degree > 1.
pub fn random_ramified_graph(rng: &mut ChaCha8Rng, max_steps: usize) -> FiberGraph {
    loop {
        let g = random_saito_graph(rng, max_steps);
        if stabred::saito::minimal_degree(&g).unwrap().minimal_degree > b(1) {
            return g;
        }
    }
}
