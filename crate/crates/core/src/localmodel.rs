//! Local arithmetic of tame base change at a point of the special fiber.
//!
//! At a smooth point of a component of multiplicity `b` the normalized base
//! change is regular and the component splits into `gcd(b, n)` sheets of
//! multiplicity `b / gcd(b, n)`. At a node where components of
//! multiplicities `a` and `b` cross, there are `gcd(a, b, n)` points above,
//! each a tame cyclic quotient singularity of order
//! `n'' = n·gcd(a,b,n) / (gcd(a,n)·gcd(b,n))` with twist `r` defined by
//! `r·b'' + a'' ≡ 0 (mod n'')`. Its minimal resolution is a chain of rational
//! curves whose self-intersections are the Jung–Hirzebruch expansion of
//! `n''/r` and whose multiplicities solve the fiber relation along the chain.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{char_divides, gcd, gcd3, mod_inverse};
use crate::error::{Error, Result};

/// Base change at a point lying on a single component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneBranchLocal {
    #[serde(serialize_with = "crate::json::int")]
    pub b: BigInt,
    #[serde(serialize_with = "crate::json::int")]
    pub n: BigInt,
    /// Multiplicity of each sheet above the point.
    #[serde(serialize_with = "crate::json::int")]
    pub b_prime: BigInt,
    #[serde(serialize_with = "crate::json::int")]
    pub sheet_count: BigInt,
}

pub fn one_branch(b: &BigInt, n: &BigInt) -> Result<OneBranchLocal> {
    if !b.is_positive() || !n.is_positive() {
        return Err(Error::InvalidParams(format!("one_branch needs b, n ≥ 1 (b={b}, n={n})")));
    }
    let sheets = gcd(b, n);
    Ok(OneBranchLocal {
        b: b.clone(),
        n: n.clone(),
        b_prime: b / &sheets,
        sheet_count: sheets,
    })
}

/// Data of the points above a node after base change of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientSingularityParams {
    #[serde(serialize_with = "crate::json::int")]
    pub a_dd: BigInt,
    #[serde(serialize_with = "crate::json::int")]
    pub b_dd: BigInt,
    #[serde(serialize_with = "crate::json::int")]
    pub n_dd: BigInt,
    /// Least positive residue with `r·b'' + a'' ≡ 0 (mod n'')`; `None` when
    /// `n'' = 1` and the points are regular.
    #[serde(serialize_with = "crate::json::opt_int")]
    pub r: Option<BigInt>,
    /// Number of points above the node, `gcd(a, b, n)`.
    #[serde(serialize_with = "crate::json::int")]
    pub point_count: BigInt,
}

impl QuotientSingularityParams {
    pub fn is_regular(&self) -> bool {
        self.n_dd.is_one()
    }
}

/// Normalization parameters at a node with branch multiplicities `a`, `b`.
pub fn node_params(a: &BigInt, b: &BigInt, n: &BigInt, p: u64) -> Result<QuotientSingularityParams> {
    if !a.is_positive() || !b.is_positive() || !n.is_positive() {
        return Err(Error::InvalidParams(format!(
            "node_params needs a, b, n ≥ 1 (a={a}, b={b}, n={n})"
        )));
    }
    if char_divides(p, a) && char_divides(p, b) {
        return Err(Error::TameAssumptionViolated {
            p,
            a: a.clone(),
            b: b.clone(),
        });
    }
    if char_divides(p, n) {
        return Err(Error::WildDegree { p, n: n.clone() });
    }
    let ga = gcd(a, n);
    let gb = gcd(b, n);
    let d = gcd3(a, b, n);
    let a_dd = a / &ga;
    let b_dd = b / &gb;
    let n_dd = n * &d / (&ga * &gb);
    let r = if n_dd.is_one() {
        None
    } else {
        let inv = mod_inverse(&b_dd, &n_dd).expect("b'' is a unit mod n''");
        Some((-&a_dd * inv).mod_floor(&n_dd))
    };
    Ok(QuotientSingularityParams {
        a_dd,
        b_dd,
        n_dd,
        r,
        point_count: d,
    })
}

/// Jung–Hirzebruch expansion `n/r = b_1 - 1/(b_2 - 1/(… - 1/b_λ))`.
pub fn jung_hirzebruch(n: &BigInt, r: &BigInt) -> Result<Vec<BigInt>> {
    if *n < BigInt::from(2) || !r.is_positive() || r >= n || !gcd(n, r).is_one() {
        return Err(Error::InvalidParams(format!(
            "jung_hirzebruch needs n ≥ 2, 1 ≤ r < n, gcd(n, r) = 1 (n={n}, r={r})"
        )));
    }
    let (mut num, mut den) = (n.clone(), r.clone());
    let mut terms = Vec::new();
    while !den.is_zero() {
        let b = num.div_ceil(&den);
        let next = &b * &den - &num;
        terms.push(b);
        num = std::mem::replace(&mut den, next);
    }
    Ok(terms)
}

/// Multiplicities `μ_1..μ_λ` of a resolution chain with self-intersections
/// `-b_j`, from the fiber relation `μ_{j-1} + μ_{j+1} = b_j μ_j` with
/// boundary values `μ_0 = m2`, `μ_{λ+1} = m1`.
///
/// The two-point boundary problem is solved as a tridiagonal system over the
/// rationals; every entry must come out a positive integer.
pub fn chain_multiplicities(bs: &[BigInt], m2: &BigInt, m1: &BigInt) -> Result<Vec<BigInt>> {
    if let Some(bad) = bs.iter().find(|b| **b < BigInt::from(2)) {
        return Err(Error::InvalidParams(format!("chain entry {bad} < 2")));
    }
    if !m1.is_positive() || !m2.is_positive() {
        return Err(Error::InvalidParams(format!(
            "boundary multiplicities must be positive (m2={m2}, m1={m1})"
        )));
    }
    let solution = solve_chain(bs, m2, m1);
    solution
        .into_iter()
        .enumerate()
        .map(|(i, mu)| {
            if !mu.is_integer() {
                Err(Error::NonIntegralMultiplicity {
                    index: i + 1,
                    value: mu.to_string(),
                })
            } else if !mu.is_positive() {
                Err(Error::NonPositiveMultiplicity {
                    index: i + 1,
                    value: mu.to_string(),
                })
            } else {
                Ok(mu.to_integer())
            }
        })
        .collect()
}

/// Thomas algorithm on `μ_{j-1} - b_j μ_j + μ_{j+1} = 0`.
///
/// The matrix is the negative of a Cartan-type matrix with `b_j ≥ 2`, which
/// is negative definite, so no pivot vanishes.
fn solve_chain(bs: &[BigInt], m2: &BigInt, m1: &BigInt) -> Vec<BigRational> {
    let len = bs.len();
    if len == 0 {
        return Vec::new();
    }
    let one = BigRational::one();
    // Row j: 1·μ_{j-1} + (-b_j)·μ_j + 1·μ_{j+1} = rhs_j
    let mut rhs: Vec<BigRational> = vec![BigRational::zero(); len];
    rhs[0] -= BigRational::from_integer(m2.clone());
    rhs[len - 1] -= BigRational::from_integer(m1.clone());
    let mut c_prime = Vec::with_capacity(len);
    let mut d_prime = Vec::with_capacity(len);
    for j in 0..len {
        let diag = -BigRational::from_integer(bs[j].clone());
        let (denom, d) = if j == 0 {
            (diag, rhs[0].clone())
        } else {
            let c_prev: &BigRational = &c_prime[j - 1];
            let d_prev: &BigRational = &d_prime[j - 1];
            (diag - c_prev, &rhs[j] - d_prev)
        };
        c_prime.push(&one / &denom);
        d_prime.push(d / denom);
    }
    let mut mu = vec![BigRational::zero(); len];
    mu[len - 1] = d_prime[len - 1].clone();
    for j in (0..len - 1).rev() {
        mu[j] = &d_prime[j] - &c_prime[j] * &mu[j + 1];
    }
    mu
}

/// Exceptional chain over one quotient-singular point, ordered from the
/// b-side (`E_1`) to the a-side (`E_λ`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionChain {
    pub entries: Vec<ChainEntry>,
    /// Multiplicity of the branch met by `E_1`.
    #[serde(serialize_with = "crate::json::int")]
    pub m2: BigInt,
    /// Multiplicity of the branch met by `E_λ`.
    #[serde(serialize_with = "crate::json::int")]
    pub m1: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainEntry {
    /// `E_j² = -b`.
    #[serde(serialize_with = "crate::json::int")]
    pub b: BigInt,
    #[serde(serialize_with = "crate::json::int")]
    pub mu: BigInt,
}

impl ResolutionChain {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `[m2, μ_1, …, μ_λ, m1]`.
    pub fn extended_mults(&self) -> Vec<BigInt> {
        std::iter::once(self.m2.clone())
            .chain(self.entries.iter().map(|e| e.mu.clone()))
            .chain(std::iter::once(self.m1.clone()))
            .collect()
    }
}

/// Minimal resolution of a tame cyclic quotient point.
///
/// `a_side` / `b_side` are the multiplicities after base change of the
/// components that came from the a- and b-branches (`a''` and `b''`).
/// `E_1` meets the b-side, which is the orientation where the congruence
/// `m1 ≡ -r·m2 (mod n'')` holds with `m1 = a''`, `m2 = b''`.
pub fn resolve_node(params: &QuotientSingularityParams, a_side: &BigInt, b_side: &BigInt) -> Result<ResolutionChain> {
    let Some(r) = &params.r else {
        return Err(Error::InvalidParams("n'' = 1: the point is regular".into()));
    };
    if b_side.is_zero() || a_side.is_zero() {
        return Err(Error::InvalidParams("one analytic branch (m2 = 0) is not supported".into()));
    }
    let bs = jung_hirzebruch(&params.n_dd, r)?;
    let mus = chain_multiplicities(&bs, b_side, a_side)?;
    Ok(ResolutionChain {
        entries: bs
            .into_iter()
            .zip(mus)
            .map(|(b, mu)| ChainEntry { b, mu })
            .collect(),
        m2: b_side.clone(),
        m1: a_side.clone(),
    })
}
