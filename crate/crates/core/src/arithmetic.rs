//! Closed-form number theory: the divisibility lower bound `m1`, complement
//! transfer, guaranteed membership values, star membership, the
//! self-embedding obstruction at `m = 1`, and numerical-semigroup inference
//! of the modulus and exception set.

use num::rational::Ratio;
use num::BigUint;

use crate::canon::automorphism_order;
use crate::cliques::clique_and_independence;
use crate::error::{Error, Result};
use crate::graph::{gcd, lcm, SimpleGraph};

/// The divisibility profile of a template.
///
/// Every `m` admitting a partition of `mK_n` into copies of the template is a
/// multiple of `m1 = lcm(e/gcd(e, n(n-1)/2), d/gcd(d, n-1))`, where `d` is the
/// gcd of the vertex degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithmeticProfile {
    pub n: usize,
    pub e: usize,
    pub d: usize,
    pub edge_factor: u64,
    pub degree_factor: u64,
    pub m1: u64,
}

/// Computes the divisibility lower bound profile. Requires `e >= 1`.
pub fn m1_lower_bound(g: &SimpleGraph) -> Result<ArithmeticProfile> {
    let e = g.edge_count();
    if e == 0 {
        return Err(Error::InvalidArgument("m1 needs at least one edge".into()));
    }
    let n = g.n();
    let pairs = n * (n - 1) / 2;
    let d = g.degree_gcd();
    let edge_factor = (e / gcd(e, pairs)) as u64;
    let degree_factor = (d / gcd(d, n - 1)) as u64;
    let m1 = lcm(edge_factor as usize, degree_factor as usize) as u64;
    Ok(ArithmeticProfile { n, e, d, edge_factor, degree_factor, m1 })
}

/// The exact transferred multiplicity `m(n(n-1)/2 - e)/e` for the complement.
///
/// Membership of `m` for the template forces the transferred value to be a
/// member for the complement; a non-integral result therefore certifies
/// non-membership of `m`, so the rational is returned unreduced to an
/// integer.
pub fn complement_transfer(g: &SimpleGraph, m: u64) -> Result<Ratio<u64>> {
    let e = g.edge_count() as u64;
    if e == 0 {
        return Err(Error::InvalidArgument("transfer needs at least one edge".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("multiplicity must be positive".into()));
    }
    let pairs = (g.n() * (g.n() - 1) / 2) as u64;
    if pairs == e {
        return Err(Error::InvalidArgument(
            "complement has no edges; transfer undefined".into(),
        ));
    }
    Ok(Ratio::new(m * (pairs - e), e))
}

/// The guaranteed member `2(n-2)! e / |Aut(G)|`, from superimposing all
/// labeled copies of the template.
pub fn exist_member_value(g: &SimpleGraph) -> Result<BigUint> {
    let e = g.edge_count();
    if e == 0 {
        return Err(Error::InvalidArgument("needs at least one edge".into()));
    }
    let n = g.n();
    let aut = automorphism_order(g)?;
    let mut num: BigUint = (1..=(n as u64).saturating_sub(2)).map(BigUint::from).product();
    num *= BigUint::from(2u32 * e as u32);
    let (q, r) = num::Integer::div_rem(&num, &aut);
    assert!(
        r == BigUint::from(0u32),
        "2(n-2)! e is always divisible by |Aut(G)|"
    );
    Ok(q)
}

/// The multiplicity `2re/(n(n-1))` contributed by the `r` images of the
/// template under a doubly transitive group. Errors on a non-integral result,
/// which signals an invalid index `r`.
pub fn two_transitive_value(e: u64, n: u64, r: u64) -> Result<u64> {
    let den = n * (n - 1);
    let num = 2 * r * e;
    if num % den != 0 {
        return Err(Error::NonIntegral { num, den });
    }
    Ok(num / den)
}

/// Membership for the star `K_{1,n-1}`, `n > 2`: exactly the even
/// multiplicities. Covering forces a constant number of stars per centre, so
/// `m` is twice that constant.
pub fn star_membership(n: u64, m: u64) -> Result<bool> {
    if n <= 2 {
        return Err(Error::InvalidArgument("star membership needs n > 2".into()));
    }
    Ok(m % 2 == 0)
}

/// Verdict of the clique-versus-independence embedding obstruction at `m = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingVerdict {
    /// `ω > α`: two edge-disjoint copies would embed the template into its
    /// complement, which a clique bigger than the independence number forbids.
    InfeasibleAtOne { omega: usize, alpha: usize },
    Inconclusive { omega: usize, alpha: usize },
}

/// The `m = 1` self-embedding obstruction. For templates that are not the
/// whole complete graph, a 1-fold partition has at least two copies, hence an
/// embedding of the template into its own complement.
pub fn self_embedding_obstruction(g: &SimpleGraph) -> Result<EmbeddingVerdict> {
    let (omega, alpha) = clique_and_independence(g)?;
    if g.edge_count() == g.pair_count() {
        // single-copy partition; nothing to embed
        return Ok(EmbeddingVerdict::Inconclusive { omega, alpha });
    }
    if omega > alpha {
        Ok(EmbeddingVerdict::InfeasibleAtOne { omega, alpha })
    } else {
        Ok(EmbeddingVerdict::Inconclusive { omega, alpha })
    }
}

/// Additive-closure summary of a set of certified members.
///
/// `m0` and the exceptions are relative to the supplied members: a certified
/// upper approximation of the true modulus and exception set, labeled
/// "within bound" because no general bound on the exception set is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupSummary {
    pub members_found: Vec<u64>,
    pub m0: u64,
    pub exceptions_in_bound: Vec<u64>,
    pub bound: u64,
}

/// Additive closure of `members` within `[1, bound]`, the gcd `m0`, and the
/// multiples of `m0` in range missing from the closure.
pub fn semigroup_closure(members: &[u64], bound: u64) -> Result<SemigroupSummary> {
    if members.is_empty() {
        return Err(Error::InvalidArgument("members must be non-empty".into()));
    }
    if members.iter().any(|&m| m == 0) {
        return Err(Error::InvalidArgument("members must be >= 1".into()));
    }
    let max = *members.iter().max().unwrap();
    if bound < max {
        return Err(Error::InvalidArgument(format!(
            "bound {bound} below largest member {max}"
        )));
    }
    let mut sorted: Vec<u64> = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let m0 = sorted.iter().fold(0u64, |a, &b| gcd(a as usize, b as usize) as u64);

    let b = bound as usize;
    let mut closed = vec![false; b + 1];
    for &m in &sorted {
        closed[m as usize] = true;
    }
    for x in 1..=b {
        if !closed[x] {
            continue;
        }
        for &m in &sorted {
            let y = x + m as usize;
            if y <= b {
                closed[y] = true;
            }
        }
    }
    // closure within the bound: saturate sums of in-range elements
    let mut changed = true;
    while changed {
        changed = false;
        for x in 1..=b {
            if !closed[x] {
                continue;
            }
            for y in x..=b {
                if closed[y] && x + y <= b && !closed[x + y] {
                    closed[x + y] = true;
                    changed = true;
                }
            }
        }
    }
    let exceptions_in_bound: Vec<u64> = (1..=bound)
        .filter(|&x| x % m0 == 0 && !closed[x as usize])
        .collect();
    Ok(SemigroupSummary { members_found: sorted, m0, exceptions_in_bound, bound })
}

/// The quotient `m0 / m1`. Errors on non-divisibility, which signals an
/// uncertified modulus or a bug upstream.
pub fn partition_index(m0: u64, m1: u64) -> Result<u64> {
    if m1 == 0 || m0 % m1 != 0 {
        return Err(Error::NonIntegral { num: m0, den: m1 });
    }
    Ok(m0 / m1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin, parse_graph};

    #[test]
    fn m1_of_pendant_triangle_and_complement() {
        let g = builtin("trianglependants", &[]).unwrap();
        assert_eq!(m1_lower_bound(&g).unwrap().m1, 2);
        assert_eq!(m1_lower_bound(&g.complement()).unwrap().m1, 6);
    }

    #[test]
    fn m1_of_triangular_graphs() {
        let expect = |l: usize| -> u64 {
            if l % 4 == 3 {
                1
            } else if l % 4 == 1 {
                2
            } else {
                4
            }
        };
        for l in 4..=12 {
            let t = builtin("triangular", &[l]).unwrap();
            assert_eq!(m1_lower_bound(&t).unwrap().m1, expect(l), "T({l})");
        }
    }

    #[test]
    fn m1_of_cycles_by_parity() {
        for n in 3..=10 {
            let c = builtin("cycle", &[n]).unwrap();
            let want = if n % 2 == 0 { 2 } else { 1 };
            assert_eq!(m1_lower_bound(&c).unwrap().m1, want);
        }
    }

    #[test]
    fn m1_with_isolated_vertices() {
        // gcd(0, x) = x: isolated vertices contribute degree 0 harmlessly
        let g = builtin("cliqueplus", &[3, 6]).unwrap();
        let p = m1_lower_bound(&g).unwrap();
        assert_eq!(p.d, 2);
        assert_eq!(p.edge_factor, 1); // e=3 divides 15 pairs
        assert_eq!(p.degree_factor, 2); // d=2, gcd(2, 5)=1
        assert_eq!(p.m1, 2);
    }

    #[test]
    fn transfer_values() {
        let p = builtin("petersen", &[]).unwrap();
        assert_eq!(complement_transfer(&p, 1).unwrap(), Ratio::from_integer(2));
        let g = builtin("trianglependants", &[]).unwrap();
        assert_eq!(complement_transfer(&g, 4).unwrap(), Ratio::from_integer(6));
        let k5 = builtin("complete", &[5]).unwrap();
        assert!(complement_transfer(&k5, 1).is_err());
    }

    #[test]
    fn transfer_round_trip() {
        for spec in ["petersen", "trianglependants", "cycle:6"] {
            let g = parse_graph(spec).unwrap();
            for m in 1..=6u64 {
                let t = complement_transfer(&g, m).unwrap();
                if t.is_integer() {
                    let back = complement_transfer(&g.complement(), *t.numer()).unwrap();
                    assert_eq!(back, Ratio::from_integer(m));
                }
            }
        }
    }

    #[test]
    fn exist_member_values() {
        let p = builtin("petersen", &[]).unwrap();
        assert_eq!(exist_member_value(&p).unwrap(), BigUint::from(10080u32));
        let c5 = builtin("cycle", &[5]).unwrap();
        assert_eq!(exist_member_value(&c5).unwrap(), BigUint::from(6u32));
        for n in 3..=8 {
            let k = builtin("complete", &[n]).unwrap();
            assert_eq!(exist_member_value(&k).unwrap(), BigUint::from(1u32));
        }
    }

    #[test]
    fn two_transitive_values_from_known_groups() {
        assert_eq!(two_transitive_value(15, 10, 6).unwrap(), 2);
        assert_eq!(two_transitive_value(6, 6, 10).unwrap(), 4);
        assert_eq!(two_transitive_value(60, 15, 7).unwrap(), 4);
        assert_eq!(two_transitive_value(105, 21, 2880).unwrap(), 1440);
        assert!(two_transitive_value(15, 10, 5).is_err());
    }

    #[test]
    fn star_parity() {
        assert!(!star_membership(4, 1).unwrap());
        assert!(star_membership(4, 2).unwrap());
        assert!(star_membership(7, 6).unwrap());
        assert!(star_membership(2, 2).is_err());
    }

    #[test]
    fn embedding_obstruction_cases() {
        let t5 = builtin("triangular", &[5]).unwrap();
        assert!(matches!(
            self_embedding_obstruction(&t5).unwrap(),
            EmbeddingVerdict::InfeasibleAtOne { omega: 4, alpha: 2 }
        ));
        let c5 = builtin("cycle", &[5]).unwrap();
        assert!(matches!(
            self_embedding_obstruction(&c5).unwrap(),
            EmbeddingVerdict::Inconclusive { omega: 2, alpha: 2 }
        ));
        let s4 = builtin("star", &[4]).unwrap();
        assert!(matches!(
            self_embedding_obstruction(&s4).unwrap(),
            EmbeddingVerdict::Inconclusive { omega: 2, alpha: 3 }
        ));
    }

    /// Brute-force closure oracle, independent of the DP in the
    /// implementation: repeatedly add pairwise sums until a fixpoint.
    fn closure_oracle(members: &[u64], bound: u64) -> Vec<u64> {
        let mut set: std::collections::BTreeSet<u64> = members.iter().copied().collect();
        loop {
            let mut added = false;
            let snapshot: Vec<u64> = set.iter().copied().collect();
            for &a in &snapshot {
                for &b in &snapshot {
                    if a + b <= bound && set.insert(a + b) {
                        added = true;
                    }
                }
            }
            if !added {
                return set.into_iter().collect();
            }
        }
    }

    #[test]
    fn semigroup_examples() {
        let s = semigroup_closure(&[2, 3], 10).unwrap();
        assert_eq!(s.m0, 1);
        assert_eq!(s.exceptions_in_bound, vec![1]);

        let s = semigroup_closure(&[6, 10], 30).unwrap();
        assert_eq!(s.m0, 2);
        assert_eq!(s.exceptions_in_bound, vec![2, 4, 8, 14]);
        let closed = closure_oracle(&[6, 10], 30);
        let missing: Vec<u64> =
            (1..=30).filter(|&x| x % 2 == 0 && !closed.contains(&x)).collect();
        assert_eq!(s.exceptions_in_bound, missing);

        let s = semigroup_closure(&[4], 40).unwrap();
        assert_eq!(s.m0, 4);
        assert!(s.exceptions_in_bound.is_empty());
    }

    #[test]
    fn semigroup_errors() {
        assert!(semigroup_closure(&[], 10).is_err());
        assert!(semigroup_closure(&[0, 2], 10).is_err());
        assert!(semigroup_closure(&[5], 4).is_err());
    }

    #[test]
    fn partition_index_cases() {
        assert_eq!(partition_index(4, 2).unwrap(), 2);
        assert_eq!(partition_index(6, 6).unwrap(), 1);
        assert_eq!(partition_index(2, 2).unwrap(), 1);
        assert!(partition_index(3, 2).is_err());
    }
}
