//! The membership decision pipeline and the modulus scan.
//!
//! Order of attack for `m ∈ M(G)`: divisibility by `m1`, the star parity
//! rule, the `m = 1` self-embedding obstruction, the spectral obstruction for
//! regular templates, then constructive methods (cyclic development, orbit
//! covers when generators are supplied, exact search). Every verdict carries
//! its evidence; Member verdicts carry a verified certificate.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::arithmetic::{
    m1_lower_bound, partition_index, self_embedding_obstruction, semigroup_closure,
    ArithmeticProfile, EmbeddingVerdict, SemigroupSummary,
};
use crate::constructions::{cyclic_base_search, orbit_construction, CyclicSearchOutcome,
    DEFAULT_ORBIT_CAP};
use crate::decompose::Decomposition;
use crate::error::Result;
use crate::graph::SimpleGraph;
use crate::perm::{Perm, PermutationGens};
use crate::search::{exact_multicover_search, SearchOutcome};
use crate::spectral::{schwenk_obstruction, SchwenkReport, SchwenkVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Arithmetic,
    Spectral,
    Cyclic,
    Orbit,
    Search,
}

impl Method {
    pub fn all() -> BTreeSet<Method> {
        [Method::Arithmetic, Method::Spectral, Method::Cyclic, Method::Orbit, Method::Search]
            .into_iter()
            .collect()
    }
}

impl std::str::FromStr for Method {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Method> {
        match s {
            "arithmetic" => Ok(Method::Arithmetic),
            "spectral" => Ok(Method::Spectral),
            "cyclic" => Ok(Method::Cyclic),
            "orbit" => Ok(Method::Orbit),
            "search" => Ok(Method::Search),
            _ => Err(crate::error::Error::InvalidArgument(format!(
                "unknown method `{s}`"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecideOptions {
    pub budget: u64,
    pub jobs: usize,
    pub methods: BTreeSet<Method>,
    pub gens: Option<PermutationGens>,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            budget: 10_000_000,
            jobs: 1,
            methods: Method::all(),
            gens: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemberMethod {
    Star,
    Cyclic,
    Orbit,
    Search,
    /// superposition of two already-certified members
    Closure,
}

impl std::fmt::Display for MemberMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MemberMethod::Star => "star",
            MemberMethod::Cyclic => "cyclic",
            MemberMethod::Orbit => "orbit",
            MemberMethod::Search => "search",
            MemberMethod::Closure => "closure",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub enum NonMemberReason {
    Divisibility { m1: u64, m: u64 },
    StarParity,
    EmbeddingObstruction { omega: usize, alpha: usize },
    Spectral(Box<SchwenkReport>),
    ExhaustedSearch { nodes: u64 },
}

impl std::fmt::Display for NonMemberReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NonMemberReason::Divisibility { m1, m } => {
                write!(f, "divisibility: m1 = {m1} does not divide {m}")
            }
            NonMemberReason::StarParity => write!(f, "star: odd multiplicity"),
            NonMemberReason::EmbeddingObstruction { omega, alpha } => {
                write!(f, "embedding obstruction: ω = {omega} > α = {alpha}")
            }
            NonMemberReason::Spectral(r) => {
                let row = r
                    .rows
                    .iter()
                    .find(|row| row.intersection_bound > 0 && !row.forced_is_eigenvalue);
                match row {
                    Some(row) => write!(
                        f,
                        "spectral: forced eigenvalue {:.4} (θ = {:.4}, t = {})",
                        row.forced, row.theta, r.t
                    ),
                    None => write!(f, "spectral obstruction"),
                }
            }
            NonMemberReason::ExhaustedSearch { nodes } => {
                write!(f, "exhausted search ({nodes} nodes)")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Member { cert: Box<Decomposition>, method: MemberMethod },
    NonMember(NonMemberReason),
    Unknown { nodes: u64 },
}

impl Verdict {
    pub fn is_member(&self) -> bool {
        matches!(self, Verdict::Member { .. })
    }

    pub fn is_non_member(&self) -> bool {
        matches!(self, Verdict::NonMember(_))
    }
}

/// Spanning star detection: one centre of degree `n-1`, every other vertex a
/// leaf.
fn star_center(g: &SimpleGraph) -> Option<usize> {
    let n = g.n();
    if n < 3 || g.edge_count() != n - 1 {
        return None;
    }
    let degs = g.degrees();
    let center = degs.iter().position(|&d| d == n - 1)?;
    degs.iter()
        .enumerate()
        .all(|(v, &d)| v == center || d == 1)
        .then_some(center)
}

/// The even-multiplicity star certificate: `m/2` stars centred at every
/// vertex.
fn star_certificate(g: &SimpleGraph, center: usize, m: u32) -> Result<Decomposition> {
    let n = g.n();
    let mut copies = Vec::with_capacity(n * (m as usize / 2));
    for c in 0..n {
        // deterministic embedding sending the centre to c
        let mut images: Vec<usize> = Vec::with_capacity(n);
        let mut rest = (0..n).filter(|&v| v != c);
        for v in 0..n {
            if v == center {
                images.push(c);
            } else {
                images.push(rest.next().expect("n-1 remaining hosts"));
            }
        }
        let perm = Perm::from_images(images)?;
        for _ in 0..m / 2 {
            copies.push(perm.clone());
        }
    }
    Decomposition::new(g.clone(), m, copies)
}

/// Decides membership of `m` through the method pipeline.
pub fn decide_membership(g: &SimpleGraph, m: u32, opts: &DecideOptions) -> Result<Verdict> {
    let arithmetic = opts.methods.contains(&Method::Arithmetic);

    if arithmetic {
        let profile = m1_lower_bound(g)?;
        if m as u64 % profile.m1 != 0 {
            return Ok(Verdict::NonMember(NonMemberReason::Divisibility {
                m1: profile.m1,
                m: m as u64,
            }));
        }
        if let Some(center) = star_center(g) {
            if m % 2 == 0 {
                let cert = star_certificate(g, center, m)?;
                debug_assert!(cert.is_valid());
                return Ok(Verdict::Member { cert: Box::new(cert), method: MemberMethod::Star });
            }
            return Ok(Verdict::NonMember(NonMemberReason::StarParity));
        }
        if m == 1 {
            if let EmbeddingVerdict::InfeasibleAtOne { omega, alpha } =
                self_embedding_obstruction(g)?
            {
                return Ok(Verdict::NonMember(NonMemberReason::EmbeddingObstruction {
                    omega,
                    alpha,
                }));
            }
        }
    }

    if opts.methods.contains(&Method::Spectral)
        && g.regularity().is_some_and(|k| k >= 1)
        && g.is_connected()
    {
        if let Ok(report) = schwenk_obstruction(g, m) {
            if report.verdict == SchwenkVerdict::Infeasible {
                return Ok(Verdict::NonMember(NonMemberReason::Spectral(Box::new(report))));
            }
        }
    }

    if opts.methods.contains(&Method::Cyclic)
        && crate::constructions::check_cyclic_parameters(g, m).is_ok()
    {
        if let CyclicSearchOutcome::Found(base) = cyclic_base_search(g, m, opts.budget)? {
            let cert = base.develop()?;
            return Ok(Verdict::Member { cert: Box::new(cert), method: MemberMethod::Cyclic });
        }
    }

    if opts.methods.contains(&Method::Orbit) {
        if let Some(gens) = &opts.gens {
            if gens.degree == g.n() {
                if let Ok((_, cert)) = orbit_construction(g, gens, DEFAULT_ORBIT_CAP) {
                    if cert.multiplicity() == m {
                        return Ok(Verdict::Member {
                            cert: Box::new(cert),
                            method: MemberMethod::Orbit,
                        });
                    }
                }
            }
        }
    }

    if opts.methods.contains(&Method::Search) {
        return Ok(match exact_multicover_search(g, m, opts.budget, opts.jobs)? {
            SearchOutcome::Member(cert) => {
                Verdict::Member { cert: Box::new(cert), method: MemberMethod::Search }
            }
            SearchOutcome::Exhausted { nodes } => {
                Verdict::NonMember(NonMemberReason::ExhaustedSearch { nodes })
            }
            SearchOutcome::Budget { nodes } => Verdict::Unknown { nodes },
        });
    }

    Ok(Verdict::Unknown { nodes: 0 })
}

#[derive(Clone, Debug)]
pub struct ModulusRow {
    pub m: u64,
    pub verdict: Verdict,
}

/// Per-multiplicity verdicts over `[1, bound]` with the inferred modulus,
/// exceptions within the bound, and the partition index.
#[derive(Clone, Debug)]
pub struct ModulusReport {
    pub bound: u64,
    pub profile: ArithmeticProfile,
    pub rows: Vec<ModulusRow>,
    pub m0: Option<u64>,
    pub exceptions_in_bound: Vec<u64>,
    pub partition_index: Option<u64>,
    pub summary: Option<SemigroupSummary>,
}

impl ModulusReport {
    pub fn members(&self) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| r.verdict.is_member())
            .map(|r| r.m)
            .collect()
    }

    pub fn non_members(&self) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| r.verdict.is_non_member())
            .map(|r| r.m)
            .collect()
    }

    pub fn unknowns(&self) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| matches!(r.verdict, Verdict::Unknown { .. }))
            .map(|r| r.m)
            .collect()
    }
}

/// Scans `m = 1..bound`, reusing additive closure: when `a` and `b` are
/// certified members, `a + b` is certified by superposition without search.
pub fn compute_modulus(g: &SimpleGraph, bound: u64, opts: &DecideOptions) -> Result<ModulusReport> {
    let profile = m1_lower_bound(g)?;
    let mut rows: Vec<ModulusRow> = Vec::with_capacity(bound as usize);
    let mut certs: BTreeMap<u64, Decomposition> = BTreeMap::new();
    for m in 1..=bound {
        let closure_pair = (1..=m / 2).find(|&a| certs.contains_key(&a) && certs.contains_key(&(m - a)));
        let verdict = if let Some(a) = closure_pair {
            let cert = crate::decompose::superimpose(&certs[&a], &certs[&(m - a)])?;
            Verdict::Member { cert: Box::new(cert), method: MemberMethod::Closure }
        } else {
            decide_membership(g, m as u32, opts)?
        };
        if let Verdict::Member { cert, .. } = &verdict {
            certs.insert(m, (**cert).clone());
        }
        rows.push(ModulusRow { m, verdict });
    }
    let members: Vec<u64> = certs.keys().copied().collect();
    let (m0, exceptions, pi, summary) = if members.is_empty() {
        (None, Vec::new(), None, None)
    } else {
        let summary = semigroup_closure(&members, bound)?;
        let m0 = summary.m0;
        let pi = partition_index(m0, profile.m1).ok();
        (Some(m0), summary.exceptions_in_bound.clone(), pi, Some(summary))
    };
    Ok(ModulusReport {
        bound,
        profile,
        rows,
        m0,
        exceptions_in_bound: exceptions,
        partition_index: pi,
        summary,
    })
}
