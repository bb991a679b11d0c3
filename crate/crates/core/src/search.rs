//! Exact multicover backtracking: partitions of `mK_n` into copies of a
//! template.
//!
//! The engine branches on the pair with minimum positive residual
//! multiplicity (ties to the lexicographically smallest pair) over the
//! precomputed set of labeled copies. Symmetry breaking fixes the first copy
//! to the identity embedding of the canonical form and requires non-decreasing
//! copy order between consecutive placements that target the same pair: any
//! solution multiset has a realization obeying both, so exhaustion is a proof
//! of non-membership.
//!
//! The budget is counted in placed-copy nodes, not wall time. With `jobs > 1`
//! the tree is split at the top two branch levels into independent sub-trees
//! sharing only an atomic solution flag and the node counter; the reported
//! certificate is always the one from the earliest sub-tree in the
//! deterministic order.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::canon::{canonical_labeling, enumerate_copies, LabeledCopy};
use crate::decompose::{expected_copies, Decomposition, MAX_MULTIPLICITY};
use crate::error::{Error, Result};
use crate::graph::{pair_from_index, SimpleGraph};
use crate::perm::Perm;

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Member(Decomposition),
    /// The symmetry-reduced tree was fully explored without a solution.
    Exhausted { nodes: u64 },
    /// Budget ran out before the tree was exhausted.
    Budget { nodes: u64 },
}

const NO_TARGET: u32 = u32::MAX;

struct Instance {
    n: usize,
    m: u32,
    l: usize,
    pairs: usize,
    copies: Vec<LabeledCopy>,
    copies_by_pair: Vec<Vec<u32>>,
    min_deg: u32,
    max_deg: u32,
}

impl Instance {
    fn build(gc: &SimpleGraph, m: u32, l: u64) -> Instance {
        let mut copies = enumerate_copies(gc);
        copies.sort_by(|a, b| a.perm.cmp(&b.perm));
        let pairs = gc.pair_count();
        let mut copies_by_pair = vec![Vec::new(); pairs];
        for (i, c) in copies.iter().enumerate() {
            for &p in &c.pairs {
                copies_by_pair[p as usize].push(i as u32);
            }
        }
        let degs = gc.degrees();
        Instance {
            n: gc.n(),
            m,
            l: l as usize,
            pairs,
            copies,
            copies_by_pair,
            min_deg: *degs.iter().min().unwrap() as u32,
            max_deg: *degs.iter().max().unwrap() as u32,
        }
    }
}

struct Worker<'a> {
    inst: &'a Instance,
    residual: Vec<u16>,
    /// residual pair coverage still needed at each vertex
    vertex_residual: Vec<u32>,
    /// number of saturated pairs per copy; a copy fits iff zero
    blocked: Vec<u32>,
    chosen: Vec<u32>,
    last_target: Vec<u32>,
    nodes: &'a AtomicU64,
    budget: u64,
    /// earliest work item that found a solution, for cooperative cancelling
    found_at: &'a AtomicUsize,
    my_item: usize,
    budget_hit: bool,
}

enum Walk {
    Solved(Vec<u32>),
    Done,
    Aborted,
}

impl<'a> Worker<'a> {
    fn new(
        inst: &'a Instance,
        nodes: &'a AtomicU64,
        budget: u64,
        found_at: &'a AtomicUsize,
        my_item: usize,
    ) -> Worker<'a> {
        Worker {
            inst,
            residual: vec![inst.m as u16; inst.pairs],
            vertex_residual: vec![inst.m * (inst.n as u32 - 1); inst.n],
            blocked: vec![0; inst.copies.len()],
            chosen: Vec::with_capacity(inst.l),
            last_target: Vec::with_capacity(inst.l),
            nodes,
            budget,
            found_at,
            my_item,
            budget_hit: false,
        }
    }

    fn place(&mut self, ci: u32) {
        let copy = &self.inst.copies[ci as usize];
        for &p in &copy.pairs {
            let r = &mut self.residual[p as usize];
            *r -= 1;
            if *r == 0 {
                for &c in &self.inst.copies_by_pair[p as usize] {
                    self.blocked[c as usize] += 1;
                }
            }
            let (u, v) = pair_from_index(self.inst.n, p as usize);
            self.vertex_residual[u] -= 1;
            self.vertex_residual[v] -= 1;
        }
        self.chosen.push(ci);
    }

    fn unplace(&mut self, ci: u32) {
        let copy = &self.inst.copies[ci as usize];
        for &p in &copy.pairs {
            let r = &mut self.residual[p as usize];
            if *r == 0 {
                for &c in &self.inst.copies_by_pair[p as usize] {
                    self.blocked[c as usize] -= 1;
                }
            }
            *r += 1;
            let (u, v) = pair_from_index(self.inst.n, p as usize);
            self.vertex_residual[u] += 1;
            self.vertex_residual[v] += 1;
        }
        self.chosen.pop();
        self.last_target.pop();
    }

    /// Pair with minimum positive residual, lexicographically smallest.
    fn target_pair(&self) -> Option<u32> {
        let mut best: Option<(u16, u32)> = None;
        for (p, &r) in self.residual.iter().enumerate() {
            if r > 0 {
                match best {
                    Some((br, _)) if br <= r => {}
                    _ => best = Some((r, p as u32)),
                }
                if r == 1 {
                    // residual 1 at the smallest pair cannot be beaten
                    break;
                }
            }
        }
        best.map(|(_, p)| p)
    }

    fn degree_bounds_ok(&self) -> bool {
        let remaining = (self.inst.l - self.chosen.len()) as u32;
        self.vertex_residual.iter().all(|&rd| {
            rd >= remaining * self.inst.min_deg && rd <= remaining * self.inst.max_deg
        })
    }

    fn cancelled(&self) -> bool {
        self.found_at.load(Ordering::Relaxed) < self.my_item
    }

    fn walk(&mut self) -> Walk {
        if self.chosen.len() == self.inst.l {
            debug_assert!(self.residual.iter().all(|&r| r == 0));
            return Walk::Solved(self.chosen.clone());
        }
        if self.cancelled() {
            return Walk::Aborted;
        }
        let Some(target) = self.target_pair() else {
            // counting: residuals exhausted before the copy count was reached
            return Walk::Done;
        };
        let min_index = match self.last_target.last() {
            Some(&t) if t == target => *self.chosen.last().unwrap(),
            _ => 0,
        };
        let cands = &self.inst.copies_by_pair[target as usize];
        let start = cands.partition_point(|&c| c < min_index);
        for &ci in &cands[start..] {
            if self.blocked[ci as usize] != 0 {
                continue;
            }
            let used = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
            if used > self.budget {
                self.budget_hit = true;
                return Walk::Aborted;
            }
            self.place(ci);
            self.last_target.push(target);
            if self.degree_bounds_ok() {
                match self.walk() {
                    Walk::Done => {}
                    other => {
                        self.unplace(ci);
                        return other;
                    }
                }
            }
            self.unplace(ci);
        }
        Walk::Done
    }
}

/// Searches for a partition of `mK_n` into copies of `g` under a node
/// budget. Requires the divisibility precondition `e | m n(n-1)/2`.
pub fn exact_multicover_search(
    g: &SimpleGraph,
    m: u32,
    budget: u64,
    jobs: usize,
) -> Result<SearchOutcome> {
    if m == 0 || m > MAX_MULTIPLICITY {
        return Err(Error::InvalidArgument(format!(
            "multiplicity must be in 1..={MAX_MULTIPLICITY}"
        )));
    }
    if g.edge_count() == 0 {
        return Err(Error::InvalidArgument("template needs at least one edge".into()));
    }
    let l = expected_copies(g, m).ok_or_else(|| {
        Error::InvalidArgument(
            "edge count does not divide m n(n-1)/2; filter by m1 first".into(),
        )
    })?;
    let labeling = canonical_labeling(g);
    let gc = g.apply_perm(&labeling);
    let inst = Instance::build(&gc, m, l);

    let nodes = AtomicU64::new(0);
    let found_at = AtomicUsize::new(usize::MAX);

    let finish = |sol: Option<Vec<u32>>, nodes: u64, any_budget: bool| -> Result<SearchOutcome> {
        match sol {
            Some(chosen) => {
                let copies: Vec<Perm> = chosen
                    .iter()
                    .map(|&ci| inst.copies[ci as usize].perm.compose(&labeling))
                    .collect();
                let cert = Decomposition::new(g.clone(), m, copies)?;
                if !cert.is_valid() {
                    return Err(Error::CertificateInvalid(
                        "search produced a certificate that fails verification".into(),
                    ));
                }
                Ok(SearchOutcome::Member(cert))
            }
            None if any_budget => Ok(SearchOutcome::Budget { nodes }),
            None => Ok(SearchOutcome::Exhausted { nodes }),
        }
    };

    if jobs <= 1 || l <= 2 {
        let mut w = Worker::new(&inst, &nodes, budget, &found_at, 0);
        // first copy fixed to the identity embedding of the canonical form
        nodes.fetch_add(1, Ordering::Relaxed);
        if budget == 0 {
            return Ok(SearchOutcome::Budget { nodes: 1 });
        }
        w.place(0);
        w.last_target.push(NO_TARGET);
        let walk = w.walk();
        let total = nodes.load(Ordering::Relaxed);
        return match walk {
            Walk::Solved(chosen) => finish(Some(chosen), total, false),
            Walk::Aborted => finish(None, total, true),
            Walk::Done => finish(None, total, w.budget_hit),
        };
    }

    // Work items are the (second copy, third copy) prefixes in DFS order.
    let mut seed = Worker::new(&inst, &nodes, budget, &found_at, 0);
    seed.place(0);
    seed.last_target.push(NO_TARGET);
    let mut items: Vec<(u32, u32, u32, u32)> = Vec::new(); // (c1, t1, c2, t2)
    if let Some(t1) = seed.target_pair() {
        let cands1: Vec<u32> = inst.copies_by_pair[t1 as usize]
            .iter()
            .copied()
            .filter(|&c| seed.blocked[c as usize] == 0)
            .collect();
        for c1 in cands1 {
            seed.place(c1);
            seed.last_target.push(t1);
            if seed.degree_bounds_ok() {
                if let Some(t2) = seed.target_pair() {
                    let min2 = if t2 == t1 { c1 } else { 0 };
                    for &c2 in &inst.copies_by_pair[t2 as usize] {
                        if c2 >= min2 && seed.blocked[c2 as usize] == 0 {
                            items.push((c1, t1, c2, t2));
                        }
                    }
                }
            }
            seed.unplace(c1);
        }
    }
    drop(seed);

    let next_item = AtomicUsize::new(0);
    let solutions: Mutex<Vec<(usize, Vec<u32>)>> = Mutex::new(Vec::new());
    let budget_flag = AtomicUsize::new(0);

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let idx = next_item.fetch_add(1, Ordering::Relaxed);
                if idx >= items.len() {
                    return;
                }
                if found_at.load(Ordering::Relaxed) < idx {
                    continue;
                }
                let (c1, t1, c2, t2) = items[idx];
                let mut w = Worker::new(&inst, &nodes, budget, &found_at, idx);
                nodes.fetch_add(3, Ordering::Relaxed);
                w.place(0);
                w.last_target.push(NO_TARGET);
                w.place(c1);
                w.last_target.push(t1);
                w.place(c2);
                w.last_target.push(t2);
                match w.walk() {
                    Walk::Solved(chosen) => {
                        let mut sols = solutions.lock().unwrap();
                        sols.push((idx, chosen));
                        found_at.fetch_min(idx, Ordering::Relaxed);
                    }
                    Walk::Aborted if w.budget_hit => {
                        budget_flag.store(1, Ordering::Relaxed);
                    }
                    _ => {}
                }
            });
        }
    });

    let total = nodes.load(Ordering::Relaxed);
    let sols = solutions.into_inner().unwrap();
    let best = sols.into_iter().min_by_key(|(idx, _)| *idx);
    finish(
        best.map(|(_, chosen)| chosen),
        total,
        budget_flag.load(Ordering::Relaxed) == 1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin;

    fn search(spec: &str, m: u32) -> SearchOutcome {
        let g = crate::graph::parse_graph(spec).unwrap();
        exact_multicover_search(&g, m, 10_000_000, 1).unwrap()
    }

    #[test]
    fn k5_into_two_c5() {
        match search("cycle:5", 1) {
            SearchOutcome::Member(cert) => {
                assert_eq!(cert.copies().len(), 2);
                assert!(cert.is_valid());
            }
            other => panic!("expected member, got {other:?}"),
        }
    }

    #[test]
    fn two_k4_into_four_stars() {
        match search("star:4", 2) {
            SearchOutcome::Member(cert) => {
                assert_eq!(cert.copies().len(), 4);
                assert!(cert.is_valid());
            }
            other => panic!("expected member, got {other:?}"),
        }
    }

    #[test]
    fn k4_has_no_star_partition() {
        match search("star:4", 1) {
            SearchOutcome::Exhausted { .. } => {}
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn k9_into_triangle_triples() {
        match search("cliques:3,3", 1) {
            SearchOutcome::Member(cert) => {
                assert_eq!(cert.copies().len(), 4);
                assert!(cert.is_valid());
            }
            other => panic!("expected member, got {other:?}"),
        }
    }

    #[test]
    fn k9_into_two_lattices() {
        match search("lattice:3", 1) {
            SearchOutcome::Member(cert) => {
                assert_eq!(cert.copies().len(), 2);
                assert!(cert.is_valid());
            }
            other => panic!("expected member, got {other:?}"),
        }
    }

    #[test]
    fn rejects_divisibility_violation() {
        let c6 = builtin("cycle", &[6]).unwrap();
        assert!(exact_multicover_search(&c6, 1, 1000, 1).is_err());
    }

    #[test]
    fn budget_exhaustion_reports_unknown() {
        let g = builtin("petersen", &[]).unwrap();
        match exact_multicover_search(&g, 2, 50, 1).unwrap() {
            SearchOutcome::Budget { nodes } => assert!(nodes >= 50),
            other => panic!("expected budget, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_certificates() {
        let a = search("cliques:3,3", 1);
        let b = search("cliques:3,3", 1);
        match (a, b) {
            (SearchOutcome::Member(x), SearchOutcome::Member(y)) => {
                assert_eq!(x.to_text(), y.to_text());
            }
            _ => panic!("expected members"),
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = builtin("cliques", &[3, 3]).unwrap();
        let seq = exact_multicover_search(&g, 1, 10_000_000, 1).unwrap();
        let par = exact_multicover_search(&g, 1, 10_000_000, 4).unwrap();
        match (seq, par) {
            (SearchOutcome::Member(x), SearchOutcome::Member(y)) => {
                assert_eq!(x.copies().len(), y.copies().len());
                assert!(y.is_valid());
            }
            other => panic!("expected members, got {other:?}"),
        }
    }
}
