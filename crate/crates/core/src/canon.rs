//! Canonical forms, isomorphism testing, automorphism group order, and
//! enumeration of the distinct labeled copies of a graph.
//!
//! The canonical form uses iterated degree/neighborhood refinement with
//! backtracking on the first non-singleton cell and a smallest-adjacency-string
//! tie-break. Discovered automorphisms prune sibling branches, and a leaf that
//! ties the current best triggers a backjump to the divergence point: the
//! abandoned subtree is the automorphic image of an already explored one.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num::BigUint;

use crate::error::{Error, Result};
use crate::graph::{pair_index, SimpleGraph};
use crate::perm::Perm;

type Cells = Vec<Vec<usize>>;

/// Equitable refinement: split cells by neighbor counts toward every cell
/// until stable. Subcells are ordered by their count signature, vertices
/// ascending within a cell.
fn refine(g: &SimpleGraph, mut cells: Cells) -> Cells {
    let n = g.n();
    loop {
        let mut cell_of = vec![0usize; n];
        for (ci, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = ci;
            }
        }
        let mut next: Cells = Vec::with_capacity(cells.len());
        let mut changed = false;
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            for &v in cell {
                let mut sig = vec![0usize; cells.len()];
                for u in 0..n {
                    if g.has_edge(v, u) {
                        sig[cell_of[u]] += 1;
                    }
                }
                groups.entry(sig).or_default().push(v);
            }
            if groups.len() > 1 {
                changed = true;
            }
            for (_, mut vs) in groups {
                vs.sort_unstable();
                next.push(vs);
            }
        }
        cells = next;
        if !changed {
            return cells;
        }
    }
}

fn individualize(cells: &Cells, target: usize, v: usize) -> Cells {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for (i, cell) in cells.iter().enumerate() {
        if i == target {
            out.push(vec![v]);
            out.push(cell.iter().copied().filter(|&u| u != v).collect());
        } else {
            out.push(cell.clone());
        }
    }
    out
}

/// Adjacency bitstring of the relabeled graph, packed so that `Vec<u64>`
/// lexicographic comparison equals bitstring comparison (pair 0 at the MSB).
fn graph_key(g: &SimpleGraph, label: &Perm) -> Vec<u64> {
    let n = g.n();
    let pairs = n * (n - 1) / 2;
    let inv = label.inverse();
    let mut key = vec![0u64; pairs.div_ceil(64)];
    let mut k = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            if g.has_edge(inv.image(a), inv.image(b)) {
                key[k / 64] |= 1u64 << (63 - (k % 64));
            }
            k += 1;
        }
    }
    key
}

struct CanonSearch<'a> {
    g: &'a SimpleGraph,
    base: Vec<usize>,
    best_key: Option<Vec<u64>>,
    best_label: Option<Perm>,
    best_base: Vec<usize>,
    autos: Vec<Perm>,
}

impl<'a> CanonSearch<'a> {
    fn label_from(cells: &Cells, n: usize) -> Perm {
        let mut images = vec![0usize; n];
        for (pos, cell) in cells.iter().enumerate() {
            images[cell[0]] = pos;
        }
        Perm::from_images(images).expect("discrete partition yields a bijection")
    }

    /// Returns `Some(d)` to request unwinding to depth `d`.
    fn search(&mut self, cells: Cells, depth: usize) -> Option<usize> {
        let cells = refine(self.g, cells);
        let target = cells.iter().position(|c| c.len() > 1);
        let Some(target) = target else {
            let label = Self::label_from(&cells, self.g.n());
            let key = graph_key(self.g, &label);
            match &self.best_key {
                Some(bk) if key == *bk => {
                    let best = self.best_label.as_ref().unwrap();
                    let gamma = best.inverse().compose(&label);
                    debug_assert_eq!(self.g.apply_perm(&gamma), *self.g);
                    let d = self
                        .base
                        .iter()
                        .zip(&self.best_base)
                        .position(|(a, b)| a != b)
                        .unwrap_or(0);
                    self.autos.push(gamma);
                    return Some(d);
                }
                Some(bk) if key > *bk => return None,
                _ => {
                    self.best_key = Some(key);
                    self.best_label = Some(label);
                    self.best_base = self.base.clone();
                    return None;
                }
            }
        };
        let members = cells[target].clone();
        let mut explored: Vec<usize> = Vec::new();
        for v in members {
            if self.pruned_by_orbit(v, &explored) {
                continue;
            }
            let child = individualize(&cells, target, v);
            self.base.push(v);
            let jump = self.search(child, depth + 1);
            self.base.pop();
            explored.push(v);
            if let Some(d) = jump {
                if d < depth {
                    return Some(d);
                }
            }
        }
        None
    }

    /// Orbit pruning: skip `v` if an automorphism product fixing the current
    /// base pointwise maps an explored sibling to it.
    fn pruned_by_orbit(&self, v: usize, explored: &[usize]) -> bool {
        if explored.is_empty() || self.autos.is_empty() {
            return false;
        }
        let fixing: Vec<&Perm> = self
            .autos
            .iter()
            .filter(|a| self.base.iter().all(|&b| a.image(b) == b))
            .collect();
        if fixing.is_empty() {
            return false;
        }
        let mut orbit: Vec<usize> = explored.to_vec();
        let mut seen = vec![false; self.g.n()];
        for &u in explored {
            seen[u] = true;
        }
        let mut head = 0;
        while head < orbit.len() {
            let u = orbit[head];
            head += 1;
            for a in &fixing {
                let w = a.image(u);
                if w == v {
                    return true;
                }
                if !seen[w] {
                    seen[w] = true;
                    orbit.push(w);
                }
            }
        }
        false
    }
}

/// The permutation mapping each vertex to its canonical position.
pub fn canonical_labeling(g: &SimpleGraph) -> Perm {
    let mut ctx = CanonSearch {
        g,
        base: Vec::new(),
        best_key: None,
        best_label: None,
        best_base: Vec::new(),
        autos: Vec::new(),
    };
    let initial = vec![(0..g.n()).collect::<Vec<usize>>()];
    ctx.search(initial, 0);
    ctx.best_label.expect("search always reaches a leaf")
}

/// The canonical representative of the isomorphism class of `g`.
pub fn canonical_form(g: &SimpleGraph) -> SimpleGraph {
    g.apply_perm(&canonical_labeling(g))
}

/// True iff an edge-preserving bijection exists between the two graphs.
pub fn is_isomorphic(g: &SimpleGraph, h: &SimpleGraph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    canonical_form(g).edges() == canonical_form(h).edges()
}

/// Searches for an automorphism fixing `0..fixed` pointwise and mapping
/// `fixed` to `w`. Budget counts assignment attempts.
fn extension_exists(
    g: &SimpleGraph,
    fixed: usize,
    w: usize,
    nodes: &mut u64,
    budget: u64,
) -> Result<bool> {
    let n = g.n();
    if g.degree(fixed) != g.degree(w) {
        return Ok(false);
    }
    for i in 0..fixed {
        if g.has_edge(i, fixed) != g.has_edge(i, w) {
            return Ok(false);
        }
    }
    // images for 0..=fixed are pinned; extend over the rest in order
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (i, slot) in image.iter_mut().enumerate().take(fixed) {
        *slot = i;
        used[i] = true;
    }
    image[fixed] = w;
    used[w] = true;

    fn go(
        g: &SimpleGraph,
        v: usize,
        image: &mut [usize],
        used: &mut [bool],
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool> {
        let n = g.n();
        if v == n {
            return Ok(true);
        }
        if image[v] != usize::MAX {
            return go(g, v + 1, image, used, nodes, budget);
        }
        for y in 0..n {
            if used[y] || g.degree(v) != g.degree(y) {
                continue;
            }
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::Budget { nodes: *nodes });
            }
            let ok = (0..v).all(|u| {
                image[u] == usize::MAX || g.has_edge(u, v) == g.has_edge(image[u], y)
            });
            if !ok {
                continue;
            }
            image[v] = y;
            used[y] = true;
            if go(g, v + 1, image, used, nodes, budget)? {
                return Ok(true);
            }
            image[v] = usize::MAX;
            used[y] = false;
        }
        Ok(false)
    }
    go(g, fixed + 1, &mut image, &mut used, nodes, budget)
}

const AUT_BUDGET: u64 = 50_000_000;

/// Order of the automorphism group, by the orbit-stabilizer chain: the order
/// is the product over `v` of the orbit size of `v` under the stabilizer of
/// `0..v-1`. Arbitrary precision because the order can reach `n!`.
pub fn automorphism_order(g: &SimpleGraph) -> Result<BigUint> {
    let n = g.n();
    let mut order = BigUint::from(1u32);
    let mut nodes = 0u64;
    for v in 0..n {
        let mut orbit = 1u64;
        for w in (v + 1)..n {
            if extension_exists(g, v, w, &mut nodes, AUT_BUDGET)? {
                orbit += 1;
            }
        }
        order *= BigUint::from(orbit);
    }
    Ok(order)
}

/// One entry per distinct labeled copy of `g` in the complete host.
#[derive(Clone, Debug)]
pub struct LabeledCopy {
    /// Coset representative: the template maps onto this copy via `perm`.
    pub perm: Perm,
    /// Sorted pair indices of the copy's edges.
    pub pairs: Vec<u32>,
}

/// Enumerates the orbit of the edge set under the symmetric group: exactly
/// one permutation per distinct labeled copy, in a deterministic breadth-first
/// order starting from the identity. The count is `n!/|Aut(g)|`.
pub fn enumerate_copies(g: &SimpleGraph) -> Vec<LabeledCopy> {
    let n = g.n();
    let words = (g.pair_count()).div_ceil(64).max(1);
    let key_of = |perm: &Perm| -> Vec<u64> {
        let mut key = vec![0u64; words];
        for &e in g.edges() {
            let (u, v) = perm.pair_image(e);
            let k = pair_index(n, u, v);
            key[k / 64] |= 1u64 << (k % 64);
        }
        key
    };
    let pairs_of = |perm: &Perm| -> Vec<u32> {
        let mut pairs: Vec<u32> = g
            .edges()
            .iter()
            .map(|&e| {
                let (u, v) = perm.pair_image(e);
                pair_index(n, u, v) as u32
            })
            .collect();
        pairs.sort_unstable();
        pairs
    };

    let gens: Vec<Perm> = (0..n.saturating_sub(1))
        .map(|i| {
            let mut im: Vec<usize> = (0..n).collect();
            im.swap(i, i + 1);
            Perm::from_images(im).unwrap()
        })
        .collect();

    let id = Perm::identity(n);
    let mut seen: HashMap<Vec<u64>, ()> = HashMap::new();
    seen.insert(key_of(&id), ());
    let mut out = vec![LabeledCopy { pairs: pairs_of(&id), perm: id.clone() }];
    let mut queue: VecDeque<Perm> = VecDeque::new();
    queue.push_back(id);
    while let Some(cur) = queue.pop_front() {
        for t in &gens {
            let next = t.compose(&cur);
            let key = key_of(&next);
            if !seen.contains_key(&key) {
                seen.insert(key, ());
                out.push(LabeledCopy { pairs: pairs_of(&next), perm: next.clone() });
                queue.push_back(next);
            }
        }
    }
    out
}

/// The embeddings stream: one permutation per distinct labeled copy.
pub fn enumerate_embeddings(g: &SimpleGraph) -> Vec<Perm> {
    enumerate_copies(g).into_iter().map(|c| c.perm).collect()
}
