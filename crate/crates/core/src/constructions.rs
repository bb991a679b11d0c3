//! Explicit constructive methods: Walecki Hamiltonian-cycle decompositions,
//! cyclic base-block development on `Z_{n-1} ∪ {∞}`, and permutation-group
//! orbit covers.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::canon::{canonical_labeling, is_isomorphic};
use crate::decompose::{Decomposition, MAX_MULTIPLICITY};
use crate::error::{Error, Result};
use crate::graph::{builtin, pair_index, SimpleGraph};
use crate::perm::{Perm, PermutationGens};

/// Zigzag order `0, 1, q-1, 2, q-2, ...` visiting all of `Z_q`.
fn zigzag(q: usize) -> Vec<usize> {
    let mut seq = Vec::with_capacity(q);
    seq.push(0);
    for i in 1..q {
        seq.push(if i % 2 == 1 { (i + 1) / 2 } else { q - i / 2 });
    }
    seq
}

/// Embedding of `cycle:n` whose image is the Hamiltonian cycle visiting
/// `order[0], order[1], ...`.
fn cycle_embedding(order: &[usize]) -> Perm {
    Perm::from_images(order.to_vec()).expect("cycle order is a bijection")
}

/// Partition of `K_n` (odd `n >= 3`) into `(n-1)/2` Hamiltonian cycles by the
/// rotating zigzag on `Z_{n-1}` with a fixed hub vertex `n-1`.
pub fn walecki_odd(n: usize) -> Result<Decomposition> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidArgument("walecki_odd needs odd n >= 3".into()));
    }
    let q = n - 1;
    let template = builtin("cycle", &[n])?;
    let base = zigzag(q);
    let mut copies = Vec::with_capacity(q / 2);
    for j in 0..q / 2 {
        let mut order = Vec::with_capacity(n);
        order.push(n - 1);
        order.extend(base.iter().map(|&x| (x + j) % q));
        copies.push(cycle_embedding(&order));
    }
    let cert = Decomposition::new(template, 1, copies)?;
    debug_assert!(cert.is_valid());
    Ok(cert)
}

/// Partition of `2K_n` (even `n >= 4`) into `n-1` Hamiltonian cycles.
///
/// A seed Hamiltonian cycle `0-1-...-(n-1)-0` splits into perfect matchings
/// `M1` and `M2`. The rotating zigzag on `Z_{n-1} ∪ {hub}` decomposes `K_n`
/// minus one specific perfect matching into `(n-2)/2` cycles; relabeling that
/// matching onto `M1` and onto `M2` covers `K_n - M1` and `K_n - M2`, and the
/// seed cycle `M1 ∪ M2` completes the double cover.
pub fn walecki_even(n: usize) -> Result<Decomposition> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidArgument("walecki_even needs even n >= 4".into()));
    }
    let q = n - 1;
    let template = builtin("cycle", &[n])?;
    let base = zigzag(q);
    let mut rot_copies = Vec::with_capacity((n - 2) / 2);
    let mut covered = vec![false; n * n];
    for j in 0..(n - 2) / 2 {
        let mut order = Vec::with_capacity(n);
        order.push(n - 1);
        order.extend(base.iter().map(|&x| (x + j) % q));
        for i in 0..n {
            let (a, b) = (order[i], order[(i + 1) % n]);
            covered[a * n + b] = true;
            covered[b * n + a] = true;
        }
        rot_copies.push(cycle_embedding(&order));
    }
    // the uncovered pairs form a perfect matching
    let mut leftover: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if !covered[u * n + v] {
                leftover.push((u, v));
            }
        }
    }
    assert_eq!(leftover.len(), n / 2, "zigzag rotations leave a perfect matching");

    let match_onto = |target: &[(usize, usize)]| -> Perm {
        let mut images = vec![usize::MAX; n];
        for (&(a, b), &(c, d)) in leftover.iter().zip(target) {
            images[a] = c;
            images[b] = d;
        }
        Perm::from_images(images).expect("matching endpoints relabel bijectively")
    };
    let m1: Vec<(usize, usize)> = (0..n / 2).map(|i| (2 * i, 2 * i + 1)).collect();
    let m2: Vec<(usize, usize)> = (0..n / 2)
        .map(|i| {
            let (a, b) = (2 * i + 1, (2 * i + 2) % n);
            (a.min(b), a.max(b))
        })
        .collect();
    let tau1 = match_onto(&m1);
    let tau2 = match_onto(&m2);

    let mut copies = Vec::with_capacity(n - 1);
    for w in &rot_copies {
        copies.push(tau1.compose(w));
    }
    for w in &rot_copies {
        copies.push(tau2.compose(w));
    }
    copies.push(Perm::identity(n)); // the seed cycle M1 ∪ M2
    let cert = Decomposition::new(template, 2, copies)?;
    match cert.verify() {
        crate::decompose::VerifyOutcome::Valid => Ok(cert),
        crate::decompose::VerifyOutcome::Invalid(f) => {
            Err(Error::CertificateInvalid(f.to_string()))
        }
    }
}

/// A base drawing of the template on `Z_{n-1} ∪ {∞}` whose development by
/// the rotation `i ↦ i+1` yields an `m`-fold cover.
#[derive(Clone, Debug)]
pub struct CyclicBase {
    template: SimpleGraph,
    n: usize,
    m: u32,
    /// template -> host drawing; `∞` is host vertex `n-1`
    embedding: Perm,
    base_edges: Vec<(usize, usize)>,
    distance_counts: BTreeMap<usize, u32>,
    infinity_degree: u32,
}

impl CyclicBase {
    pub fn template(&self) -> &SimpleGraph {
        &self.template
    }

    pub fn host_size(&self) -> usize {
        self.n
    }

    pub fn multiplicity(&self) -> u32 {
        self.m
    }

    pub fn embedding(&self) -> &Perm {
        &self.embedding
    }

    pub fn base_edges(&self) -> &[(usize, usize)] {
        &self.base_edges
    }

    pub fn distance_counts(&self) -> &BTreeMap<usize, u32> {
        &self.distance_counts
    }

    pub fn infinity_degree(&self) -> u32 {
        self.infinity_degree
    }

    /// Validates a drawing given as an embedding of the template.
    pub fn from_embedding(template: &SimpleGraph, m: u32, embedding: Perm) -> Result<CyclicBase> {
        let n = template.n();
        if embedding.degree() != n {
            return Err(Error::InvalidArgument("embedding degree mismatch".into()));
        }
        check_cyclic_parameters(template, m)?;
        let q = n - 1;
        let hub = n - 1;
        let mut distance_counts: BTreeMap<usize, u32> = BTreeMap::new();
        let mut infinity_degree = 0u32;
        let mut base_edges = Vec::with_capacity(template.edge_count());
        for &e in template.edges() {
            let (u, v) = embedding.pair_image(e);
            base_edges.push((u, v));
            if v == hub {
                infinity_degree += 1;
            } else {
                let diff = v - u;
                let d = diff.min(q - diff);
                *distance_counts.entry(d).or_insert(0) += 1;
            }
        }
        base_edges.sort_unstable();
        if infinity_degree != m {
            return Err(Error::InvalidArgument(format!(
                "drawing has {infinity_degree} edges at ∞, development needs {m}"
            )));
        }
        for d in 1..=q / 2 {
            let count = distance_counts.get(&d).copied().unwrap_or(0);
            // the half class (q even, d = q/2) has rotation orbits of length
            // q/2, so each base edge covers its class pairs twice
            let want = if q % 2 == 0 && d == q / 2 { m / 2 } else { m };
            if count != want {
                return Err(Error::InvalidArgument(format!(
                    "distance class {d} has {count} base edges, development needs {want}"
                )));
            }
        }
        Ok(CyclicBase {
            template: template.clone(),
            n,
            m,
            embedding,
            base_edges,
            distance_counts,
            infinity_degree,
        })
    }

    /// Validates a drawing given as an edge list; the drawing must be
    /// isomorphic to the template. The embedding is derived through canonical
    /// labelings, so it is deterministic.
    pub fn from_edges(
        template: &SimpleGraph,
        m: u32,
        n: usize,
        edges: &[(usize, usize)],
    ) -> Result<CyclicBase> {
        if n != template.n() {
            return Err(Error::InvalidArgument(
                "drawing host size must match template vertex count".into(),
            ));
        }
        let drawing = SimpleGraph::new(n, edges)?;
        if !is_isomorphic(template, &drawing) {
            return Err(Error::InvalidArgument(
                "drawing is not isomorphic to the template".into(),
            ));
        }
        let ct = canonical_labeling(template);
        let cd = canonical_labeling(&drawing);
        let embedding = cd.inverse().compose(&ct);
        debug_assert_eq!(template.apply_perm(&embedding), drawing);
        Self::from_embedding(template, m, embedding)
    }

    /// Develops the base: copy `j` is the base shifted by `j` on `Z_{n-1}`,
    /// `∞` fixed, for `j = 0..n-2`.
    pub fn develop(&self) -> Result<Decomposition> {
        let q = self.n - 1;
        let mut copies = Vec::with_capacity(q);
        for j in 0..q {
            let mut images: Vec<usize> = (0..q).map(|x| (x + j) % q).collect();
            images.push(self.n - 1);
            let rho = Perm::from_images(images).unwrap();
            copies.push(rho.compose(&self.embedding));
        }
        let cert = Decomposition::new(self.template.clone(), self.m, copies)?;
        match cert.verify() {
            crate::decompose::VerifyOutcome::Valid => Ok(cert),
            crate::decompose::VerifyOutcome::Invalid(f) => Err(Error::CertificateInvalid(
                format!("development failed verification: {f}"),
            )),
        }
    }
}

/// The counting precondition for cyclic development: `e(n-1) = m n(n-1)/2`,
/// i.e. `2e = mn`.
pub fn check_cyclic_parameters(template: &SimpleGraph, m: u32) -> Result<()> {
    let n = template.n();
    let e = template.edge_count();
    if m == 0 {
        return Err(Error::InvalidArgument("multiplicity must be positive".into()));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("host too small".into()));
    }
    if 2 * e != m as usize * n {
        return Err(Error::InvalidArgument(format!(
            "cyclic development needs 2e = mn, got 2*{e} != {m}*{n}"
        )));
    }
    let q = n - 1;
    if q % 2 == 0 && q / 2 >= 1 && m % 2 == 1 {
        // any drawing would need m/2 base edges in the half distance class
        return Err(Error::InvalidArgument(
            "half distance class needs even multiplicity".into(),
        ));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub enum CyclicSearchOutcome {
    Found(CyclicBase),
    NotFound { nodes: u64 },
    Budget { nodes: u64 },
}

/// Backtracking search for a cyclic base: assigns host positions to template
/// vertices in degree-descending order, pruning on remaining distance-class
/// capacities and the ∞-degree requirement.
pub fn cyclic_base_search(
    template: &SimpleGraph,
    m: u32,
    budget: u64,
) -> Result<CyclicSearchOutcome> {
    check_cyclic_parameters(template, m)?;
    let n = template.n();
    let q = n - 1;
    let hub = n - 1;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(template.degree(v)), v));
    // neighbors among earlier-placed vertices, resolved once
    let earlier_nbrs: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            order[..i]
                .iter()
                .copied()
                .filter(|&u| template.has_edge(u, v))
                .collect()
        })
        .collect();

    let half = (q % 2 == 0).then(|| q / 2);
    let mut cap: Vec<i64> = vec![0; q / 2 + 1];
    for d in 1..=q / 2 {
        cap[d] = if half == Some(d) { (m / 2) as i64 } else { m as i64 };
    }
    let mut cap_inf = m as i64;

    struct Ctx<'a> {
        template: &'a SimpleGraph,
        order: &'a [usize],
        earlier_nbrs: &'a [Vec<usize>],
        image: Vec<usize>,
        used: Vec<bool>,
        q: usize,
        hub: usize,
        m: u32,
        nodes: u64,
        budget: u64,
        budget_hit: bool,
    }

    impl<'a> Ctx<'a> {
        fn assign(&mut self, i: usize, cap: &mut [i64], cap_inf: &mut i64) -> Option<Perm> {
            if i == self.order.len() {
                let perm = Perm::from_images(self.image.clone()).unwrap();
                return Some(perm);
            }
            let v = self.order[i];
            for host in 0..=self.hub {
                if self.used[host] {
                    continue;
                }
                if host == self.hub && self.template.degree(v) != self.m as usize {
                    continue;
                }
                self.nodes += 1;
                if self.nodes > self.budget {
                    self.budget_hit = true;
                    return None;
                }
                // classify edges to already-placed neighbors
                let mut delta: Vec<usize> = Vec::new(); // distance classes hit; hub edges as 0
                let mut ok = true;
                for &u in &self.earlier_nbrs[i] {
                    let hu = self.image[u];
                    let (a, b) = (hu.min(host), hu.max(host));
                    if b == self.hub {
                        if *cap_inf == 0 {
                            ok = false;
                            break;
                        }
                        *cap_inf -= 1;
                        delta.push(0);
                    } else {
                        let diff = b - a;
                        let d = diff.min(self.q - diff);
                        if cap[d] == 0 {
                            ok = false;
                            break;
                        }
                        cap[d] -= 1;
                        delta.push(d);
                    }
                }
                if ok {
                    self.image[v] = host;
                    self.used[host] = true;
                    if let Some(found) = self.assign(i + 1, cap, cap_inf) {
                        return Some(found);
                    }
                    self.image[v] = usize::MAX;
                    self.used[host] = false;
                }
                for &d in &delta {
                    if d == 0 {
                        *cap_inf += 1;
                    } else {
                        cap[d] += 1;
                    }
                }
                if self.budget_hit {
                    return None;
                }
            }
            None
        }
    }

    let mut ctx = Ctx {
        template,
        order: &order,
        earlier_nbrs: &earlier_nbrs,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        q,
        hub,
        m,
        nodes: 0,
        budget,
        budget_hit: false,
    };
    match ctx.assign(0, &mut cap, &mut cap_inf) {
        Some(embedding) => {
            let base = CyclicBase::from_embedding(template, m, embedding)?;
            Ok(CyclicSearchOutcome::Found(base))
        }
        None if ctx.budget_hit => Ok(CyclicSearchOutcome::Budget { nodes: ctx.nodes }),
        None => Ok(CyclicSearchOutcome::NotFound { nodes: ctx.nodes }),
    }
}

/// The orbit of the identity embedding under a permutation group, with the
/// uniform pair-coverage multiplicity.
#[derive(Clone, Debug)]
pub struct OrbitCover {
    pub group: PermutationGens,
    pub orbit: Vec<Perm>,
    pub m: u32,
}

pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// Closes the identity embedding of the template under the generators,
/// checks pair-coverage uniformity directly, and emits a verified
/// certificate when uniform.
pub fn orbit_construction(
    template: &SimpleGraph,
    gens: &PermutationGens,
    cap: usize,
) -> Result<(OrbitCover, Decomposition)> {
    let n = template.n();
    if gens.degree != n {
        return Err(Error::InvalidArgument(format!(
            "generator degree {} does not match template vertex count {n}",
            gens.degree
        )));
    }
    let pairs = template.pair_count();
    let words = pairs.div_ceil(64).max(1);
    let key_of = |perm: &Perm| -> Vec<u64> {
        let mut key = vec![0u64; words];
        for &e in template.edges() {
            let (u, v) = perm.pair_image(e);
            let k = pair_index(n, u, v);
            key[k / 64] |= 1u64 << (k % 64);
        }
        key
    };
    let id = Perm::identity(n);
    let mut seen: HashMap<Vec<u64>, ()> = HashMap::new();
    seen.insert(key_of(&id), ());
    let mut orbit = vec![id.clone()];
    let mut queue: VecDeque<Perm> = VecDeque::new();
    queue.push_back(id);
    while let Some(cur) = queue.pop_front() {
        for g in &gens.generators {
            let next = g.compose(&cur);
            let key = key_of(&next);
            if !seen.contains_key(&key) {
                if orbit.len() >= cap {
                    return Err(Error::OrbitCap { cap });
                }
                seen.insert(key, ());
                orbit.push(next.clone());
                queue.push_back(next);
            }
        }
    }

    let mut count = vec![0u32; pairs];
    for perm in &orbit {
        for &e in template.edges() {
            let (u, v) = perm.pair_image(e);
            count[pair_index(n, u, v)] += 1;
        }
    }
    let m = count[0];
    if let Some(k) = count.iter().position(|&c| c != m) {
        let pa = crate::graph::pair_from_index(n, 0);
        let pb = crate::graph::pair_from_index(n, k);
        return Err(Error::NonUniformCoverage {
            pair_a: pa,
            count_a: m,
            pair_b: pb,
            count_b: count[k],
        });
    }
    if m == 0 || m > MAX_MULTIPLICITY {
        return Err(Error::InvalidArgument(format!(
            "orbit multiplicity {m} out of certificate range"
        )));
    }
    let cert = Decomposition::new(template.clone(), m, orbit.clone())?;
    match cert.verify() {
        crate::decompose::VerifyOutcome::Valid => {}
        crate::decompose::VerifyOutcome::Invalid(f) => {
            return Err(Error::CertificateInvalid(f.to_string()))
        }
    }
    let cover = OrbitCover { group: gens.clone(), orbit, m };
    Ok((cover, cert))
}
