//! 2-design bridges: necessary conditions (integrality and Fisher's
//! inequality), clique partitions and the induced non-membership evidence,
//! conversion between decompositions and (resolvable) designs, and the
//! affine-plane construction of square-lattice decompositions.

use num::rational::Ratio;

use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::graph::{builtin, pair_index, SimpleGraph};
use crate::perm::Perm;

pub const DESIGN_HEADER: &str = "%gdecomp-design v1";

/// Parameters of a 2-(v, k, λ) design with the derived replication and block
/// counts kept as exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub r: Ratio<u64>,
    pub b: Ratio<u64>,
}

impl DesignParams {
    pub fn new(v: u64, k: u64, lambda: u64) -> Result<DesignParams> {
        if !(k >= 2 && v > k && lambda >= 1) {
            return Err(Error::InvalidArgument(
                "design parameters need v > k >= 2 and lambda >= 1".into(),
            ));
        }
        let r = Ratio::new(lambda * (v - 1), k - 1);
        let b = Ratio::new(lambda * v * (v - 1), k * (k - 1));
        Ok(DesignParams { v, k, lambda, r, b })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NecessityFailure {
    /// replication count λ(v-1)/(k-1) not an integer
    ReplicationNotIntegral(Ratio<u64>),
    /// block count λv(v-1)/(k(k-1)) not an integer
    BlocksNotIntegral(Ratio<u64>),
    /// Fisher: a nontrivial 2-design has at least as many blocks as points
    Fisher { b: u64, v: u64 },
}

impl std::fmt::Display for NecessityFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NecessityFailure::ReplicationNotIntegral(r) => {
                write!(f, "replication count r = {r} is not an integer")
            }
            NecessityFailure::BlocksNotIntegral(b) => {
                write!(f, "block count b = {b} is not an integer")
            }
            NecessityFailure::Fisher { b, v } => {
                write!(f, "Fisher violation: b = {b} < v = {v}")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct NecessityReport {
    pub params: DesignParams,
    pub failures: Vec<NecessityFailure>,
}

impl NecessityReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the standard necessary conditions for a 2-(v, k, λ) design:
/// integral replication, integral block count, and Fisher's inequality.
/// Passing does not imply existence.
pub fn design_necessary(v: u64, k: u64, lambda: u64) -> Result<NecessityReport> {
    let params = DesignParams::new(v, k, lambda)?;
    let mut failures = Vec::new();
    if !params.r.is_integer() {
        failures.push(NecessityFailure::ReplicationNotIntegral(params.r));
    }
    if !params.b.is_integer() {
        failures.push(NecessityFailure::BlocksNotIntegral(params.b));
    } else {
        let b = params.b.to_integer();
        if b < v {
            failures.push(NecessityFailure::Fisher { b, v });
        }
    }
    Ok(NecessityReport { params, failures })
}

/// An explicit design: blocks over points `0..v-1`, optionally grouped into
/// resolution classes (lists of block indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    pub v: usize,
    pub k: usize,
    pub lambda: u32,
    pub blocks: Vec<Vec<usize>>,
    pub classes: Option<Vec<Vec<usize>>>,
}

impl Design {
    /// Recounts every pair and checks block sizes, the 2-design property,
    /// and (when classes are present) that each class partitions the points.
    pub fn validate(&self) -> Result<()> {
        if self.v < 2 || self.k < 2 {
            return Err(Error::InvalidArgument("design too small".into()));
        }
        let mut count = vec![0u32; self.v * (self.v - 1) / 2];
        for block in &self.blocks {
            if block.len() != self.k {
                return Err(Error::InvalidArgument(format!(
                    "block {block:?} does not have size {}",
                    self.k
                )));
            }
            let mut sorted = block.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != self.k || *sorted.last().unwrap() >= self.v {
                return Err(Error::InvalidArgument(format!("bad block {block:?}")));
            }
            for i in 0..self.k {
                for j in (i + 1)..self.k {
                    count[pair_index(self.v, sorted[i], sorted[j])] += 1;
                }
            }
        }
        if let Some(bad) = count.iter().position(|&c| c != self.lambda) {
            let pair = crate::graph::pair_from_index(self.v, bad);
            return Err(Error::InvalidArgument(format!(
                "pair {pair:?} lies in {} blocks, expected {}",
                count[bad], self.lambda
            )));
        }
        if let Some(classes) = &self.classes {
            let mut used = vec![false; self.blocks.len()];
            for class in classes {
                let mut seen = vec![false; self.v];
                for &bi in class {
                    if bi >= self.blocks.len() || used[bi] {
                        return Err(Error::InvalidArgument("bad resolution class".into()));
                    }
                    used[bi] = true;
                    for &p in &self.blocks[bi] {
                        if seen[p] {
                            return Err(Error::InvalidArgument(
                                "resolution class repeats a point".into(),
                            ));
                        }
                        seen[p] = true;
                    }
                }
                if seen.iter().any(|&s| !s) {
                    return Err(Error::InvalidArgument(
                        "resolution class does not cover all points".into(),
                    ));
                }
            }
            if used.iter().any(|&u| !u) {
                return Err(Error::InvalidArgument(
                    "classes do not partition the block list".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(DESIGN_HEADER);
        out.push('\n');
        out.push_str(&format!(
            "{} {} {} {}\n",
            self.v,
            self.k,
            self.lambda,
            self.blocks.len()
        ));
        let write_block = |out: &mut String, block: &[usize]| {
            let mut sorted = block.to_vec();
            sorted.sort_unstable();
            let line: Vec<String> = sorted.iter().map(|p| p.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        };
        match &self.classes {
            Some(classes) => {
                for (i, class) in classes.iter().enumerate() {
                    out.push_str(&format!("class {i}\n"));
                    for &bi in class {
                        write_block(&mut out, &self.blocks[bi]);
                    }
                }
            }
            None => {
                for block in &self.blocks {
                    write_block(&mut out, block);
                }
            }
        }
        out
    }
}

/// Parses the design text format.
pub fn parse_design(text: &str) -> Result<Design> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    if header.trim() != DESIGN_HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected `{DESIGN_HEADER}`"),
        });
    }
    let (_, counts) = lines
        .next()
        .ok_or(Error::Parse { line: 2, msg: "missing `<v> <k> <lambda> <b>`".into() })?;
    let nums: Vec<usize> = counts
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse { line: 2, msg: format!("bad integer `{t}`") })
        })
        .collect::<Result<_>>()?;
    if nums.len() != 4 {
        return Err(Error::Parse { line: 2, msg: "expected `<v> <k> <lambda> <b>`".into() });
    }
    let (v, k, lambda, b) = (nums[0], nums[1], nums[2] as u32, nums[3]);
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(b);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut in_classes = false;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("class ") {
            let ci: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse { line: lineno, msg: "bad class index".into() })?;
            if ci != classes.len() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("class indices must be sequential; got {ci}"),
                });
            }
            in_classes = true;
            classes.push(Vec::new());
            continue;
        }
        let block: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse { line: lineno, msg: format!("bad point `{t}`") })
            })
            .collect::<Result<_>>()?;
        if block.len() != k {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("block has {} points, expected {k}", block.len()),
            });
        }
        if in_classes {
            classes.last_mut().unwrap().push(blocks.len());
        }
        blocks.push(block);
    }
    if blocks.len() != b {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {b} blocks, found {}", blocks.len()),
        });
    }
    let design = Design {
        v,
        k,
        lambda,
        blocks,
        classes: in_classes.then_some(classes),
    };
    design.validate()?;
    Ok(design)
}

/// A partition of the template's edges into k-cliques.
#[derive(Clone, Debug)]
pub struct CliquePartition {
    pub k: usize,
    pub cliques: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub enum CliqueSearchOutcome {
    Found(CliquePartition),
    NotFound { nodes: u64 },
    Budget { nodes: u64 },
}

/// Exact backtracking for an edge partition into k-cliques, always extending
/// the lexicographically first uncovered edge.
pub fn clique_partition(g: &SimpleGraph, k: usize, budget: u64) -> Result<CliqueSearchOutcome> {
    if k < 3 {
        return Err(Error::InvalidArgument(
            "clique partition needs k >= 3; k = 2 is the trivial edge partition".into(),
        ));
    }
    let per = k * (k - 1) / 2;
    if g.edge_count() % per != 0 {
        return Err(Error::InvalidArgument(format!(
            "k(k-1)/2 = {per} does not divide e = {}",
            g.edge_count()
        )));
    }
    struct Ctx<'a> {
        g: &'a SimpleGraph,
        k: usize,
        covered: Vec<bool>,
        cliques: Vec<Vec<usize>>,
        nodes: u64,
        budget: u64,
        budget_hit: bool,
    }
    impl<'a> Ctx<'a> {
        fn first_uncovered(&self) -> Option<(usize, usize)> {
            let n = self.g.n();
            for &(u, v) in self.g.edges() {
                if !self.covered[pair_index(n, u, v)] {
                    return Some((u, v));
                }
            }
            None
        }

        fn cover(&mut self, clique: &[usize], on: bool) {
            let n = self.g.n();
            for i in 0..clique.len() {
                for j in (i + 1)..clique.len() {
                    let (a, b) = (clique[i].min(clique[j]), clique[i].max(clique[j]));
                    self.covered[pair_index(n, a, b)] = on;
                }
            }
        }

        fn extend(&mut self, clique: &mut Vec<usize>, from: usize) -> bool {
            if self.budget_hit {
                return false;
            }
            if clique.len() == self.k {
                self.nodes += 1;
                if self.nodes > self.budget {
                    self.budget_hit = true;
                    return false;
                }
                self.cover(clique, true);
                self.cliques.push(clique.clone());
                if self.place() {
                    return true;
                }
                self.cliques.pop();
                self.cover(clique, false);
                return false;
            }
            let n = self.g.n();
            for w in from..n {
                let fits = clique.iter().all(|&u| {
                    self.g.has_edge(u, w)
                        && !self.covered[pair_index(n, u.min(w), u.max(w))]
                });
                if fits {
                    clique.push(w);
                    if self.extend(clique, w + 1) {
                        return true;
                    }
                    clique.pop();
                    if self.budget_hit {
                        return false;
                    }
                }
            }
            false
        }

        fn place(&mut self) -> bool {
            let Some((u, v)) = self.first_uncovered() else {
                return true;
            };
            let mut clique = vec![u, v];
            self.extend(&mut clique, 0)
        }
    }
    let mut ctx = Ctx {
        g,
        k,
        covered: vec![false; g.pair_count()],
        cliques: Vec::new(),
        nodes: 0,
        budget,
        budget_hit: false,
    };
    if ctx.place() {
        Ok(CliqueSearchOutcome::Found(CliquePartition { k, cliques: ctx.cliques }))
    } else if ctx.budget_hit {
        Ok(CliqueSearchOutcome::Budget { nodes: ctx.nodes })
    } else {
        Ok(CliqueSearchOutcome::NotFound { nodes: ctx.nodes })
    }
}

#[derive(Clone, Debug)]
pub enum ObstructionOutcome {
    Pass(NecessityReport),
    /// the required 2-design cannot exist, so λ is not a member
    NonMemberEvidence(NecessityReport),
}

/// A clique partition of the template turns every hypothetical λ-fold
/// partition into a 2-(n, k, λ) design; failed necessary conditions are
/// evidence that λ is not a member.
pub fn clique_obstruction(
    g: &SimpleGraph,
    lambda: u64,
    partition: &CliquePartition,
) -> Result<ObstructionOutcome> {
    // the partition must really partition E(G)
    let n = g.n();
    let mut covered = vec![false; g.pair_count()];
    for clique in &partition.cliques {
        if clique.len() != partition.k {
            return Err(Error::InvalidArgument("clique of wrong size".into()));
        }
        for i in 0..clique.len() {
            for j in (i + 1)..clique.len() {
                let (a, b) = (clique[i].min(clique[j]), clique[i].max(clique[j]));
                if !g.has_edge(a, b) {
                    return Err(Error::InvalidArgument(format!(
                        "clique pair ({a},{b}) is not an edge"
                    )));
                }
                let idx = pair_index(n, a, b);
                if covered[idx] {
                    return Err(Error::InvalidArgument(format!(
                        "edge ({a},{b}) covered twice"
                    )));
                }
                covered[idx] = true;
            }
        }
    }
    let total: usize = partition.cliques.len() * partition.k * (partition.k - 1) / 2;
    if total != g.edge_count() {
        return Err(Error::InvalidArgument(
            "cliques do not cover every edge".into(),
        ));
    }
    let report = design_necessary(n as u64, partition.k as u64, lambda)?;
    if report.pass() {
        Ok(ObstructionOutcome::Pass(report))
    } else {
        Ok(ObstructionOutcome::NonMemberEvidence(report))
    }
}

/// Converts a certificate whose template is a single k-clique plus isolated
/// vertices, or a spanning union of disjoint k-cliques, into a 2-design.
/// Each copy contributes its clique images as blocks; for spanning disjoint
/// cliques each copy is one parallel class, so the design is resolvable.
pub fn decomposition_to_design(cert: &Decomposition) -> Result<(Design, bool)> {
    let g = cert.template();
    let comps = g.components();
    let cliques: Vec<&Vec<usize>> = comps.iter().filter(|c| c.len() >= 2).collect();
    if cliques.is_empty() {
        return Err(Error::InvalidArgument("template has no edges".into()));
    }
    let k = cliques[0].len();
    for c in &cliques {
        if c.len() != k {
            return Err(Error::InvalidArgument(
                "template components have mixed clique sizes".into(),
            ));
        }
        for i in 0..c.len() {
            for j in (i + 1)..c.len() {
                if !g.has_edge(c[i], c[j]) {
                    return Err(Error::InvalidArgument(
                        "template component is not a clique".into(),
                    ));
                }
            }
        }
    }
    let isolated = g.n() - cliques.len() * k;
    let resolvable = cliques.len() >= 2 && isolated == 0;
    if cliques.len() >= 2 && isolated > 0 {
        return Err(Error::InvalidArgument(
            "template is neither one clique plus isolated vertices nor spanning disjoint cliques"
                .into(),
        ));
    }

    let mut blocks = Vec::with_capacity(cert.copies().len() * cliques.len());
    let mut classes: Vec<Vec<usize>> = Vec::with_capacity(cert.copies().len());
    for copy in cert.copies() {
        let mut class = Vec::with_capacity(cliques.len());
        for clique in &cliques {
            let mut block: Vec<usize> = clique.iter().map(|&v| copy.image(v)).collect();
            block.sort_unstable();
            class.push(blocks.len());
            blocks.push(block);
        }
        classes.push(class);
    }
    let design = Design {
        v: g.n(),
        k,
        lambda: cert.multiplicity(),
        blocks,
        classes: resolvable.then_some(classes),
    };
    design.validate()?;
    Ok((design, resolvable))
}

fn is_prime(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The affine plane AG(2, q) for prime q: points `(x, y)` of `Z_q²` indexed
/// as `x*q + y`, lines `y = ax + b` grouped into parallel classes by slope,
/// plus the class of verticals. Prime powers are out of scope.
pub fn affine_plane(q: usize) -> Result<Design> {
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!(
            "affine plane construction needs a prime order, got {q}"
        )));
    }
    let point = |x: usize, y: usize| x * q + y;
    let mut blocks = Vec::with_capacity(q * (q + 1));
    let mut classes = Vec::with_capacity(q + 1);
    for a in 0..q {
        let mut class = Vec::with_capacity(q);
        for b in 0..q {
            let mut line: Vec<usize> = (0..q).map(|x| point(x, (a * x + b) % q)).collect();
            line.sort_unstable();
            class.push(blocks.len());
            blocks.push(line);
        }
        classes.push(class);
    }
    let mut vclass = Vec::with_capacity(q);
    for c in 0..q {
        let line: Vec<usize> = (0..q).map(|y| point(c, y)).collect();
        vclass.push(blocks.len());
        blocks.push(line);
    }
    classes.push(vclass);
    let design = Design { v: q * q, k: q, lambda: 1, blocks, classes: Some(classes) };
    design.validate()?;
    Ok(design)
}

/// Pairs up the parallel classes of a resolvable 2-(q², q, 1) design (odd q)
/// in input order; each pair of classes is the row/column clique structure of
/// one square-lattice copy, giving a decomposition of `K_{q²}` into `(q+1)/2`
/// copies of `lattice:q`.
pub fn lattice_from_affine_plane(plane: &Design) -> Result<Decomposition> {
    let q = plane.k;
    if plane.lambda != 1 || plane.v != q * q {
        return Err(Error::InvalidArgument(
            "input is not a 2-(q^2, q, 1) design".into(),
        ));
    }
    if q % 2 == 0 {
        return Err(Error::InvalidArgument(
            "parallel classes cannot be paired: q must be odd".into(),
        ));
    }
    if q < 3 {
        return Err(Error::InvalidArgument("q must be at least 3".into()));
    }
    plane.validate()?;
    let classes = plane
        .classes
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("design carries no resolution classes".into()))?;
    if classes.len() != q + 1 {
        return Err(Error::InvalidArgument(format!(
            "expected {} parallel classes, got {}",
            q + 1,
            classes.len()
        )));
    }
    let template = builtin("lattice", &[q])?;
    let mut copies = Vec::with_capacity((q + 1) / 2);
    for pair in classes.chunks(2) {
        let (rows, cols) = (&pair[0], &pair[1]);
        // template vertex (i, j) = i*q + j maps to the unique point of
        // row-block i meeting column-block j
        let mut images = vec![usize::MAX; q * q];
        for (i, &rbi) in rows.iter().enumerate() {
            for (j, &cbi) in cols.iter().enumerate() {
                let rb = &plane.blocks[rbi];
                let cb = &plane.blocks[cbi];
                let mut meet = rb.iter().filter(|p| cb.contains(p));
                let p = *meet
                    .next()
                    .ok_or_else(|| Error::InvalidArgument("classes do not cross".into()))?;
                if meet.next().is_some() {
                    return Err(Error::InvalidArgument(
                        "two parallel classes share two points; not a plane".into(),
                    ));
                }
                images[i * q + j] = p;
            }
        }
        let perm = Perm::from_images(images)
            .map_err(|_| Error::InvalidArgument("classes do not form a grid".into()))?;
        copies.push(perm);
    }
    let cert = Decomposition::new(template, 1, copies)?;
    match cert.verify() {
        crate::decompose::VerifyOutcome::Valid => Ok(cert),
        crate::decompose::VerifyOutcome::Invalid(f) => Err(Error::CertificateInvalid(
            format!("lattice construction failed verification: {f}"),
        )),
    }
}
