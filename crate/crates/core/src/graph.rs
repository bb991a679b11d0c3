//! Labeled simple graphs on vertices `0..n-1`, the builtin families, and the
//! graph file format.
//!
//! Builtin labelings are fixed so that emitted certificates are reproducible
//! byte for byte:
//!
//! - `petersen`: vertices are the 2-subsets of `{0..4}` in lexicographic
//!   order, adjacent when disjoint (the Kneser labeling).
//! - `cycle:N`: `0-1-...-(N-1)-0`.
//! - `star:N`: centre `0`, leaves `1..N-1`.
//! - `complete:N`: all pairs.
//! - `triangular:L`: vertices are the 2-subsets of `{0..L-1}` in
//!   lexicographic order, adjacent when they intersect (line graph of `K_L`).
//! - `lattice:Q`: vertex `(a,b)` is index `a*Q+b`, adjacent when the rows or
//!   the columns agree (line graph of `K_{Q,Q}`).
//! - `cliques:K,S`: clique `i` on `{i*K .. i*K+K-1}`.
//! - `cliqueplus:K,N`: one clique on `{0..K-1}` plus `N-K` isolated vertices.
//! - `trianglependants`: triangle `{0,1,2}` with pendant edges `0-3`, `1-4`,
//!   `2-5`.
//! - `shrikhande`: vertex `(a,b)` of `Z_4 x Z_4` is index `4a+b`, adjacent
//!   when the difference is `±(0,1)`, `±(1,0)` or `±(1,1)`.

use crate::error::{Error, Result};
use crate::perm::Perm;

pub const GRAPH_HEADER: &str = "%gdecomp-graph v1";

/// A labeled simple graph on vertices `0..n-1`.
///
/// Edges are stored as pairs `(u, v)` with `u < v`, sorted lexicographically.
/// Loops and duplicate edges are rejected at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<bool>,
}

impl std::fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SimpleGraph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl SimpleGraph {
    /// Builds a graph from an edge list. Edges may be given in any order and
    /// orientation; loops and duplicates are errors, silent merging is not.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) has a vertex out of range for n={n}"
                )));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({},{})",
                w[0].0, w[0].1
            )));
        }
        let mut adj = vec![false; n * n];
        for &(u, v) in &norm {
            adj[u * n + v] = true;
            adj[v * n + u] = true;
        }
        Ok(SimpleGraph { n, edges: norm, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of unordered vertex pairs, `n(n-1)/2`.
    pub fn pair_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.adj[v * self.n + u]).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// gcd of the vertex degrees with the convention `gcd(0, x) = x`, so
    /// isolated vertices contribute nothing. Zero only for edgeless graphs.
    pub fn degree_gcd(&self) -> usize {
        self.degrees().into_iter().fold(0, gcd)
    }

    /// `Some(k)` when every vertex has degree `k`.
    pub fn regularity(&self) -> Option<usize> {
        let degs = self.degrees();
        let k = degs[0];
        degs.iter().all(|&d| d == k).then_some(k)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in 0..self.n {
                if self.adj[v * self.n + u] && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Connected components as sorted vertex lists, sorted by first vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for u in 0..self.n {
                    if self.adj[v * self.n + u] && !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// The complement graph: edge sets of `G` and `complement(G)` partition
    /// the `n(n-1)/2` pairs.
    pub fn complement(&self) -> SimpleGraph {
        let mut edges = Vec::with_capacity(self.pair_count() - self.edge_count());
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        SimpleGraph::new(self.n, &edges).expect("complement of a valid graph is valid")
    }

    /// The image graph under a vertex permutation.
    pub fn apply_perm(&self, p: &Perm) -> SimpleGraph {
        assert_eq!(p.degree(), self.n, "permutation degree mismatch");
        let edges: Vec<(usize, usize)> =
            self.edges.iter().map(|&(u, v)| (p.image(u), p.image(v))).collect();
        SimpleGraph::new(self.n, &edges).expect("permutation image of a valid graph is valid")
    }

    /// Canonical text form (the graph file format).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(GRAPH_HEADER);
        out.push('\n');
        out.push_str(&format!("{} {}\n", self.n, self.edges.len()));
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Index of the unordered pair `(u, v)`, `u < v`, in the lexicographic
/// ordering of all pairs on `n` vertices.
#[inline]
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(n: usize, mut idx: usize) -> (usize, usize) {
    for u in 0..n {
        let row = n - u - 1;
        if idx < row {
            return (u, u + 1 + idx);
        }
        idx -= row;
    }
    panic!("pair index out of range");
}

fn lex_pairs(l: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(l * (l - 1) / 2);
    for a in 0..l {
        for b in (a + 1)..l {
            pairs.push((a, b));
        }
    }
    pairs
}

/// Constructs a builtin family member. `params` are the integers after the
/// colon in the spec syntax, e.g. `cliques:3,3` passes `[3, 3]`.
pub fn builtin(name: &str, params: &[usize]) -> Result<SimpleGraph> {
    let bad = |msg: &str| Error::InvalidParams { family: name.to_string(), msg: msg.to_string() };
    let arity = |k: usize| -> Result<()> {
        if params.len() != k {
            Err(bad(&format!("expected {k} parameter(s), got {}", params.len())))
        } else {
            Ok(())
        }
    };
    match name {
        "petersen" => {
            arity(0)?;
            let verts = lex_pairs(5);
            let mut edges = Vec::new();
            for i in 0..10 {
                for j in (i + 1)..10 {
                    let (a, b) = verts[i];
                    let (c, d) = verts[j];
                    if a != c && a != d && b != c && b != d {
                        edges.push((i, j));
                    }
                }
            }
            SimpleGraph::new(10, &edges)
        }
        "cycle" => {
            arity(1)?;
            let n = params[0];
            if n < 3 {
                return Err(bad("cycle needs n >= 3"));
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            SimpleGraph::new(n, &edges)
        }
        "star" => {
            arity(1)?;
            let n = params[0];
            if n < 2 {
                return Err(bad("star needs n >= 2"));
            }
            let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
            SimpleGraph::new(n, &edges)
        }
        "complete" => {
            arity(1)?;
            let n = params[0];
            if n < 2 {
                return Err(bad("complete needs n >= 2"));
            }
            SimpleGraph::new(n, &lex_pairs(n))
        }
        "triangular" => {
            arity(1)?;
            let l = params[0];
            if l < 3 {
                return Err(bad("triangular needs l >= 3"));
            }
            let verts = lex_pairs(l);
            let n = verts.len();
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let (a, b) = verts[i];
                    let (c, d) = verts[j];
                    if a == c || a == d || b == c || b == d {
                        edges.push((i, j));
                    }
                }
            }
            SimpleGraph::new(n, &edges)
        }
        "lattice" => {
            arity(1)?;
            let q = params[0];
            if q < 2 {
                return Err(bad("lattice needs q >= 2"));
            }
            let n = q * q;
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if i / q == j / q || i % q == j % q {
                        edges.push((i, j));
                    }
                }
            }
            SimpleGraph::new(n, &edges)
        }
        "cliques" => {
            arity(2)?;
            let (k, s) = (params[0], params[1]);
            if k < 2 || s < 1 {
                return Err(bad("cliques needs k >= 2 and s >= 1"));
            }
            let mut edges = Vec::new();
            for c in 0..s {
                for a in 0..k {
                    for b in (a + 1)..k {
                        edges.push((c * k + a, c * k + b));
                    }
                }
            }
            SimpleGraph::new(k * s, &edges)
        }
        "cliqueplus" => {
            arity(2)?;
            let (k, n) = (params[0], params[1]);
            if k < 2 || n < k {
                return Err(bad("cliqueplus needs n >= k >= 2"));
            }
            SimpleGraph::new(n, &lex_pairs(k))
        }
        "trianglependants" => {
            arity(0)?;
            SimpleGraph::new(6, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 4), (2, 5)])
        }
        "shrikhande" => {
            arity(0)?;
            let diffs = [(0usize, 1usize), (0, 3), (1, 0), (3, 0), (1, 1), (3, 3)];
            let mut edges = Vec::new();
            for i in 0..16 {
                for j in (i + 1)..16 {
                    let (a, b) = (i / 4, i % 4);
                    let (c, d) = (j / 4, j % 4);
                    let delta = ((c + 4 - a) % 4, (d + 4 - b) % 4);
                    if diffs.contains(&delta) {
                        edges.push((i, j));
                    }
                }
            }
            SimpleGraph::new(16, &edges)
        }
        _ => Err(Error::UnknownFamily(name.to_string())),
    }
}

/// Parses a builtin spec of the form `name` or `name:p1,p2`.
pub fn builtin_from_spec(spec: &str) -> Result<SimpleGraph> {
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (spec, None),
    };
    let params: Vec<usize> = match rest {
        None => Vec::new(),
        Some(r) => r
            .split(',')
            .map(|t| {
                t.trim().parse::<usize>().map_err(|_| Error::InvalidParams {
                    family: name.to_string(),
                    msg: format!("bad integer parameter `{t}`"),
                })
            })
            .collect::<Result<_>>()?,
    };
    builtin(name, &params)
}

/// Parses graph file contents, or a builtin name when the text is a single
/// token without the file header. Templates must have at least one edge.
pub fn parse_graph(text: &str) -> Result<SimpleGraph> {
    let trimmed = text.trim();
    let g = if trimmed.starts_with('%') {
        parse_graph_file(text)?
    } else if !trimmed.contains('\n') && !trimmed.contains(' ') {
        builtin_from_spec(trimmed)?
    } else {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected `{GRAPH_HEADER}` header or a builtin name"),
        });
    };
    if g.edge_count() == 0 {
        return Err(Error::InvalidGraph(
            "templates need at least one edge".into(),
        ));
    }
    Ok(g)
}

fn parse_graph_file(text: &str) -> Result<SimpleGraph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    if header.trim() != GRAPH_HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected `{GRAPH_HEADER}`, got `{}`", header.trim()),
        });
    }
    let (_, counts) = lines
        .next()
        .ok_or(Error::Parse { line: 2, msg: "missing `<n> <e>` line".into() })?;
    let mut it = counts.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(Error::Parse { line: 2, msg: "bad vertex count".into() })?;
    let e: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(Error::Parse { line: 2, msg: "bad edge count".into() })?;
    if it.next().is_some() {
        return Err(Error::Parse { line: 2, msg: "trailing tokens after `<n> <e>`".into() });
    }
    if n == 0 {
        return Err(Error::Parse { line: 2, msg: "vertex count must be positive".into() });
    }
    let mut edges = Vec::with_capacity(e);
    let mut prev: Option<(usize, usize)> = None;
    for _ in 0..e {
        let (idx, line) = lines.next().ok_or_else(|| Error::Parse {
            line: 2 + edges.len() + 1,
            msg: format!("expected {e} edge lines, found {}", edges.len()),
        })?;
        let lineno = idx + 1;
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(Error::Parse { line: lineno, msg: "bad edge endpoint".into() })?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(Error::Parse { line: lineno, msg: "bad edge endpoint".into() })?;
        if it.next().is_some() {
            return Err(Error::Parse { line: lineno, msg: "trailing tokens on edge line".into() });
        }
        if u == v {
            return Err(Error::Parse { line: lineno, msg: format!("loop edge {u} {v}") });
        }
        if u > v {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("edge {u} {v} not in `u < v` form"),
            });
        }
        if v >= n {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("vertex {v} out of range for n={n}"),
            });
        }
        if let Some(p) = prev {
            if p == (u, v) {
                return Err(Error::Parse { line: lineno, msg: format!("duplicate edge {u} {v}") });
            }
            if p > (u, v) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "edges not in strictly sorted order".into(),
                });
            }
        }
        prev = Some((u, v));
        edges.push((u, v));
    }
    for (idx, line) in lines {
        if !line.trim().is_empty() {
            return Err(Error::Parse {
                line: idx + 1,
                msg: "unexpected content after edge list".into(),
            });
        }
    }
    SimpleGraph::new(n, &edges)
}
