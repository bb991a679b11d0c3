//! Exact maximum clique and maximum independent set by branch and bound
//! with a greedy coloring bound.

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

const CLIQUE_BUDGET: u64 = 200_000_000;

struct MaxClique<'a> {
    g: &'a SimpleGraph,
    best: usize,
    nodes: u64,
}

impl<'a> MaxClique<'a> {
    /// Greedy coloring of `cand`; returns vertices ordered by color with their
    /// color numbers (1-based). The color number bounds the clique size.
    fn color_order(&self, cand: &[usize]) -> Vec<(usize, usize)> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cand {
            let mut placed = false;
            for class in classes.iter_mut() {
                if class.iter().all(|&u| !self.g.has_edge(u, v)) {
                    class.push(v);
                    placed = true;
                    break;
                }
            }
            if !placed {
                classes.push(vec![v]);
            }
        }
        let mut out = Vec::with_capacity(cand.len());
        for (ci, class) in classes.iter().enumerate() {
            for &v in class {
                out.push((v, ci + 1));
            }
        }
        out
    }

    fn expand(&mut self, current: usize, cand: Vec<usize>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > CLIQUE_BUDGET {
            return Err(Error::Budget { nodes: self.nodes });
        }
        let ordered = self.color_order(&cand);
        for i in (0..ordered.len()).rev() {
            let (v, color) = ordered[i];
            if current + color <= self.best {
                return Ok(());
            }
            let next: Vec<usize> = ordered[..i]
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| self.g.has_edge(u, v))
                .collect();
            if current + 1 > self.best {
                self.best = current + 1;
            }
            if !next.is_empty() {
                self.expand(current + 1, next)?;
            }
        }
        Ok(())
    }
}

/// Size of a maximum clique.
pub fn max_clique(g: &SimpleGraph) -> Result<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut mc = MaxClique { g, best: 1.min(g.n()), nodes: 0 };
    mc.expand(0, order)?;
    Ok(mc.best)
}

/// Size of a maximum independent set (clique number of the complement).
pub fn max_independent_set(g: &SimpleGraph) -> Result<usize> {
    max_clique(&g.complement())
}

/// Exact `(ω, α)` pair.
pub fn clique_and_independence(g: &SimpleGraph) -> Result<(usize, usize)> {
    Ok((max_clique(g)?, max_independent_set(g)?))
}
