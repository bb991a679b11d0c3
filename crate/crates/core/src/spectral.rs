//! The eigenspace-intersection obstruction for regular templates.
//!
//! A partition of `mK_n` into `t = m(n-1)/k` copies of a connected k-regular
//! template forces, for any eigenvalue θ ≠ k whose eigenspaces are large
//! enough to intersect across `t-1` copies, the value `-m - (t-1)θ` to be an
//! eigenvalue of the template. When that value misses the spectrum, no
//! partition exists.
//!
//! Verdicts used as non-membership proofs are conservative: a forced value
//! within the margin of any eigenvalue cluster yields Inconclusive, and for
//! integer spectra the verdict is certified exactly by integral rank
//! computations instead of floating point.

use nalgebra::DMatrix;
use num::rational::BigRational;
use num::{BigInt, Zero};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Eigenvalue clustering gap and the obstruction margin.
pub const CLUSTER_GAP: f64 = 1e-6;
pub const OBSTRUCTION_MARGIN: f64 = 1e-6;

/// Clustered adjacency spectrum, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct SpectrumSummary {
    pub clusters: Vec<(f64, usize)>,
    pub tolerance: f64,
}

/// Dense symmetric eigendecomposition of the adjacency matrix, clustered
/// within [`CLUSTER_GAP`].
pub fn spectrum(g: &SimpleGraph) -> SpectrumSummary {
    let n = g.n();
    let a = DMatrix::<f64>::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
    let eig = a.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    let mut prev = f64::INFINITY;
    for v in vals {
        match clusters.last_mut() {
            Some((c, count)) if prev - v <= CLUSTER_GAP => {
                *c = (*c * *count as f64 + v) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => clusters.push((v, 1)),
        }
        prev = v;
    }
    SpectrumSummary { clusters, tolerance: CLUSTER_GAP }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchwenkVerdict {
    Infeasible,
    Inconclusive,
}

/// One row per eigenvalue θ ≠ k.
#[derive(Clone, Debug)]
pub struct SchwenkRow {
    pub theta: f64,
    /// eigenspace dimension f
    pub multiplicity: usize,
    /// `(n-1) - (t-1)(n-1-f)`: positive means `t-1` eigenspaces intersect
    pub intersection_bound: i64,
    /// `-m - (t-1)θ`, the eigenvalue forced on the last copy
    pub forced: f64,
    pub forced_is_eigenvalue: bool,
}

#[derive(Clone, Debug)]
pub struct SchwenkReport {
    /// copy count `t = m(n-1)/k`
    pub t: u64,
    pub degree: usize,
    pub rows: Vec<SchwenkRow>,
    pub verdict: SchwenkVerdict,
    /// true when the spectrum was certified by exact integer rank checks
    pub exact: bool,
}

/// Exact rank over the rationals.
fn rational_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let pivot = m[row][col].clone();
        for r in (row + 1)..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..cols {
                let sub = &factor * &m[row][c];
                m[r][c] = &m[r][c] - sub;
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Nullity of `A - θI` for integer θ, by exact elimination.
fn integer_eigenspace_dim(g: &SimpleGraph, theta: i64) -> usize {
    let n = g.n();
    let m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let a = if g.has_edge(i, j) { 1i64 } else { 0 };
                    let v = if i == j { a - theta } else { a };
                    BigRational::from_integer(BigInt::from(v))
                })
                .collect()
        })
        .collect();
    n - rational_rank(m)
}

/// Applies the obstruction to a connected regular template at multiplicity
/// `m`. Errors when the template is irregular or disconnected, or when the
/// copy count `m(n-1)/k` is not a positive integer (a divisibility
/// non-membership, reported by the caller as such).
pub fn schwenk_obstruction(g: &SimpleGraph, m: u32) -> Result<SchwenkReport> {
    let n = g.n();
    let k = g
        .regularity()
        .ok_or_else(|| Error::InvalidArgument("template is not regular".into()))?;
    if k == 0 {
        return Err(Error::InvalidArgument("template has no edges".into()));
    }
    if !g.is_connected() {
        // eigenspace containment in the all-ones complement can fail
        return Err(Error::InvalidArgument(
            "template is disconnected; obstruction not applicable".into(),
        ));
    }
    let num = m as u64 * (n as u64 - 1);
    if num % k as u64 != 0 {
        return Err(Error::NonIntegral { num, den: k as u64 });
    }
    let t = num / k as u64;

    let summary = spectrum(g);
    let clusters = &summary.clusters;
    debug_assert_eq!(clusters.iter().map(|&(_, f)| f).sum::<usize>(), n);

    // exact integer path: round clusters and certify dimensions by rank
    let rounded: Vec<i64> = clusters.iter().map(|&(c, _)| c.round() as i64).collect();
    let near_integer = clusters
        .iter()
        .zip(&rounded)
        .all(|(&(c, _), &r)| (c - r as f64).abs() <= CLUSTER_GAP);
    let exact = near_integer
        && clusters
            .iter()
            .zip(&rounded)
            .all(|(&(_, f), &r)| integer_eigenspace_dim(g, r) == f);

    let mut rows = Vec::new();
    let mut infeasible = false;
    for (ci, &(theta, f)) in clusters.iter().enumerate() {
        let is_degree_cluster = if exact {
            rounded[ci] == k as i64
        } else {
            (theta - k as f64).abs() <= OBSTRUCTION_MARGIN
        };
        if is_degree_cluster {
            continue;
        }
        let bound = (n as i64 - 1) - (t as i64 - 1) * (n as i64 - 1 - f as i64);
        let forced = -(m as f64) - (t as f64 - 1.0) * theta;
        let forced_is_eigenvalue = if exact {
            let forced_int = -(m as i64) - (t as i64 - 1) * rounded[ci];
            rounded.contains(&forced_int)
        } else {
            clusters
                .iter()
                .any(|&(c, _)| (c - forced).abs() <= OBSTRUCTION_MARGIN)
        };
        if bound > 0 && !forced_is_eigenvalue {
            infeasible = true;
        }
        rows.push(SchwenkRow {
            theta,
            multiplicity: f,
            intersection_bound: bound,
            forced,
            forced_is_eigenvalue,
        });
    }
    Ok(SchwenkReport {
        t,
        degree: k,
        rows,
        verdict: if infeasible { SchwenkVerdict::Infeasible } else { SchwenkVerdict::Inconclusive },
        exact,
    })
}
