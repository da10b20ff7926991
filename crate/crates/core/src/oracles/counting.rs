//! Brute-force counting on packed adjacency matrices.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::linalg::bareiss_determinant;
use crate::error::{Error, Result};
use crate::paley_graphs::BitMatrix;

pub const DEFAULT_ORACLE_BUDGET: usize = 4096;
pub const TREE_BUDGET: usize = 512;
/// Largest order whose walk traces are summed over every vertex.
pub const FULL_TRACE_LIMIT: usize = 1024;
pub const SAMPLED_SOURCES: usize = 16;
pub const MAX_WALK_LENGTH: u32 = 6;

pub(crate) fn within(n: usize, budget: usize) -> Result<()> {
    if n > budget {
        return Err(Error::BudgetExceeded { order: n.to_string(), budget: budget as u64 });
    }
    Ok(())
}

/// Extremes of degrees and common-neighbour counts over all vertex pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairProfile {
    pub n: usize,
    pub degree: (usize, usize),
    pub adjacent: Option<(usize, usize)>,
    pub non_adjacent: Option<(usize, usize)>,
}

impl PairProfile {
    pub fn max_common(&self) -> usize {
        self.adjacent.map_or(0, |a| a.1).max(self.non_adjacent.map_or(0, |a| a.1))
    }
}

fn merge(a: Option<(usize, usize)>, b: Option<(usize, usize)>) -> Option<(usize, usize)> {
    match (a, b) {
        (Some(x), Some(y)) => Some((x.0.min(y.0), x.1.max(y.1))),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Exhaustive scan of `|N(i) ∩ N(j)|` over all pairs `i < j`.
pub fn pair_profile(adj: &BitMatrix, budget: usize) -> Result<PairProfile> {
    let n = adj.n();
    within(n, budget)?;
    let (degree, adjacent, non_adjacent) = (0..n)
        .into_par_iter()
        .map(|i| {
            let deg = adj.row_weight(i);
            let mut a = None;
            let mut na = None;
            for j in i + 1..n {
                let c = adj.common(i, j);
                if adj.get(i, j) {
                    a = merge(a, Some((c, c)));
                } else {
                    na = merge(na, Some((c, c)));
                }
            }
            (Some((deg, deg)), a, na)
        })
        .reduce(|| (None, None, None), |x, y| (merge(x.0, y.0), merge(x.1, y.1), merge(x.2, y.2)));
    Ok(PairProfile { n, degree: degree.unwrap_or((0, 0)), adjacent, non_adjacent })
}

/// Counted `(v, k, e, d)`; fails unless every count is constant.
pub fn srg_from_profile(p: &PairProfile) -> Result<(u64, u64, u64, u64)> {
    let constant = |x: Option<(usize, usize)>, what: &str| -> Result<u64> {
        match x {
            None => Ok(0),
            Some((lo, hi)) if lo == hi => Ok(lo as u64),
            Some((lo, hi)) => Err(Error::NotStronglyRegular(format!("{what} ranges over {lo}..={hi}"))),
        }
    };
    let k = constant(Some(p.degree), "degree")?;
    let e = constant(p.adjacent, "common neighbours of adjacent pairs")?;
    let d = constant(p.non_adjacent, "common neighbours of non-adjacent pairs")?;
    Ok((p.n as u64, k, e, d))
}

pub fn count_srg_params(adj: &BitMatrix, budget: usize) -> Result<(u64, u64, u64, u64)> {
    srg_from_profile(&pair_profile(adj, budget)?)
}

/// Checks `A² = (e−d)A + (k−d)I + dJ` entry by entry.
pub fn verify_a2_identity(
    adj: &BitMatrix,
    v: &BigInt,
    k: &BigInt,
    e: &BigInt,
    d: &BigInt,
    budget: usize,
) -> Result<bool> {
    let n = adj.n();
    within(n, budget)?;
    if *v != BigInt::from(n) {
        return Ok(false);
    }
    let small = |x: &BigInt| -> Option<usize> { usize::try_from(x).ok() };
    let (Some(k), Some(e), Some(d)) = (small(k), small(e), small(d)) else { return Ok(false) };
    Ok((0..n).into_par_iter().all(|i| {
        (i..n).all(|j| {
            let want = if i == j {
                k
            } else if adj.get(i, j) {
                e
            } else {
                d
            };
            let got = if i == j { adj.row_weight(i) } else { adj.common(i, j) };
            got == want
        })
    }))
}

/// `(A^r)_{ii}` for `r = 0..=6`.
fn walks_from(adj: &BitMatrix, i: usize) -> [u128; 7] {
    let n = adj.n();
    let a2: Vec<u64> = (0..n).map(|j| if i == j { adj.row_weight(i) } else { adj.common(i, j) } as u64).collect();
    let a3: Vec<u64> = (0..n).map(|j| adj.neighbors(j).map(|l| a2[l]).sum()).collect();
    let mut w = [0u128; 7];
    w[0] = 1;
    w[1] = adj.get(i, i) as u128;
    w[2] = a2[i] as u128;
    w[3] = a3[i] as u128;
    for j in 0..n {
        let (x, y) = (a2[j] as u128, a3[j] as u128);
        w[4] += x * x;
        w[5] += x * y;
        w[6] += y * y;
    }
    w
}

/// `tr(A^r)` for `r = 0..=6`, with the number of sampled sources when the
/// order exceeds [`FULL_TRACE_LIMIT`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCounts {
    pub traces: Vec<BigInt>,
    pub sampled: Option<usize>,
}

pub fn closed_walk_counts(adj: &BitMatrix, budget: usize) -> Result<WalkCounts> {
    let n = adj.n();
    within(n, budget)?;
    if n <= FULL_TRACE_LIMIT {
        let total = (0..n).into_par_iter().map(|i| walks_from(adj, i)).reduce(
            || [0u128; 7],
            |mut a, b| {
                for r in 0..7 {
                    a[r] += b[r];
                }
                a
            },
        );
        return Ok(WalkCounts { traces: total.iter().map(|&x| BigInt::from(x)).collect(), sampled: None });
    }
    let sources: Vec<usize> = (0..SAMPLED_SOURCES).map(|t| t * n / SAMPLED_SOURCES).collect();
    let per: Vec<[u128; 7]> = sources.par_iter().map(|&i| walks_from(adj, i)).collect();
    if per.iter().any(|w| *w != per[0]) {
        return Err(Error::Internal("closed-walk counts differ between sampled vertices".into()));
    }
    Ok(WalkCounts { traces: per[0].iter().map(|&x| BigInt::from(x) * n).collect(), sampled: Some(sources.len()) })
}

/// `tr(A^r)`, `r ≤ 6`.
pub fn count_walks_bruteforce(adj: &BitMatrix, r: u32, budget: usize) -> Result<BigInt> {
    if r > MAX_WALK_LENGTH {
        return Err(Error::InvalidSpec(format!("walk length {r} exceeds {MAX_WALK_LENGTH}")));
    }
    Ok(closed_walk_counts(adj, budget)?.traces[r as usize].clone())
}

/// Laplacian with the last row and column removed.
fn reduced_laplacian(adj: &BitMatrix) -> Vec<Vec<BigInt>> {
    let n = adj.n();
    (0..n - 1)
        .map(|i| {
            (0..n - 1)
                .map(|j| {
                    if i == j {
                        BigInt::from(adj.row_weight(i))
                    } else if adj.get(i, j) {
                        BigInt::from(-1)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Matrix-tree theorem: any Laplacian cofactor.
pub fn count_trees_bruteforce(adj: &BitMatrix, budget: usize) -> Result<BigInt> {
    let n = adj.n();
    within(n, budget.min(TREE_BUDGET))?;
    if n == 0 {
        return Ok(BigInt::zero());
    }
    Ok(bareiss_determinant(reduced_laplacian(adj)))
}

/// `det((1 + (k−1)u²) I − uA)` at an integer point.
pub fn zeta_determinant_at(adj: &BitMatrix, k: i64, u: i64, budget: usize) -> Result<BigInt> {
    let n = adj.n();
    within(n, budget.min(TREE_BUDGET))?;
    let diag = BigInt::from(1 + (k - 1) * u * u);
    let off = BigInt::from(-u);
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        diag.clone()
                    } else if adj.get(i, j) {
                        off.clone()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    Ok(bareiss_determinant(m))
}

/// BFS distances from `source`; unreachable vertices are `None`.
pub fn bfs_distances(adj: &BitMatrix, source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.n()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for v in adj.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Sizes of the connected components, in order of their least vertex.
pub fn component_sizes(adj: &BitMatrix) -> Vec<usize> {
    let n = adj.n();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut size = 0;
        for (v, d) in bfs_distances(adj, s).into_iter().enumerate() {
            if d.is_some() {
                seen[v] = true;
                size += 1;
            }
        }
        sizes.push(size);
    }
    sizes
}

/// Eccentricity of `source`; the diameter for vertex-transitive graphs.
pub fn bfs_diameter(adj: &BitMatrix, source: usize, budget: usize) -> Result<u32> {
    within(adj.n(), budget)?;
    let dist = bfs_distances(adj, source);
    if dist.iter().any(Option::is_none) {
        return Err(Error::DisconnectedComponentsFound { components: component_sizes(adj).len() });
    }
    Ok(dist.into_iter().flatten().max().unwrap_or(0))
}

/// Length of a shortest cycle; `None` for forests.
pub fn girth(adj: &BitMatrix, profile: &PairProfile) -> Option<u32> {
    if profile.adjacent.is_some_and(|a| a.1 > 0) {
        return Some(3);
    }
    if profile.max_common() >= 2 {
        return Some(4);
    }
    let n = adj.n();
    let mut best: Option<u32> = None;
    for s in 0..n {
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::from([s]);
        dist[s] = 0;
        while let Some(u) = queue.pop_front() {
            for v in adj.neighbors(u) {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let len = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}
