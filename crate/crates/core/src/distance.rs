//! All-pairs distances and vertex transmissions.
//!
//! Unweighted graphs use breadth-first search with bitset frontiers, one
//! independent traversal per source. The integer-weighted auxiliary graph of
//! the chordal module uses Floyd–Warshall.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chordal::WeightedCoreGraph;
use crate::graph::{Graph, Neighbors, WORD_BITS};

/// Distance sentinel for unreachable pairs. Never used in arithmetic.
pub const INFINITY: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistanceError {
    #[error("graph is disconnected: vertices {u} and {v} are mutually unreachable")]
    Disconnected { u: usize, v: usize },
    #[error("transmissions are undefined for the empty graph")]
    EmptyGraph,
}

/// Dense symmetric matrix of shortest-path lengths.
#[derive(Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u64>,
}

impl DistanceMatrix {
    pub(crate) fn filled(n: usize) -> Self {
        let mut d = vec![INFINITY; n * n];
        for i in 0..n {
            d[i * n + i] = 0;
        }
        DistanceMatrix { n, d }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Raw entry; [`INFINITY`] when unreachable.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.d[i * self.n + j]
    }

    /// Entry as `None` when unreachable.
    pub fn finite(&self, i: usize, j: usize) -> Option<u64> {
        Some(self.get(i, j)).filter(|&x| x != INFINITY)
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, x: u64) {
        self.d[i * self.n + j] = x;
    }

    /// First unreachable pair `(i, j)` with `i < j`, if any.
    pub fn unreachable_pair(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) == INFINITY)
    }

    /// Row sums; fails if any pair is unreachable.
    pub fn transmissions(&self) -> Result<TransmissionProfile, DistanceError> {
        if self.n == 0 {
            return Err(DistanceError::EmptyGraph);
        }
        if let Some((u, v)) = self.unreachable_pair() {
            return Err(DistanceError::Disconnected { u, v });
        }
        Ok(TransmissionProfile::new(
            (0..self.n).map(|i| self.row(i).iter().sum()).collect(),
        ))
    }
}

impl std::fmt::Debug for DistanceMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<Vec<Option<u64>>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.finite(i, j)).collect())
            .collect();
        f.debug_struct("DistanceMatrix").field("n", &self.n).field("d", &rows).finish()
    }
}

/// Per-vertex transmissions `Tr(u) = sum_v d(u, v)` of a connected graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransmissionProfile {
    values: Vec<u64>,
}

impl TransmissionProfile {
    pub fn new(values: Vec<u64>) -> Self {
        TransmissionProfile { values }
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u64> {
        self.values
    }

    /// Sum of all transmissions, i.e. twice the Wiener index.
    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }

    pub fn sorted(&self) -> Vec<u64> {
        let mut v = self.values.clone();
        v.sort_unstable();
        v
    }
}

impl std::ops::Index<usize> for TransmissionProfile {
    type Output = u64;

    fn index(&self, i: usize) -> &u64 {
        &self.values[i]
    }
}

struct Bfs {
    seen: Vec<u64>,
    frontier: Vec<u64>,
    next: Vec<u64>,
}

impl Bfs {
    fn new(words: usize) -> Self {
        Bfs {
            seen: vec![0; words],
            frontier: vec![0; words],
            next: vec![0; words],
        }
    }

    /// Runs a traversal from `source`, calling `visit(depth, layer)` for
    /// every nonempty layer (including the source layer at depth 0).
    fn run(&mut self, g: &Graph, source: usize, mut visit: impl FnMut(u64, &[u64])) {
        self.seen.iter_mut().for_each(|w| *w = 0);
        self.frontier.iter_mut().for_each(|w| *w = 0);
        self.seen[source / WORD_BITS] |= 1 << (source % WORD_BITS);
        self.frontier[source / WORD_BITS] |= 1 << (source % WORD_BITS);
        let mut depth = 0u64;
        loop {
            visit(depth, &self.frontier);
            self.next.iter_mut().for_each(|w| *w = 0);
            for v in Neighbors::new(&self.frontier) {
                for (acc, r) in self.next.iter_mut().zip(g.row(v)) {
                    *acc |= r;
                }
            }
            let mut any = false;
            for (nw, sw) in self.next.iter_mut().zip(self.seen.iter_mut()) {
                *nw &= !*sw;
                *sw |= *nw;
                any |= *nw != 0;
            }
            if !any {
                return;
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
            depth += 1;
        }
    }
}

/// Exact unweighted distances; [`INFINITY`] where no walk exists.
pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    let n = g.order();
    let mut m = DistanceMatrix::filled(n);
    m.d.par_chunks_mut(n.max(1))
        .enumerate()
        .for_each_init(
            || Bfs::new(g.row_words()),
            |bfs, (s, row)| {
                bfs.run(g, s, |depth, layer| {
                    for v in Neighbors::new(layer) {
                        row[v] = depth;
                    }
                })
            },
        );
    m
}

/// Vertex transmissions of a connected graph.
///
/// Disconnected input is rejected with a witness pair of mutually
/// unreachable vertices.
pub fn transmissions(g: &Graph) -> Result<TransmissionProfile, DistanceError> {
    let n = g.order();
    if n == 0 {
        return Err(DistanceError::EmptyGraph);
    }
    if let Some(v) = g.unreachable_from_zero() {
        return Err(DistanceError::Disconnected { u: 0, v });
    }
    let values = (0..n)
        .into_par_iter()
        .map_init(
            || Bfs::new(g.row_words()),
            |bfs, s| {
                let mut tr = 0u64;
                bfs.run(g, s, |depth, layer| {
                    let count: u64 = layer.iter().map(|w| w.count_ones() as u64).sum();
                    tr += depth * count;
                });
                tr
            },
        )
        .collect();
    Ok(TransmissionProfile::new(values))
}

/// Transmissions of a graph on at most 64 vertices given as one word per
/// row. Writes into `out` and returns `false` if the graph is disconnected.
/// Used by the hot loops of the exhaustive searches.
pub(crate) fn small_transmissions(rows: &[u64], out: &mut [u64]) -> bool {
    let n = rows.len();
    debug_assert!(n <= 64 && out.len() >= n);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for (s, slot) in out[..n].iter_mut().enumerate() {
        let mut seen = 1u64 << s;
        let mut frontier = seen;
        let mut depth = 0u64;
        let mut tr = 0u64;
        while seen != all {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                next |= rows[f.trailing_zeros() as usize];
                f &= f - 1;
            }
            next &= !seen;
            if next == 0 {
                return false;
            }
            depth += 1;
            tr += depth * next.count_ones() as u64;
            seen |= next;
            frontier = next;
        }
        *slot = tr;
    }
    true
}

/// Exact weighted shortest paths on the auxiliary core graph.
pub fn weighted_all_pairs(wg: &WeightedCoreGraph) -> DistanceMatrix {
    let n = wg.order();
    let mut m = DistanceMatrix::filled(n);
    for (x, y, w) in wg.edges() {
        if w < m.get(x, y) {
            m.set(x, y, w);
            m.set(y, x, w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = m.get(i, k);
            if dik == INFINITY {
                continue;
            }
            for j in 0..n {
                let dkj = m.get(k, j);
                if dkj != INFINITY && dik + dkj < m.get(i, j) {
                    m.set(i, j, dik + dkj);
                }
            }
        }
    }
    m
}
