//! Simple undirected graphs over dense vertex ids `0..n`, stored as
//! bit-packed adjacency rows.

use std::fmt;

use crate::error::GraphError;

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// A simple undirected graph on vertices `0..n`.
///
/// Adjacency is kept as one bitset row per vertex, so neighbourhood unions
/// and intersections are word-parallel. The relation is always symmetric and
/// irreflexive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    /// Builds a graph from an edge list. Repeated edges collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set(u, v);
            }
        }
        g
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 1..n {
            g.set(u - 1, u);
        }
        g
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`; requires `n >= 3` to be simple.
    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.set(0, n - 1);
        }
        g
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of 64-bit words in each adjacency row.
    #[inline]
    pub fn row_words(&self) -> usize {
        self.words
    }

    /// Adjacency row of `u` as packed bits (bit `v` set iff `u ~ v`).
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    fn check(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / WORD_BITS] |= 1 << (v % WORD_BITS);
        self.bits[v * self.words + u / WORD_BITS] |= 1 << (u % WORD_BITS);
    }

    /// Inserts the edge `uv`. Returns `false` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let fresh = !self.has_edge(u, v);
        self.set(u, v);
        Ok(fresh)
    }

    /// Removes the edge `uv`. Returns `false` if it was absent.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        let present = u != v && self.has_edge(u, v);
        self.bits[u * self.words + v / WORD_BITS] &= !(1 << (v % WORD_BITS));
        self.bits[v * self.words + u / WORD_BITS] &= !(1 << (u % WORD_BITS));
        Ok(present)
    }

    /// Adjacency test. Panics if either id is out of range.
    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.bits[u * self.words + v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, u: usize) -> Neighbors<'_> {
        Neighbors::new(self.row(u))
    }

    /// Edges as `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// True iff every vertex is reachable from vertex 0. The empty graph and
    /// `K_1` count as connected.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        self.reach_from(0).iter().map(|w| w.count_ones() as usize).sum::<usize>() == self.n
    }

    /// Bitset of vertices reachable from `source`.
    pub(crate) fn reach_from(&self, source: usize) -> Vec<u64> {
        let mut seen = vec![0u64; self.words];
        let mut frontier = vec![0u64; self.words];
        seen[source / WORD_BITS] |= 1 << (source % WORD_BITS);
        frontier[source / WORD_BITS] |= 1 << (source % WORD_BITS);
        let mut next = vec![0u64; self.words];
        loop {
            next.iter_mut().for_each(|w| *w = 0);
            for v in Neighbors::new(&frontier) {
                for (acc, r) in next.iter_mut().zip(self.row(v)) {
                    *acc |= r;
                }
            }
            let mut any = false;
            for (nw, sw) in next.iter_mut().zip(seen.iter_mut()) {
                *nw &= !*sw;
                *sw |= *nw;
                any |= *nw != 0;
            }
            if !any {
                return seen;
            }
            std::mem::swap(&mut frontier, &mut next);
        }
    }

    /// First vertex not reachable from vertex 0, if any.
    pub(crate) fn unreachable_from_zero(&self) -> Option<usize> {
        if self.n <= 1 {
            return None;
        }
        let seen = self.reach_from(0);
        (0..self.n).find(|&v| seen[v / WORD_BITS] >> (v % WORD_BITS) & 1 == 0)
    }

    /// Subgraph induced on the vertices *not* in `removed`, renumbered in
    /// increasing order of the surviving ids.
    pub fn without_vertices(&self, removed: &[usize]) -> Graph {
        let mut keep = vec![true; self.n];
        for &v in removed {
            keep[v] = false;
        }
        let map: Vec<Option<usize>> = keep
            .iter()
            .scan(0usize, |next, &k| {
                Some(if k {
                    *next += 1;
                    Some(*next - 1)
                } else {
                    None
                })
            })
            .collect();
        let m = keep.iter().filter(|&&k| k).count();
        let mut h = Graph::new(m);
        for (u, v) in self.edges() {
            if let (Some(a), Some(b)) = (map[u], map[v]) {
                h.set(a, b);
            }
        }
        h
    }

    /// Relabels vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        if perm.len() != self.n {
            return Err(GraphError::BadPermutation);
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(GraphError::BadPermutation);
            }
        }
        let mut h = Graph::new(self.n);
        for (u, v) in self.edges() {
            h.set(perm[u], perm[v]);
        }
        Ok(h)
    }

    /// Graph with one extra vertex `n` adjacent to the given neighbours.
    pub fn with_vertex<I: IntoIterator<Item = usize>>(&self, nbrs: I) -> Result<Graph, GraphError> {
        let mut h = Graph::new(self.n + 1);
        for (u, v) in self.edges() {
            h.set(u, v);
        }
        for v in nbrs {
            h.add_edge(self.n, v)?;
        }
        Ok(h)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Iterator over the set bits of a packed row.
pub struct Neighbors<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Neighbors<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        Neighbors {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for Neighbors<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD_BITS + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_basics() {
        let g = Graph::complete(3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(g.is_connected());
    }

    #[test]
    fn connectivity_edge_cases() {
        assert!(Graph::new(0).is_connected());
        assert!(Graph::new(1).is_connected());
        let two_edges = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!two_edges.is_connected());
        assert_eq!(two_edges.unreachable_from_zero(), Some(2));
    }

    #[test]
    fn rejects_loops_and_bad_ids() {
        let mut g = Graph::new(3);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            g.add_edge(0, 3),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(g.add_edge(0, 1), Ok(true));
        assert_eq!(g.add_edge(1, 0), Ok(false));
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn wide_rows() {
        let g = Graph::cycle(130);
        assert_eq!(g.edge_count(), 130);
        assert_eq!(g.neighbors(0).collect::<Vec<_>>(), vec![1, 129]);
        assert_eq!(g.neighbors(64).collect::<Vec<_>>(), vec![63, 65]);
        assert!(g.is_connected());
    }

    #[test]
    fn vertex_deletion_renumbers() {
        let p5 = Graph::path(5);
        let h = p5.without_vertices(&[1, 2, 3]);
        assert_eq!(h.order(), 2);
        assert_eq!(h.edge_count(), 0);
        assert!(!h.is_connected());
    }
}
