//! Cores with attached chordal paths.
//!
//! A chordal path `(u, v, s)` joins core vertices `u` and `v` by a new path
//! with `s` internal vertices of degree two. Every shortest walk between core
//! vertices either uses a whole chordal path or avoids it, so the core
//! distances of the expanded graph are those of the auxiliary weighted core
//! graph in which each chordal path is an edge of weight `s + 1`. Distances
//! involving internal vertices then follow from the auxiliary distances of
//! the path endpoints, and sums of those distances along a path collapse to
//! closed forms. [`fast_transmissions`] uses this to compute every
//! transmission of the expanded graph without expanding it.
//!
//! Internal vertices are addressed by their 1-based position `k` counted
//! from the `u` endpoint. In the expanded vertex order, core vertices come
//! first (`0..n`), followed by the internal vertices of each path in order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distance::{weighted_all_pairs, DistanceMatrix, TransmissionProfile, INFINITY};
use crate::error::GraphError;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChordalError {
    #[error("chordal path endpoint {vertex} out of range for a core on {n} vertices")]
    EndpointOutOfRange { vertex: usize, n: usize },
    #[error("chordal path ({u} {v} {s}) would be a loop; a path from a vertex to itself needs s >= 2")]
    DegenerateLoop { u: usize, v: usize, s: usize },
    #[error("position {k} outside 1..={s}")]
    PositionOutOfRange { k: usize, s: usize },
    #[error("no chordal path with index {index} (there are {len})")]
    PathIndexOutOfRange { index: usize, len: usize },
    #[error("expanded graph is disconnected: core vertices {u} and {v} are mutually unreachable")]
    Disconnected { u: usize, v: usize },
    #[error("transmissions are undefined for an empty core")]
    EmptyCore,
    #[error("edge weight must be positive")]
    ZeroWeight,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("closed form precondition violated: alpha - beta = {diff} exceeds n - 2 = {limit}")]
    MinSumPrecondition { diff: i64, limit: i64 },
}

/// A chordal path from core vertex `u` to core vertex `v` with `s` internal
/// vertices. `s = 0` is a plain edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChordalPath {
    pub u: usize,
    pub v: usize,
    pub s: usize,
}

impl ChordalPath {
    pub fn new(u: usize, v: usize, s: usize) -> Self {
        ChordalPath { u, v, s }
    }

    /// Length of the path, i.e. its weight in the auxiliary graph.
    pub fn length(&self) -> u64 {
        self.s as u64 + 1
    }

    pub fn validate(&self, core_order: usize) -> Result<(), ChordalError> {
        for vertex in [self.u, self.v] {
            if vertex >= core_order {
                return Err(ChordalError::EndpointOutOfRange { vertex, n: core_order });
            }
        }
        if self.u == self.v && self.s < 2 {
            return Err(ChordalError::DegenerateLoop {
                u: self.u,
                v: self.v,
                s: self.s,
            });
        }
        Ok(())
    }

    fn check_position(&self, k: usize) -> Result<(), ChordalError> {
        if k == 0 || k > self.s {
            Err(ChordalError::PositionOutOfRange { k, s: self.s })
        } else {
            Ok(())
        }
    }
}

/// Where a vertex of the expanded graph comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexRole {
    Core(usize),
    /// `k`-th internal vertex (1-based, from `u`) of chordal path `path`.
    Internal { path: usize, k: usize },
}

/// A core graph plus an ordered list of chordal paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreWithPaths {
    core: Graph,
    paths: Vec<ChordalPath>,
}

impl CoreWithPaths {
    pub fn new(core: Graph, paths: Vec<ChordalPath>) -> Result<Self, ChordalError> {
        for p in &paths {
            p.validate(core.order())?;
        }
        Ok(CoreWithPaths { core, paths })
    }

    /// A core with no chordal paths.
    pub fn bare(core: Graph) -> Self {
        CoreWithPaths { core, paths: Vec::new() }
    }

    pub fn core(&self) -> &Graph {
        &self.core
    }

    pub fn paths(&self) -> &[ChordalPath] {
        &self.paths
    }

    pub fn core_order(&self) -> usize {
        self.core.order()
    }

    /// Vertex count of the expansion.
    pub fn order(&self) -> usize {
        self.core.order() + self.paths.iter().map(|p| p.s).sum::<usize>()
    }

    pub fn push(&mut self, path: ChordalPath) -> Result<(), ChordalError> {
        path.validate(self.core.order())?;
        self.paths.push(path);
        Ok(())
    }

    pub fn remove(&mut self, index: usize) -> Result<ChordalPath, ChordalError> {
        if index >= self.paths.len() {
            return Err(ChordalError::PathIndexOutOfRange {
                index,
                len: self.paths.len(),
            });
        }
        Ok(self.paths.remove(index))
    }

    pub fn clear_paths(&mut self) {
        self.paths.clear();
    }

    /// Expanded index of the first internal vertex of each path.
    pub fn path_offsets(&self) -> Vec<usize> {
        self.paths
            .iter()
            .scan(self.core.order(), |next, p| {
                let at = *next;
                *next += p.s;
                Some(at)
            })
            .collect()
    }

    pub fn role(&self, vertex: usize) -> Option<VertexRole> {
        if vertex < self.core.order() {
            return Some(VertexRole::Core(vertex));
        }
        let mut at = self.core.order();
        for (path, p) in self.paths.iter().enumerate() {
            if vertex < at + p.s {
                return Some(VertexRole::Internal { path, k: vertex - at + 1 });
            }
            at += p.s;
        }
        None
    }

    pub fn expand(&self) -> Graph {
        expand(self)
    }

    pub fn auxiliary(&self) -> WeightedCoreGraph {
        auxiliary(self)
    }

    pub fn fast_transmissions(&self) -> Result<TransmissionProfile, ChordalError> {
        fast_transmissions(self)
    }
}

/// The expanded graph `G + A`.
pub fn expand(cwp: &CoreWithPaths) -> Graph {
    let mut g = Graph::new(cwp.order());
    for (u, v) in cwp.core.edges() {
        g.add_edge(u, v).expect("core edge");
    }
    let mut next = cwp.core.order();
    for p in &cwp.paths {
        let mut prev = p.u;
        for _ in 0..p.s {
            g.add_edge(prev, next).expect("chain edge");
            prev = next;
            next += 1;
        }
        // s = 0 collapses onto an existing edge when present.
        g.add_edge(prev, p.v).expect("chain edge");
    }
    g
}

/// Core graph with positive integer edge weights; at most one edge per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedCoreGraph {
    n: usize,
    weights: BTreeMap<(usize, usize), u64>,
}

impl WeightedCoreGraph {
    pub fn new(n: usize) -> Self {
        WeightedCoreGraph {
            n,
            weights: BTreeMap::new(),
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, ChordalError>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut wg = WeightedCoreGraph::new(n);
        for (x, y, w) in edges {
            wg.insert(x, y, w)?;
        }
        Ok(wg)
    }

    /// Adds edge `xy` with weight `w`, keeping the minimum on repeats.
    pub fn insert(&mut self, x: usize, y: usize, w: u64) -> Result<(), ChordalError> {
        for vertex in [x, y] {
            if vertex >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex, n: self.n }.into());
            }
        }
        if x == y {
            return Err(GraphError::SelfLoop(x).into());
        }
        if w == 0 {
            return Err(ChordalError::ZeroWeight);
        }
        let slot = self.weights.entry((x.min(y), x.max(y))).or_insert(w);
        *slot = (*slot).min(w);
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn weight(&self, x: usize, y: usize) -> Option<u64> {
        self.weights.get(&(x.min(y), x.max(y))).copied()
    }

    /// Edges as `(x, y, w)` with `x < y`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.weights.iter().map(|(&(x, y), &w)| (x, y, w))
    }
}

/// The auxiliary weighted core graph: core edges weigh 1, each chordal path
/// becomes an edge of weight `s + 1`, minimum per pair. Loops are dropped.
pub fn auxiliary(cwp: &CoreWithPaths) -> WeightedCoreGraph {
    let mut wg = WeightedCoreGraph::new(cwp.core.order());
    for (u, v) in cwp.core.edges() {
        wg.insert(u, v, 1).expect("core edge");
    }
    for p in cwp.paths.iter().filter(|p| p.u != p.v) {
        wg.insert(p.u, p.v, p.length()).expect("validated path");
    }
    wg
}

#[inline]
fn add(a: u64, b: u64) -> u64 {
    if a == INFINITY || b == INFINITY {
        INFINITY
    } else {
        a + b
    }
}

/// Distance from the `k`-th internal vertex of `p` to core vertex `b`, given
/// the auxiliary distance matrix.
pub fn chord_to_core_distance(
    aux_d: &DistanceMatrix,
    p: &ChordalPath,
    k: usize,
    b: usize,
) -> Result<u64, ChordalError> {
    p.check_position(k)?;
    let (k, s) = (k as u64, p.s as u64);
    Ok(add(k, aux_d.get(p.u, b)).min(add(s + 1 - k, aux_d.get(p.v, b))))
}

/// Whether two internal vertices lie on the same chordal path or on two
/// different ones. Duplicate triplets are different paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathRelation {
    Same,
    Distinct,
}

/// Distance between the `k`-th internal vertex of `p` and the `l`-th
/// internal vertex of `q`.
pub fn chord_to_chord_distance(
    aux_d: &DistanceMatrix,
    p: &ChordalPath,
    k: usize,
    q: &ChordalPath,
    l: usize,
    relation: PathRelation,
) -> Result<u64, ChordalError> {
    p.check_position(k)?;
    q.check_position(l)?;
    let (k, s) = (k as u64, p.s as u64);
    let (l, t) = (l as u64, q.s as u64);
    Ok(match relation {
        PathRelation::Same => {
            let direct = k.abs_diff(l);
            let via_u = add(k + s + 1 - l, aux_d.get(p.u, p.v));
            let via_v = add(s + 1 - k + l, aux_d.get(p.v, p.u));
            direct.min(via_u).min(via_v)
        }
        PathRelation::Distinct => [
            add(k + l, aux_d.get(p.u, q.u)),
            add(k + t + 1 - l, aux_d.get(p.u, q.v)),
            add(s + 1 - k + l, aux_d.get(p.v, q.u)),
            add(s + 1 - k + t + 1 - l, aux_d.get(p.v, q.v)),
        ]
        .into_iter()
        .min()
        .unwrap(),
    })
}

/// `sum_{j=1}^{len} min(j + a, len + 1 - j + b)`: total distance from a
/// vertex at distance `a` from one end and `b` from the other end of a chain
/// with `len` internal vertices, to those internal vertices.
pub(crate) fn chain_sum(len: u64, a: u64, b: u64) -> u64 {
    // j + a <= len + 1 - j + b  <=>  j <= (len + 1 + b - a) / 2
    let t = (len as i128 + 1 + b as i128 - a as i128).div_euclid(2);
    let t = t.clamp(0, len as i128) as u64;
    let r = len - t;
    t * (t + 1) / 2 + t * a + r * (r + 1) / 2 + r * b
}

/// The closed form of `sum_{k=1}^{n} min(k + alpha, n - k + beta)`, valid when
/// `alpha - beta <= n - 2`. Evaluated in exact integer arithmetic.
///
/// The quadratic expression only holds while `beta - alpha <= n + 2`. Beyond
/// that every term is `k + alpha` and the sum is linear in `alpha`.
pub fn min_sum_closed_form(n: i64, alpha: i64, beta: i64) -> Result<i64, ChordalError> {
    if alpha - beta > n - 2 {
        return Err(ChordalError::MinSumPrecondition {
            diff: alpha - beta,
            limit: n - 2,
        });
    }
    let d = beta - alpha;
    if d > n + 2 {
        return Ok(n * (n + 1) / 2 + n * alpha);
    }
    let numerator = n * n + n * (2 * beta + 2 * alpha - 1) - d * (d - 1) + 2 * (n + d).div_euclid(2);
    debug_assert_eq!(numerator.rem_euclid(4), 0, "n={n} alpha={alpha} beta={beta}");
    Ok(numerator.div_euclid(4))
}

/// Transmissions of every vertex of the expansion, in expanded vertex
/// order, computed from the auxiliary core graph alone.
///
/// The work per output vertex is proportional to the number of core vertices
/// plus the number of paths, independent of the path lengths.
pub fn fast_transmissions(cwp: &CoreWithPaths) -> Result<TransmissionProfile, ChordalError> {
    let n = cwp.core.order();
    if n == 0 {
        return Err(ChordalError::EmptyCore);
    }
    let d = weighted_all_pairs(&cwp.auxiliary());
    if let Some((u, v)) = d.unreachable_pair() {
        return Err(ChordalError::Disconnected { u, v });
    }
    let paths = &cwp.paths;
    let mut out = Vec::with_capacity(cwp.order());

    for b in 0..n {
        let mut tr: u64 = d.row(b).iter().sum();
        for p in paths {
            tr += chain_sum(p.s as u64, d.get(p.u, b), d.get(p.v, b));
        }
        out.push(tr);
    }

    for (i, p) in paths.iter().enumerate() {
        let s = p.s as u64;
        let duv = d.get(p.u, p.v);
        for k in 1..=s {
            let to_core = |z: usize| (k + d.get(p.u, z)).min(s + 1 - k + d.get(p.v, z));
            let mut tr: u64 = (0..n).map(to_core).sum();
            for (j, q) in paths.iter().enumerate() {
                if j != i {
                    tr += chain_sum(q.s as u64, to_core(q.u), to_core(q.v));
                }
            }
            // Same path: below k the detour goes out through v, above k out through u.
            tr += chain_sum(k - 1, 0, s + duv - k + 1);
            tr += chain_sum(s - k, 0, duv + k);
            out.push(tr);
        }
    }
    Ok(TransmissionProfile::new(out))
}
