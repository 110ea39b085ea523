//! Canonical labelling for isomorph rejection.
//!
//! Individualization-refinement: the unit partition is refined to an
//! equitable ordered partition, then a search tree individualizes the
//! vertices of the first non-singleton cell one at a time and refines again.
//! Each discrete leaf relabels the graph; the canonical form is the largest
//! relabelled adjacency over all leaves. Leaves that coincide with an earlier
//! one yield automorphisms, which prune sibling subtrees lying in the same
//! orbit. Graphs are limited to 64 vertices so that a row fits in one word.

use crate::error::GraphError;
use crate::graph::Graph;
use crate::graph6::{encode_graph6, Graph6Code};

/// Largest order accepted by the canonical labelling routines.
pub const MAX_CANON_ORDER: usize = 64;

/// Ordered partition of the positions `0..n`.
#[derive(Clone)]
struct Partition {
    /// Vertex at each position.
    lab: Vec<usize>,
    /// Bit `p` set when position `p` starts a cell.
    starts: u64,
}

impl Partition {
    fn unit(n: usize) -> Self {
        Partition {
            lab: (0..n).collect(),
            starts: if n == 0 { 0 } else { 1 },
        }
    }

    fn n(&self) -> usize {
        self.lab.len()
    }

    fn cell_end(&self, start: usize) -> usize {
        let above = if start + 1 >= 64 { 0 } else { self.starts >> (start + 1) << (start + 1) };
        if above == 0 {
            self.n()
        } else {
            above.trailing_zeros() as usize
        }
    }

    fn is_discrete(&self) -> bool {
        self.starts.count_ones() as usize == self.n()
    }

    fn cell_mask(&self, start: usize) -> u64 {
        self.lab[start..self.cell_end(start)]
            .iter()
            .fold(0, |m, &v| m | 1 << v)
    }

    /// Refines to the coarsest equitable partition finer than `self`,
    /// using the cells starting at the positions in `queue` as splitters.
    fn refine(&mut self, rows: &[u64], mut queue: u64) {
        let mut scratch: Vec<(u32, usize)> = Vec::with_capacity(self.n());
        while queue != 0 {
            let ws = queue.trailing_zeros() as usize;
            queue &= queue - 1;
            let wmask = self.cell_mask(ws);
            let mut s = self.starts;
            while s != 0 {
                let start = s.trailing_zeros() as usize;
                s &= s - 1;
                let end = self.cell_end(start);
                if end - start == 1 {
                    continue;
                }
                scratch.clear();
                scratch.extend(
                    self.lab[start..end]
                        .iter()
                        .map(|&v| ((rows[v] & wmask).count_ones(), v)),
                );
                if scratch.iter().all(|c| c.0 == scratch[0].0) {
                    continue;
                }
                scratch.sort_unstable();
                for (i, &(c, v)) in scratch.iter().enumerate() {
                    self.lab[start + i] = v;
                    if i > 0 && c != scratch[i - 1].0 {
                        self.starts |= 1 << (start + i);
                        queue |= 1 << (start + i);
                    }
                }
                queue |= 1 << start;
            }
        }
    }

    /// Moves `v` (in the cell starting at `start`) to the front of its cell
    /// and splits it off as a singleton.
    fn individualize(&mut self, start: usize, v: usize) {
        let at = self.lab[start..].iter().position(|&x| x == v).unwrap() + start;
        self.lab.swap(start, at);
        self.starts |= 1 << (start + 1);
    }

    fn first_nonsingleton(&self) -> Option<(usize, usize)> {
        let mut s = self.starts;
        while s != 0 {
            let start = s.trailing_zeros() as usize;
            s &= s - 1;
            let end = self.cell_end(start);
            if end - start > 1 {
                return Some((start, end));
            }
        }
        None
    }
}

fn relabelled(rows: &[u64], lab: &[usize]) -> Vec<u64> {
    let mut pos = [0usize; 64];
    for (p, &v) in lab.iter().enumerate() {
        pos[v] = p;
    }
    lab.iter()
        .map(|&v| {
            let mut r = rows[v];
            let mut out = 0u64;
            while r != 0 {
                out |= 1 << pos[r.trailing_zeros() as usize];
                r &= r - 1;
            }
            out
        })
        .collect()
}

struct Search<'a> {
    rows: &'a [u64],
    best: Option<(Vec<u64>, Vec<usize>)>,
    first: Option<(Vec<u64>, Vec<usize>)>,
    /// Automorphisms as vertex maps.
    gens: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn automorphism(from: &[usize], to: &[usize]) -> Vec<usize> {
        let mut gamma = vec![0; from.len()];
        for (&a, &b) in from.iter().zip(to) {
            gamma[a] = b;
        }
        gamma
    }

    fn leaf(&mut self, lab: &[usize]) {
        let cert = relabelled(self.rows, lab);
        if let Some((fc, fl)) = &self.first {
            if *fc == cert {
                let g = Self::automorphism(fl, lab);
                self.gens.push(g);
                return;
            }
        } else {
            self.first = Some((cert.clone(), lab.to_vec()));
        }
        match &self.best {
            Some((bc, bl)) if *bc == cert => {
                let g = Self::automorphism(bl, lab);
                self.gens.push(g);
            }
            Some((bc, _)) if *bc > cert => {}
            _ => self.best = Some((cert, lab.to_vec())),
        }
    }

    fn orbit_root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    /// Orbits of the subgroup generated by the known automorphisms that fix
    /// every vertex of `fixed`.
    fn orbits(&self, fixed: &[usize], n: usize) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..n).collect();
        for g in self.gens.iter().filter(|g| fixed.iter().all(|&v| g[v] == v)) {
            for (v, &w) in g.iter().enumerate() {
                let (a, b) = (Self::orbit_root(&mut parent, v), Self::orbit_root(&mut parent, w));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..n).map(|v| Self::orbit_root(&mut parent, v)).collect()
    }

    fn visit(&mut self, part: &Partition, fixed: &mut Vec<usize>) {
        let Some((start, end)) = part.first_nonsingleton() else {
            self.leaf(&part.lab);
            return;
        };
        let mut candidates: Vec<usize> = part.lab[start..end].to_vec();
        candidates.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        for w in candidates {
            if !explored.is_empty() {
                let orbit = self.orbits(fixed, part.n());
                if explored.iter().any(|&x| orbit[x] == orbit[w]) {
                    continue;
                }
            }
            let mut child = part.clone();
            child.individualize(start, w);
            child.refine(self.rows, 1 << start);
            fixed.push(w);
            self.visit(&child, fixed);
            fixed.pop();
            explored.push(w);
        }
    }
}

fn check_order(n: usize) -> Result<(), GraphError> {
    if n > MAX_CANON_ORDER {
        Err(GraphError::SizeExceeded(n))
    } else {
        Ok(())
    }
}

/// Canonical labelling of a graph given as one adjacency word per vertex.
/// Returns `lab` with `lab[i]` the original vertex placed at position `i`.
pub(crate) fn canonical_lab(rows: &[u64]) -> Vec<usize> {
    let n = rows.len();
    debug_assert!(n <= MAX_CANON_ORDER);
    if n <= 1 {
        return (0..n).collect();
    }
    let mut root = Partition::unit(n);
    root.refine(rows, 1);
    if root.is_discrete() {
        return root.lab;
    }
    let mut search = Search {
        rows,
        best: None,
        first: None,
        gens: Vec::new(),
    };
    search.visit(&root, &mut Vec::new());
    search.best.or(search.first).map(|b| b.1).expect("at least one leaf")
}

pub(crate) fn rows_of(g: &Graph) -> Vec<u64> {
    (0..g.order()).map(|u| g.row(u).first().copied().unwrap_or(0)).collect()
}

/// Canonical relabelling: returns `perm` such that `g.relabel(&perm)` is the
/// canonical representative of the isomorphism class of `g`.
pub fn canonical_labeling(g: &Graph) -> Result<Vec<usize>, GraphError> {
    check_order(g.order())?;
    let lab = canonical_lab(&rows_of(g));
    let mut perm = vec![0; lab.len()];
    for (p, &v) in lab.iter().enumerate() {
        perm[v] = p;
    }
    Ok(perm)
}

/// Canonical representative of the isomorphism class of `g`.
pub fn canonical_graph(g: &Graph) -> Result<Graph, GraphError> {
    g.relabel(&canonical_labeling(g)?)
}

/// Labelling-invariant graph6 code: two graphs are isomorphic exactly when
/// their canonical forms are equal.
pub fn canonical_form(g: &Graph) -> Result<Graph6Code, GraphError> {
    let c = canonical_graph(g)?;
    Ok(encode_graph6(&c).expect("order within graph6 range"))
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> Result<bool, GraphError> {
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    Ok(canonical_graph(g)? == canonical_graph(h)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_graphs_terminate() {
        for n in [0, 1, 2, 8, 20] {
            let e = canonical_form(&Graph::new(n)).unwrap();
            assert_eq!(e.decode().unwrap(), Graph::new(n));
            let k = canonical_form(&Graph::complete(n)).unwrap();
            assert_eq!(k.decode().unwrap(), Graph::complete(n));
        }
        let c = canonical_form(&Graph::cycle(30)).unwrap();
        assert_eq!(c.decode().unwrap().edge_count(), 30);
    }

    #[test]
    fn relabelled_cycles_agree() {
        let g = Graph::cycle(7);
        let h = g.relabel(&[3, 5, 0, 6, 1, 4, 2]).unwrap();
        assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        assert!(are_isomorphic(&g, &h).unwrap());
        assert!(!are_isomorphic(&g, &Graph::path(7)).unwrap());
    }

    #[test]
    fn petersen_vs_relabel() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5));
        let p = Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap();
        let q = p.relabel(&[9, 2, 7, 0, 4, 1, 8, 3, 6, 5]).unwrap();
        assert_eq!(canonical_form(&p).unwrap(), canonical_form(&q).unwrap());
    }

    #[test]
    fn too_large() {
        assert_eq!(
            canonical_form(&Graph::new(65)),
            Err(GraphError::SizeExceeded(65))
        );
    }
}
