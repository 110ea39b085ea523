//! Oracles shared by the integration tests. Nothing here calls into the
//! library's distance, expansion or canonical-form code.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;
use tigraph::Graph;

pub type Adj = Vec<Vec<usize>>;

pub fn adjacency(g: &Graph) -> Adj {
    let n = g.order();
    (0..n).map(|u| (0..n).filter(|&v| g.has_edge(u, v)).collect()).collect()
}

pub fn graph_of(adj: &Adj) -> Graph {
    let mut g = Graph::new(adj.len());
    for (u, nbrs) in adj.iter().enumerate() {
        for &v in nbrs {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

fn link(adj: &mut Adj, u: usize, v: usize) {
    if u != v && !adj[u].contains(&v) {
        adj[u].push(v);
        adj[v].push(u);
    }
}

pub fn bfs(adj: &Adj, src: usize) -> Vec<Option<u64>> {
    let mut dist = vec![None; adj.len()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Transmissions by one BFS per vertex, `None` when disconnected.
pub fn bfs_transmissions(adj: &Adj) -> Option<Vec<u64>> {
    (0..adj.len())
        .map(|u| bfs(adj, u).into_iter().sum::<Option<u64>>())
        .collect()
}

/// Core vertices first, then the internal vertices of each path from `u`.
pub fn naive_expand(core_n: usize, core_edges: &[(usize, usize)], paths: &[(usize, usize, usize)]) -> Adj {
    let total = core_n + paths.iter().map(|p| p.2).sum::<usize>();
    let mut adj = vec![Vec::new(); total];
    for &(u, v) in core_edges {
        link(&mut adj, u, v);
    }
    let mut next = core_n;
    for &(u, v, s) in paths {
        let mut prev = u;
        for _ in 0..s {
            link(&mut adj, prev, next);
            prev = next;
            next += 1;
        }
        link(&mut adj, prev, v);
    }
    adj
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Adj {
    let mut adj = vec![Vec::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                link(&mut adj, u, v);
            }
        }
    }
    adj
}

/// Random spanning tree plus independent extra edges.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Adj {
    let mut adj = random_graph(rng, n, p);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        link(&mut adj, u, v);
    }
    adj
}

/// Lexicographically largest upper-triangle bit string over all relabellings.
pub fn brute_canonical(adj: &Adj) -> Vec<bool> {
    let n = adj.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = Vec::new();
    loop {
        let mut bits = Vec::with_capacity(n * n / 2);
        for i in 0..n {
            for j in i + 1..n {
                bits.push(adj[perm[i]].contains(&perm[j]));
            }
        }
        if bits > best {
            best = bits;
        }
        if !next_permutation(&mut perm) {
            return best;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn is_ti(tr: &[u64]) -> bool {
    tr.iter().collect::<BTreeSet<_>>().len() == tr.len()
}

pub fn is_mti(tr: &[u64]) -> bool {
    let n = tr.len() as u64;
    tr.iter().map(|t| t % n).collect::<BTreeSet<_>>().len() == tr.len()
}

pub fn is_iti(tr: &[u64]) -> bool {
    is_ti(tr) && tr.iter().max().unwrap() - tr.iter().min().unwrap() == tr.len() as u64 - 1
}
