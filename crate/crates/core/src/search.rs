//! Exhaustive searches for transmission irregular graphs.
//!
//! * [`enumerate_cycle_chords`] adds every set of `c` chords to the cycle
//!   `C_n`, classifies each result, and keeps one canonical representative
//!   per isomorphism class among the graphs satisfying the predicate.
//! * [`classify_stream`] tallies the classes of every graph in a graph6
//!   stream, typically the output of an external exhaustive generator.
//! * [`scan_order_conjecture`] lists ITI graphs whose order is `2 mod 4`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::io::{self, BufRead};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonical_lab, rows_of, MAX_CANON_ORDER};
use crate::distance::{small_transmissions, transmissions};
use crate::graph::Graph;
use crate::graph6::{encode_graph6, parse_graph6, Graph6Code};

/// Default limit on the number of chord sets a search may visit.
pub const DEFAULT_CEILING: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predicate {
    Ti,
    Mti,
    Iti,
}

impl FromStr for Predicate {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ti" => Ok(Predicate::Ti),
            "mti" => Ok(Predicate::Mti),
            "iti" => Ok(Predicate::Iti),
            _ => Err(SearchError::UnknownPredicate(s.to_string())),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Predicate::Ti => "ti",
            Predicate::Mti => "mti",
            Predicate::Iti => "iti",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("cycle length {0} outside 4..=64")]
    CycleLength(usize),
    #[error("{chords} chords requested but C_{n} has {available} non-edges")]
    ChordCount {
        n: usize,
        chords: usize,
        available: usize,
    },
    #[error("shard {shard} out of range for {shards} shards")]
    Shard { shard: usize, shards: usize },
    #[error("task visits {estimate} chord sets, above the ceiling of {ceiling}; rerun with the long-run option")]
    Infeasible { estimate: u128, ceiling: u64 },
    #[error("unknown predicate {0:?} (expected ti, mti or iti)")]
    UnknownPredicate(String),
}

/// Class flags of a transmission vector, without allocating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct Flags {
    pub ti: bool,
    pub mti: bool,
    pub iti: bool,
}

pub(crate) fn flags(tr: &[u64]) -> Flags {
    let n = tr.len();
    if n == 0 {
        return Flags::default();
    }
    let mti = if n <= 64 {
        let mut seen = 0u64;
        tr.iter().all(|&t| {
            let bit = 1u64 << (t % n as u64);
            let fresh = seen & bit == 0;
            seen |= bit;
            fresh
        })
    } else {
        let mut seen = vec![false; n];
        tr.iter().all(|&t| !std::mem::replace(&mut seen[(t % n as u64) as usize], true))
    };
    let ti = mti || {
        let mut s = tr.to_vec();
        s.sort_unstable();
        s.windows(2).all(|w| w[0] != w[1])
    };
    let (lo, hi) = tr.iter().fold((u64::MAX, 0), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    Flags {
        ti,
        mti,
        iti: ti && hi - lo == n as u64 - 1,
    }
}

impl Predicate {
    pub(crate) fn holds(self, f: Flags) -> bool {
        match self {
            Predicate::Ti => f.ti,
            Predicate::Mti => f.mti,
            Predicate::Iti => f.iti,
        }
    }
}

/// One cycle-plus-chords search, or one shard of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordSearchTask {
    pub n: usize,
    pub chords: usize,
    pub predicate: Predicate,
    pub shards: usize,
    pub shard: usize,
    /// Maximum number of chord sets visited; `None` lifts the limit.
    pub ceiling: Option<u64>,
}

impl ChordSearchTask {
    pub fn new(n: usize, chords: usize, predicate: Predicate) -> Self {
        ChordSearchTask {
            n,
            chords,
            predicate,
            shards: 1,
            shard: 0,
            ceiling: Some(DEFAULT_CEILING),
        }
    }

    pub fn shard(mut self, shard: usize, shards: usize) -> Self {
        self.shard = shard;
        self.shards = shards;
        self
    }

    pub fn long_run(mut self) -> Self {
        self.ceiling = None;
        self
    }

    /// Non-edges of `C_n` in lexicographic order.
    pub fn candidate_chords(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|u| (u + 2..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !(u == 0 && v == n - 1))
            .collect()
    }

    /// Number of chord sets in the whole task.
    pub fn estimate(&self) -> u128 {
        binomial(self.candidate_chords().len() as u128, self.chords as u128)
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Outcome of a chord search (or the merge of several shards).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordSearchResult {
    pub n: usize,
    pub chords: usize,
    pub predicate: Predicate,
    /// Chord sets visited.
    pub visited: u64,
    /// Chord sets whose graph satisfied the predicate.
    pub labelled_hits: u64,
    /// Canonical graph6 code of each isomorphism class found, sorted.
    pub representatives: Vec<Graph6Code>,
}

impl ChordSearchResult {
    /// Number of isomorphism classes found.
    pub fn classes(&self) -> usize {
        self.representatives.len()
    }

    /// Combines the results of disjoint shards of the same task.
    pub fn merge(mut self, other: ChordSearchResult) -> ChordSearchResult {
        debug_assert_eq!((self.n, self.chords, self.predicate), (other.n, other.chords, other.predicate));
        self.visited += other.visited;
        self.labelled_hits += other.labelled_hits;
        let set: BTreeSet<Graph6Code> = self.representatives.into_iter().chain(other.representatives).collect();
        self.representatives = set.into_iter().collect();
        self
    }
}

struct ChordWalker<'a> {
    chords: &'a [(usize, usize)],
    rows: Vec<u64>,
    tr: Vec<u64>,
    predicate: Predicate,
    visited: u64,
    hits: u64,
    found: BTreeSet<Graph6Code>,
}

impl ChordWalker<'_> {
    fn toggle(&mut self, i: usize) {
        let (u, v) = self.chords[i];
        self.rows[u] ^= 1 << v;
        self.rows[v] ^= 1 << u;
    }

    fn descend(&mut self, from: usize, left: usize) {
        if left == 0 {
            self.leaf();
            return;
        }
        for i in from..=self.chords.len() - left {
            self.toggle(i);
            self.descend(i + 1, left - 1);
            self.toggle(i);
        }
    }

    fn leaf(&mut self) {
        self.visited += 1;
        let connected = small_transmissions(&self.rows, &mut self.tr);
        debug_assert!(connected);
        if self.predicate.holds(flags(&self.tr)) {
            self.hits += 1;
            self.found.insert(canonical_code(&self.rows));
        }
    }
}

fn canonical_code(rows: &[u64]) -> Graph6Code {
    let lab = canonical_lab(rows);
    let n = rows.len();
    let mut g = Graph::new(n);
    for (p, &u) in lab.iter().enumerate() {
        for (q, &v) in lab.iter().enumerate().skip(p + 1) {
            if rows[u] >> v & 1 == 1 {
                g.add_edge(p, q).expect("in range");
            }
        }
    }
    encode_graph6(&g).expect("small order")
}

/// Runs a cycle-plus-chords search.
///
/// Chord sets are partitioned among shards by their first chord, so running
/// every shard and merging gives the same result as an unsharded run.
pub fn enumerate_cycle_chords(task: &ChordSearchTask) -> Result<ChordSearchResult, SearchError> {
    let n = task.n;
    if !(4..=MAX_CANON_ORDER).contains(&n) {
        return Err(SearchError::CycleLength(n));
    }
    let chords = task.candidate_chords();
    if task.chords == 0 || task.chords > chords.len() {
        return Err(SearchError::ChordCount {
            n,
            chords: task.chords,
            available: chords.len(),
        });
    }
    if task.shards == 0 || task.shard >= task.shards {
        return Err(SearchError::Shard {
            shard: task.shard,
            shards: task.shards,
        });
    }
    let estimate = task.estimate();
    if let Some(ceiling) = task.ceiling {
        if estimate > ceiling as u128 {
            return Err(SearchError::Infeasible { estimate, ceiling });
        }
    }
    let base = rows_of(&Graph::cycle(n));
    let firsts: Vec<usize> = (0..=chords.len() - task.chords)
        .filter(|i| i % task.shards == task.shard)
        .collect();
    let empty = ChordSearchResult {
        n,
        chords: task.chords,
        predicate: task.predicate,
        visited: 0,
        labelled_hits: 0,
        representatives: Vec::new(),
    };
    let result = firsts
        .par_iter()
        .map(|&first| {
            let mut w = ChordWalker {
                chords: &chords,
                rows: base.clone(),
                tr: vec![0; n],
                predicate: task.predicate,
                visited: 0,
                hits: 0,
                found: BTreeSet::new(),
            };
            w.toggle(first);
            w.descend(first + 1, task.chords - 1);
            ChordSearchResult {
                visited: w.visited,
                labelled_hits: w.hits,
                representatives: w.found.into_iter().collect(),
                ..empty.clone()
            }
        })
        .reduce(|| empty.clone(), ChordSearchResult::merge);
    Ok(result)
}

/// Per-order tallies of a census.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderCounts {
    pub connected: u64,
    pub ti: u64,
    pub mti: u64,
    pub iti: u64,
}

impl OrderCounts {
    fn add(&mut self, o: &OrderCounts) {
        self.connected += o.connected;
        self.ti += o.ti;
        self.mti += o.mti;
        self.iti += o.iti;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MalformedLine {
    pub line: usize,
    pub error: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CensusOptions {
    /// Keep the graph6 code of every ITI graph.
    pub emit_iti: bool,
    /// Keep the graph6 code of every MTI graph.
    pub emit_mti: bool,
}

/// Classification tallies of a graph stream.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub orders: BTreeMap<usize, OrderCounts>,
    pub disconnected: u64,
    pub malformed: Vec<MalformedLine>,
    /// Present when ITI codes were requested; sorted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iti_codes: Option<Vec<Graph6Code>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mti_codes: Option<Vec<Graph6Code>>,
}

fn merge_codes(a: Option<Vec<Graph6Code>>, b: Option<Vec<Graph6Code>>) -> Option<Vec<Graph6Code>> {
    match (a, b) {
        (None, None) => None,
        (a, b) => {
            let mut v: Vec<Graph6Code> = a.into_iter().chain(b).flatten().collect();
            v.sort();
            Some(v)
        }
    }
}

impl CensusReport {
    fn empty(opts: CensusOptions) -> Self {
        CensusReport {
            iti_codes: opts.emit_iti.then(Vec::new),
            mti_codes: opts.emit_mti.then(Vec::new),
            ..Default::default()
        }
    }

    /// Associative, commutative combination of two reports.
    pub fn merge(mut self, other: CensusReport) -> CensusReport {
        for (n, c) in &other.orders {
            self.orders.entry(*n).or_default().add(c);
        }
        self.disconnected += other.disconnected;
        self.malformed.extend(other.malformed);
        self.malformed.sort();
        self.iti_codes = merge_codes(self.iti_codes, other.iti_codes);
        self.mti_codes = merge_codes(self.mti_codes, other.mti_codes);
        self
    }

    pub fn totals(&self) -> OrderCounts {
        let mut t = OrderCounts::default();
        for c in self.orders.values() {
            t.add(c);
        }
        t
    }

    fn record(&mut self, g: &Graph) {
        let n = g.order();
        let f = if n <= 64 {
            let rows = rows_of(g);
            let mut tr = vec![0; n];
            if n == 0 || !small_transmissions(&rows, &mut tr) {
                self.disconnected += 1;
                return;
            }
            flags(&tr)
        } else {
            match transmissions(g) {
                Ok(tr) => flags(tr.values()),
                Err(_) => {
                    self.disconnected += 1;
                    return;
                }
            }
        };
        let c = self.orders.entry(n).or_default();
        c.connected += 1;
        c.ti += f.ti as u64;
        c.mti += f.mti as u64;
        c.iti += f.iti as u64;
        let code = || encode_graph6(g).expect("parsed graphs re-encode");
        if f.iti {
            if let Some(v) = self.iti_codes.as_mut() {
                v.push(code());
            }
        }
        if f.mti {
            if let Some(v) = self.mti_codes.as_mut() {
                v.push(code());
            }
        }
    }

    /// Tallies an in-memory collection of graphs.
    pub fn from_graphs<'a, I: IntoIterator<Item = &'a Graph>>(graphs: I, opts: CensusOptions) -> Self {
        let mut r = CensusReport::empty(opts);
        for g in graphs {
            r.record(g);
        }
        r.iti_codes.iter_mut().chain(r.mti_codes.iter_mut()).for_each(|v| v.sort());
        r
    }

    /// Line-oriented `key=value` rendering.
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        for (n, c) in &self.orders {
            writeln!(
                s,
                "order={n} connected={} ti={} mti={} iti={}",
                c.connected, c.ti, c.mti, c.iti
            )
            .unwrap();
        }
        let t = self.totals();
        writeln!(
            s,
            "total connected={} ti={} mti={} iti={}",
            t.connected, t.ti, t.mti, t.iti
        )
        .unwrap();
        writeln!(s, "disconnected={}", self.disconnected).unwrap();
        writeln!(s, "malformed={}", self.malformed.len()).unwrap();
        for m in &self.malformed {
            writeln!(s, "malformed.line={} error={}", m.line, m.error).unwrap();
        }
        s
    }
}

const BATCH: usize = 1 << 14;

/// Classifies every graph in a newline-delimited graph6 stream.
///
/// Disconnected graphs are counted and skipped. Lines that do not parse are
/// recorded with their 1-based line number and the stream continues.
pub fn classify_stream<R: BufRead>(reader: R, opts: CensusOptions) -> io::Result<CensusReport> {
    let mut report = CensusReport::empty(opts);
    let mut batch: Vec<(usize, String)> = Vec::with_capacity(BATCH);
    let run = |batch: &mut Vec<(usize, String)>, report: &mut CensusReport| {
        let part = batch
            .par_iter()
            .fold(
                || CensusReport::empty(opts),
                |mut r, (line, text)| {
                    match parse_graph6(text) {
                        Ok(g) => r.record(&g),
                        Err(e) => r.malformed.push(MalformedLine {
                            line: *line,
                            error: e.to_string(),
                        }),
                    }
                    r
                },
            )
            .reduce(|| CensusReport::empty(opts), CensusReport::merge);
        batch.clear();
        *report = std::mem::take(report).merge(part);
    };
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        batch.push((i + 1, t.to_string()));
        if batch.len() == BATCH {
            run(&mut batch, &mut report);
        }
    }
    run(&mut batch, &mut report);
    Ok(report)
}

/// An ITI graph whose order is `2 mod 4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureFinding {
    pub order: usize,
    pub count: u64,
    /// Witness codes, when the report carries them.
    pub codes: Vec<Graph6Code>,
}

/// Lists every order `2 mod 4` on which the report has ITI graphs. An empty
/// result means the report supports the conjecture that no such graph
/// exists.
pub fn scan_order_conjecture(report: &CensusReport) -> Vec<ConjectureFinding> {
    report
        .orders
        .iter()
        .filter(|(n, c)| *n % 4 == 2 && c.iti > 0)
        .map(|(&order, c)| ConjectureFinding {
            order,
            count: c.iti,
            codes: report
                .iti_codes
                .iter()
                .flatten()
                .filter(|code| code.decode().map(|g| g.order() == order).unwrap_or(false))
                .cloned()
                .collect(),
        })
        .collect()
}
