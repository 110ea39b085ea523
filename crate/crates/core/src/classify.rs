//! Transmission classes, spectrum rendering, and the internal path audit.
//!
//! A connected graph is *transmission irregular* (TI) when its vertex
//! transmissions are pairwise distinct, *modular* TI (MTI) when they are
//! distinct modulo the order, and *interval* TI (ITI) when they form a run of
//! consecutive integers. ITI implies MTI implies TI.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distance::{transmissions, DistanceError, TransmissionProfile};
use crate::graph::Graph;

/// Sorted transmission values with multiplicities, plus the class flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransmissionSpectrum {
    pub order: usize,
    /// `(value, multiplicity)` in increasing value order.
    pub entries: Vec<(u64, usize)>,
    pub is_ti: bool,
    pub is_mti: bool,
    pub is_iti: bool,
}

impl TransmissionSpectrum {
    pub fn min(&self) -> Option<u64> {
        self.entries.first().map(|e| e.0)
    }

    pub fn max(&self) -> Option<u64> {
        self.entries.last().map(|e| e.0)
    }

    /// Number of distinct values.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }
}

impl std::fmt::Display for TransmissionSpectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&spectrum_string(self))
    }
}

/// Classifies a transmission profile.
pub fn classify(profile: &TransmissionProfile) -> TransmissionSpectrum {
    let n = profile.order();
    let sorted = profile.sorted();
    let mut entries: Vec<(u64, usize)> = Vec::new();
    for v in sorted {
        match entries.last_mut() {
            Some((last, m)) if *last == v => *m += 1,
            _ => entries.push((v, 1)),
        }
    }
    let is_ti = entries.len() == n;
    let is_mti = is_ti && {
        let mut seen = vec![false; n];
        entries
            .iter()
            .all(|&(v, _)| !std::mem::replace(&mut seen[(v % n as u64) as usize], true))
    };
    let is_iti = is_ti && n > 0 && entries[n - 1].0 - entries[0].0 == n as u64 - 1;
    TransmissionSpectrum {
        order: n,
        entries,
        is_ti,
        is_mti,
        is_iti,
    }
}

/// Renders a spectrum as a list of intervals and repeated values, for
/// example `[14--15], [17--24], 27` or `3, 4(x2), 5`.
///
/// Maximal runs of consecutive values that each occur once become `[a--b]`
/// (or just `a` for a run of one); a value occurring `m > 1` times is written
/// `v(xm)` on its own.
pub fn spectrum_string(spectrum: &TransmissionSpectrum) -> String {
    let mut items: Vec<String> = Vec::new();
    let mut run: Option<(u64, u64)> = None;
    let flush = |run: &mut Option<(u64, u64)>, items: &mut Vec<String>| {
        if let Some((a, b)) = run.take() {
            items.push(if a == b { a.to_string() } else { format!("[{a}--{b}]") });
        }
    };
    for &(v, m) in &spectrum.entries {
        if m > 1 {
            flush(&mut run, &mut items);
            items.push(format!("{v}(x{m})"));
            continue;
        }
        match run {
            Some((a, b)) if b + 1 == v => run = Some((a, v)),
            _ => {
                flush(&mut run, &mut items);
                run = Some((v, v));
            }
        }
    }
    flush(&mut run, &mut items);
    items.join(", ")
}

/// A maximal internal path `w_0 .. w_k`: every interior vertex has degree two
/// and the endpoints do not (they may coincide).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalPathRecord {
    pub vertices: Vec<usize>,
    /// Whether deleting the interior vertices leaves a connected graph.
    pub residual_connected: bool,
}

impl InternalPathRecord {
    /// Path length `k`.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 3
    }

    pub fn interior(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("graph is a cycle; internal paths need endpoints")]
    PureCycle,
    #[error("graph needs at least 3 vertices, has {0}")]
    TooSmall(usize),
    #[error(transparent)]
    Distance(#[from] DistanceError),
}

/// All maximal internal paths with at least one interior vertex, each
/// reported once, oriented so that `w_0 <= w_k` (ties broken on `w_1`).
pub fn find_internal_paths(g: &Graph) -> Result<Vec<InternalPathRecord>, AuditError> {
    let n = g.order();
    if n < 3 {
        return Err(AuditError::TooSmall(n));
    }
    if !g.is_connected() {
        let v = g.unreachable_from_zero().expect("disconnected");
        return Err(DistanceError::Disconnected { u: 0, v }.into());
    }
    let deg2: Vec<bool> = (0..n).map(|v| g.degree(v) == 2).collect();
    if deg2.iter().all(|&d| d) {
        return Err(AuditError::PureCycle);
    }
    let mut done = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if !deg2[start] || done[start] {
            continue;
        }
        let mut nb = g.neighbors(start);
        let (left, right) = (nb.next().unwrap(), nb.next().unwrap());
        let walk = |mut prev: usize, mut cur: usize| {
            let mut seq = Vec::new();
            loop {
                seq.push(cur);
                if !deg2[cur] {
                    return seq;
                }
                let next = g.neighbors(cur).find(|&x| x != prev).unwrap();
                prev = cur;
                cur = next;
            }
        };
        let mut back = walk(start, left);
        back.reverse();
        back.push(start);
        back.extend(walk(start, right));
        let mut vertices = back;
        for &w in &vertices[1..vertices.len() - 1] {
            done[w] = true;
        }
        let k = vertices.len() - 1;
        if (vertices[k], vertices[k - 1]) < (vertices[0], vertices[1]) {
            vertices.reverse();
        }
        let residual = g.without_vertices(&vertices[1..k]);
        out.push(InternalPathRecord {
            residual_connected: residual.is_connected(),
            vertices,
        });
    }
    Ok(out)
}

/// Expected shape of the transmission sequence along an internal path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    /// Weakly rising then weakly falling.
    Unimodal,
    /// Weakly falling then weakly rising.
    InverselyUnimodal,
}

/// Audit result for one internal path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathVerdict {
    pub record: InternalPathRecord,
    pub sequence: Vec<u64>,
    pub shape: Shape,
    /// First index of the maximum (unimodal) or minimum (inversely unimodal).
    pub extreme_index: usize,
    /// The sequence has the expected shape around `extreme_index`.
    pub shape_holds: bool,
    /// Second differences are all `<= 0` (unimodal) or all `== 2`
    /// (inversely unimodal).
    pub second_differences_hold: bool,
}

impl PathVerdict {
    pub fn is_violation(&self) -> bool {
        !(self.shape_holds && self.second_differences_hold)
    }
}

impl std::fmt::Display for PathVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut seq = String::new();
        for (i, t) in self.sequence.iter().enumerate() {
            if i > 0 {
                seq.push(' ');
            }
            write!(seq, "{t}")?;
        }
        write!(
            f,
            "{:?} along {:?}: {seq} ({:?} at {}{})",
            self.shape,
            self.record.vertices,
            self.shape,
            self.extreme_index,
            if self.is_violation() { ", VIOLATED" } else { "" }
        )
    }
}

fn rises_then_falls(seq: &[u64], t: usize) -> bool {
    seq[..=t].windows(2).all(|w| w[0] <= w[1]) && seq[t..].windows(2).all(|w| w[0] >= w[1])
}

fn falls_then_rises(seq: &[u64], t: usize) -> bool {
    seq[..=t].windows(2).all(|w| w[0] >= w[1]) && seq[t..].windows(2).all(|w| w[0] <= w[1])
}

fn second_differences(seq: &[u64]) -> impl Iterator<Item = i128> + '_ {
    seq.windows(3).map(|w| w[0] as i128 - 2 * w[1] as i128 + w[2] as i128)
}

/// Checks one transmission sequence against the expected shape.
pub fn audit_sequence(record: InternalPathRecord, sequence: Vec<u64>) -> PathVerdict {
    let first_index = |best: u64| sequence.iter().position(|&x| x == best).unwrap();
    let (shape, extreme_index, shape_holds, second_differences_hold) = if record.residual_connected {
        let t = first_index(*sequence.iter().max().unwrap());
        (
            Shape::Unimodal,
            t,
            rises_then_falls(&sequence, t),
            second_differences(&sequence).all(|d| d <= 0),
        )
    } else {
        let t = first_index(*sequence.iter().min().unwrap());
        (
            Shape::InverselyUnimodal,
            t,
            falls_then_rises(&sequence, t),
            second_differences(&sequence).all(|d| d == 2),
        )
    };
    PathVerdict {
        record,
        sequence,
        shape,
        extreme_index,
        shape_holds,
        second_differences_hold,
    }
}

/// Checks the transmission sequence along every maximal internal path:
/// unimodal when the residual graph is connected, inversely unimodal with
/// constant second difference 2 when it is not.
///
/// Violations are returned as verdicts with [`PathVerdict::is_violation`]
/// set; since the shape is a theorem, any violation signals a bug upstream.
pub fn unimodality_audit(g: &Graph) -> Result<Vec<PathVerdict>, AuditError> {
    let records = find_internal_paths(g)?;
    let tr = transmissions(g)?;
    Ok(records
        .into_iter()
        .map(|r| {
            let seq = r.vertices.iter().map(|&w| tr[w]).collect();
            audit_sequence(r, seq)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(values: &[u64]) -> TransmissionSpectrum {
        classify(&TransmissionProfile::new(values.to_vec()))
    }

    #[test]
    fn complete_graph_is_not_ti() {
        let s = spec(&[3, 3, 3, 3]);
        assert!(!s.is_ti && !s.is_mti && !s.is_iti);
        assert_eq!(spectrum_string(&s), "3(x4)");
    }

    #[test]
    fn interval_strings() {
        let s = spec(&(12..=20).rev().collect::<Vec<_>>());
        assert!(s.is_iti && s.is_mti && s.is_ti);
        assert_eq!(spectrum_string(&s), "[12--20]");
        let mut v: Vec<u64> = vec![14, 15, 27];
        v.extend(17..=24);
        let s = spec(&v);
        assert!(s.is_ti && !s.is_iti);
        assert_eq!(spectrum_string(&s), "[14--15], [17--24], 27");
        assert_eq!(spectrum_string(&spec(&[3, 5, 4, 4])), "3, 4(x2), 5");
        assert_eq!(spectrum_string(&spec(&[1, 2, 2, 3, 4])), "1, 2(x2), [3--4]");
    }

    #[test]
    fn mti_without_iti() {
        // distinct residues mod 3, not an interval
        let s = spec(&[3, 4, 8]);
        assert!(s.is_mti && !s.is_iti);
        let s = spec(&[3, 6, 7]);
        assert!(s.is_ti && !s.is_mti);
    }

    #[test]
    fn trivial_orders() {
        let s = spec(&[0]);
        assert!(s.is_iti);
        let s = spec(&[1, 1]);
        assert!(!s.is_ti);
    }

    #[test]
    fn path_audit() {
        let verdicts = unimodality_audit(&Graph::path(5)).unwrap();
        assert_eq!(verdicts.len(), 1);
        let v = &verdicts[0];
        assert_eq!(v.record.vertices, vec![0, 1, 2, 3, 4]);
        assert!(!v.record.residual_connected);
        assert_eq!(v.sequence, vec![10, 7, 6, 7, 10]);
        assert_eq!(v.shape, Shape::InverselyUnimodal);
        assert_eq!(v.extreme_index, 2);
        assert!(!v.is_violation());
    }

    #[test]
    fn cycle_is_distinguished() {
        assert_eq!(find_internal_paths(&Graph::cycle(6)), Err(AuditError::PureCycle));
    }

    #[test]
    fn lollipop_loop_path() {
        // K4 with a pendant cycle through vertex 0: 0 - 4 - 5 - 6 - 0
        let mut g = Graph::complete(4).with_vertex([0]).unwrap();
        g = g.with_vertex([4]).unwrap().with_vertex([5, 0]).unwrap();
        let paths = find_internal_paths(&g).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].vertices, vec![0, 4, 5, 6, 0]);
        assert!(paths[0].residual_connected);
        assert!(unimodality_audit(&g).unwrap().iter().all(|v| !v.is_violation()));
    }

    #[test]
    fn violation_is_flagged() {
        let r = InternalPathRecord {
            vertices: vec![0, 1, 2, 3],
            residual_connected: true,
        };
        assert!(audit_sequence(r, vec![5, 3, 4, 2]).is_violation());
    }
}
