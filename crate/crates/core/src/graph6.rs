//! The graph6 text format.
//!
//! A code is the size field `N(n)` followed by the upper triangle of the
//! adjacency matrix, read column by column (`(0,1), (0,2), (1,2), (0,3), ...`),
//! packed six bits per character with the most significant bit first and
//! offset by 63. The final character is zero-padded.
//!
//! Orders up to 62 use a one-byte size field; orders up to 258047 use the
//! `~` escape followed by three size characters.

use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Largest order representable with the short (four byte) size field.
pub const MAX_ORDER: usize = 258_047;

const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 code")]
    Empty,
    #[error("byte {offset}: character {byte:#04x} outside the printable graph6 range 63..=126")]
    CharOutOfRange { offset: usize, byte: u8 },
    #[error("byte {offset}: malformed size field")]
    MalformedLength { offset: usize },
    #[error("order {0} exceeds the supported maximum {MAX_ORDER}")]
    SizeExceeded(usize),
    #[error("byte {offset}: bit stream truncated, expected {expected} data bytes")]
    Truncated { offset: usize, expected: usize },
    #[error("byte {offset}: padding bits are not zero")]
    NonzeroPadding { offset: usize },
    #[error("byte {offset}: unexpected trailing data")]
    TrailingData { offset: usize },
}

/// A syntactically checked graph6 string (every byte in `63..=126`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Graph6Code(String);

impl Graph6Code {
    pub fn new(text: impl Into<String>) -> Result<Self, Graph6Error> {
        let text = text.into();
        if text.is_empty() {
            return Err(Graph6Error::Empty);
        }
        if let Some((offset, &byte)) = text
            .as_bytes()
            .iter()
            .enumerate()
            .find(|(_, b)| !(63..=126).contains(*b))
        {
            return Err(Graph6Error::CharOutOfRange { offset, byte });
        }
        Ok(Graph6Code(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn decode(&self) -> Result<Graph, Graph6Error> {
        parse_graph6(&self.0)
    }
}

impl TryFrom<String> for Graph6Code {
    type Error = Graph6Error;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Graph6Code::new(s)
    }
}

impl From<Graph6Code> for String {
    fn from(c: Graph6Code) -> String {
        c.0
    }
}

impl fmt::Display for Graph6Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn data_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Decodes a graph6 string. A leading `>>graph6<<` header is accepted.
pub fn parse_graph6(code: &str) -> Result<Graph, Graph6Error> {
    let bytes = code.strip_prefix(HEADER).unwrap_or(code).as_bytes();
    let base = code.len() - bytes.len();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    if let Some(i) = bytes.iter().position(|b| !(63..=126).contains(b)) {
        return Err(Graph6Error::CharOutOfRange {
            offset: base + i,
            byte: bytes[i],
        });
    }

    let (n, mut pos) = if bytes[0] != 126 {
        ((bytes[0] - 63) as usize, 1)
    } else if bytes.len() >= 2 && bytes[1] == 126 {
        // 8-byte size field: decode for the error message, never supported.
        if bytes.len() < 8 {
            return Err(Graph6Error::MalformedLength { offset: base + bytes.len() });
        }
        let n = bytes[2..8].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        return Err(Graph6Error::SizeExceeded(n));
    } else {
        if bytes.len() < 4 {
            return Err(Graph6Error::MalformedLength { offset: base + bytes.len() });
        }
        let n = bytes[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        if n < 63 {
            // Non-canonical long form for a small order.
            return Err(Graph6Error::MalformedLength { offset: base + 1 });
        }
        (n, 4)
    };

    let expected = data_len(n);
    let data = &bytes[pos..];
    if data.len() < expected {
        return Err(Graph6Error::Truncated {
            offset: base + bytes.len(),
            expected,
        });
    }
    if data.len() > expected {
        return Err(Graph6Error::TrailingData {
            offset: base + pos + expected,
        });
    }

    let mut g = Graph::new(n);
    let total_bits = n * n.saturating_sub(1) / 2;
    let mut bit = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = bytes[pos + bit / 6] - 63;
            if byte >> (5 - bit % 6) & 1 == 1 {
                g.add_edge(i, j).expect("ids in range");
            }
            bit += 1;
            if bit == total_bits {
                break 'outer;
            }
        }
    }
    if total_bits % 6 != 0 {
        pos += expected - 1;
        let pad = 6 - total_bits % 6;
        if (bytes[pos] - 63) & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::NonzeroPadding { offset: base + pos });
        }
    }
    Ok(g)
}

/// Encodes a graph as graph6 (no header, no newline).
pub fn encode_graph6(g: &Graph) -> Result<Graph6Code, Graph6Error> {
    let n = g.order();
    if n > MAX_ORDER {
        return Err(Graph6Error::SizeExceeded(n));
    }
    let mut out = Vec::with_capacity(4 + data_len(n));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.extend([(n >> 12) & 63, (n >> 6) & 63, n & 63].map(|x| x as u8 + 63));
    }
    let mut acc = 0u8;
    let mut fill = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            fill += 1;
            if fill == 6 {
                out.push(acc + 63);
                acc = 0;
                fill = 0;
            }
        }
    }
    if fill > 0 {
        out.push((acc << (6 - fill)) + 63);
    }
    Ok(Graph6Code(String::from_utf8(out).expect("graph6 is ASCII")))
}

/// One item of a graph6 line stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamLine {
    /// 1-based line number.
    pub line: usize,
    pub graph: Result<Graph, Graph6Error>,
}

/// Iterates a newline-delimited graph6 stream, skipping blank lines.
/// Parse failures are yielded in-band with their line number so callers can
/// report them and continue.
pub fn read_stream<R: BufRead>(reader: R) -> impl Iterator<Item = std::io::Result<StreamLine>> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e)),
        Ok(l) => {
            let t = l.trim();
            if t.is_empty() {
                None
            } else {
                Some(Ok(StreamLine {
                    line: i + 1,
                    graph: parse_graph6(t),
                }))
            }
        }
    })
}
