//! Parametric families with closed-form transmissions.
//!
//! Each family is a fixed core plus chordal paths whose lengths depend on
//! the parameters, except `Dob`, which is a plain graph on `2k + 5` vertices
//! whose transmissions form the interval `[3k + 4, 5k + 8]`.
//!
//! Core vertices are labelled `a, b, c, ...` and numbered `0, 1, 2, ...`.
//! Internal path vertices are labelled by the path letter and their
//! position counted from the first endpoint of the path (`x1, x2, ...`).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chordal::{ChordalPath, CoreWithPaths};
use crate::graph::Graph;
use crate::graph6::parse_graph6;

const G2_CORE: &str = include_str!("../fixtures/g2_core.g6");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("{family}: parameter {name} = {value} is below the minimum {min}")]
    OutOfRange {
        family: &'static str,
        name: &'static str,
        value: usize,
        min: usize,
    },
    #[error("{family} takes {expected} parameter(s), got {got}")]
    Arity {
        family: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("unknown family tag {0:?} (expected G1, G2, G3, G4 or DOB)")]
    UnknownTag(String),
}

/// A family member selected by tag and parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "UPPERCASE")]
pub enum FamilySpec {
    G1 { n: usize },
    G2 { n: usize },
    G3 { n: usize },
    G4 { n: usize, m: usize },
    Dob { k: usize },
}

impl FamilySpec {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilySpec::G1 { .. } => "G1",
            FamilySpec::G2 { .. } => "G2",
            FamilySpec::G3 { .. } => "G3",
            FamilySpec::G4 { .. } => "G4",
            FamilySpec::Dob { .. } => "DOB",
        }
    }

    /// Parses a tag (case-insensitive) and its positional parameters.
    pub fn from_tag(tag: &str, params: &[usize]) -> Result<Self, FamilyError> {
        let upper = tag.to_ascii_uppercase();
        let (family, expected): (&'static str, usize) = match upper.as_str() {
            "G1" => ("G1", 1),
            "G2" => ("G2", 1),
            "G3" => ("G3", 1),
            "G4" => ("G4", 2),
            "DOB" => ("DOB", 1),
            _ => return Err(FamilyError::UnknownTag(tag.to_string())),
        };
        if params.len() != expected {
            return Err(FamilyError::Arity {
                family,
                expected,
                got: params.len(),
            });
        }
        let spec = match family {
            "G1" => FamilySpec::G1 { n: params[0] },
            "G2" => FamilySpec::G2 { n: params[0] },
            "G3" => FamilySpec::G3 { n: params[0] },
            "G4" => FamilySpec::G4 { n: params[0], m: params[1] },
            _ => FamilySpec::Dob { k: params[0] },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        let check = |name, value, min| {
            if value < min {
                Err(FamilyError::OutOfRange {
                    family: self.tag(),
                    name,
                    value,
                    min,
                })
            } else {
                Ok(())
            }
        };
        match *self {
            FamilySpec::G1 { n } => check("n", n, 2),
            FamilySpec::G2 { n } => check("n", n, 3),
            FamilySpec::G3 { n } => check("n", n, 1),
            FamilySpec::G4 { n, m } => check("n", n, 1).and(check("m", m, 1)),
            FamilySpec::Dob { k } => check("k", k, 1),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::G1 { n } | FamilySpec::G2 { n } | FamilySpec::G3 { n } => {
                write!(f, "{}({n})", self.tag())
            }
            FamilySpec::G4 { n, m } => write!(f, "G4({n},{m})"),
            FamilySpec::Dob { k } => write!(f, "DOB({k})"),
        }
    }
}

fn core(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges.iter().copied()).expect("static core")
}

/// The 8-vertex core of the G2 family, vertices `a..h`.
pub fn g2_core() -> Graph {
    parse_graph6(G2_CORE.trim()).expect("shipped fixture")
}

/// The Dobrynin graph on `2k + 5` vertices.
///
/// Vertex order: `a, b, c, d, ab1, ab2, a_0 .. a_{k-1}, b_1 .. b_{k-1}`.
pub fn dobrynin(k: usize) -> Graph {
    let (a, b, c, d, ab1, ab2) = (0, 1, 2, 3, 4, 5);
    let ai = |i: usize| 6 + i;
    let bj = |j: usize| 5 + k + j;
    let mut g = Graph::new(2 * k + 5);
    let mut add = |u, v| {
        g.add_edge(u, v).expect("in range");
    };
    add(a, b);
    add(a, c);
    add(b, d);
    for x in [ab1, ab2] {
        add(a, x);
        add(b, x);
    }
    for i in 0..k {
        add(a, ai(i));
        add(ab1, ai(i));
        for j in 1..=i {
            add(ai(i), bj(j));
        }
    }
    for j in 1..k {
        add(b, bj(j));
        add(ab2, bj(j));
    }
    g
}

/// Builds the family member as a core with chordal paths.
pub fn build(spec: FamilySpec) -> Result<CoreWithPaths, FamilyError> {
    spec.validate()?;
    let p = ChordalPath::new;
    let cwp = match spec {
        FamilySpec::G1 { n } => CoreWithPaths::new(
            core(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 4)]),
            vec![p(0, 1, n)],
        ),
        FamilySpec::G2 { n } => CoreWithPaths::new(g2_core(), vec![p(4, 7, n)]),
        FamilySpec::G3 { n } => CoreWithPaths::new(
            core(8, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 6), (4, 5), (4, 7), (6, 7)]),
            vec![p(1, 3, n), p(2, 4, n)],
        ),
        FamilySpec::G4 { n, m } => CoreWithPaths::new(
            core(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (4, 5)]),
            vec![p(1, 3, n), p(2, 4, n), p(3, 4, m)],
        ),
        FamilySpec::Dob { k } => Ok(CoreWithPaths::bare(dobrynin(k))),
    };
    Ok(cwp.expect("family paths are valid"))
}

/// Whether a closed-form profile covers every vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coverage {
    Full,
    /// Only core vertices have closed forms at these parameters.
    CoreOnly,
}

/// Closed-form transmissions aligned with the expanded vertex order of
/// [`build`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormProfile {
    pub spec: FamilySpec,
    pub labels: Vec<String>,
    pub values: Vec<Option<u64>>,
    pub coverage: Coverage,
}

impl ClosedFormProfile {
    /// All values, when the profile is complete.
    pub fn complete(&self) -> Option<Vec<u64>> {
        self.values.iter().copied().collect()
    }

    pub fn get(&self, label: &str) -> Option<u64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .and_then(|i| self.values[i])
    }
}

/// `(poly + 2 floor(arg / 2)) / 4`, i.e. `poly/4 + floor(arg/2)/2`, which
/// must be an integer.
fn quarter(poly: i64, arg: i64) -> i64 {
    let num = poly + 2 * arg.div_euclid(2);
    assert_eq!(num.rem_euclid(4), 0, "closed form is not integral");
    num.div_euclid(4)
}

fn labels(core: &str, paths: &[(char, usize)]) -> Vec<String> {
    core.chars()
        .map(String::from)
        .chain(paths.iter().flat_map(|&(c, s)| (1..=s).map(move |k| format!("{c}{k}"))))
        .collect()
}

fn to_u64(v: i64) -> u64 {
    u64::try_from(v).expect("transmissions are positive")
}

/// Evaluates the closed forms for every vertex role.
pub fn closed_form_transmissions(spec: FamilySpec) -> Result<ClosedFormProfile, FamilyError> {
    spec.validate()?;
    let full = |labels, values: Vec<i64>| ClosedFormProfile {
        spec,
        labels,
        values: values.into_iter().map(|v| Some(to_u64(v))).collect(),
        coverage: Coverage::Full,
    };
    Ok(match spec {
        FamilySpec::G1 { n } => {
            let s = n as i64;
            let core = [
                quarter(s * s + 3 * s + 18, s + 2),
                quarter(s * s + 3 * s + 28, s),
                quarter(s * s + 5 * s + 20, s + 1),
                quarter(s * s + 7 * s + 18, s + 2),
                quarter(s * s + 11 * s + 30, s + 2),
            ];
            let mut values: Vec<Option<u64>> = core.iter().map(|&v| Some(to_u64(v))).collect();
            let coverage = if n % 6 == 1 {
                let m = (s - 1) / 6;
                values.extend((1..=s).map(|k| {
                    Some(to_u64(if k <= 3 * m + 1 {
                        9 * m * m + 9 * m + 6 + 3 * k
                    } else {
                        9 * m * m + 27 * m + 14 - 3 * k
                    }))
                }));
                Coverage::Full
            } else {
                values.extend(std::iter::repeat(None).take(n));
                Coverage::CoreOnly
            };
            ClosedFormProfile {
                spec,
                labels: labels("abcde", &[('x', n)]),
                values,
                coverage,
            }
        }
        FamilySpec::G2 { n } => {
            let s = n as i64;
            let core = [
                quarter(s * s + 9 * s + 46, s + 3),
                quarter(s * s + 9 * s + 40, s + 1),
                quarter(s * s + 11 * s + 48, s),
                quarter(s * s + 11 * s + 58, s - 2),
                quarter(s * s + 7 * s + 52, s + 4),
                quarter(s * s + 7 * s + 42, s + 2),
                quarter(s * s + 7 * s + 40, s),
                quarter(s * s + 7 * s + 50, s - 2),
            ];
            let mut values: Vec<Option<u64>> = core.iter().map(|&v| Some(to_u64(v))).collect();
            let coverage = if n % 4 == 1 {
                let m = (s - 1) / 4;
                let base = 4 * m * m;
                values.extend((1..=s).map(|k| {
                    Some(to_u64(if k < 2 * m {
                        base + 10 * m + 16 + 4 * k
                    } else if k == 2 * m {
                        base + 18 * m + 15
                    } else if k == 2 * m + 1 {
                        base + 18 * m + 16
                    } else {
                        base + 26 * m + 22 - 4 * k
                    }))
                }));
                Coverage::Full
            } else {
                values.extend(std::iter::repeat(None).take(n));
                Coverage::CoreOnly
            };
            ClosedFormProfile {
                spec,
                labels: labels("abcdefgh", &[('x', n)]),
                values,
                coverage,
            }
        }
        FamilySpec::G3 { n } => {
            let s = n as i64;
            let q = s * s + 7 * s;
            let mut values = vec![
                s * s + 8 * s + 15,
                q + 13,
                q + 12,
                s * s + 5 * s + 11,
                s * s + 5 * s + 10,
                q + 16,
                q + 15,
                q + 14,
            ];
            values.extend((1..=s).map(|k| q + 13 - 2 * k));
            values.extend((1..=s).map(|l| q + 12 - 2 * l));
            full(labels("abcdefgh", &[('x', n), ('y', n)]), values)
        }
        FamilySpec::G4 { n, m } => {
            let (s, t) = (n as i64, m as i64);
            let big_k = quarter(t * t + 7 * t - 2, t + 2);
            let small_k = quarter(t * t + 3 * t - 2, t + 2);
            let a = s * s + 6 * s + 9 + quarter(t * t + 9 * t, t + 1) + t * s;
            let b = s * s + 5 * s + 8 + big_k + t * s;
            let c = s * s + 5 * s + 7 + big_k + t * s;
            let mut values = vec![
                a,
                b,
                c,
                s * s + 5 * s + 8 + small_k,
                s * s + 5 * s + 7 + small_k,
                s * s + 7 * s + 11 + big_k,
            ];
            values.extend((1..=s).map(|p| b - t * p));
            values.extend((1..=s).map(|q| c - t * q));
            let (lo, hi) = (t / 2, (t + 1) / 2);
            let q = (lo + 1) * (hi + 1);
            values.extend((1..=t).map(|r| {
                if r <= lo {
                    s * s + 5 * s + 7 + q + (2 * s + 4) * r
                } else if r == hi && t % 2 == 1 {
                    s * s + 4 * s + 5 + q + (2 * s + 4) * hi
                } else {
                    s * s + 5 * s + 6 + q + (2 * s + 4) * (t + 1 - r)
                }
            }));
            full(labels("abcdef", &[('x', n), ('y', n), ('z', m)]), values)
        }
        FamilySpec::Dob { k } => {
            let kk = k as i64;
            let mut labels: Vec<String> = ["a", "b", "c", "d", "ab1", "ab2"].map(String::from).to_vec();
            let mut values = vec![3 * kk + 4, 3 * kk + 5, 5 * kk + 7, 5 * kk + 8, 3 * kk + 6, 3 * kk + 7];
            for i in 0..kk {
                labels.push(format!("a{i}"));
                values.push(5 * kk + 6 - 2 * i);
            }
            for j in 1..kk {
                labels.push(format!("b{j}"));
                values.push(3 * kk + 7 + 2 * j);
            }
            full(labels, values)
        }
    })
}
