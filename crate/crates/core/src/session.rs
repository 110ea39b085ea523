//! The archer command protocol.
//!
//! A session holds a core graph and a list of chordal paths. Commands:
//!
//! | verb | arguments            | effect                                  |
//! |------|----------------------|-----------------------------------------|
//! | `g`  | `n u1 v1 u2 v2 ...`  | replace the core, clear the paths       |
//! | `g6` | graph6 code          | replace the core, clear the paths       |
//! | `a`  | `u v s`              | append chordal path `(u, v, s)`         |
//! | `d`  | index                | delete the path with this index         |
//! | `c`  |                      | clear all paths                         |
//! | `x`  |                      | close the session                       |
//!
//! Vertices and paths are numbered from 0. After every change the session
//! renders one `Vertex i: t` line per core vertex, one
//! `Arc j (u v s): t1 ... ts` line per path (internal vertices counted from
//! `u`), and the spectrum line. Invalid commands are reported and leave the
//! state unchanged.

use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chordal::{ChordalError, ChordalPath, CoreWithPaths};
use crate::classify::{classify, spectrum_string, TransmissionSpectrum};
use crate::distance::TransmissionProfile;
use crate::families::{build, FamilyError, FamilySpec};
use crate::graph::Graph;
use crate::graph6::parse_graph6;

/// Largest core accepted by `g` and `g6`.
pub const MAX_CORE_ORDER: usize = 512;
/// Largest `s` accepted by `a`.
pub const MAX_PATH_LENGTH: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verb", rename_all = "lowercase")]
pub enum Command {
    G { n: usize, edges: Vec<(usize, usize)> },
    G6 { code: String },
    A { u: usize, v: usize, s: usize },
    D { index: usize },
    C,
    X,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::G { n, edges } => {
                write!(f, "g {n}")?;
                for (u, v) in edges {
                    write!(f, " {u} {v}")?;
                }
                Ok(())
            }
            Command::G6 { code } => write!(f, "g6 {code}"),
            Command::A { u, v, s } => write!(f, "a {u} {v} {s}"),
            Command::D { index } => write!(f, "d {index}"),
            Command::C => f.write_str("c"),
            Command::X => f.write_str("x"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommandError {
    #[error("empty command")]
    Empty,
    #[error("unknown command {0:?}; expected g, g6, a, d, c or x")]
    UnknownVerb(String),
    #[error("{verb}: {expected}, got {got} argument(s)")]
    Arity {
        verb: &'static str,
        expected: &'static str,
        got: usize,
    },
    #[error("{verb}: {token:?} is not a nonnegative integer")]
    NotANumber { verb: &'static str, token: String },
    #[error("vertex {vertex} out of range for a core on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("no chordal path with index {index} (there are {len})")]
    PathIndexOutOfRange { index: usize, len: usize },
    #[error("a path from {0} to itself needs s >= 2")]
    DegenerateLoop(usize),
    #[error("{what} {value} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("invalid graph6 code: {0}")]
    Graph6(String),
    #[error("session is closed")]
    Closed,
}

fn numbers(verb: &'static str, tokens: &[&str]) -> Result<Vec<usize>, CommandError> {
    tokens
        .iter()
        .map(|t| {
            t.parse::<usize>().map_err(|_| CommandError::NotANumber {
                verb,
                token: t.to_string(),
            })
        })
        .collect()
}

fn limit(what: &'static str, value: usize, limit: usize) -> Result<(), CommandError> {
    if value > limit {
        Err(CommandError::TooLarge { what, value, limit })
    } else {
        Ok(())
    }
}

/// Parses one command line. Checks arity, number syntax and everything that
/// does not depend on the session state.
pub fn parse_command(line: &str) -> Result<Command, CommandError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let Some((&verb, args)) = tokens.split_first() else {
        return Err(CommandError::Empty);
    };
    let arity = |verb, expected, ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(CommandError::Arity {
                verb,
                expected,
                got: args.len(),
            })
        }
    };
    match verb.to_ascii_lowercase().as_str() {
        "g" => {
            arity("g", "an order followed by pairs of vertices", args.len() % 2 == 1)?;
            let nums = numbers("g", args)?;
            let n = nums[0];
            limit("core order", n, MAX_CORE_ORDER)?;
            let edges: Vec<(usize, usize)> = nums[1..].chunks(2).map(|p| (p[0], p[1])).collect();
            for &(u, v) in &edges {
                for vertex in [u, v] {
                    if vertex >= n {
                        return Err(CommandError::VertexOutOfRange { vertex, n });
                    }
                }
                if u == v {
                    return Err(CommandError::SelfLoop(u));
                }
            }
            Ok(Command::G { n, edges })
        }
        "g6" => {
            arity("g6", "one graph6 code", args.len() == 1)?;
            let g = parse_graph6(args[0]).map_err(|e| CommandError::Graph6(e.to_string()))?;
            limit("core order", g.order(), MAX_CORE_ORDER)?;
            Ok(Command::G6 {
                code: args[0].to_string(),
            })
        }
        "a" => {
            arity("a", "three numbers u v s", args.len() == 3)?;
            let nums = numbers("a", args)?;
            let (u, v, s) = (nums[0], nums[1], nums[2]);
            limit("path length", s, MAX_PATH_LENGTH)?;
            if u == v && s < 2 {
                return Err(CommandError::DegenerateLoop(u));
            }
            Ok(Command::A { u, v, s })
        }
        "d" => {
            arity("d", "one path index", args.len() == 1)?;
            Ok(Command::D {
                index: numbers("d", args)?[0],
            })
        }
        "c" => {
            arity("c", "no arguments", args.is_empty())?;
            Ok(Command::C)
        }
        "x" => {
            arity("x", "no arguments", args.is_empty())?;
            Ok(Command::X)
        }
        other => Err(CommandError::UnknownVerb(other.to_string())),
    }
}

/// Transmissions grouped as the archer output shows them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupedTransmissions {
    pub core: Vec<u64>,
    /// One list per path, internal vertices counted from `u`.
    pub arcs: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFlags {
    pub ti: bool,
    pub mti: bool,
    pub iti: bool,
}

/// Deterministic snapshot of a session's state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionState {
    pub core_order: usize,
    pub core_edges: Vec<(usize, usize)>,
    pub paths: Vec<ChordalPath>,
    pub order: usize,
    pub transmissions: Option<GroupedTransmissions>,
    pub flags: Option<ClassFlags>,
    pub spectrum: Option<String>,
    /// Why transmissions are missing, if they are.
    pub diagnostics: Vec<String>,
    pub closed: bool,
    /// Number of commands applied so far.
    pub commands_applied: usize,
}

/// Result of executing one command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandResponse {
    pub ok: bool,
    /// Rendered archer output (empty on error).
    pub output: Vec<String>,
    /// One-line error message when `ok` is false.
    pub error: Option<String>,
    pub state: SessionState,
}

#[derive(Debug, Clone)]
struct Evaluation {
    profile: Result<TransmissionProfile, ChordalError>,
    spectrum: Option<TransmissionSpectrum>,
}

impl Evaluation {
    fn of(ws: &CoreWithPaths) -> Self {
        let profile = ws.fast_transmissions();
        let spectrum = profile.as_ref().ok().map(classify);
        Evaluation { profile, spectrum }
    }
}

/// Mutable exploration state.
pub struct Session {
    workspace: CoreWithPaths,
    eval: Evaluation,
    history: Vec<Command>,
    closed: bool,
    log: Option<Box<dyn Write + Send>>,
}

impl fmt::Debug for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Session")
            .field("workspace", &self.workspace)
            .field("history", &self.history)
            .field("closed", &self.closed)
            .finish()
    }
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

impl Session {
    /// A session with an empty core.
    pub fn new() -> Self {
        let workspace = CoreWithPaths::bare(Graph::new(0));
        Session {
            eval: Evaluation::of(&workspace),
            workspace,
            history: Vec::new(),
            closed: false,
            log: None,
        }
    }

    /// Appends every successfully applied command to `log`, one per line.
    pub fn with_log(mut self, log: impl Write + Send + 'static) -> Self {
        self.log = Some(Box::new(log));
        self
    }

    /// Rebuilds a session from a command log. Blank lines and lines starting
    /// with `#` are skipped; any invalid line aborts the replay.
    pub fn replay<R: BufRead>(reader: R) -> io::Result<Session> {
        let mut s = Session::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let cmd = parse_command(t)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("line {}: {e}", i + 1)))?;
            s.apply(cmd)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("line {}: {e}", i + 1)))?;
        }
        Ok(s)
    }

    pub fn workspace(&self) -> &CoreWithPaths {
        &self.workspace
    }

    pub fn history(&self) -> &[Command] {
        &self.history
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn profile(&self) -> Result<&TransmissionProfile, &ChordalError> {
        self.eval.profile.as_ref()
    }

    pub fn spectrum(&self) -> Option<&TransmissionSpectrum> {
        self.eval.spectrum.as_ref()
    }

    /// Applies a parsed command. On error the state is unchanged.
    pub fn apply(&mut self, cmd: Command) -> Result<(), CommandError> {
        if self.closed {
            return Err(CommandError::Closed);
        }
        let core_order = self.workspace.core_order();
        let next = match &cmd {
            Command::G { n, edges } => Some(CoreWithPaths::bare(
                Graph::from_edges(*n, edges.iter().copied()).expect("checked by the parser"),
            )),
            Command::G6 { code } => Some(CoreWithPaths::bare(
                parse_graph6(code).map_err(|e| CommandError::Graph6(e.to_string()))?,
            )),
            Command::A { u, v, s } => {
                for vertex in [*u, *v] {
                    if vertex >= core_order {
                        return Err(CommandError::VertexOutOfRange { vertex, n: core_order });
                    }
                }
                let mut ws = self.workspace.clone();
                ws.push(ChordalPath::new(*u, *v, *s)).expect("checked above");
                Some(ws)
            }
            Command::D { index } => {
                let len = self.workspace.paths().len();
                if *index >= len {
                    return Err(CommandError::PathIndexOutOfRange { index: *index, len });
                }
                let mut ws = self.workspace.clone();
                ws.remove(*index).expect("checked above");
                Some(ws)
            }
            Command::C => {
                let mut ws = self.workspace.clone();
                ws.clear_paths();
                Some(ws)
            }
            Command::X => None,
        };
        match next {
            Some(ws) => {
                self.eval = Evaluation::of(&ws);
                self.workspace = ws;
            }
            None => self.closed = true,
        }
        if let Some(log) = self.log.as_mut() {
            // A failing log must not abort the exploration.
            let _ = writeln!(log, "{cmd}").and_then(|_| log.flush());
        }
        self.history.push(cmd);
        Ok(())
    }

    /// Parses, applies and renders one command line.
    pub fn execute(&mut self, line: &str) -> CommandResponse {
        let result = parse_command(line).and_then(|cmd| {
            let closes = cmd == Command::X;
            self.apply(cmd).map(|_| closes)
        });
        match result {
            Ok(closes) => CommandResponse {
                ok: true,
                output: if closes { Vec::new() } else { self.render() },
                error: None,
                state: self.state(),
            },
            Err(e) => CommandResponse {
                ok: false,
                output: Vec::new(),
                error: Some(e.to_string()),
                state: self.state(),
            },
        }
    }

    /// Replaces the workspace with a family member, as the equivalent
    /// command script. Returns the script.
    pub fn load_family(&mut self, spec: FamilySpec) -> Result<Vec<Command>, FamilyError> {
        let script = family_script(spec)?;
        for cmd in &script {
            self.apply(cmd.clone()).expect("family scripts are valid");
        }
        Ok(script)
    }

    fn grouped(&self) -> Option<GroupedTransmissions> {
        let profile = self.eval.profile.as_ref().ok()?;
        let n = self.workspace.core_order();
        let values = profile.values();
        let mut at = n;
        let arcs = self
            .workspace
            .paths()
            .iter()
            .map(|p| {
                let arc = values[at..at + p.s].to_vec();
                at += p.s;
                arc
            })
            .collect();
        Some(GroupedTransmissions {
            core: values[..n].to_vec(),
            arcs,
        })
    }

    fn diagnostics(&self) -> Vec<String> {
        match &self.eval.profile {
            Ok(_) => Vec::new(),
            Err(ChordalError::EmptyCore) => vec!["core is empty; set one with g or g6".to_string()],
            Err(e) => vec![e.to_string()],
        }
    }

    /// The archer output block for the current state.
    pub fn render(&self) -> Vec<String> {
        let Some(grouped) = self.grouped() else {
            return self.diagnostics();
        };
        let mut lines: Vec<String> = grouped
            .core
            .iter()
            .enumerate()
            .map(|(i, t)| format!("Vertex {i}: {t}"))
            .collect();
        for (j, (p, arc)) in self.workspace.paths().iter().zip(&grouped.arcs).enumerate() {
            let mut line = format!("Arc {j} ({} {} {}):", p.u, p.v, p.s);
            for t in arc {
                line.push(' ');
                line.push_str(&t.to_string());
            }
            lines.push(line);
        }
        lines.push(spectrum_string(self.eval.spectrum.as_ref().expect("profile present")));
        lines
    }

    pub fn state(&self) -> SessionState {
        let sp = self.eval.spectrum.as_ref();
        SessionState {
            core_order: self.workspace.core_order(),
            core_edges: self.workspace.core().edges().collect(),
            paths: self.workspace.paths().to_vec(),
            order: self.workspace.order(),
            transmissions: self.grouped(),
            flags: sp.map(|s| ClassFlags {
                ti: s.is_ti,
                mti: s.is_mti,
                iti: s.is_iti,
            }),
            spectrum: sp.map(spectrum_string),
            diagnostics: self.diagnostics(),
            closed: self.closed,
            commands_applied: self.history.len(),
        }
    }
}

/// Commands that load a family member into a session: one `g` line with the
/// core, then one `a` line per chordal path.
pub fn family_script(spec: FamilySpec) -> Result<Vec<Command>, FamilyError> {
    let cwp = build(spec)?;
    let mut script = vec![Command::G {
        n: cwp.core_order(),
        edges: cwp.core().edges().collect(),
    }];
    script.extend(cwp.paths().iter().map(|p| Command::A { u: p.u, v: p.v, s: p.s }));
    Ok(script)
}

/// Runs the interactive loop: reads commands from `input`, writes rendered
/// output and one-line diagnostics to `output`. Stops at `x` or end of
/// input. When `prompt` is set, `>> ` is written before each read.
pub fn run_repl<R: BufRead, W: Write>(
    session: &mut Session,
    input: R,
    mut output: W,
    prompt: bool,
) -> io::Result<()> {
    let mut lines = input.lines();
    loop {
        if prompt {
            write!(output, ">> ")?;
            output.flush()?;
        }
        let Some(line) = lines.next() else {
            break;
        };
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let resp = session.execute(&line);
        match resp.error {
            Some(e) => writeln!(output, "error: {e}")?,
            None => {
                for l in &resp.output {
                    writeln!(output, "{l}")?;
                }
            }
        }
        if session.is_closed() {
            break;
        }
    }
    output.flush()
}
