//! Line-oriented text formats for instances, flows and separators.
//!
//! Instance:
//!
//! ```text
//! # comment
//! p <vertices> <edges> <sources> <sinks>
//! v <id> <x> <y>              optional drawing
//! e <u> <v> <cap u->v> <cap v->u>
//! r <v> <e1> <e2> ...         counter-clockwise incident edges
//! s <v>
//! t <v>
//! ```
//!
//! Edges are numbered in order of appearance. Rotation lines may be
//! omitted when every vertex has coordinates, in which case the embedding
//! is the straight-line drawing.
//!
//! Flow: `x <edge> <value>` per edge, signed along the edge's `u -> v`
//! direction, plus an optional `# value <v>` comment.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::flow_base::{Capacities, FlowNetwork, Pseudoflow};
use crate::planar::{PlanarGraph, VertexId};
use crate::scalar::Scalar;
use crate::separator::Side;

/// Largest accepted sum of all capacities.
pub const MAX_TOTAL_CAPACITY: i128 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<R>(line: usize, message: impl Into<String>) -> Result<R, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone)]
pub struct Instance<T> {
    pub network: FlowNetwork<T>,
    pub coords: Option<Vec<(f64, f64)>>,
}

impl<T: Scalar> Instance<T> {
    pub fn new(network: FlowNetwork<T>) -> Self {
        Instance {
            network,
            coords: None,
        }
    }
}

impl<T: Scalar> PartialEq for Instance<T> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.network, &other.network);
        a.graph.vertex_count() == b.graph.vertex_count()
            && a.graph.edges() == b.graph.edges()
            && a.graph.edge_rotation() == b.graph.edge_rotation()
            && a.capacity == b.capacity
            && a.sources == b.sources
            && a.sinks == b.sinks
            && self.coords == other.coords
    }
}

struct Fields<'a> {
    line: usize,
    words: std::str::SplitWhitespace<'a>,
}

impl<'a> Fields<'a> {
    fn next<R: std::str::FromStr>(&mut self, what: &str) -> Result<R, ParseError> {
        match self.words.next() {
            None => err(self.line, format!("missing {what}")),
            Some(w) => w
                .parse()
                .or_else(|_| err(self.line, format!("bad {what} '{w}'"))),
        }
    }

    fn rest<R: std::str::FromStr>(&mut self, what: &str) -> Result<Vec<R>, ParseError> {
        let line = self.line;
        self.words
            .by_ref()
            .map(|w| w.parse().or_else(|_| err(line, format!("bad {what} '{w}'"))))
            .collect()
    }

    fn finish(mut self) -> Result<(), ParseError> {
        match self.words.next() {
            Some(w) => err(self.line, format!("unexpected '{w}'")),
            None => Ok(()),
        }
    }
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_instance<T: Scalar>(text: &str) -> Result<Instance<T>, ParseError> {
    let mut header: Option<(usize, usize, usize, usize)> = None;
    let mut header_line = 0;
    let mut edges = Vec::new();
    let mut caps = Vec::new();
    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut rotation: Vec<Option<Vec<usize>>> = Vec::new();
    let mut sources = Vec::new();
    let mut sinks = Vec::new();
    let mut seen_edges = HashSet::new();
    let mut total: i128 = 0;
    let mut last_line = 0;
    for (line, text) in records(text) {
        last_line = line;
        let mut words = text.split_whitespace();
        let tag = words.next().unwrap();
        let mut f = Fields { line, words };
        if tag != "p" && header.is_none() {
            return err(line, "expected header line 'p <vertices> <edges> <sources> <sinks>'");
        }
        let n = header.map_or(0, |h| h.0);
        let vertex = |f: &mut Fields, what: &str| -> Result<VertexId, ParseError> {
            let v: VertexId = f.next(what)?;
            if v >= n {
                return err(line, format!("{what} {v} out of range (vertices: {n})"));
            }
            Ok(v)
        };
        match tag {
            "p" => {
                if header.is_some() {
                    return err(line, "duplicate header");
                }
                let h = (
                    f.next("vertex count")?,
                    f.next("edge count")?,
                    f.next("source count")?,
                    f.next("sink count")?,
                );
                if h.0 == 0 {
                    return err(line, "graph needs at least one vertex");
                }
                f.finish()?;
                header = Some(h);
                header_line = line;
                coords = vec![None; h.0];
                rotation = vec![None; h.0];
            }
            "v" => {
                let v = vertex(&mut f, "vertex")?;
                let x: f64 = f.next("x coordinate")?;
                let y: f64 = f.next("y coordinate")?;
                f.finish()?;
                if !x.is_finite() || !y.is_finite() {
                    return err(line, "coordinates must be finite");
                }
                if coords[v].replace((x, y)).is_some() {
                    return err(line, format!("duplicate coordinates for vertex {v}"));
                }
            }
            "e" => {
                let u = vertex(&mut f, "endpoint")?;
                let v = vertex(&mut f, "endpoint")?;
                let cuv: T = f.next("capacity")?;
                let cvu: T = f.next("capacity")?;
                f.finish()?;
                if u == v {
                    return err(line, format!("self-loop at vertex {u}"));
                }
                if !seen_edges.insert((u.min(v), u.max(v))) {
                    return err(line, format!("parallel edge {u}-{v}"));
                }
                if cuv.is_negative() || cvu.is_negative() {
                    return err(line, "capacities must be nonnegative");
                }
                let wide = |c: T| c.to_i128().unwrap_or(MAX_TOTAL_CAPACITY + 1);
                total += wide(cuv) + wide(cvu);
                if total > MAX_TOTAL_CAPACITY {
                    return err(line, "total capacity exceeds 2^40");
                }
                edges.push((u, v));
                caps.extend([cuv, cvu]);
            }
            "r" => {
                let v = vertex(&mut f, "vertex")?;
                let list: Vec<usize> = f.rest("edge id")?;
                if rotation[v].replace(list).is_some() {
                    return err(line, format!("duplicate rotation for vertex {v}"));
                }
            }
            "s" | "t" => {
                let v = vertex(&mut f, "terminal")?;
                f.finish()?;
                if tag == "s" { &mut sources } else { &mut sinks }.push(v);
            }
            other => return err(line, format!("unknown record '{other}'")),
        }
    }
    let Some((n, m, ns, nt)) = header else {
        return err(last_line.max(1), "missing header line");
    };
    let end = last_line.max(header_line);
    if edges.len() != m {
        return err(end, format!("header declares {m} edges, found {}", edges.len()));
    }
    if sources.len() != ns || sinks.len() != nt {
        return err(
            end,
            format!(
                "header declares {ns} sources and {nt} sinks, found {} and {}",
                sources.len(),
                sinks.len()
            ),
        );
    }
    let has_rotation = rotation.iter().any(|r| r.is_some());
    let all_coords: Option<Vec<(f64, f64)>> = coords.iter().copied().collect();
    if coords.iter().any(|c| c.is_some()) && all_coords.is_none() {
        return err(end, "coordinates given for some vertices only");
    }
    let graph = if has_rotation {
        if let Some(v) = rotation.iter().position(|r| r.is_none()) {
            return err(end, format!("missing rotation for vertex {v}"));
        }
        PlanarGraph::from_rotation(n, edges, rotation.into_iter().map(Option::unwrap).collect())
    } else if let Some(points) = &all_coords {
        PlanarGraph::from_straight_line(points, edges)
    } else {
        return err(end, "need rotation lines or coordinates for every vertex");
    };
    let graph = graph.or_else(|e| err(end, format!("invalid embedding: {e}")))?;
    let capacity = Capacities::new(caps).or_else(|e| err(end, e.to_string()))?;
    let network =
        FlowNetwork::new(graph, capacity, sources, sinks).or_else(|e| err(end, e.to_string()))?;
    Ok(Instance {
        network,
        coords: all_coords,
    })
}

pub fn emit_instance<T: Scalar>(inst: &Instance<T>) -> String {
    let net = &inst.network;
    let g = &net.graph;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p {} {} {} {}",
        g.vertex_count(),
        g.edge_count(),
        net.sources.len(),
        net.sinks.len()
    );
    if let Some(coords) = &inst.coords {
        for (v, (x, y)) in coords.iter().enumerate() {
            let _ = writeln!(out, "v {v} {x} {y}");
        }
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let _ = writeln!(
            out,
            "e {u} {v} {} {}",
            net.capacity.get(2 * e),
            net.capacity.get(2 * e + 1)
        );
    }
    for (v, list) in g.edge_rotation().iter().enumerate() {
        out.push_str(&format!("r {v}"));
        for e in list {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    for s in &net.sources {
        let _ = writeln!(out, "s {s}");
    }
    for t in &net.sinks {
        let _ = writeln!(out, "t {t}");
    }
    out
}

pub fn emit_flow<T: Scalar>(f: &Pseudoflow<T>, value: T) -> String {
    let mut out = format!("# value {value}\n");
    for (e, x) in f.edge_values().iter().enumerate() {
        let _ = writeln!(out, "x {e} {x}");
    }
    out
}

/// Reads a flow file for a graph with `edges` edges; missing edges carry
/// zero flow.
pub fn parse_flow<T: Scalar>(text: &str, edges: usize) -> Result<Pseudoflow<T>, ParseError> {
    let mut values = vec![T::zero(); edges];
    let mut seen = vec![false; edges];
    for (line, text) in records(text) {
        let mut words = text.split_whitespace();
        let tag = words.next().unwrap();
        let mut f = Fields { line, words };
        if tag != "x" {
            return err(line, format!("unknown record '{tag}'"));
        }
        let e: usize = f.next("edge id")?;
        let x: T = f.next("flow value")?;
        f.finish()?;
        if e >= edges {
            return err(line, format!("edge {e} out of range (edges: {edges})"));
        }
        if std::mem::replace(&mut seen[e], true) {
            return err(line, format!("duplicate flow for edge {e}"));
        }
        values[e] = x;
    }
    Ok(Pseudoflow::from_edge_values(values))
}

/// Separator file: `cycle v1 v2 ...` in cycle order and `inside v ...`
/// listing the vertices strictly inside. Everything else is outside.
pub fn parse_separator(text: &str, vertices: usize) -> Result<(Vec<VertexId>, Vec<Side>), ParseError> {
    let mut cycle = None;
    let mut side = vec![Side::Outside; vertices];
    for (line, text) in records(text) {
        let mut words = text.split_whitespace();
        let tag = words.next().unwrap();
        let mut f = Fields { line, words };
        let list: Vec<VertexId> = f.rest("vertex")?;
        if let Some(&v) = list.iter().find(|&&v| v >= vertices) {
            return err(line, format!("vertex {v} out of range (vertices: {vertices})"));
        }
        match tag {
            "cycle" => {
                for &v in &list {
                    side[v] = Side::Cycle;
                }
                if cycle.replace(list).is_some() {
                    return err(line, "duplicate cycle line");
                }
            }
            "inside" => {
                for &v in &list {
                    if side[v] == Side::Cycle {
                        return err(line, format!("vertex {v} is on the cycle"));
                    }
                    side[v] = Side::Inside;
                }
            }
            other => return err(line, format!("unknown record '{other}'")),
        }
    }
    match cycle {
        Some(c) => Ok((c, side)),
        None => err(1, "missing cycle line"),
    }
}

pub fn emit_separator(cycle: &[VertexId], side: &[Side]) -> String {
    let list = |vs: &mut dyn Iterator<Item = VertexId>| -> String {
        vs.map(|v| format!(" {v}")).collect()
    };
    format!(
        "cycle{}\ninside{}\n",
        list(&mut cycle.iter().copied()),
        list(&mut (0..side.len()).filter(|&v| side[v] == Side::Inside))
    )
}
