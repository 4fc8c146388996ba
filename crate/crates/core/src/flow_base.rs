//! Capacities, pseudoflows and the operations on them: residuals, excess,
//! summation, path/cycle decomposition, cycle canceling and returning
//! excess backwards along an acyclic flow.
//!
//! Sign convention: `excess(v)` is the net flow *into* `v`. A vertex that
//! emits flow (a source) has negative excess, a vertex that absorbs flow
//! (a sink) has positive excess.

use std::collections::HashSet;

use thiserror::Error;

use crate::planar::{edge_of, twin, DartId, EdgeId, PlanarGraph, VertexId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("capacity of dart {0} is negative")]
    NegativeCapacity(DartId),
    #[error("expected {expected} capacities (one per dart), got {got}")]
    CapacityLength { expected: usize, got: usize },
    #[error("flow on dart {dart} exceeds its capacity")]
    CapacityViolated { dart: DartId },
    #[error("flow on dart {dart} exceeds its residual capacity")]
    ResidualViolated { dart: DartId },
    #[error("flow is not acyclic")]
    Cyclic,
    #[error("cannot return {requested} from vertex {vertex} with excess {excess}")]
    ExcessTooSmall {
        vertex: VertexId,
        requested: String,
        excess: String,
    },
    #[error("vertex {0} is both a source and a sink")]
    TerminalOverlap(VertexId),
    #[error("terminal {0} is out of range")]
    TerminalOutOfRange(VertexId),
}

/// Nonnegative capacity per dart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capacities<T> {
    per_dart: Vec<T>,
}

impl<T: Scalar> Capacities<T> {
    pub fn new(per_dart: Vec<T>) -> Result<Self, FlowError> {
        if let Some(d) = per_dart.iter().position(|c| c.is_negative()) {
            return Err(FlowError::NegativeCapacity(d));
        }
        Ok(Capacities { per_dart })
    }

    pub fn for_graph(graph: &PlanarGraph, per_dart: Vec<T>) -> Result<Self, FlowError> {
        if per_dart.len() != graph.dart_count() {
            return Err(FlowError::CapacityLength {
                expected: graph.dart_count(),
                got: per_dart.len(),
            });
        }
        Self::new(per_dart)
    }

    pub fn zero(darts: usize) -> Self {
        Capacities {
            per_dart: vec![T::zero(); darts],
        }
    }

    pub fn uniform(darts: usize, c: T) -> Self {
        assert!(!c.is_negative());
        Capacities {
            per_dart: vec![c; darts],
        }
    }

    #[inline]
    pub fn get(&self, d: DartId) -> T {
        self.per_dart[d]
    }

    pub fn set(&mut self, d: DartId, c: T) {
        assert!(!c.is_negative(), "negative capacity");
        self.per_dart[d] = c;
    }

    pub fn len(&self) -> usize {
        self.per_dart.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_dart.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.per_dart
    }

    /// Appends zero capacities for `edges` new edges.
    pub fn extend_zero(&mut self, edges: usize) {
        self.per_dart
            .extend(std::iter::repeat_n(T::zero(), 2 * edges));
    }

    /// Residual capacities `c - f` as a fresh capacity function.
    pub fn residual_of(&self, f: &Pseudoflow<T>) -> Capacities<T> {
        let per_dart = (0..self.len())
            .map(|d| {
                let r = self.per_dart[d] - f.get(d);
                debug_assert!(!r.is_negative(), "flow exceeds capacity on dart {d}");
                r
            })
            .collect();
        Capacities { per_dart }
    }
}

/// The constant `M`: sum of all dart capacities.
pub fn total_capacity<T: Scalar>(c: &Capacities<T>) -> T {
    c.per_dart
        .iter()
        .fold(T::zero(), |acc, &x| acc.checked_add(&x).expect("total capacity overflow"))
}

/// Antisymmetric flow assignment, stored once per edge (as the value on the
/// even dart).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pseudoflow<T> {
    per_edge: Vec<T>,
}

impl<T: Scalar> Pseudoflow<T> {
    pub fn zero(edges: usize) -> Self {
        Pseudoflow {
            per_edge: vec![T::zero(); edges],
        }
    }

    pub fn from_edge_values(per_edge: Vec<T>) -> Self {
        Pseudoflow { per_edge }
    }

    #[inline]
    pub fn get(&self, d: DartId) -> T {
        let v = self.per_edge[d >> 1];
        if d & 1 == 0 {
            v
        } else {
            -v
        }
    }

    /// Sets `f(d) = x` (and therefore `f(twin(d)) = -x`).
    #[inline]
    pub fn set(&mut self, d: DartId, x: T) {
        self.per_edge[d >> 1] = if d & 1 == 0 { x } else { -x };
    }

    #[inline]
    pub fn push(&mut self, d: DartId, x: T) {
        let cur = self.get(d);
        self.set(d, cur + x);
    }

    pub fn edge_value(&self, e: EdgeId) -> T {
        self.per_edge[e]
    }

    pub fn edge_values(&self) -> &[T] {
        &self.per_edge
    }

    pub fn edge_count(&self) -> usize {
        self.per_edge.len()
    }

    pub fn is_zero(&self) -> bool {
        self.per_edge.iter().all(|x| x.is_zero())
    }

    pub fn negated(&self) -> Self {
        Pseudoflow {
            per_edge: self.per_edge.iter().map(|&x| -x).collect(),
        }
    }

    /// Keeps only the first `edges` edges.
    pub fn truncated(&self, edges: usize) -> Self {
        Pseudoflow {
            per_edge: self.per_edge[..edges].to_vec(),
        }
    }

    pub fn extend_zero(&mut self, edges: usize) {
        self.per_edge
            .extend(std::iter::repeat_n(T::zero(), edges));
    }

    /// Adds `other`, whose edge `i` corresponds to edge `edge_map[i]` here.
    pub fn add_mapped(&mut self, other: &Pseudoflow<T>, edge_map: &[EdgeId]) {
        for (i, &e) in edge_map.iter().enumerate() {
            self.per_edge[e] = self.per_edge[e] + other.per_edge[i];
        }
    }

    /// Restriction to the edges in `edge_map` (local edge -> edge here).
    pub fn restricted(&self, edge_map: &[EdgeId]) -> Self {
        Pseudoflow {
            per_edge: edge_map.iter().map(|&e| self.per_edge[e]).collect(),
        }
    }
}

/// First dart violating `f <= c`, if any.
pub fn check_capacity<T: Scalar>(c: &Capacities<T>, f: &Pseudoflow<T>) -> Result<(), FlowError> {
    match (0..c.len()).find(|&d| f.get(d) > c.get(d)) {
        Some(dart) => Err(FlowError::CapacityViolated { dart }),
        None => Ok(()),
    }
}

#[inline]
pub fn residual<T: Scalar>(c: &Capacities<T>, f: &Pseudoflow<T>, d: DartId) -> T {
    c.get(d) - f.get(d)
}

/// Net inflow at `v`.
pub fn excess<T: Scalar>(g: &PlanarGraph, f: &Pseudoflow<T>, v: VertexId) -> T {
    g.rotation(v)
        .iter()
        .fold(T::zero(), |acc, &d| acc + f.get(twin(d)))
}

pub fn excesses<T: Scalar>(g: &PlanarGraph, f: &Pseudoflow<T>) -> Vec<T> {
    let mut exc = vec![T::zero(); g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let x = f.edge_value(e);
        exc[v] = exc[v] + x;
        exc[u] = exc[u] - x;
    }
    exc
}

/// `f + g` where `g` must respect the residual capacities of `f`.
pub fn sum_flows<T: Scalar>(
    c: &Capacities<T>,
    f: &Pseudoflow<T>,
    g: &Pseudoflow<T>,
) -> Result<Pseudoflow<T>, FlowError> {
    if let Some(dart) = (0..c.len()).find(|&d| g.get(d) > residual(c, f, d)) {
        return Err(FlowError::ResidualViolated { dart });
    }
    Ok(Pseudoflow {
        per_edge: f
            .per_edge
            .iter()
            .zip(&g.per_edge)
            .map(|(&a, &b)| a + b)
            .collect(),
    })
}

/// A path or cycle (sequence of darts) carrying `amount` units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowWalk<T> {
    pub darts: Vec<DartId>,
    pub amount: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowDecomposition<T> {
    /// Paths from a vertex with negative excess to one with positive excess.
    pub paths: Vec<FlowWalk<T>>,
    pub cycles: Vec<FlowWalk<T>>,
}

impl<T: Scalar> FlowDecomposition<T> {
    pub fn recompose(&self, edges: usize) -> Pseudoflow<T> {
        let mut f = Pseudoflow::zero(edges);
        for w in self.paths.iter().chain(&self.cycles) {
            for &d in &w.darts {
                f.push(d, w.amount);
            }
        }
        f
    }

    pub fn len(&self) -> usize {
        self.paths.len() + self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Positive-flow darts leaving each vertex, in dart-id order.
fn positive_out<T: Scalar>(g: &PlanarGraph, f: &Pseudoflow<T>) -> Vec<Vec<DartId>> {
    let mut out = vec![Vec::new(); g.vertex_count()];
    for d in 0..g.dart_count() {
        if f.get(d).is_positive() {
            out[g.tail(d)].push(d);
        }
    }
    out
}

/// Greedy peeling: first paths out of negative-excess vertices, then the
/// remaining circulation as cycles.
pub fn decompose<T: Scalar>(g: &PlanarGraph, f: &Pseudoflow<T>) -> FlowDecomposition<T> {
    let mut rest = f.clone();
    let mut exc = excesses(g, f);
    let out = positive_out(g, f);
    let mut cursor = vec![0usize; g.vertex_count()];
    let mut paths = Vec::new();
    let mut cycles = Vec::new();

    // Next dart with positive remaining flow out of `u`.
    fn advance<T: Scalar>(
        u: VertexId,
        out: &[Vec<DartId>],
        cursor: &mut [usize],
        rest: &Pseudoflow<T>,
    ) -> Option<DartId> {
        while cursor[u] < out[u].len() {
            let d = out[u][cursor[u]];
            if rest.get(d).is_positive() {
                return Some(d);
            }
            cursor[u] += 1;
        }
        None
    }

    let mut peel = |start: VertexId,
                    exc: &mut Vec<T>,
                    rest: &mut Pseudoflow<T>,
                    cursor: &mut Vec<usize>,
                    from_surplus: bool| {
        // Walk forward; `on_walk[v]` is v's index in `walk_vertices`.
        let mut walk: Vec<DartId> = Vec::new();
        let mut walk_vertices = vec![start];
        let mut on_walk = std::collections::HashMap::new();
        on_walk.insert(start, 0usize);
        let mut u = start;
        loop {
            if from_surplus && u != start && exc[u].is_positive() {
                let mut amount = walk.iter().map(|&d| rest.get(d)).min().unwrap();
                amount = amount.min(-exc[start]).min(exc[u]);
                for &d in &walk {
                    rest.push(d, -amount);
                }
                exc[start] = exc[start] + amount;
                exc[u] = exc[u] - amount;
                paths.push(FlowWalk { darts: walk, amount });
                return true;
            }
            let Some(d) = advance(u, &out, cursor, rest) else {
                return false;
            };
            let v = g.head(d);
            walk.push(d);
            if let Some(&i) = on_walk.get(&v) {
                let cycle: Vec<DartId> = walk[i..].to_vec();
                let amount = cycle.iter().map(|&d| rest.get(d)).min().unwrap();
                for &d in &cycle {
                    rest.push(d, -amount);
                }
                cycles.push(FlowWalk { darts: cycle, amount });
                // Restart from the cycle's entry point.
                walk.truncate(i);
                for w in walk_vertices.drain(i + 1..) {
                    on_walk.remove(&w);
                }
                u = walk_vertices[i];
                continue;
            }
            on_walk.insert(v, walk_vertices.len());
            walk_vertices.push(v);
            u = v;
        }
    };

    for s in 0..g.vertex_count() {
        while exc[s].is_negative() {
            if !peel(s, &mut exc, &mut rest, &mut cursor, true) {
                break;
            }
        }
    }
    for s in 0..g.vertex_count() {
        while advance(s, &out, &mut cursor, &rest).is_some() {
            peel(s, &mut exc, &mut rest, &mut cursor, false);
        }
    }
    debug_assert!(rest.is_zero());
    FlowDecomposition { paths, cycles }
}

/// Removes every cycle of positive flow. Excess is preserved at every vertex
/// and flow values only move toward zero.
pub fn cancel_cycles<T: Scalar>(g: &PlanarGraph, f: &Pseudoflow<T>) -> Pseudoflow<T> {
    let mut f = f.clone();
    let n = g.vertex_count();
    let out = positive_out(g, &f);
    // 0 = unvisited, 1 = on stack, 2 = finished
    let mut state = vec![0u8; n];
    let mut cursor = vec![0usize; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack: Vec<VertexId> = vec![root];
        let mut via: Vec<DartId> = Vec::new();
        state[root] = 1;
        while let Some(&u) = stack.last() {
            let mut next = None;
            while cursor[u] < out[u].len() {
                let d = out[u][cursor[u]];
                if f.get(d).is_positive() && state[g.head(d)] != 2 {
                    next = Some(d);
                    break;
                }
                cursor[u] += 1;
            }
            let Some(d) = next else {
                state[u] = 2;
                stack.pop();
                via.pop();
                continue;
            };
            let v = g.head(d);
            if state[v] == 0 {
                state[v] = 1;
                stack.push(v);
                via.push(d);
                continue;
            }
            // Back edge: v is on the stack.
            let i = stack.iter().rposition(|&w| w == v).unwrap();
            let mut cycle: Vec<DartId> = via[i..].to_vec();
            cycle.push(d);
            let amount = cycle.iter().map(|&x| f.get(x)).min().unwrap();
            for &x in &cycle {
                f.push(x, -amount);
            }
            // Unwind to the first vertex whose stack dart was saturated.
            if let Some(j) = via[i..].iter().position(|&x| f.get(x).is_zero()) {
                for w in stack.drain(i + j + 1..) {
                    state[w] = 0;
                }
                via.truncate(i + j);
            }
        }
    }
    debug_assert!(is_acyclic(g, &f));
    f
}

/// Topological order of the subgraph of positive-flow darts, if acyclic.
pub fn topological_order<T: Scalar>(g: &PlanarGraph, f: &Pseudoflow<T>) -> Option<Vec<VertexId>> {
    let n = g.vertex_count();
    let out = positive_out(g, f);
    let mut indeg = vec![0usize; n];
    for list in &out {
        for &d in list {
            indeg[g.head(d)] += 1;
        }
    }
    let mut order: Vec<VertexId> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &d in &out[u] {
            let v = g.head(d);
            indeg[v] -= 1;
            if indeg[v] == 0 {
                order.push(v);
            }
        }
    }
    (order.len() == n).then_some(order)
}

pub fn is_acyclic<T: Scalar>(g: &PlanarGraph, f: &Pseudoflow<T>) -> bool {
    topological_order(g, f).is_some()
}

/// Sends `amount` units of excess at `v` back along the positive-flow
/// darts that feed it, scanning vertices in reverse topological order.
/// Each vertex with negative excess absorbs as much as it can before the
/// remainder is pushed further back. Inflow darts are reduced in dart-id
/// order.
pub fn return_excess<T: Scalar>(
    g: &PlanarGraph,
    f: &Pseudoflow<T>,
    v: VertexId,
    amount: T,
) -> Result<Pseudoflow<T>, FlowError> {
    let exc = excesses(g, f);
    if amount.is_negative() || amount > exc[v] {
        return Err(FlowError::ExcessTooSmall {
            vertex: v,
            requested: amount.to_string(),
            excess: exc[v].to_string(),
        });
    }
    let mut result = f.clone();
    if amount.is_zero() {
        return Ok(result);
    }
    let order = topological_order(g, f).ok_or(FlowError::Cyclic)?;
    let mut positive_in = vec![Vec::new(); g.vertex_count()];
    for d in 0..g.dart_count() {
        if f.get(d).is_positive() {
            positive_in[g.head(d)].push(d);
        }
    }
    let mut need = vec![T::zero(); g.vertex_count()];
    need[v] = amount;
    for &u in order.iter().rev() {
        let mut want = need[u];
        if want.is_zero() {
            continue;
        }
        if u != v && exc[u].is_negative() {
            let absorbed = want.min(-exc[u]);
            want = want - absorbed;
        }
        for &d in &positive_in[u] {
            if want.is_zero() {
                break;
            }
            let take = want.min(result.get(d));
            result.push(d, -take);
            need[g.tail(d)] = need[g.tail(d)] + take;
            want = want - take;
        }
        assert!(want.is_zero(), "inflow at {u} cannot cover returned excess");
    }
    Ok(result)
}

/// Graph, capacities and terminal sets.
#[derive(Debug, Clone)]
pub struct FlowNetwork<T> {
    pub graph: PlanarGraph,
    pub capacity: Capacities<T>,
    pub sources: Vec<VertexId>,
    pub sinks: Vec<VertexId>,
}

impl<T: Scalar> FlowNetwork<T> {
    pub fn new(
        graph: PlanarGraph,
        capacity: Capacities<T>,
        sources: Vec<VertexId>,
        sinks: Vec<VertexId>,
    ) -> Result<Self, FlowError> {
        if capacity.len() != graph.dart_count() {
            return Err(FlowError::CapacityLength {
                expected: graph.dart_count(),
                got: capacity.len(),
            });
        }
        let n = graph.vertex_count();
        let mut seen = HashSet::new();
        for &s in &sources {
            if s >= n {
                return Err(FlowError::TerminalOutOfRange(s));
            }
            seen.insert(s);
        }
        for &t in &sinks {
            if t >= n {
                return Err(FlowError::TerminalOutOfRange(t));
            }
            if seen.contains(&t) {
                return Err(FlowError::TerminalOverlap(t));
            }
        }
        let mut sources = sources;
        let mut sinks = sinks;
        sources.sort_unstable();
        sources.dedup();
        sinks.sort_unstable();
        sinks.dedup();
        Ok(FlowNetwork {
            graph,
            capacity,
            sources,
            sinks,
        })
    }

    /// Flow value: net inflow into the sinks.
    pub fn value(&self, f: &Pseudoflow<T>) -> T {
        self.sinks
            .iter()
            .fold(T::zero(), |acc, &t| acc + excess(&self.graph, f, t))
    }

    pub fn total_capacity(&self) -> T {
        total_capacity(&self.capacity)
    }
}

/// Edge touched by a dart, convenience for callers that iterate darts.
pub fn dart_edge(d: DartId) -> EdgeId {
    edge_of(d)
}
