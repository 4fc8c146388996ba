//! Maximum flow when every source lies on one side of a separating cycle
//! and every sink on the other.
//!
//! The procedure first routes as much as possible from the sources to the
//! cycle inside the source piece (`f_X`) and from the cycle to the sinks
//! inside the sink piece (`f_Y`). The sum leaves excess only on cycle
//! vertices. These are then visited in cycle order `p_1, .., p_r`: surplus
//! at `p_i` is pushed on to `p_{i+1}` through a same-face flow computation
//! in a graph where the unvisited part of the cycle is short-circuited by
//! arcs `p_j -> p_{j-1}` of huge capacity, and whatever cannot be pushed is
//! sent back towards the sources. Deficits are handled the same way with
//! all directions reversed.
//!
//! After visiting `p_i`, with `P'` the unvisited cycle vertices, the
//! residual network has no path from `S` to `T`, from `S` to `P'`, or from
//! `P'` to `T`. Debug mode checks this after every step.

use std::collections::VecDeque;

use thiserror::Error;

use crate::engines::{apex_maxflow, bounded_maxflow_from, bounded_maxflow_oracle};
use crate::flow_base::{
    cancel_cycles, excess, return_excess, sum_flows, total_capacity, Capacities, FlowError,
    FlowNetwork, Pseudoflow,
};
use crate::planar::{DartId, EdgeId, PlanarGraph, VertexId};
use crate::scalar::Scalar;
use crate::separator::Side;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SideToSideError {
    #[error("expected {expected} side labels, got {got}")]
    SideLength { expected: usize, got: usize },
    #[error("source {0} lies in the sink piece")]
    SourceOutside(VertexId),
    #[error("sink {0} lies in the source piece")]
    SinkInside(VertexId),
    #[error("edge {0} joins the two pieces without touching the cycle")]
    NotSeparated(EdgeId),
    #[error("vertex {0} is labelled inconsistently with the cycle")]
    CycleLabel(VertexId),
    #[error("after step {step} a residual path runs from {from} to {to}")]
    Invariant {
        step: usize,
        from: &'static str,
        to: &'static str,
    },
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// Network whose sources lie in the inside piece and sinks in the outside
/// piece of `cycle`. `side` labels every vertex; sources may be
/// [`Side::Inside`] or [`Side::Cycle`], sinks [`Side::Outside`] or
/// [`Side::Cycle`].
#[derive(Debug, Clone)]
pub struct SideToSideInstance<T> {
    pub network: FlowNetwork<T>,
    pub cycle: Vec<VertexId>,
    pub side: Vec<Side>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceStep<T> {
    pub index: usize,
    pub vertex: VertexId,
    pub initial_excess: T,
    /// Value of the bounded flow sent towards the next cycle vertex.
    pub forwarded: T,
    /// Amount sent back to the sources (or pulled back from the sinks).
    pub returned: T,
    /// The same-face computation was not applicable and the general
    /// engine was used.
    pub fallback: bool,
}

/// Record of one balancing run. `snapshots[i]` is the flow on `graph`
/// after visiting `cycle[i]`; snapshots are kept in debug mode only.
#[derive(Debug, Clone)]
pub struct BalanceTrace<T> {
    pub graph: PlanarGraph,
    pub capacity: Capacities<T>,
    pub sources: Vec<VertexId>,
    pub sinks: Vec<VertexId>,
    pub cycle: Vec<VertexId>,
    pub steps: Vec<BalanceStep<T>>,
    pub snapshots: Vec<Pseudoflow<T>>,
}

#[derive(Debug, Clone)]
pub struct SideToSideResult<T> {
    /// Flow on the edges of the input network.
    pub flow: Pseudoflow<T>,
    pub value: T,
    pub trace: BalanceTrace<T>,
}

impl<T: Scalar> SideToSideInstance<T> {
    pub fn new(
        network: FlowNetwork<T>,
        cycle: Vec<VertexId>,
        side: Vec<Side>,
    ) -> Result<Self, SideToSideError> {
        let n = network.graph.vertex_count();
        if side.len() != n {
            return Err(SideToSideError::SideLength {
                expected: n,
                got: side.len(),
            });
        }
        if let Some(&p) = cycle.iter().find(|&&p| side[p] != Side::Cycle) {
            return Err(SideToSideError::CycleLabel(p));
        }
        if let Some(v) = (0..n).find(|&v| side[v] == Side::Cycle && !cycle.contains(&v)) {
            return Err(SideToSideError::CycleLabel(v));
        }
        if let Some(&s) = network.sources.iter().find(|&&s| side[s] == Side::Outside) {
            return Err(SideToSideError::SourceOutside(s));
        }
        if let Some(&t) = network.sinks.iter().find(|&&t| side[t] == Side::Inside) {
            return Err(SideToSideError::SinkInside(t));
        }
        let crossing = network.graph.edges().iter().position(|&(u, v)| {
            matches!(
                (side[u], side[v]),
                (Side::Inside, Side::Outside) | (Side::Outside, Side::Inside)
            )
        });
        if let Some(e) = crossing {
            return Err(SideToSideError::NotSeparated(e));
        }
        Ok(SideToSideInstance {
            network,
            cycle,
            side,
        })
    }

    fn big(&self) -> T {
        total_capacity(&self.network.capacity) + T::one()
    }

    /// Moves every terminal off the cycle: a source `s` on the cycle gets a
    /// pendant source `s'` with an arc `s' -> s` of huge capacity, placed in
    /// a face next to `s` on the inside when there is one; sinks get a
    /// pendant sink on the outside. Terminals without incident edges are
    /// dropped since they cannot carry flow.
    pub fn displace_terminals(&self) -> SideToSideInstance<T> {
        let big = self.big();
        let mut graph = self.network.graph.clone();
        let mut caps = self.network.capacity.clone();
        let mut side = self.side.clone();
        let mut sources = Vec::new();
        let mut sinks = Vec::new();
        let on_cycle = |v: VertexId| self.side[v] == Side::Cycle;
        for (terminals, out, prefer, is_source) in [
            (&self.network.sources, &mut sources, Side::Inside, true),
            (&self.network.sinks, &mut sinks, Side::Outside, false),
        ] {
            for &v in terminals {
                if !on_cycle(v) {
                    out.push(v);
                    continue;
                }
                if graph.degree(v) == 0 {
                    continue;
                }
                let corner = graph
                    .rotation(v)
                    .iter()
                    .copied()
                    .find(|&d| {
                        graph
                            .face_vertices(graph.face_of(d))
                            .iter()
                            .any(|&u| u < side.len() && side[u] == prefer)
                    })
                    .unwrap_or(graph.rotation(v)[0]);
                let (g, w) = graph
                    .add_vertex_at_corners(&[corner])
                    .expect("pendant vertex keeps the embedding planar");
                graph = g;
                caps.extend_zero(1);
                // The new edge runs w -> v on its even dart.
                let e = graph.edge_count() - 1;
                if is_source {
                    caps.set(2 * e, big);
                } else {
                    caps.set(2 * e + 1, big);
                }
                side.push(prefer);
                out.push(w);
            }
        }
        let network = FlowNetwork::new(graph, caps, sources, sinks)
            .expect("displaced terminals stay disjoint");
        SideToSideInstance {
            network,
            cycle: self.cycle.clone(),
            side,
        }
    }

    /// Capacities with every edge outside the chosen piece zeroed. Edges
    /// between two cycle vertices belong to the inside piece.
    fn piece_capacities(&self, inside: bool) -> Capacities<T> {
        let mut caps = self.network.capacity.clone();
        for (e, &(u, v)) in self.network.graph.edges().iter().enumerate() {
            let touches_outside = self.side[u] == Side::Outside || self.side[v] == Side::Outside;
            if touches_outside == inside {
                caps.set(2 * e, T::zero());
                caps.set(2 * e + 1, T::zero());
            }
        }
        caps
    }

    /// Maximum flow from the sources to the cycle using only inside edges.
    pub fn compute_fx(&self) -> Pseudoflow<T> {
        let caps = self.piece_capacities(true);
        apex_maxflow(&self.network.graph, &caps, &self.network.sources, &self.cycle).flow
    }

    /// Maximum flow from the cycle to the sinks using only outside edges.
    pub fn compute_fy(&self) -> Pseudoflow<T> {
        let caps = self.piece_capacities(false);
        apex_maxflow(&self.network.graph, &caps, &self.cycle, &self.network.sinks).flow
    }

    /// Visits the cycle in order and clears every excess on it, starting
    /// from `f`, which may have nonzero excess only at terminals and cycle
    /// vertices. Expects a displaced instance.
    pub fn balance(
        &self,
        f: Pseudoflow<T>,
        debug: bool,
    ) -> Result<(Pseudoflow<T>, BalanceTrace<T>), SideToSideError> {
        let graph = &self.network.graph;
        let caps = &self.network.capacity;
        let big = self.big();
        let cycle = &self.cycle;
        let r = cycle.len();
        let mut f = f;
        let mut trace = BalanceTrace {
            graph: graph.clone(),
            capacity: caps.clone(),
            sources: self.network.sources.clone(),
            sinks: self.network.sinks.clone(),
            cycle: cycle.clone(),
            steps: Vec::with_capacity(r),
            snapshots: Vec::new(),
        };
        for i in 0..r {
            let p = cycle[i];
            let initial = excess(graph, &f, p);
            let mut step = BalanceStep {
                index: i,
                vertex: p,
                initial_excess: initial,
                forwarded: T::zero(),
                returned: T::zero(),
                fallback: false,
            };
            if !initial.is_zero() && i + 1 < r {
                let positive = initial.is_positive();
                let chain: Vec<(VertexId, VertexId)> = if positive {
                    (i + 2..r).rev().map(|j| (cycle[j], cycle[j - 1])).collect()
                } else {
                    (i + 1..r - 1).map(|j| (cycle[j], cycle[j + 1])).collect()
                };
                let (from, to) = if positive {
                    (p, cycle[i + 1])
                } else {
                    (cycle[i + 1], p)
                };
                let residual = caps.residual_of(&f);
                let (fi, fallback) =
                    bounded_step(graph, &residual, &chain, big, from, initial.abs(), to);
                step.fallback = fallback;
                step.forwarded = fi.1;
                f = sum_flows(caps, &f, &fi.0)?;
            }
            let left = excess(graph, &f, p);
            if left.is_positive() {
                let acyclic = cancel_cycles(graph, &f);
                f = return_excess(graph, &acyclic, p, left)?;
            } else if left.is_negative() {
                let reversed = cancel_cycles(graph, &f).negated();
                f = return_excess(graph, &reversed, p, -left)?.negated();
            }
            step.returned = left.abs();
            trace.steps.push(step);
            if debug {
                self.check_invariant(&f, i)?;
                trace.snapshots.push(f.clone());
            }
        }
        Ok((f, trace))
    }

    fn check_invariant(&self, f: &Pseudoflow<T>, step: usize) -> Result<(), SideToSideError> {
        let graph = &self.network.graph;
        let residual = self.network.capacity.residual_of(f);
        let n = graph.vertex_count();
        let mut is_sink = vec![false; n];
        self.network.sinks.iter().for_each(|&t| is_sink[t] = true);
        let mut unvisited = vec![false; n];
        self.cycle[step + 1..].iter().for_each(|&p| unvisited[p] = true);
        let from_sources = reach(graph, &residual, &self.network.sources);
        if (0..n).any(|v| from_sources[v] && is_sink[v]) {
            return Err(SideToSideError::Invariant {
                step,
                from: "sources",
                to: "sinks",
            });
        }
        if (0..n).any(|v| from_sources[v] && unvisited[v]) {
            return Err(SideToSideError::Invariant {
                step,
                from: "sources",
                to: "unvisited cycle",
            });
        }
        let from_unvisited = reach(graph, &residual, &self.cycle[step + 1..]);
        if (0..n).any(|v| from_unvisited[v] && is_sink[v]) {
            return Err(SideToSideError::Invariant {
                step,
                from: "unvisited cycle",
                to: "sinks",
            });
        }
        Ok(())
    }

    /// Full procedure: displacement, the two piece flows, balancing.
    /// The returned flow lives on the edges of this instance.
    pub fn run(&self, debug: bool) -> Result<SideToSideResult<T>, SideToSideError> {
        let edges = self.network.graph.edge_count();
        let displaced = self.displace_terminals();
        let fx = displaced.compute_fx();
        let fy = displaced.compute_fy();
        let f = sum_flows(&displaced.network.capacity, &fx, &fy)?;
        let (f, trace) = displaced.balance(f, debug)?;
        let flow = f.truncated(edges);
        let value = self.network.value(&flow);
        Ok(SideToSideResult { flow, value, trace })
    }
}

/// Bounded flow from `from` to `to` in `graph` plus chain arcs, returning
/// the flow restricted to `graph` and its value. Uses the same-face
/// algorithm when the chain arcs can be embedded, the general engine
/// otherwise.
fn bounded_step<T: Scalar>(
    graph: &PlanarGraph,
    residual: &Capacities<T>,
    chain: &[(VertexId, VertexId)],
    big: T,
    from: VertexId,
    bound: T,
    to: VertexId,
) -> ((Pseudoflow<T>, T), bool) {
    let edges = graph.edge_count();
    if let Some((g, caps)) = with_chain_arcs(graph, residual, chain, big) {
        if let Ok(res) = bounded_maxflow_from(&g, &caps, from, bound, to) {
            return ((res.flow.truncated(edges), res.value), false);
        }
    }
    let extra: Vec<_> = chain.iter().map(|&(u, v)| (u, v, big)).collect();
    let res = bounded_maxflow_oracle(graph, residual, &extra, from, bound, to);
    ((res.flow, res.value), true)
}

/// Embeds each arc `u -> v` of `chain` as a new edge. Copies of existing
/// edges are drawn beside them; other arcs need a shared face.
fn with_chain_arcs<T: Scalar>(
    graph: &PlanarGraph,
    residual: &Capacities<T>,
    chain: &[(VertexId, VertexId)],
    big: T,
) -> Option<(PlanarGraph, Capacities<T>)> {
    let mut beside: Vec<DartId> = Vec::new();
    let mut loose = Vec::new();
    for &(u, v) in chain {
        match graph.dart_between(u, v) {
            Some(d) => beside.push(d),
            None => loose.push((u, v)),
        }
    }
    let (mut g, _) = graph.add_parallel_edges(&beside);
    for (u, v) in loose {
        let (a, b) = g.common_face(u, v)?;
        g = g.add_edge_at_corners(a, b).ok()?.0;
    }
    let mut caps = residual.clone();
    caps.extend_zero(chain.len());
    for e in graph.edge_count()..g.edge_count() {
        caps.set(2 * e, big);
    }
    Some((g, caps))
}

fn reach<T: Scalar>(graph: &PlanarGraph, residual: &Capacities<T>, from: &[VertexId]) -> Vec<bool> {
    let mut seen = vec![false; graph.vertex_count()];
    let mut queue: VecDeque<VertexId> = from.iter().copied().collect();
    from.iter().for_each(|&v| seen[v] = true);
    while let Some(u) = queue.pop_front() {
        for &d in graph.rotation(u) {
            let v = graph.head(d);
            if !seen[v] && residual.get(d).is_positive() {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::apex_maxflow;
    use crate::flow_base::excesses;
    use crate::planar::tests::grid;
    use crate::separator::find_cycle_separator;

    fn grid_instance(k: usize, caps: impl Fn(usize) -> i64) -> (PlanarGraph, Capacities<i64>) {
        let g = grid(k).triangulate().graph;
        let c = Capacities::new((0..g.dart_count()).map(caps).collect()).unwrap();
        (g, c)
    }

    fn split(g: &PlanarGraph) -> (Vec<VertexId>, Vec<Side>) {
        let n = g.vertex_count();
        let sep = find_cycle_separator(g, &vec![1.0 / n as f64; n]).unwrap();
        (sep.cycle, sep.side)
    }

    fn check(g: &PlanarGraph, c: &Capacities<i64>, sources: Vec<usize>, sinks: Vec<usize>) -> i64 {
        let (cycle, side) = split(g);
        let net = FlowNetwork::new(g.clone(), c.clone(), sources.clone(), sinks.clone()).unwrap();
        let inst = SideToSideInstance::new(net, cycle, side).unwrap();
        let res = inst.run(true).unwrap();
        let exc = excesses(g, &res.flow);
        for v in 0..g.vertex_count() {
            if !sources.contains(&v) && !sinks.contains(&v) {
                assert_eq!(exc[v], 0, "vertex {v}");
            }
        }
        crate::flow_base::check_capacity(c, &res.flow).unwrap();
        let oracle = apex_maxflow(g, c, &sources, &sinks).value;
        assert_eq!(res.value, oracle);
        res.value
    }

    fn pick(side: &[Side], want: &[Side], count: usize, salt: usize) -> Vec<VertexId> {
        let pool: Vec<_> = (0..side.len()).filter(|&v| want.contains(&side[v])).collect();
        (0..count.min(pool.len()))
            .map(|i| pool[(i * 7 + salt) % pool.len()])
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    #[test]
    fn zero_flow_when_nothing_to_send() {
        let (g, c) = grid_instance(4, |_| 0);
        let (_, side) = split(&g);
        let s = pick(&side, &[Side::Inside], 2, 0);
        let t = pick(&side, &[Side::Outside], 2, 1);
        assert_eq!(check(&g, &c, s, t), 0);
    }

    #[test]
    fn matches_oracle_on_grids() {
        for k in [4, 6, 8, 10] {
            for salt in 0..6 {
                let (g, c) = grid_instance(k, |d| ((d * 31 + salt * 17) % 11) as i64);
                let (_, side) = split(&g);
                let s = pick(&side, &[Side::Inside, Side::Cycle], 3 + salt % 3, salt);
                let t = pick(&side, &[Side::Outside, Side::Cycle], 2 + salt % 4, salt + 3);
                let t: Vec<_> = t.into_iter().filter(|v| !s.contains(v)).collect();
                check(&g, &c, s, t);
            }
        }
    }

    #[test]
    fn terminals_on_cycle_are_displaced() {
        let (g, c) = grid_instance(5, |_| 3);
        let (cycle, side) = split(&g);
        let net = FlowNetwork::new(g.clone(), c, vec![cycle[0]], vec![cycle[cycle.len() / 2]]).unwrap();
        let inst = SideToSideInstance::new(net, cycle.clone(), side).unwrap();
        let d = inst.displace_terminals();
        assert_eq!(d.network.graph.vertex_count(), g.vertex_count() + 2);
        assert!(d.network.sources.iter().all(|&s| d.side[s] == Side::Inside));
        assert!(d.network.sinks.iter().all(|&t| d.side[t] == Side::Outside));
        let e = g.edge_count();
        assert_eq!(d.network.graph.ends(e), (g.vertex_count(), cycle[0]));
        assert!(d.network.capacity.get(2 * e) > 0);
        assert_eq!(d.network.capacity.get(2 * e + 1), 0);
    }

    #[test]
    fn piece_flows_stay_in_their_pieces() {
        let (g, c) = grid_instance(6, |d| (d % 5) as i64);
        let (cycle, side) = split(&g);
        let s = pick(&side, &[Side::Inside], 3, 0);
        let t = pick(&side, &[Side::Outside], 3, 2);
        let net = FlowNetwork::new(g.clone(), c, s, t).unwrap();
        let inst = SideToSideInstance::new(net, cycle, side.clone()).unwrap();
        let fx = inst.compute_fx();
        let fy = inst.compute_fy();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let outside = side[u] == Side::Outside || side[v] == Side::Outside;
            if outside {
                assert_eq!(fx.edge_value(e), 0);
            } else {
                assert_eq!(fy.edge_value(e), 0);
            }
        }
    }

    #[test]
    fn rejects_bad_sides() {
        let (g, c) = grid_instance(4, |_| 1);
        let (cycle, side) = split(&g);
        let inside = pick(&side, &[Side::Inside], 1, 0)[0];
        let outside = pick(&side, &[Side::Outside], 1, 0)[0];
        let net = FlowNetwork::new(g.clone(), c.clone(), vec![outside], vec![inside]).unwrap();
        assert!(matches!(
            SideToSideInstance::new(net, cycle.clone(), side.clone()),
            Err(SideToSideError::SourceOutside(_))
        ));
        let mut wrong = side.clone();
        wrong[cycle[0]] = Side::Inside;
        let net = FlowNetwork::new(g, c, vec![inside], vec![outside]).unwrap();
        assert!(SideToSideInstance::new(net, cycle, wrong).is_err());
    }
}
