//! Recursive multiple-source multiple-sink maximum flow.
//!
//! A call with few terminals is answered directly. Otherwise the terminals
//! are split by a cycle separator into `L` (inside, plus sinks on the
//! cycle) and `R` (outside, plus sources on the cycle), and:
//!
//! 1. a maximum flow `f` from `L_s` to `R_t` is computed;
//! 2. the darts leaving the residual-reachable set of `L_s` form a cut `C`;
//! 3. in each component `K` of `G - C`, a maximum flow from `K_s` to `K_t`
//!    is added in three stages, only the last of which recurses, on the
//!    terminals strictly on one side of the cycle;
//! 4. with `C` restored, a maximum flow from `R_s` to `L_t` is added.
//!
//! Every flow is computed in the residual network of the flow so far.

use std::collections::VecDeque;

use thiserror::Error;

use crate::engines::{apex_maxflow, hassin_same_face_maxflow, multi_source_single_sink, MaxFlowResult};
use crate::flow_base::{Capacities, FlowError, FlowNetwork, Pseudoflow};
use crate::planar::{edge_of, DartId, PlanarGraph, VertexId};
use crate::scalar::Scalar;
use crate::separator::{separator_for_terminals, Side};
use crate::side_to_side::{SideToSideError, SideToSideInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("flow is not maximum: sink {0} is reachable in the residual network")]
    NotMaximum(VertexId),
    #[error("component contains vertices on both sides of the cut")]
    MixedComponent,
    #[error(transparent)]
    SideToSide(#[from] SideToSideError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Answer directly when one side has at most this many terminals.
    pub k_single: usize,
    /// Answer by pairwise iteration when `|S| |T| <= k_pair * sqrt(n)`.
    pub k_pair: f64,
    /// Check the balancing invariant after every step.
    pub debug: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            k_single: 2,
            k_pair: 1.0,
            debug: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CallKind {
    /// One side small: one multi-source single-sink solve per terminal.
    FewTerminals,
    /// Pairwise iteration over all source-sink pairs.
    Pairwise,
    /// Separator split.
    Split,
    /// No balanced separator was found; the reference engine was used.
    Fallback,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CallRecord {
    pub depth: usize,
    pub vertices: usize,
    pub sources: usize,
    pub sinks: usize,
    pub parent_terminals: Option<usize>,
    pub kind: CallKind,
    pub separator_len: Option<usize>,
    /// Vertex counts of the components of `G - C` that carry terminals.
    pub components: Vec<usize>,
}

impl CallRecord {
    pub fn terminals(&self) -> usize {
        self.sources + self.sinks
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    pub calls: Vec<CallRecord>,
    pub side_to_side_runs: usize,
    /// Balancing steps that could not use the same-face engine.
    pub same_face_fallbacks: usize,
    /// Stages answered by the reference engine because their
    /// preconditions failed.
    pub stage_fallbacks: usize,
}

impl SolveStats {
    pub fn max_depth(&self) -> usize {
        self.calls.iter().map(|c| c.depth).max().unwrap_or(0)
    }

    pub fn separator_sizes(&self) -> Vec<usize> {
        self.calls.iter().filter_map(|c| c.separator_len).collect()
    }

    /// Calls whose terminal count exceeds two thirds of their parent's.
    pub fn progress_violations(&self) -> Vec<&CallRecord> {
        self.calls
            .iter()
            .filter(|c| c.parent_terminals.is_some_and(|p| 3 * c.terminals() > 2 * p))
            .collect()
    }
}

/// Darts leaving the residual-reachable set of some sources.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSet {
    pub darts: Vec<DartId>,
    pub reachable: Vec<bool>,
}

impl CutSet {
    pub fn capacity<T: Scalar>(&self, caps: &Capacities<T>) -> T {
        self.darts.iter().fold(T::zero(), |acc, &d| acc + caps.get(d))
    }
}

#[derive(Debug, Clone)]
pub struct Solution<T> {
    pub flow: Pseudoflow<T>,
    pub value: T,
    pub cut: CutSet,
    pub stats: SolveStats,
}

/// Cut with respect to `f`: darts `(u, v)` with `u` residual-reachable from
/// `sources` and `v` not. Fails if a sink is reachable.
pub fn extract_cut<T: Scalar>(
    graph: &PlanarGraph,
    caps: &Capacities<T>,
    f: &Pseudoflow<T>,
    sources: &[VertexId],
    sinks: &[VertexId],
) -> Result<CutSet, SolveError> {
    let residual = caps.residual_of(f);
    let reachable = residual_reach(graph, &residual, sources);
    if let Some(&t) = sinks.iter().find(|&&t| reachable[t]) {
        return Err(SolveError::NotMaximum(t));
    }
    let darts = (0..graph.dart_count())
        .filter(|&d| reachable[graph.tail(d)] && !reachable[graph.head(d)])
        .collect();
    Ok(CutSet { darts, reachable })
}

fn residual_reach<T: Scalar>(
    graph: &PlanarGraph,
    residual: &Capacities<T>,
    from: &[VertexId],
) -> Vec<bool> {
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

/// Single source and sink: dual shortest paths when they share a face,
/// blocking flow otherwise.
pub fn pair_maxflow<T: Scalar>(
    graph: &PlanarGraph,
    caps: &Capacities<T>,
    s: VertexId,
    t: VertexId,
) -> MaxFlowResult<T> {
    hassin_same_face_maxflow(graph, caps, s, t).unwrap_or_else(|_| {
        multi_source_single_sink(graph, caps, &[s], &[t]).expect("single terminals")
    })
}

/// Maximum flow as a sum of single-pair maximum flows, each in the
/// residual network of the previous ones. Pairs are taken source-major in
/// the given orders.
pub fn pairwise_maxflow<T: Scalar>(
    graph: &PlanarGraph,
    caps: &Capacities<T>,
    sources: &[VertexId],
    sinks: &[VertexId],
) -> MaxFlowResult<T> {
    let mut flow = Pseudoflow::zero(graph.edge_count());
    let mut value = T::zero();
    for &s in sources {
        for &t in sinks {
            let step = pair_maxflow(graph, &caps.residual_of(&flow), s, t);
            accumulate(&mut flow, &step.flow);
            value = value + step.value;
        }
    }
    MaxFlowResult {
        flow,
        value,
        cut: None,
    }
}

/// Which terminals go in the first stage of a two-stage solve.
#[derive(Debug, Clone, Copy)]
pub enum Split<'a> {
    Sources(&'a [VertexId]),
    Sinks(&'a [VertexId]),
}

#[derive(Debug, Clone)]
pub struct Staged<T> {
    pub first: MaxFlowResult<T>,
    pub second: MaxFlowResult<T>,
    pub flow: Pseudoflow<T>,
    pub value: T,
}

/// Maximum flow from the first part of the split side, then from (or to)
/// the rest in the residual network. The sum is a maximum flow for the
/// whole terminal sets.
pub fn staged_maxflow<T: Scalar>(
    graph: &PlanarGraph,
    caps: &Capacities<T>,
    sources: &[VertexId],
    sinks: &[VertexId],
    split: Split<'_>,
) -> Staged<T> {
    let rest = |all: &[VertexId], part: &[VertexId]| -> Vec<VertexId> {
        all.iter().copied().filter(|v| !part.contains(v)).collect()
    };
    let (first, second) = match split {
        Split::Sources(part) => {
            let first = apex_maxflow(graph, caps, part, sinks);
            let second = apex_maxflow(
                graph,
                &caps.residual_of(&first.flow),
                &rest(sources, part),
                sinks,
            );
            (first, second)
        }
        Split::Sinks(part) => {
            let first = apex_maxflow(graph, caps, sources, part);
            let second = apex_maxflow(
                graph,
                &caps.residual_of(&first.flow),
                sources,
                &rest(sinks, part),
            );
            (first, second)
        }
    };
    let mut flow = first.flow.clone();
    accumulate(&mut flow, &second.flow);
    let value = first.value + second.value;
    Staged {
        first,
        second,
        flow,
        value,
    }
}

fn accumulate<T: Scalar>(f: &mut Pseudoflow<T>, g: &Pseudoflow<T>) {
    for e in 0..g.edge_count() {
        f.push(2 * e, g.edge_value(e));
    }
}

/// Solves with the default configuration.
pub fn solve<T: Scalar>(net: &FlowNetwork<T>) -> Result<Solution<T>, SolveError> {
    Solver::default().solve(net)
}

#[derive(Debug, Clone, Default)]
pub struct Solver {
    pub config: SolverConfig,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver { config }
    }

    pub fn solve<T: Scalar>(&self, net: &FlowNetwork<T>) -> Result<Solution<T>, SolveError> {
        let mut stats = SolveStats::default();
        let flow = self.component_wise(
            &net.graph,
            &net.capacity,
            &net.sources,
            &net.sinks,
            0,
            None,
            &mut stats,
        )?;
        let value = net.value(&flow);
        let cut = extract_cut(&net.graph, &net.capacity, &flow, &net.sources, &net.sinks)?;
        Ok(Solution {
            flow,
            value,
            cut,
            stats,
        })
    }

    /// Solves each connected component separately.
    #[allow(clippy::too_many_arguments)]
    fn component_wise<T: Scalar>(
        &self,
        graph: &PlanarGraph,
        caps: &Capacities<T>,
        sources: &[VertexId],
        sinks: &[VertexId],
        depth: usize,
        parent_terminals: Option<usize>,
        stats: &mut SolveStats,
    ) -> Result<Pseudoflow<T>, SolveError> {
        if graph.component_count() <= 1 {
            return self.rec(graph, caps, sources, sinks, depth, parent_terminals, stats);
        }
        let label = components(graph, |_| true);
        let mut flow = Pseudoflow::zero(graph.edge_count());
        for (members, ks, kt) in group_terminals(&label, sources, sinks) {
            let piece = graph.induced(&members).expect("component of a plane graph");
            let local = piece.local_vertices(graph.vertex_count());
            let lcaps = piece_caps(&piece, caps);
            let map = |vs: &[VertexId]| vs.iter().map(|&v| local[v].unwrap()).collect::<Vec<_>>();
            let fl = self.rec(
                &piece.graph,
                &lcaps,
                &map(&ks),
                &map(&kt),
                depth,
                parent_terminals,
                stats,
            )?;
            flow.add_mapped(&fl, &piece.edge_map);
        }
        Ok(flow)
    }

    #[allow(clippy::too_many_arguments)]
    fn rec<T: Scalar>(
        &self,
        graph: &PlanarGraph,
        caps: &Capacities<T>,
        sources: &[VertexId],
        sinks: &[VertexId],
        depth: usize,
        parent_terminals: Option<usize>,
        stats: &mut SolveStats,
    ) -> Result<Pseudoflow<T>, SolveError> {
        let m = graph.edge_count();
        if sources.is_empty() || sinks.is_empty() {
            return Ok(Pseudoflow::zero(m));
        }
        let n = graph.vertex_count();
        let mut record = CallRecord {
            depth,
            vertices: n,
            sources: sources.len(),
            sinks: sinks.len(),
            parent_terminals,
            kind: CallKind::FewTerminals,
            separator_len: None,
            components: Vec::new(),
        };
        if sources.len().min(sinks.len()) <= self.config.k_single {
            stats.calls.push(record);
            return Ok(few_terminals(graph, caps, sources, sinks));
        }
        if ((sources.len() * sinks.len()) as f64) <= self.config.k_pair * (n as f64).sqrt() {
            record.kind = CallKind::Pairwise;
            stats.calls.push(record);
            return Ok(pairwise_maxflow(graph, caps, sources, sinks).flow);
        }

        let tri = graph.triangulate();
        let g = &tri.graph;
        let mut tcaps = caps.clone();
        tcaps.extend_zero(g.edge_count() - m);
        let sep = match separator_for_terminals(g, sources, sinks) {
            Ok(sep) => sep,
            Err(_) => {
                record.kind = CallKind::Fallback;
                stats.calls.push(record);
                stats.stage_fallbacks += 1;
                return Ok(apex_maxflow(graph, caps, sources, sinks).flow);
            }
        };
        record.kind = CallKind::Split;
        record.separator_len = Some(sep.len());
        let side = &sep.side;
        let pick = |vs: &[VertexId], keep: fn(Side) -> bool| -> Vec<VertexId> {
            vs.iter().copied().filter(|&v| keep(side[v])).collect()
        };
        let l_s = pick(sources, |s| s == Side::Inside);
        let r_s = pick(sources, |s| s != Side::Inside);
        let l_t = pick(sinks, |s| s != Side::Outside);
        let r_t = pick(sinks, |s| s == Side::Outside);
        let terminals = sources.len() + sinks.len();

        let mut f = Pseudoflow::zero(g.edge_count());
        let step = self.side_flow(g, &tcaps, &f, &sep.cycle, side, &l_s, &r_t, false, stats)?;
        accumulate(&mut f, &step);

        let cut = extract_cut(g, &tcaps, &f, &l_s, &r_t)?;
        let mut cut_edge = vec![false; g.edge_count()];
        cut.darts.iter().for_each(|&d| cut_edge[edge_of(d)] = true);
        let label = components(g, |e| !cut_edge[e]);
        let on_cycle = |v: VertexId| side[v] == Side::Cycle;
        let call_index = stats.calls.len();
        stats.calls.push(record);

        for (members, ks, kt) in group_terminals(&label, sources, sinks) {
            stats.calls[call_index].components.push(members.len());
            let piece = g
                .subgraph_piece(&members, |e| !cut_edge[e])
                .expect("component of a plane graph");
            let local = piece.local_vertices(g.vertex_count());
            let map = |vs: &[VertexId]| vs.iter().map(|&v| local[v].unwrap()).collect::<Vec<_>>();
            let lside: Vec<Side> = piece.vertex_map.iter().map(|&v| side[v]).collect();
            let lcycle = map(&sep.cycle.iter().copied().filter(|&p| local[p].is_some()).collect::<Vec<_>>());
            let lcaps = piece_caps(&piece, &tcaps.residual_of(&f));
            let reached = cut.reachable[members[0]];
            if members.iter().any(|&v| cut.reachable[v] != reached) {
                return Err(SolveError::MixedComponent);
            }
            let mut fl = Pseudoflow::zero(piece.graph.edge_count());
            let k_ls: Vec<_> = ks.iter().copied().filter(|&v| side[v] == Side::Inside).collect();
            let k_rs: Vec<_> = ks.iter().copied().filter(|&v| side[v] != Side::Inside).collect();
            let k_rt: Vec<_> = kt.iter().copied().filter(|&v| side[v] == Side::Outside).collect();
            let k_lt: Vec<_> = kt.iter().copied().filter(|&v| side[v] != Side::Outside).collect();
            let pg = &piece.graph;
            if k_rt.is_empty() {
                // Sources outside or on the cycle first, then inside sources
                // to sinks on the cycle, then the rest recursively.
                let p_t: Vec<_> = kt.iter().copied().filter(|&v| on_cycle(v)).collect();
                let rest_t: Vec<_> = kt.iter().copied().filter(|&v| !on_cycle(v)).collect();
                let s1 = self.side_flow(pg, &lcaps, &fl, &lcycle, &lside, &map(&k_rs), &map(&kt), true, stats)?;
                accumulate(&mut fl, &s1);
                let s2 = self.side_flow(pg, &lcaps, &fl, &lcycle, &lside, &map(&k_ls), &map(&p_t), false, stats)?;
                accumulate(&mut fl, &s2);
                let s3 = self.component_wise(
                    pg,
                    &lcaps.residual_of(&fl),
                    &map(&k_ls),
                    &map(&rest_t),
                    depth + 1,
                    Some(terminals),
                    stats,
                )?;
                accumulate(&mut fl, &s3);
            } else if k_ls.is_empty() {
                // Sinks inside or on the cycle first, then sources on the
                // cycle to outside sinks, then the rest recursively.
                let p_s: Vec<_> = ks.iter().copied().filter(|&v| on_cycle(v)).collect();
                let rest_s: Vec<_> = ks.iter().copied().filter(|&v| !on_cycle(v)).collect();
                let s1 = self.side_flow(pg, &lcaps, &fl, &lcycle, &lside, &map(&ks), &map(&k_lt), true, stats)?;
                accumulate(&mut fl, &s1);
                let s2 = self.side_flow(pg, &lcaps, &fl, &lcycle, &lside, &map(&p_s), &map(&k_rt), false, stats)?;
                accumulate(&mut fl, &s2);
                let s3 = self.component_wise(
                    pg,
                    &lcaps.residual_of(&fl),
                    &map(&rest_s),
                    &map(&k_rt),
                    depth + 1,
                    Some(terminals),
                    stats,
                )?;
                accumulate(&mut fl, &s3);
            } else {
                return Err(SolveError::MixedComponent);
            }
            f.add_mapped(&fl, &piece.edge_map);
        }

        let step = self.side_flow(g, &tcaps, &f, &sep.cycle, side, &r_s, &l_t, true, stats)?;
        accumulate(&mut f, &step);
        Ok(f.truncated(m))
    }

    /// Maximum flow from `sources` to `sinks` in the residual network of
    /// `base`, where the cycle separates them. With `flipped`, sources lie
    /// outside and sinks inside.
    #[allow(clippy::too_many_arguments)]
    fn side_flow<T: Scalar>(
        &self,
        graph: &PlanarGraph,
        caps: &Capacities<T>,
        base: &Pseudoflow<T>,
        cycle: &[VertexId],
        side: &[Side],
        sources: &[VertexId],
        sinks: &[VertexId],
        flipped: bool,
        stats: &mut SolveStats,
    ) -> Result<Pseudoflow<T>, SolveError> {
        if sources.is_empty() || sinks.is_empty() {
            return Ok(Pseudoflow::zero(graph.edge_count()));
        }
        let residual = caps.residual_of(base);
        let side: Vec<Side> = if flipped {
            side.iter()
                .map(|&s| match s {
                    Side::Inside => Side::Outside,
                    Side::Outside => Side::Inside,
                    Side::Cycle => Side::Cycle,
                })
                .collect()
        } else {
            side.to_vec()
        };
        let net = FlowNetwork::new(graph.clone(), residual.clone(), sources.to_vec(), sinks.to_vec())?;
        match SideToSideInstance::new(net, cycle.to_vec(), side) {
            Ok(inst) => {
                let res = inst.run(self.config.debug)?;
                stats.side_to_side_runs += 1;
                stats.same_face_fallbacks += res.trace.steps.iter().filter(|s| s.fallback).count();
                Ok(res.flow)
            }
            Err(SideToSideError::Flow(e)) => Err(e.into()),
            Err(_) => {
                stats.stage_fallbacks += 1;
                Ok(apex_maxflow(graph, &residual, sources, sinks).flow)
            }
        }
    }
}

/// One multi-source single-sink solve per terminal of the smaller side.
fn few_terminals<T: Scalar>(
    graph: &PlanarGraph,
    caps: &Capacities<T>,
    sources: &[VertexId],
    sinks: &[VertexId],
) -> Pseudoflow<T> {
    let mut flow = Pseudoflow::zero(graph.edge_count());
    if sources.len() == 1 && sinks.len() == 1 {
        return pair_maxflow(graph, caps, sources[0], sinks[0]).flow;
    }
    if sinks.len() <= sources.len() {
        for &t in sinks {
            let step = multi_source_single_sink(graph, &caps.residual_of(&flow), sources, &[t])
                .expect("single sink");
            accumulate(&mut flow, &step.flow);
        }
    } else {
        for &s in sources {
            let step = multi_source_single_sink(graph, &caps.residual_of(&flow), &[s], sinks)
                .expect("single source");
            accumulate(&mut flow, &step.flow);
        }
    }
    flow
}

/// Connected-component label of every vertex, using the accepted edges.
fn components(graph: &PlanarGraph, keep_edge: impl Fn(usize) -> bool) -> Vec<usize> {
    let n = graph.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &d in graph.rotation(u) {
                let v = graph.head(d);
                if label[v] == usize::MAX && keep_edge(edge_of(d)) {
                    label[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    label
}

/// Members, sources and sinks of every component holding at least one
/// source and one sink, in component order.
fn group_terminals(
    label: &[usize],
    sources: &[VertexId],
    sinks: &[VertexId],
) -> Vec<(Vec<VertexId>, Vec<VertexId>, Vec<VertexId>)> {
    let count = label.iter().max().map_or(0, |&m| m + 1);
    let mut groups = vec![(Vec::new(), Vec::new(), Vec::new()); count];
    for (v, &l) in label.iter().enumerate() {
        groups[l].0.push(v);
    }
    sources.iter().for_each(|&s| groups[label[s]].1.push(s));
    sinks.iter().for_each(|&t| groups[label[t]].2.push(t));
    groups
        .into_iter()
        .filter(|(_, s, t)| !s.is_empty() && !t.is_empty())
        .collect()
}

fn piece_caps<T: Scalar>(piece: &crate::planar::Piece, caps: &Capacities<T>) -> Capacities<T> {
    Capacities::new(
        (0..piece.graph.dart_count())
            .map(|d| caps.get(piece.parent_dart(d)))
            .collect(),
    )
    .expect("residual capacities are nonnegative")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow_base::excesses;
    use crate::planar::tests::grid;

    fn grid_net(k: usize, sources: Vec<usize>, sinks: Vec<usize>, salt: usize) -> FlowNetwork<i64> {
        let g = grid(k);
        let caps = Capacities::new((0..g.dart_count()).map(|d| ((d * 13 + salt * 7) % 9) as i64).collect()).unwrap();
        FlowNetwork::new(g, caps, sources, sinks).unwrap()
    }

    fn assert_max(net: &FlowNetwork<i64>, config: SolverConfig) -> Solution<i64> {
        let sol = Solver::new(config).solve(net).unwrap();
        let oracle = apex_maxflow(&net.graph, &net.capacity, &net.sources, &net.sinks).value;
        assert_eq!(sol.value, oracle);
        crate::flow_base::check_capacity(&net.capacity, &sol.flow).unwrap();
        let exc = excesses(&net.graph, &sol.flow);
        for v in 0..net.graph.vertex_count() {
            if !net.sources.contains(&v) && !net.sinks.contains(&v) {
                assert_eq!(exc[v], 0);
            }
        }
        assert_eq!(sol.cut.capacity(&net.capacity), sol.value);
        sol
    }

    #[test]
    fn single_pair() {
        let net = grid_net(4, vec![0], vec![15], 0);
        let sol = assert_max(&net, SolverConfig::default());
        assert_eq!(sol.stats.calls.len(), 1);
        assert_eq!(sol.stats.calls[0].kind, CallKind::FewTerminals);
    }

    #[test]
    fn recursion_on_grids() {
        let config = SolverConfig {
            debug: true,
            ..SolverConfig::default()
        };
        for k in [6, 8, 12] {
            for salt in 0..4 {
                let n = k * k;
                let sources: Vec<_> = (0..n).filter(|v| (v * 5 + salt) % 7 == 0).collect();
                let sinks: Vec<_> = (0..n).filter(|v| (v * 5 + salt) % 7 == 3).collect();
                let sol = assert_max(&grid_net(k, sources, sinks, salt), config.clone());
                assert!(sol.stats.calls.iter().any(|c| c.kind == CallKind::Split));
                assert!(sol.stats.progress_violations().is_empty());
            }
        }
    }

    #[test]
    fn threshold_arithmetic() {
        let g = grid(10);
        let caps = Capacities::uniform(g.dart_count(), 1i64);
        let net = FlowNetwork::new(g.clone(), caps.clone(), vec![0, 1, 2], vec![97, 98, 99]).unwrap();
        let config = SolverConfig {
            k_single: 1,
            ..SolverConfig::default()
        };
        let sol = assert_max(&net, config.clone());
        assert_eq!(sol.stats.calls[0].kind, CallKind::Pairwise);
        let many: Vec<_> = (0..20).collect();
        let far: Vec<_> = (80..100).collect();
        let net = FlowNetwork::new(g, caps, many, far).unwrap();
        let sol = assert_max(&net, config);
        assert_eq!(sol.stats.calls[0].kind, CallKind::Split);
    }

    #[test]
    fn pairwise_order_does_not_matter() {
        let g = grid(3);
        let caps = Capacities::new((0..g.dart_count()).map(|d| (d % 4) as i64).collect()).unwrap();
        let s = [0usize, 2];
        let t = [6usize, 8];
        let base = pairwise_maxflow(&g, &caps, &s, &t).value;
        assert_eq!(pairwise_maxflow(&g, &caps, &[2, 0], &t).value, base);
        assert_eq!(pairwise_maxflow(&g, &caps, &s, &[8, 6]).value, base);
        assert_eq!(pairwise_maxflow(&g, &caps, &[2, 0], &[8, 6]).value, base);
        assert_eq!(apex_maxflow(&g, &caps, &s, &t).value, base);
    }

    #[test]
    fn shared_bottleneck() {
        // Two sources feed one sink through a unit edge.
        let g = PlanarGraph::from_rotation(
            4,
            vec![(0, 2), (1, 2), (2, 3)],
            vec![vec![0], vec![1], vec![0, 2, 1], vec![2]],
        )
        .unwrap();
        let caps = Capacities::new(vec![5i64, 0, 5, 0, 1, 0]).unwrap();
        assert_eq!(pairwise_maxflow(&g, &caps, &[0, 1], &[3]).value, 1);
        assert_eq!(pairwise_maxflow(&g, &caps, &[1, 0], &[3]).value, 1);
    }

    #[test]
    fn staged_splits() {
        let net = grid_net(5, vec![0, 4, 12], vec![20, 24, 7], 3);
        let whole = apex_maxflow(&net.graph, &net.capacity, &net.sources, &net.sinks).value;
        let g = &net.graph;
        for part in [&[][..], &[0][..], &[0, 4, 12][..]] {
            let st = staged_maxflow(g, &net.capacity, &net.sources, &net.sinks, Split::Sources(part));
            assert_eq!(st.value, whole);
            if part.len() == 3 {
                assert!(st.second.flow.is_zero());
            }
            if part.is_empty() {
                assert!(st.first.flow.is_zero());
            }
        }
        let st = staged_maxflow(g, &net.capacity, &net.sources, &net.sinks, Split::Sinks(&[7]));
        assert_eq!(st.value, whole);
    }

    #[test]
    fn cut_examples() {
        let g = PlanarGraph::from_rotation(2, vec![(0, 1)], vec![vec![0], vec![0]]).unwrap();
        let caps = Capacities::new(vec![4i64, 0]).unwrap();
        let f = Pseudoflow::from_edge_values(vec![4]);
        let cut = extract_cut(&g, &caps, &f, &[0], &[1]).unwrap();
        assert_eq!(cut.darts, vec![0]);
        let zero = Capacities::<i64>::zero(2);
        let cut = extract_cut(&g, &zero, &Pseudoflow::zero(1), &[0], &[1]).unwrap();
        assert_eq!(cut.capacity(&zero), 0);
        assert_eq!(
            extract_cut(&g, &caps, &Pseudoflow::zero(1), &[0], &[1]),
            Err(SolveError::NotMaximum(1))
        );
    }

    #[test]
    fn disconnected_input() {
        let piece = grid(4).induced(&[0, 1, 4, 5, 10, 11, 14, 15]).unwrap();
        let g = piece.graph;
        assert_eq!(g.component_count(), 2);
        let caps = Capacities::uniform(g.dart_count(), 2i64);
        let net = FlowNetwork::new(g, caps, vec![0, 4], vec![3, 7]).unwrap();
        let config = SolverConfig {
            k_single: 0,
            k_pair: 0.0,
            debug: true,
        };
        assert_eq!(assert_max(&net, config).value, 8);
    }
}
