//! Maximum-flow building blocks used by the solver.
//!
//! * [`oracle_maxflow`]: super-source/super-sink reduction solved by
//!   blocking flows. Works on any graph and serves as the reference.
//! * [`multi_source_single_sink`]: apex reduction on one side only.
//! * [`hassin_same_face_maxflow`]: single source and sink on a common face,
//!   solved by shortest paths in the dual.
//! * [`bounded_maxflow_from`]: flow of bounded value between two vertices
//!   sharing a face.

mod dinic;
mod hassin;

pub use dinic::Dinic;
pub use hassin::{bounded_maxflow_from, hassin_same_face_maxflow};

use thiserror::Error;

use crate::flow_base::{excess, total_capacity, Capacities, FlowNetwork, Pseudoflow};
use crate::planar::{DartId, EmbeddingError, PlanarGraph, VertexId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("vertices {0} and {1} do not share a face")]
    NoCommonFace(VertexId, VertexId),
    #[error("source and sink coincide at vertex {0}")]
    SameTerminal(VertexId),
    #[error("engine needs a single source or a single sink (got {sources} and {sinks})")]
    NotSingleTerminal { sources: usize, sinks: usize },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlowResult<T> {
    /// Flow relative to the capacities the engine was given.
    pub flow: Pseudoflow<T>,
    pub value: T,
    /// Darts leaving the residual-reachable set of the sources, when the
    /// engine computes it.
    pub cut: Option<Vec<DartId>>,
}

impl<T: Scalar> MaxFlowResult<T> {
    pub fn zero(edges: usize) -> Self {
        MaxFlowResult {
            flow: Pseudoflow::zero(edges),
            value: T::zero(),
            cut: None,
        }
    }
}

/// Loads `graph` with per-dart capacities into a blocking-flow network.
/// Arc ids coincide with dart ids.
pub(crate) fn dinic_for<T: Scalar>(graph: &PlanarGraph, caps: &Capacities<T>) -> Dinic<T> {
    let mut d = Dinic::new(graph.vertex_count());
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        d.add_arc_pair(u, v, caps.get(2 * e), caps.get(2 * e + 1));
    }
    d
}

pub(crate) fn graph_flow<T: Scalar>(graph: &PlanarGraph, d: &Dinic<T>) -> Pseudoflow<T> {
    Pseudoflow::from_edge_values((0..graph.edge_count()).map(|e| d.flow(2 * e)).collect())
}

fn cut_darts(graph: &PlanarGraph, reach: &[bool]) -> Vec<DartId> {
    (0..graph.dart_count())
        .filter(|&d| reach[graph.tail(d)] && !reach[graph.head(d)])
        .collect()
}

fn sinks_value<T: Scalar>(graph: &PlanarGraph, f: &Pseudoflow<T>, sinks: &[VertexId]) -> T {
    sinks.iter().fold(T::zero(), |acc, &t| acc + excess(graph, f, t))
}

/// Reference maximum flow from `sources` to `sinks` under `caps`, via a
/// super-source and super-sink joined by arcs of capacity `M`.
pub fn apex_maxflow<T: Scalar>(
    graph: &PlanarGraph,
    caps: &Capacities<T>,
    sources: &[VertexId],
    sinks: &[VertexId],
) -> MaxFlowResult<T> {
    if sources.is_empty() || sinks.is_empty() {
        return MaxFlowResult::zero(graph.edge_count());
    }
    let big = total_capacity(caps);
    let mut d = dinic_for(graph, caps);
    let s = d.add_vertex();
    let t = d.add_vertex();
    for &v in sources {
        d.add_arc_pair(s, v, big, T::zero());
    }
    for &v in sinks {
        d.add_arc_pair(v, t, big, T::zero());
    }
    let value = d.max_flow(s, t);
    let flow = graph_flow(graph, &d);
    let reach = d.reachable(s);
    let cut = cut_darts(graph, &reach[..graph.vertex_count()]);
    debug_assert_eq!(sinks_value(graph, &flow, sinks), value);
    MaxFlowResult {
        flow,
        value,
        cut: Some(cut),
    }
}

/// Maximum flow in the residual network of `base` (or of the zero flow).
pub fn oracle_maxflow<T: Scalar>(
    net: &FlowNetwork<T>,
    base: Option<&Pseudoflow<T>>,
) -> MaxFlowResult<T> {
    let caps = match base {
        Some(f) => net.capacity.residual_of(f),
        None => net.capacity.clone(),
    };
    apex_maxflow(&net.graph, &caps, &net.sources, &net.sinks)
}

/// Maximum flow when one side has a single terminal: only the other side
/// gets an apex.
pub fn multi_source_single_sink<T: Scalar>(
    graph: &PlanarGraph,
    caps: &Capacities<T>,
    sources: &[VertexId],
    sinks: &[VertexId],
) -> Result<MaxFlowResult<T>, EngineError> {
    if sources.is_empty() || sinks.is_empty() {
        return Ok(MaxFlowResult::zero(graph.edge_count()));
    }
    if sources.len() != 1 && sinks.len() != 1 {
        return Err(EngineError::NotSingleTerminal {
            sources: sources.len(),
            sinks: sinks.len(),
        });
    }
    let big = total_capacity(caps);
    let mut d = dinic_for(graph, caps);
    let s = if sources.len() == 1 {
        sources[0]
    } else {
        let a = d.add_vertex();
        for &v in sources {
            d.add_arc_pair(a, v, big, T::zero());
        }
        a
    };
    let t = if sinks.len() == 1 {
        sinks[0]
    } else {
        let a = d.add_vertex();
        for &v in sinks {
            d.add_arc_pair(v, a, big, T::zero());
        }
        a
    };
    if s == t {
        return Err(EngineError::SameTerminal(s));
    }
    let value = d.max_flow(s, t);
    let flow = graph_flow(graph, &d);
    let reach = d.reachable(s);
    Ok(MaxFlowResult {
        flow,
        value,
        cut: Some(cut_darts(graph, &reach[..graph.vertex_count()])),
    })
}

/// Flow of value at most `bound` from `from` to `to`, in `graph` extended
/// by the extra arcs `(u, v, capacity)`. Only flow on `graph`'s own edges
/// is returned.
pub fn bounded_maxflow_oracle<T: Scalar>(
    graph: &PlanarGraph,
    caps: &Capacities<T>,
    extra: &[(VertexId, VertexId, T)],
    from: VertexId,
    bound: T,
    to: VertexId,
) -> MaxFlowResult<T> {
    if bound.is_zero() || from == to {
        return MaxFlowResult::zero(graph.edge_count());
    }
    let mut d = dinic_for(graph, caps);
    for &(u, v, c) in extra {
        d.add_arc_pair(u, v, c, T::zero());
    }
    let s = d.add_vertex();
    d.add_arc_pair(s, from, bound, T::zero());
    let value = d.max_flow(s, to);
    MaxFlowResult {
        flow: graph_flow(graph, &d),
        value,
        cut: None,
    }
}

/// Pluggable maximum-flow strategy.
pub trait MaxFlowEngine<T: Scalar>: Sync {
    fn name(&self) -> &'static str;

    fn max_flow(
        &self,
        graph: &PlanarGraph,
        caps: &Capacities<T>,
        sources: &[VertexId],
        sinks: &[VertexId],
    ) -> Result<MaxFlowResult<T>, EngineError>;
}

/// Super-source/super-sink blocking flow.
#[derive(Debug, Clone, Copy, Default)]
pub struct OracleEngine;

/// One-sided apex reduction; with several terminals on both sides the sinks
/// are processed one at a time in the residual network.
#[derive(Debug, Clone, Copy, Default)]
pub struct ApexEngine;

/// Dual shortest paths; single source and sink on a common face only.
#[derive(Debug, Clone, Copy, Default)]
pub struct HassinEngine;

impl<T: Scalar> MaxFlowEngine<T> for OracleEngine {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn max_flow(
        &self,
        graph: &PlanarGraph,
        caps: &Capacities<T>,
        sources: &[VertexId],
        sinks: &[VertexId],
    ) -> Result<MaxFlowResult<T>, EngineError> {
        Ok(apex_maxflow(graph, caps, sources, sinks))
    }
}

impl<T: Scalar> MaxFlowEngine<T> for ApexEngine {
    fn name(&self) -> &'static str {
        "apex"
    }

    fn max_flow(
        &self,
        graph: &PlanarGraph,
        caps: &Capacities<T>,
        sources: &[VertexId],
        sinks: &[VertexId],
    ) -> Result<MaxFlowResult<T>, EngineError> {
        if sources.len() <= 1 || sinks.len() <= 1 {
            return multi_source_single_sink(graph, caps, sources, sinks);
        }
        let mut total = Pseudoflow::zero(graph.edge_count());
        let mut value = T::zero();
        for &t in sinks {
            let residual = caps.residual_of(&total);
            let step = multi_source_single_sink(graph, &residual, sources, &[t])?;
            total.add_mapped(&step.flow, &(0..graph.edge_count()).collect::<Vec<_>>());
            value = value + step.value;
        }
        Ok(MaxFlowResult {
            flow: total,
            value,
            cut: None,
        })
    }
}

impl<T: Scalar> MaxFlowEngine<T> for HassinEngine {
    fn name(&self) -> &'static str {
        "hassin"
    }

    fn max_flow(
        &self,
        graph: &PlanarGraph,
        caps: &Capacities<T>,
        sources: &[VertexId],
        sinks: &[VertexId],
    ) -> Result<MaxFlowResult<T>, EngineError> {
        match (sources, sinks) {
            ([], _) | (_, []) => Ok(MaxFlowResult::zero(graph.edge_count())),
            ([s], [t]) => hassin_same_face_maxflow(graph, caps, *s, *t),
            _ => Err(EngineError::NotSingleTerminal {
                sources: sources.len(),
                sinks: sinks.len(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::tests::grid;

    fn single_edge() -> PlanarGraph {
        PlanarGraph::from_rotation(2, vec![(0, 1)], vec![vec![0], vec![0]]).unwrap()
    }

    #[test]
    fn oracle_basic_cases() {
        let g = single_edge();
        let caps = Capacities::new(vec![7i64, 0]).unwrap();
        let net = FlowNetwork::new(g.clone(), caps.clone(), vec![0], vec![1]).unwrap();
        assert_eq!(oracle_maxflow(&net, None).value, 7);
        let back = FlowNetwork::new(g, caps, vec![1], vec![0]).unwrap();
        assert_eq!(oracle_maxflow(&back, None).value, 0);
    }

    #[test]
    fn oracle_grid_columns() {
        let k = 4;
        let g = grid(k);
        let caps = Capacities::uniform(g.dart_count(), 1i64);
        let left: Vec<_> = (0..k).map(|r| r * k).collect();
        let right: Vec<_> = (0..k).map(|r| r * k + k - 1).collect();
        let net = FlowNetwork::new(g, caps, left, right).unwrap();
        let res = oracle_maxflow(&net, None);
        assert_eq!(res.value, 4);
        let cut = res.cut.unwrap();
        let cut_cap: i64 = cut.iter().map(|&d| net.capacity.get(d)).sum();
        assert_eq!(cut_cap, 4);
    }

    #[test]
    fn shared_bottleneck() {
        // Sources 0 and 2 both reach sink 3 only through the edge 1 -> 3.
        let pts = [(0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (2.0, 0.0)];
        let g = PlanarGraph::from_straight_line(&pts, vec![(0, 1), (2, 1), (1, 3)]).unwrap();
        let caps = Capacities::new(vec![5i64, 0, 5, 0, 1, 0]).unwrap();
        let r = multi_source_single_sink(&g, &caps, &[0, 2], &[3]).unwrap();
        assert_eq!(r.value, 1);
        let single = multi_source_single_sink(&g, &caps, &[0], &[3]).unwrap();
        assert_eq!(single.value, 1);
        assert!(matches!(
            multi_source_single_sink(&g, &caps, &[0, 2], &[1, 3]),
            Err(EngineError::NotSingleTerminal { .. })
        ));
        let apex = ApexEngine.max_flow(&g, &caps, &[0, 2], &[3]).unwrap();
        assert_eq!(apex.value, 1);
    }

    #[test]
    fn bounded_oracle() {
        let g = grid(3);
        let caps = Capacities::uniform(g.dart_count(), 5i64);
        assert!(bounded_maxflow_oracle(&g, &caps, &[], 0, 0, 8).flow.is_zero());
        assert_eq!(bounded_maxflow_oracle(&g, &caps, &[], 0, 1, 8).value, 1);
        assert_eq!(bounded_maxflow_oracle(&g, &caps, &[], 0, 100, 8).value, 10);
        // An extra arc lifts the corner bottleneck.
        assert_eq!(bounded_maxflow_oracle(&g, &caps, &[(0, 8, 3)], 0, 100, 8).value, 13);
    }
}
