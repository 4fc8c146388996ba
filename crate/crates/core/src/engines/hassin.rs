//! Maximum flow between two vertices on a common face via shortest paths
//! in the dual graph.
//!
//! A virtual edge `s -> t` is drawn through the common face, splitting it.
//! Each real dart `d` becomes a dual arc from the face of `d` to the face of
//! its twin with length `c(d)`. With `phi` the shortest-path distances from
//! the face of the virtual dart `t -> s`, setting
//! `f(d) = phi(face(twin d)) - phi(face(d))` gives a circulation that obeys
//! every capacity (triangle inequality) and returns `phi(face(s -> t))`
//! units over the virtual edge, which is the minimum cut.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{EngineError, MaxFlowResult};
use crate::flow_base::{Capacities, Pseudoflow};
use crate::planar::{twin, PlanarGraph, VertexId};
use crate::scalar::Scalar;

pub fn hassin_same_face_maxflow<T: Scalar>(
    graph: &PlanarGraph,
    caps: &Capacities<T>,
    s: VertexId,
    t: VertexId,
) -> Result<MaxFlowResult<T>, EngineError> {
    if s == t {
        return Err(EngineError::SameTerminal(s));
    }
    let (a, b) = graph
        .common_face(s, t)
        .ok_or(EngineError::NoCommonFace(s, t))?;
    let (slit, e) = graph.add_edge_at_corners(a, b)?;
    let real_darts = graph.dart_count();
    let faces = slit.face_count();

    let mut dual: Vec<Vec<(usize, T)>> = vec![Vec::new(); faces];
    for d in 0..real_darts {
        dual[slit.face_of(d)].push((slit.face_of(twin(d)), caps.get(d)));
    }
    let start = slit.face_of(2 * e + 1);
    let mut dist: Vec<Option<T>> = vec![None; faces];
    dist[start] = Some(T::zero());
    let mut heap = BinaryHeap::from([Reverse((T::zero(), start))]);
    while let Some(Reverse((du, u))) = heap.pop() {
        if dist[u].is_some_and(|x| x < du) {
            continue;
        }
        for &(v, len) in &dual[u] {
            let cand = du + len;
            if dist[v].is_none_or(|x| cand < x) {
                dist[v] = Some(cand);
                heap.push(Reverse((cand, v)));
            }
        }
    }
    // Faces of other components stay unreached; their edges carry no flow.
    let phi: Vec<T> = dist.into_iter().map(|x| x.unwrap_or_else(T::zero)).collect();
    let flow = Pseudoflow::from_edge_values(
        (0..graph.edge_count())
            .map(|edge| phi[slit.face_of(2 * edge + 1)] - phi[slit.face_of(2 * edge)])
            .collect(),
    );
    let value = phi[slit.face_of(2 * e)];
    Ok(MaxFlowResult {
        flow,
        value,
        cut: None,
    })
}

/// Maximum flow from `from` to `to` of value at most `bound`. A pendant
/// source joined to `from` by an arc of capacity `bound` is placed in a face
/// shared by `from` and `to`, and the same-face algorithm is applied.
pub fn bounded_maxflow_from<T: Scalar>(
    graph: &PlanarGraph,
    caps: &Capacities<T>,
    from: VertexId,
    bound: T,
    to: VertexId,
) -> Result<MaxFlowResult<T>, EngineError> {
    if from == to {
        return Err(EngineError::SameTerminal(from));
    }
    let (a, _) = graph
        .common_face(from, to)
        .ok_or(EngineError::NoCommonFace(from, to))?;
    if bound.is_zero() {
        return Ok(MaxFlowResult::zero(graph.edge_count()));
    }
    let (with_source, source) = graph.add_vertex_at_corners(&[a])?;
    let mut caps = caps.clone();
    // New edge runs source -> from on its even dart.
    caps.extend_zero(1);
    caps.set(2 * graph.edge_count(), bound);
    let res = hassin_same_face_maxflow(&with_source, &caps, source, to)?;
    Ok(MaxFlowResult {
        flow: res.flow.truncated(graph.edge_count()),
        value: res.value,
        cut: None,
    })
}
