//! Independent certification of flows, cuts, separators and balancing
//! traces. Nothing here calls into the engines; reachability and the
//! reference maximum flow are computed from scratch.

use std::collections::VecDeque;

use thiserror::Error;

use crate::flow_base::{FlowNetwork, Pseudoflow};
use crate::planar::{DartId, PlanarGraph, VertexId};
use crate::scalar::Scalar;
use crate::separator::{Separator, Side};
use crate::side_to_side::BalanceTrace;
use crate::solver::{Solver, SolverConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("flow has {got} edge values, graph has {expected} edges")]
    Shape { expected: usize, got: usize },
    #[error("dart {dart} carries {flow} over capacity {capacity}")]
    Capacity {
        dart: DartId,
        flow: String,
        capacity: String,
    },
    #[error("vertex {vertex} has excess {excess}")]
    Conservation { vertex: VertexId, excess: String },
    #[error("residual path from source {from} to sink {sink}")]
    ResidualPath { from: VertexId, sink: VertexId },
    #[error("cut capacity {cut} differs from flow value {value}")]
    CutValue { cut: String, value: String },
    #[error("after cycle step {step}: residual path from {clause}")]
    Invariant { step: usize, clause: &'static str },
    #[error("trace has no flow snapshots")]
    MissingSnapshots,
    #[error("separator: {0}")]
    Separator(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison<T> {
    Equal(T),
    Mismatch { solver: T, oracle: T },
}

fn dart_flow<T: Scalar>(f: &Pseudoflow<T>, d: DartId) -> T {
    let x = f.edge_values()[d / 2];
    if d.is_multiple_of(2) {
        x
    } else {
        -x
    }
}

/// Capacity on every dart and conservation at every non-terminal.
pub fn check_flow<T: Scalar>(net: &FlowNetwork<T>, f: &Pseudoflow<T>) -> Result<(), Violation> {
    let g = &net.graph;
    if f.edge_values().len() != g.edge_count() {
        return Err(Violation::Shape {
            expected: g.edge_count(),
            got: f.edge_values().len(),
        });
    }
    let caps = net.capacity.as_slice();
    for (d, &c) in caps.iter().enumerate() {
        let x = dart_flow(f, d);
        if x > c {
            return Err(Violation::Capacity {
                dart: d,
                flow: x.to_string(),
                capacity: c.to_string(),
            });
        }
    }
    let mut net_in = vec![T::zero(); g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let x = f.edge_values()[e];
        net_in[v] = net_in[v] + x;
        net_in[u] = net_in[u] - x;
    }
    let mut terminal = vec![false; g.vertex_count()];
    for &v in net.sources.iter().chain(&net.sinks) {
        terminal[v] = true;
    }
    match (0..g.vertex_count()).find(|&v| !terminal[v] && !net_in[v].is_zero()) {
        Some(v) => Err(Violation::Conservation {
            vertex: v,
            excess: net_in[v].to_string(),
        }),
        None => Ok(()),
    }
}

/// Vertices reachable from `from` along darts with positive residual
/// capacity, with the vertex each was first reached from.
fn residual_search<T: Scalar>(
    g: &PlanarGraph,
    caps: &[T],
    f: &Pseudoflow<T>,
    from: &[VertexId],
) -> Vec<Option<VertexId>> {
    let mut origin = vec![None; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in from {
        if origin[s].is_none() {
            origin[s] = Some(s);
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &d in g.rotation(u) {
            let v = g.head(d);
            if origin[v].is_none() && caps[d] - dart_flow(f, d) > T::zero() {
                origin[v] = origin[u];
                queue.push_back(v);
            }
        }
    }
    origin
}

/// No residual path from a source to a sink.
pub fn check_max<T: Scalar>(net: &FlowNetwork<T>, f: &Pseudoflow<T>) -> Result<(), Violation> {
    let origin = residual_search(&net.graph, net.capacity.as_slice(), f, &net.sources);
    match net.sinks.iter().find(|&&t| origin[t].is_some()) {
        Some(&t) => Err(Violation::ResidualPath {
            from: origin[t].unwrap(),
            sink: t,
        }),
        None => Ok(()),
    }
}

/// Flow value measured at the sinks.
pub fn flow_value<T: Scalar>(net: &FlowNetwork<T>, f: &Pseudoflow<T>) -> T {
    let g = &net.graph;
    let mut value = T::zero();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let x = f.edge_values()[e];
        if net.sinks.contains(&v) {
            value = value + x;
        }
        if net.sinks.contains(&u) {
            value = value - x;
        }
    }
    value
}

/// Total capacity of `cut` equals the value of `f`.
pub fn check_cut<T: Scalar>(
    net: &FlowNetwork<T>,
    f: &Pseudoflow<T>,
    cut: &[DartId],
) -> Result<(), Violation> {
    let cap = cut
        .iter()
        .fold(T::zero(), |acc, &d| acc + net.capacity.as_slice()[d]);
    let value = flow_value(net, f);
    if cap == value {
        Ok(())
    } else {
        Err(Violation::CutValue {
            cut: cap.to_string(),
            value: value.to_string(),
        })
    }
}

/// Maximum flow value by shortest augmenting paths from a super-source to
/// a super-sink.
pub fn reference_value<T: Scalar>(net: &FlowNetwork<T>) -> T {
    let g = &net.graph;
    let n = g.vertex_count();
    let (s, t) = (n, n + 1);
    let mut head = Vec::new();
    let mut cap = Vec::new();
    let mut adj = vec![Vec::new(); n + 2];
    let mut arc = |u: usize, v: usize, c: T, head: &mut Vec<usize>, cap: &mut Vec<T>| {
        adj[u].push(head.len());
        head.push(v);
        cap.push(c);
        adj[v].push(head.len());
        head.push(u);
        cap.push(T::zero());
    };
    let caps = net.capacity.as_slice();
    let mut big = T::one();
    for &c in caps {
        big = big + c;
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        arc(u, v, caps[2 * e], &mut head, &mut cap);
        arc(v, u, caps[2 * e + 1], &mut head, &mut cap);
    }
    for &x in &net.sources {
        arc(s, x, big, &mut head, &mut cap);
    }
    for &x in &net.sinks {
        arc(x, t, big, &mut head, &mut cap);
    }
    let mut total = T::zero();
    loop {
        let mut via = vec![usize::MAX; n + 2];
        let mut queue = VecDeque::from([s]);
        let mut seen = vec![false; n + 2];
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            for &a in &adj[u] {
                let v = head[a];
                if !seen[v] && cap[a] > T::zero() {
                    seen[v] = true;
                    via[v] = a;
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            return total;
        }
        let mut bottleneck = big;
        let mut v = t;
        while v != s {
            let a = via[v];
            bottleneck = bottleneck.min(cap[a]);
            v = head[a ^ 1];
        }
        let mut v = t;
        while v != s {
            let a = via[v];
            cap[a] = cap[a] - bottleneck;
            cap[a ^ 1] = cap[a ^ 1] + bottleneck;
            v = head[a ^ 1];
        }
        total = total + bottleneck;
    }
}

/// Solves `net` and compares the value with the reference maximum flow.
pub fn oracle_compare<T: Scalar>(net: &FlowNetwork<T>, config: &SolverConfig) -> Comparison<T> {
    let oracle = reference_value(net);
    let solver = match Solver::new(config.clone()).solve(net) {
        Ok(sol) => sol.value,
        Err(_) => return Comparison::Mismatch {
            solver: T::zero(),
            oracle,
        },
    };
    if solver == oracle {
        Comparison::Equal(oracle)
    } else {
        Comparison::Mismatch { solver, oracle }
    }
}

/// Replays a balancing trace: after each cycle step, no residual path
/// leads from the sources to the sinks or to the unvisited cycle vertices,
/// nor from the unvisited cycle vertices to the sinks.
pub fn invariant_probe<T: Scalar>(trace: &BalanceTrace<T>) -> Result<(), Violation> {
    if trace.snapshots.len() < trace.steps.len() {
        return Err(Violation::MissingSnapshots);
    }
    let g = &trace.graph;
    let caps = trace.capacity.as_slice();
    for (step, f) in trace.snapshots.iter().enumerate() {
        let rest = &trace.cycle[step + 1..];
        let from_s = residual_search(g, caps, f, &trace.sources);
        if trace.sinks.iter().any(|&t| from_s[t].is_some()) {
            return Err(Violation::Invariant {
                step,
                clause: "sources to sinks",
            });
        }
        if rest.iter().any(|&p| from_s[p].is_some()) {
            return Err(Violation::Invariant {
                step,
                clause: "sources to unvisited cycle vertices",
            });
        }
        let from_rest = residual_search(g, caps, f, rest);
        if trace.sinks.iter().any(|&t| from_rest[t].is_some()) {
            return Err(Violation::Invariant {
                step,
                clause: "unvisited cycle vertices to sinks",
            });
        }
    }
    Ok(())
}

/// Structural certificate for a cycle separator: labels agree with the
/// cycle, consecutive cycle vertices are adjacent, no path avoids the
/// cycle between the two sides, and each side carries at most two thirds
/// of the weight.
pub fn check_separator(g: &PlanarGraph, sep: &Separator, weights: &[f64]) -> Result<(), Violation> {
    let n = g.vertex_count();
    let fail = |msg: String| Err(Violation::Separator(msg));
    if sep.side.len() != n {
        return fail(format!("{} labels for {} vertices", sep.side.len(), n));
    }
    let mut on_cycle = vec![false; n];
    for &p in &sep.cycle {
        if on_cycle[p] {
            return fail(format!("vertex {p} repeats on the cycle"));
        }
        on_cycle[p] = true;
    }
    if let Some(v) = (0..n).find(|&v| on_cycle[v] != (sep.side[v] == Side::Cycle)) {
        return fail(format!("vertex {v} labelled inconsistently"));
    }
    let r = sep.cycle.len();
    if r >= 2 {
        for i in 0..r {
            let (a, b) = (sep.cycle[i], sep.cycle[(i + 1) % r]);
            if (r > 2 || i == 0) && !g.neighbors(a).any(|x| x == b) {
                return fail(format!("cycle vertices {a} and {b} are not adjacent"));
            }
        }
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<VertexId> = (0..n).filter(|&v| sep.side[v] == Side::Inside).collect();
    stack.iter().for_each(|&v| seen[v] = true);
    while let Some(u) = stack.pop() {
        for v in g.neighbors(u) {
            if sep.side[v] == Side::Outside {
                return fail(format!("edge {u}-{v} crosses the cycle"));
            }
            if !seen[v] && sep.side[v] == Side::Inside {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    let weight = |s: Side| -> f64 { (0..n).filter(|&v| sep.side[v] == s).map(|v| weights[v]).sum() };
    let total: f64 = weights.iter().sum();
    for s in [Side::Inside, Side::Outside] {
        let w = weight(s);
        if w > 2.0 / 3.0 * total + 1e-9 {
            return fail(format!("{s:?} side weighs {w} of {total}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow_base::Capacities;
    use crate::planar::tests::grid;

    fn path_net() -> FlowNetwork<i64> {
        let g = PlanarGraph::from_rotation(3, vec![(0, 1), (1, 2)], vec![vec![0], vec![0, 1], vec![1]]).unwrap();
        let caps = Capacities::new(vec![2, 0, 3, 0]).unwrap();
        FlowNetwork::new(g, caps, vec![0], vec![2]).unwrap()
    }

    #[test]
    fn flow_checks() {
        let net = path_net();
        assert!(check_flow(&net, &Pseudoflow::zero(2)).is_ok());
        assert_eq!(
            check_max(&net, &Pseudoflow::zero(2)),
            Err(Violation::ResidualPath { from: 0, sink: 2 })
        );
        let unbalanced = Pseudoflow::from_edge_values(vec![2, 1]);
        assert!(matches!(
            check_flow(&net, &unbalanced),
            Err(Violation::Conservation { vertex: 1, .. })
        ));
        let over = Pseudoflow::from_edge_values(vec![3, 3]);
        assert!(matches!(check_flow(&net, &over), Err(Violation::Capacity { dart: 0, .. })));
        let best = Pseudoflow::from_edge_values(vec![2, 2]);
        assert!(check_flow(&net, &best).is_ok());
        assert!(check_max(&net, &best).is_ok());
        assert!(check_cut(&net, &best, &[0]).is_ok());
        assert!(check_cut(&net, &best, &[2]).is_err());
        assert_eq!(reference_value(&net), 2);
    }

    #[test]
    fn oracle_agrees_on_grid() {
        let g = grid(5);
        let caps = Capacities::new((0..g.dart_count()).map(|d| (d % 6) as i64).collect()).unwrap();
        let net = FlowNetwork::new(g, caps, vec![0, 1, 2], vec![22, 23, 24]).unwrap();
        let expected = crate::engines::apex_maxflow(&net.graph, &net.capacity, &net.sources, &net.sinks).value;
        assert_eq!(reference_value(&net), expected);
        assert_eq!(oracle_compare(&net, &SolverConfig::default()), Comparison::Equal(expected));
    }

    #[test]
    fn empty_and_injected_traces() {
        let net = path_net();
        let mut trace = BalanceTrace {
            graph: net.graph.clone(),
            capacity: net.capacity.clone(),
            sources: vec![0],
            sinks: vec![2],
            cycle: vec![],
            steps: vec![],
            snapshots: vec![],
        };
        assert!(invariant_probe(&trace).is_ok());
        trace.cycle = vec![1];
        trace.snapshots = vec![Pseudoflow::zero(2)];
        assert_eq!(
            invariant_probe(&trace),
            Err(Violation::Invariant {
                step: 0,
                clause: "sources to sinks"
            })
        );
    }

    #[test]
    fn separator_certificate() {
        let g = grid(4).triangulate().graph;
        let n = g.vertex_count();
        let w = vec![1.0 / n as f64; n];
        let sep = crate::separator::find_cycle_separator(&g, &w).unwrap();
        assert!(check_separator(&g, &sep, &w).is_ok());
        let mut broken = sep.clone();
        let v = (0..n).find(|&v| broken.side[v] == Side::Inside).unwrap();
        broken.side[v] = Side::Outside;
        assert!(check_separator(&g, &broken, &w).is_err());
    }
}
