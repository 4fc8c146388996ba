//! Helpers shared by the integration suites. Reachability here is written
//! out independently of the library.

#![allow(dead_code)]

use std::collections::VecDeque;

use planar_flow::flow_base::{Capacities, Pseudoflow};
use planar_flow::PlanarGraph;
use rand::Rng;

/// Uniform pseudoflow with `-c(2e+1) <= f(e) <= c(2e)` on every edge.
pub fn random_pseudoflow<R: Rng>(caps: &Capacities<i64>, edges: usize, rng: &mut R) -> Pseudoflow<i64> {
    Pseudoflow::from_edge_values(
        (0..edges)
            .map(|e| rng.gen_range(-caps.get(2 * e + 1)..=caps.get(2 * e)))
            .collect(),
    )
}

pub fn dart_value(f: &Pseudoflow<i64>, d: usize) -> i64 {
    let x = f.edge_values()[d / 2];
    if d.is_multiple_of(2) {
        x
    } else {
        -x
    }
}

/// Net inflow at every vertex.
pub fn inflow(g: &PlanarGraph, f: &Pseudoflow<i64>) -> Vec<i64> {
    let mut x = vec![0; g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        x[v] += f.edge_values()[e];
        x[u] -= f.edge_values()[e];
    }
    x
}

/// Vertices reachable from `from` along darts with `c(d) - f(d) > 0`.
pub fn residual_reachable(
    g: &PlanarGraph,
    caps: &Capacities<i64>,
    f: &Pseudoflow<i64>,
    from: &[usize],
) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue: VecDeque<usize> = from.iter().copied().collect();
    for &v in from {
        seen[v] = true;
    }
    while let Some(u) = queue.pop_front() {
        for d in 0..g.dart_count() {
            if g.tail(d) == u && !seen[g.head(d)] && caps.get(d) - dart_value(f, d) > 0 {
                seen[g.head(d)] = true;
                queue.push_back(g.head(d));
            }
        }
    }
    seen
}

/// True when the positive-flow darts contain a directed cycle.
pub fn has_positive_cycle(g: &PlanarGraph, f: &Pseudoflow<i64>) -> bool {
    let n = g.vertex_count();
    let mut indegree = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for d in 0..g.dart_count() {
        if dart_value(f, d) > 0 {
            out[g.tail(d)].push(g.head(d));
            indegree[g.head(d)] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut removed = 0;
    while let Some(u) = queue.pop() {
        removed += 1;
        for &v in &out[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                queue.push(v);
            }
        }
    }
    removed < n
}

fn pick_disjoint<R: Rng>(pool: &[usize], avoid: &[usize], k: usize, rng: &mut R) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let free: Vec<usize> = pool.iter().copied().filter(|v| !avoid.contains(v)).collect();
    free.choose_multiple(rng, k.min(free.len())).copied().collect()
}

/// One trial of: no residual path from `A` to `B` under `f`, `g` a maximum
/// flow from `S` to `T` in the residual network, and `S` inside `A` or `T`
/// inside `B`; then `f + g` still has no residual path from `A` to `B`.
/// Returns `Ok(false)` when the drawn instance had an empty `B`.
pub fn separation_trial(seed: u64) -> Result<bool, String> {
    use planar_flow::engines::apex_maxflow;
    use planar_flow::flow_base::sum_flows;
    use planar_flow::generate::{gen_random_planar, PlanarSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(6..40);
    let net = gen_random_planar::<i64>(&PlanarSpec {
        max_capacity: 6,
        ..PlanarSpec::new(n, seed)
    });
    let g = &net.graph;
    let f = random_pseudoflow(&net.capacity, g.edge_count(), &mut rng);
    let all: Vec<usize> = (0..n).collect();
    let a = pick_disjoint(&all, &[], rng.gen_range(1..=n / 3 + 1), &mut rng);
    let reach = residual_reachable(g, &net.capacity, &f, &a);
    let b: Vec<usize> = all.iter().copied().filter(|&v| !reach[v]).collect();
    if b.is_empty() {
        return Ok(false);
    }
    let (s, t) = if rng.gen_bool(0.5) {
        let s = pick_disjoint(&a, &[], rng.gen_range(1..=a.len()), &mut rng);
        let t = pick_disjoint(&all, &s, rng.gen_range(1..=4), &mut rng);
        (s, t)
    } else {
        let t = pick_disjoint(&b, &[], rng.gen_range(1..=b.len()), &mut rng);
        let s = pick_disjoint(&all, &t, rng.gen_range(1..=4), &mut rng);
        (s, t)
    };
    let residual = net.capacity.residual_of(&f);
    let g2 = apex_maxflow(g, &residual, &s, &t);
    let total = sum_flows(&net.capacity, &f, &g2.flow).map_err(|e| e.to_string())?;
    let after = residual_reachable(g, &net.capacity, &total, &a);
    match b.iter().find(|&&v| after[v]) {
        Some(v) => Err(format!("seed {seed}: {v} in B became reachable from A")),
        None => Ok(true),
    }
}

/// Checks decompose/recompose, cycle cancelling and excess return on one
/// random pseudoflow.
pub fn pseudoflow_trial(seed: u64) -> Result<(), String> {
    use planar_flow::flow_base::{cancel_cycles, decompose, return_excess};
    use planar_flow::generate::{gen_random_planar, PlanarSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..60);
    let net = gen_random_planar::<i64>(&PlanarSpec {
        max_capacity: 10,
        ..PlanarSpec::new(n, seed ^ 0x5eed)
    });
    let g = &net.graph;
    let m = g.edge_count();
    let f = random_pseudoflow(&net.capacity, m, &mut rng);

    let dec = decompose(g, &f);
    if dec.recompose(m) != f {
        return Err(format!("seed {seed}: recompose(decompose(f)) != f"));
    }
    for w in dec.paths.iter().chain(&dec.cycles) {
        if w.amount <= 0 || w.darts.windows(2).any(|p| g.head(p[0]) != g.tail(p[1])) {
            return Err(format!("seed {seed}: malformed walk {:?}", w.darts));
        }
    }

    let acyclic = cancel_cycles(g, &f);
    if inflow(g, &acyclic) != inflow(g, &f) {
        return Err(format!("seed {seed}: cancel_cycles changed an excess"));
    }
    if has_positive_cycle(g, &acyclic) {
        return Err(format!("seed {seed}: cancel_cycles left a cycle"));
    }
    for e in 0..m {
        let (x, y) = (f.edge_values()[e], acyclic.edge_values()[e]);
        if y.abs() > x.abs() || x * y < 0 {
            return Err(format!("seed {seed}: edge {e} grew from {x} to {y}"));
        }
    }

    let exc = inflow(g, &acyclic);
    let positive: Vec<usize> = (0..n).filter(|&v| exc[v] > 0).collect();
    let Some(&v) = positive.get(rng.gen_range(0..positive.len().max(1))) else {
        return Ok(());
    };
    let amount = rng.gen_range(0..=exc[v]);
    let back = return_excess(g, &acyclic, v, amount).map_err(|e| format!("seed {seed}: {e}"))?;
    let after = inflow(g, &back);
    if after[v] != exc[v] - amount {
        return Err(format!("seed {seed}: excess at {v} is {} not {}", after[v], exc[v] - amount));
    }
    for u in 0..n {
        if u != v && after[u] != exc[u] && (exc[u] >= 0 || after[u] > 0 || after[u] < exc[u]) {
            return Err(format!("seed {seed}: excess at {u} moved from {} to {}", exc[u], after[u]));
        }
    }
    for d in 0..g.dart_count() {
        if dart_value(&back, d) > dart_value(&acyclic, d) && dart_value(&acyclic, d) >= 0 {
            return Err(format!("seed {seed}: dart {d} gained flow without carrying inflow"));
        }
    }
    Ok(())
}
