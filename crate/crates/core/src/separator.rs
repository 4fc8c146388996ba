//! Weighted cycle separators of triangulated plane graphs.
//!
//! The separator is a fundamental cycle of a breadth-first spanning tree:
//! the non-tree edges of a triangulation form a spanning tree of the dual,
//! and cutting one dual edge splits the faces into those enclosed by the
//! edge's fundamental cycle and the rest. Interior weights of all candidate
//! cycles are obtained at once by subtree sums over the dual tree, and the
//! shortest cycle with both strict sides at most 2/3 is returned. Its length
//! is at most `2 * depth + 1` for the chosen root.

use thiserror::Error;

use crate::planar::{twin, EdgeId, FaceId, PlanarGraph, VertexId};

const WEIGHT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeparatorError {
    #[error("graph is not triangulated")]
    NotTriangulated,
    #[error("expected {expected} weights, got {got}")]
    WeightLength { expected: usize, got: usize },
    #[error("weights must be nonnegative and sum to 1 (sum = {0})")]
    BadWeights(f64),
    #[error("no balanced fundamental cycle found")]
    Unbalanced,
    #[error("terminal sets are empty")]
    NoTerminals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Inside,
    Outside,
    Cycle,
}

/// A vertex cycle `p_1..p_r` splitting the graph into an inside piece `X`
/// and an outside piece `Y` that share exactly the cycle vertices.
#[derive(Debug, Clone)]
pub struct Separator {
    pub cycle: Vec<VertexId>,
    /// `witnesses[i]` is a face on which `cycle[i]` and `cycle[i + 1]`
    /// (cyclically) both lie.
    pub witnesses: Vec<FaceId>,
    pub side: Vec<Side>,
    pub inside_weight: f64,
    pub outside_weight: f64,
}

impl Separator {
    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Inside piece: strictly inside vertices plus the cycle.
    pub fn inside_piece(&self) -> Vec<VertexId> {
        self.piece(Side::Inside)
    }

    pub fn outside_piece(&self) -> Vec<VertexId> {
        self.piece(Side::Outside)
    }

    fn piece(&self, s: Side) -> Vec<VertexId> {
        (0..self.side.len())
            .filter(|&v| self.side[v] == s || self.side[v] == Side::Cycle)
            .collect()
    }

    /// Splits the edges between the pieces. Edges with both endpoints on
    /// the cycle go to the inside piece, so the pieces are edge-disjoint.
    pub fn piece_edges(&self, g: &PlanarGraph) -> (Vec<EdgeId>, Vec<EdgeId>) {
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if self.side[u] == Side::Outside || self.side[v] == Side::Outside {
                outside.push(e);
            } else {
                inside.push(e);
            }
        }
        (inside, outside)
    }
}

/// Cycle separator for per-vertex weights summing to one.
pub fn find_cycle_separator(g: &PlanarGraph, weights: &[f64]) -> Result<Separator, SeparatorError> {
    let n = g.vertex_count();
    if weights.len() != n {
        return Err(SeparatorError::WeightLength {
            expected: n,
            got: weights.len(),
        });
    }
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) || (total - 1.0).abs() > WEIGHT_EPS {
        return Err(SeparatorError::BadWeights(total));
    }
    if n == 1 {
        return Ok(Separator {
            cycle: vec![0],
            witnesses: vec![],
            side: vec![Side::Cycle],
            inside_weight: 0.0,
            outside_weight: 0.0,
        });
    }
    if !g.is_triangulated() {
        return Err(SeparatorError::NotTriangulated);
    }
    let mut roots = vec![center_vertex(g)];
    let heaviest = (0..n)
        .max_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(b.cmp(&a)))
        .unwrap();
    for r in [heaviest, 0] {
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    let mut best: Option<Candidate> = None;
    for &r in &roots {
        if let Some(c) = best_cycle_from_root(g, weights, r) {
            if best.as_ref().is_none_or(|b| c.key() < b.key()) {
                best = Some(c);
            }
        }
    }
    let best = best.ok_or(SeparatorError::Unbalanced)?;
    Ok(best.into_separator(g))
}

/// Weights `1 / (|S| + |T|)` on every terminal.
pub fn separator_for_terminals(
    g: &PlanarGraph,
    sources: &[VertexId],
    sinks: &[VertexId],
) -> Result<Separator, SeparatorError> {
    let k = sources.len() + sinks.len();
    if k == 0 {
        return Err(SeparatorError::NoTerminals);
    }
    let mut weights = vec![0.0; g.vertex_count()];
    for &v in sources.iter().chain(sinks) {
        weights[v] += 1.0 / k as f64;
    }
    find_cycle_separator(g, &weights)
}

/// Approximate graph centre by a double breadth-first sweep.
fn center_vertex(g: &PlanarGraph) -> VertexId {
    let (_, far) = bfs(g, 0);
    let a = *far.last().unwrap();
    let (parent, order) = bfs(g, a);
    let b = *order.last().unwrap();
    let mut path = vec![b];
    while let Some(p) = parent[*path.last().unwrap()] {
        path.push(p);
    }
    path[path.len() / 2]
}

fn bfs(g: &PlanarGraph, root: VertexId) -> (Vec<Option<VertexId>>, Vec<VertexId>) {
    let mut parent = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[root] = true;
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                order.push(w);
            }
        }
    }
    (parent, order)
}

struct Candidate {
    length: usize,
    heavier_side: f64,
    edge: EdgeId,
    cycle: Vec<VertexId>,
    enclosed_faces: Vec<bool>,
    inside_weight: f64,
    outside_weight: f64,
}

impl Candidate {
    fn key(&self) -> (usize, u64, EdgeId) {
        (self.length, (self.heavier_side * 1e12) as u64, self.edge)
    }

    fn into_separator(self, g: &PlanarGraph) -> Separator {
        let n = g.vertex_count();
        let mut side = vec![Side::Outside; n];
        for (f, &enclosed) in self.enclosed_faces.iter().enumerate() {
            if enclosed {
                for v in g.face_vertices(f) {
                    side[v] = Side::Inside;
                }
            }
        }
        for &v in &self.cycle {
            side[v] = Side::Cycle;
        }
        let r = self.cycle.len();
        let witnesses = (0..r)
            .filter(|&i| r > 1 && !(r == 2 && i == 1))
            .map(|i| {
                let (a, b) = (self.cycle[i], self.cycle[(i + 1) % r]);
                let d = g.dart_between(a, b).expect("consecutive cycle vertices are adjacent");
                g.face_of(d)
            })
            .collect();
        Separator {
            cycle: self.cycle,
            witnesses,
            side,
            inside_weight: self.inside_weight,
            outside_weight: self.outside_weight,
        }
    }
}

fn best_cycle_from_root(g: &PlanarGraph, weights: &[f64], root: VertexId) -> Option<Candidate> {
    let n = g.vertex_count();
    let faces = g.face_count();
    // Primal BFS tree.
    let mut parent_dart = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut order = vec![root];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &d in g.rotation(u) {
            let w = g.head(d);
            if !seen[w] {
                seen[w] = true;
                parent_dart[w] = d;
                depth[w] = depth[u] + 1;
                order.push(w);
            }
        }
    }
    let mut is_tree_edge = vec![false; g.edge_count()];
    for &d in parent_dart.iter().filter(|&&d| d != usize::MAX) {
        is_tree_edge[d >> 1] = true;
    }
    let primal_parent = |v: VertexId| (parent_dart[v] != usize::MAX).then(|| g.tail(parent_dart[v]));
    // Root-path weight prefix sums.
    let mut path_weight = vec![0.0; n];
    for &v in &order {
        path_weight[v] = weights[v] + primal_parent(v).map_or(0.0, |p| path_weight[p]);
    }

    // Dual spanning tree over the non-tree edges, rooted at a face at `root`.
    let dual_root = g.face_of(g.rotation(root)[0]);
    let mut dual_parent_edge = vec![usize::MAX; faces];
    let mut dual_parent = vec![usize::MAX; faces];
    let mut dual_depth = vec![0usize; faces];
    let mut dual_seen = vec![false; faces];
    let mut dual_order = vec![dual_root];
    dual_seen[dual_root] = true;
    let mut i = 0;
    while i < dual_order.len() {
        let f = dual_order[i];
        i += 1;
        for &d in g.face(f) {
            if is_tree_edge[d >> 1] {
                continue;
            }
            let h = g.face_of(twin(d));
            if !dual_seen[h] {
                dual_seen[h] = true;
                dual_parent[h] = f;
                dual_parent_edge[h] = d >> 1;
                dual_depth[h] = dual_depth[f] + 1;
                dual_order.push(h);
            }
        }
    }
    debug_assert!(dual_seen.iter().all(|&s| s));

    let dual_lca = Lifting::new(&dual_parent, &dual_depth, &dual_order);
    let primal_parent_vec: Vec<usize> = (0..n).map(|v| primal_parent(v).unwrap_or(usize::MAX)).collect();
    let primal_lca = Lifting::new(&primal_parent_vec, &depth, &order);

    // A vertex lies strictly inside a cycle's region iff its tree edge to
    // its parent has both incident faces in the region's dual subtree.
    let mut enclosed = vec![0.0f64; faces];
    for v in 0..n {
        let d = parent_dart[v];
        if d == usize::MAX {
            continue;
        }
        let a = dual_lca.lca(g.face_of(d), g.face_of(twin(d)));
        enclosed[a] += weights[v];
    }
    for &f in dual_order.iter().rev() {
        if dual_parent[f] != usize::MAX {
            let p = dual_parent[f];
            enclosed[p] += enclosed[f];
        }
    }

    let total: f64 = weights.iter().sum();
    let limit = 2.0 / 3.0 + WEIGHT_EPS;
    let mut best: Option<(usize, f64, EdgeId, FaceId, VertexId)> = None;
    for f in 0..faces {
        let e = dual_parent_edge[f];
        if e == usize::MAX {
            continue;
        }
        let (u, v) = g.ends(e);
        let a = primal_lca.lca(u, v);
        let length = depth[u] + depth[v] - 2 * depth[a] + 1;
        let on_cycle = path_weight[u] + path_weight[v] - 2.0 * path_weight[a] + weights[a];
        let inside = enclosed[f];
        let outside = (total - inside - on_cycle).max(0.0);
        if inside > limit || outside > limit {
            continue;
        }
        let heavier = inside.max(outside);
        let better = match best {
            None => true,
            Some((l, h, be, _, _)) => (length, heavier, e) < (l, h, be),
        };
        if better {
            best = Some((length, heavier, e, f, a));
        }
    }
    let (length, heavier_side, edge, f, a) = best?;
    let (u, v) = g.ends(edge);
    let mut cycle = Vec::with_capacity(length);
    let mut x = u;
    while x != a {
        cycle.push(x);
        x = primal_parent_vec[x];
    }
    cycle.push(a);
    let mut tail = Vec::new();
    let mut y = v;
    while y != a {
        tail.push(y);
        y = primal_parent_vec[y];
    }
    cycle.extend(tail.into_iter().rev());
    let mut enclosed_faces = vec![false; faces];
    // Faces in the dual subtree of f.
    for &h in &dual_order {
        if h == f || (dual_parent[h] != usize::MAX && enclosed_faces[dual_parent[h]]) {
            enclosed_faces[h] = true;
        }
    }
    let inside_weight = enclosed[f];
    let on_cycle: f64 = cycle.iter().map(|&x| weights[x]).sum();
    Some(Candidate {
        length,
        heavier_side,
        edge,
        cycle,
        enclosed_faces,
        inside_weight,
        outside_weight: (total - inside_weight - on_cycle).max(0.0),
    })
}

/// Binary-lifting ancestor table for a rooted forest given in BFS order.
struct Lifting {
    up: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

impl Lifting {
    fn new(parent: &[usize], depth: &[usize], order: &[usize]) -> Self {
        let n = parent.len();
        let levels = (usize::BITS - n.max(1).leading_zeros()) as usize + 1;
        let mut up = vec![vec![0usize; n]; levels];
        for &v in order {
            up[0][v] = if parent[v] == usize::MAX { v } else { parent[v] };
        }
        for k in 1..levels {
            for v in 0..n {
                up[k][v] = up[k - 1][up[k - 1][v]];
            }
        }
        Lifting {
            up,
            depth: depth.to_vec(),
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        if self.depth[a] < self.depth[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let diff = self.depth[a] - self.depth[b];
        for k in 0..self.up.len() {
            if diff >> k & 1 == 1 {
                a = self.up[k][a];
            }
        }
        if a == b {
            return a;
        }
        for k in (0..self.up.len()).rev() {
            if self.up[k][a] != self.up[k][b] {
                a = self.up[k][a];
                b = self.up[k][b];
            }
        }
        self.up[0][a]
    }
}
