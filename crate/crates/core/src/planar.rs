//! Plane graphs given by a combinatorial embedding (rotation system).
//!
//! Every undirected edge `e` is stored as two darts: `2e` runs from
//! `ends(e).0` to `ends(e).1` and `2e + 1` is its twin. The rotation of a
//! vertex lists its outgoing darts in counterclockwise order. Faces are
//! traced by [`PlanarGraph::next_in_face`], which turns to the clockwise
//! neighbour of the reversed dart at each vertex.
//!
//! A *corner* of a face at vertex `u` is named by the outgoing dart of `u`
//! that leaves the corner along the face walk. Surgery operations take
//! corners so that insertions into faces with repeated vertices are
//! unambiguous.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

pub type VertexId = usize;
pub type DartId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("graph has no vertices")]
    Empty,
    #[error("rotation lists {got} vertices, expected {expected}")]
    RotationLength { expected: usize, got: usize },
    #[error("edge {edge} references vertex {vertex} out of range")]
    VertexOutOfRange { edge: EdgeId, vertex: VertexId },
    #[error("edge {0} is a self-loop")]
    SelfLoop(EdgeId),
    #[error("edge {edge} listed at vertex {vertex} which is not one of its endpoints")]
    NotIncident { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} listed more than once at vertex {vertex}")]
    DuplicateInRotation { edge: EdgeId, vertex: VertexId },
    #[error("edge {0} is missing from the rotation of one of its endpoints")]
    MissingFromRotation(EdgeId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("embedding is not planar: V - E + F = {characteristic} in a component, expected 2")]
    NonPlanar { characteristic: i64 },
    #[error("vertex {vertex} is not on the boundary of face {face}")]
    NotOnFace { vertex: VertexId, face: FaceId },
    #[error("face {0} does not exist")]
    NoSuchFace(FaceId),
    #[error("darts {0} and {1} do not lie on a common face")]
    CornersOnDifferentFaces(DartId, DartId),
    #[error("cannot join vertex {0} to itself")]
    SameVertex(VertexId),
    #[error("vertex set is empty")]
    EmptyVertexSet,
}

#[inline]
pub fn twin(d: DartId) -> DartId {
    d ^ 1
}

#[inline]
pub fn edge_of(d: DartId) -> EdgeId {
    d >> 1
}

/// A connected plane graph with its faces traced.
#[derive(Debug, Clone)]
pub struct PlanarGraph {
    ends: Vec<(VertexId, VertexId)>,
    rotation: Vec<Vec<DartId>>,
    position: Vec<usize>,
    face_of: Vec<FaceId>,
    faces: Vec<Vec<DartId>>,
    components: usize,
}

impl PlanarGraph {
    /// Builds a graph from edges and, for every vertex, the counterclockwise
    /// list of incident edge ids. The graph must be connected and the
    /// rotation system must have genus zero.
    pub fn from_rotation(
        vertex_count: usize,
        edges: Vec<(VertexId, VertexId)>,
        rotation: Vec<Vec<EdgeId>>,
    ) -> Result<Self, EmbeddingError> {
        if vertex_count == 0 {
            return Err(EmbeddingError::Empty);
        }
        if rotation.len() != vertex_count {
            return Err(EmbeddingError::RotationLength {
                expected: vertex_count,
                got: rotation.len(),
            });
        }
        for (e, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(EmbeddingError::VertexOutOfRange { edge: e, vertex: w });
                }
            }
            if u == v {
                return Err(EmbeddingError::SelfLoop(e));
            }
        }
        let mut seen = vec![false; 2 * edges.len()];
        let mut dart_rotation = Vec::with_capacity(vertex_count);
        for (v, list) in rotation.into_iter().enumerate() {
            let mut darts = Vec::with_capacity(list.len());
            for e in list {
                if e >= edges.len() {
                    return Err(EmbeddingError::NotIncident { edge: e, vertex: v });
                }
                let d = if edges[e].0 == v {
                    2 * e
                } else if edges[e].1 == v {
                    2 * e + 1
                } else {
                    return Err(EmbeddingError::NotIncident { edge: e, vertex: v });
                };
                if seen[d] {
                    return Err(EmbeddingError::DuplicateInRotation { edge: e, vertex: v });
                }
                seen[d] = true;
                darts.push(d);
            }
            dart_rotation.push(darts);
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            return Err(EmbeddingError::MissingFromRotation(edge_of(d)));
        }
        Self::from_darts(edges, dart_rotation, true)
    }

    /// Builds a connected graph from a straight-line drawing: the rotation
    /// at each vertex is the angular order of its neighbours.
    pub fn from_straight_line(
        points: &[(f64, f64)],
        edges: Vec<(VertexId, VertexId)>,
    ) -> Result<Self, EmbeddingError> {
        let mut rotation: Vec<Vec<EdgeId>> = vec![Vec::new(); points.len()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= points.len() || v >= points.len() {
                return Err(EmbeddingError::VertexOutOfRange {
                    edge: e,
                    vertex: u.max(v),
                });
            }
            rotation[u].push(e);
            rotation[v].push(e);
        }
        for (v, list) in rotation.iter_mut().enumerate() {
            let (x, y) = points[v];
            list.sort_by(|&a, &b| {
                let angle = |e: EdgeId| {
                    let w = if edges[e].0 == v { edges[e].1 } else { edges[e].0 };
                    (points[w].1 - y).atan2(points[w].0 - x)
                };
                angle(a).total_cmp(&angle(b))
            });
        }
        Self::from_rotation(points.len(), edges, rotation)
    }

    pub(crate) fn from_darts(
        ends: Vec<(VertexId, VertexId)>,
        rotation: Vec<Vec<DartId>>,
        require_connected: bool,
    ) -> Result<Self, EmbeddingError> {
        let n = rotation.len();
        if n == 0 {
            return Err(EmbeddingError::Empty);
        }
        let darts = 2 * ends.len();
        let mut position = vec![usize::MAX; darts];
        for list in &rotation {
            for (i, &d) in list.iter().enumerate() {
                position[d] = i;
            }
        }
        let mut g = PlanarGraph {
            ends,
            rotation,
            position,
            face_of: vec![usize::MAX; darts],
            faces: Vec::new(),
            components: 0,
        };
        for d in 0..darts {
            if g.face_of[d] != usize::MAX {
                continue;
            }
            let f = g.faces.len();
            let mut walk = Vec::new();
            let mut cur = d;
            loop {
                g.face_of[cur] = f;
                walk.push(cur);
                cur = g.next_in_face(cur);
                if cur == d {
                    break;
                }
            }
            g.faces.push(walk);
        }
        // Euler check per connected component.
        let mut comp = vec![usize::MAX; n];
        let mut counts: Vec<(i64, i64, i64)> = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = counts.len();
            counts.push((0, 0, 0));
            comp[s] = c;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                counts[c].0 += 1;
                for &d in &g.rotation[u] {
                    counts[c].1 += 1;
                    let w = g.head(d);
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        queue.push_back(w);
                    }
                }
            }
        }
        for walk in &g.faces {
            counts[comp[g.tail(walk[0])]].2 += 1;
        }
        g.components = counts.len();
        if require_connected && g.components > 1 {
            return Err(EmbeddingError::Disconnected);
        }
        for &(v, dart_count, f) in &counts {
            let e = dart_count / 2;
            if e == 0 {
                continue;
            }
            let chi = v - e + f;
            if chi != 2 {
                return Err(EmbeddingError::NonPlanar { characteristic: chi });
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn dart_count(&self) -> usize {
        2 * self.ends.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn ends(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.ends[e]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.ends
    }

    #[inline]
    pub fn tail(&self, d: DartId) -> VertexId {
        let (u, v) = self.ends[d >> 1];
        if d & 1 == 0 {
            u
        } else {
            v
        }
    }

    #[inline]
    pub fn head(&self, d: DartId) -> VertexId {
        self.tail(twin(d))
    }

    /// Outgoing darts of `v` in counterclockwise order.
    #[inline]
    pub fn rotation(&self, v: VertexId) -> &[DartId] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    /// Rotation as edge ids, the form accepted by [`Self::from_rotation`].
    pub fn edge_rotation(&self) -> Vec<Vec<EdgeId>> {
        self.rotation
            .iter()
            .map(|l| l.iter().map(|&d| edge_of(d)).collect())
            .collect()
    }

    #[inline]
    pub fn next_in_face(&self, d: DartId) -> DartId {
        let t = twin(d);
        let list = &self.rotation[self.tail(t)];
        let deg = list.len();
        list[(self.position[t] + deg - 1) % deg]
    }

    #[inline]
    pub fn face_of(&self, d: DartId) -> FaceId {
        self.face_of[d]
    }

    /// Darts along the boundary walk of `f`.
    pub fn face(&self, f: FaceId) -> &[DartId] {
        &self.faces[f]
    }

    /// Boundary vertices of `f` in walk order, with repetitions.
    pub fn face_vertices(&self, f: FaceId) -> Vec<VertexId> {
        self.faces[f].iter().map(|&d| self.tail(d)).collect()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.rotation[v].iter().map(move |&d| self.head(d))
    }

    /// Finds a dart `u -> v`, if any.
    pub fn dart_between(&self, u: VertexId, v: VertexId) -> Option<DartId> {
        self.rotation[u].iter().copied().find(|&d| self.head(d) == v)
    }

    /// First pair of corners `(a, b)` at `u` and `v` lying on a common face,
    /// scanning `u`'s rotation in order.
    pub fn common_face(&self, u: VertexId, v: VertexId) -> Option<(DartId, DartId)> {
        for &a in &self.rotation[u] {
            let f = self.face_of[a];
            if let Some(&b) = self.rotation[v].iter().find(|&&b| self.face_of[b] == f) {
                return Some((a, b));
            }
        }
        None
    }

    /// Corner of `v` on face `f`: the first dart of `f`'s walk leaving `v`.
    pub fn corner_on_face(&self, f: FaceId, v: VertexId) -> Option<DartId> {
        self.faces
            .get(f)?
            .iter()
            .copied()
            .find(|&d| self.tail(d) == v)
    }

    pub fn is_triangulated(&self) -> bool {
        self.faces.iter().all(|walk| {
            walk.len() == 3 && {
                let a = self.tail(walk[0]);
                let b = self.tail(walk[1]);
                let c = self.tail(walk[2]);
                a != b && b != c && a != c
            }
        })
    }

    /// Adds an edge `u - v` through face `f`. The new edge's dart `2e`
    /// runs from `u` to `v`.
    pub fn add_edge_in_face(
        &self,
        f: FaceId,
        u: VertexId,
        v: VertexId,
    ) -> Result<(PlanarGraph, EdgeId), EmbeddingError> {
        if f >= self.faces.len() {
            return Err(EmbeddingError::NoSuchFace(f));
        }
        if u == v {
            return Err(EmbeddingError::SameVertex(u));
        }
        let a = self
            .corner_on_face(f, u)
            .ok_or(EmbeddingError::NotOnFace { vertex: u, face: f })?;
        let b = self
            .corner_on_face(f, v)
            .ok_or(EmbeddingError::NotOnFace { vertex: v, face: f })?;
        self.add_edge_at_corners(a, b)
    }

    /// Adds an edge between the corners `a` (at `tail(a)`) and `b` (at
    /// `tail(b)`), which must lie on the same face.
    pub fn add_edge_at_corners(
        &self,
        a: DartId,
        b: DartId,
    ) -> Result<(PlanarGraph, EdgeId), EmbeddingError> {
        if self.face_of[a] != self.face_of[b] {
            return Err(EmbeddingError::CornersOnDifferentFaces(a, b));
        }
        if self.tail(a) == self.tail(b) {
            return Err(EmbeddingError::SameVertex(self.tail(a)));
        }
        let mut builder = Builder::from_graph(self);
        let e = builder.insert_edge(a, b);
        Ok((builder.finish(self.components == 1)?, e))
    }

    /// Adds a new vertex inside face `f` joined to each listed boundary
    /// vertex (at its first corner on `f`).
    pub fn add_vertex_in_face(
        &self,
        f: FaceId,
        neighbors: &[VertexId],
    ) -> Result<(PlanarGraph, VertexId), EmbeddingError> {
        let walk = self.faces.get(f).ok_or(EmbeddingError::NoSuchFace(f))?;
        if neighbors.is_empty() {
            return Err(EmbeddingError::EmptyVertexSet);
        }
        let mut corners = Vec::new();
        let mut taken = HashSet::new();
        for &v in neighbors {
            if !taken.insert(v) {
                continue;
            }
            let idx = walk
                .iter()
                .position(|&d| self.tail(d) == v)
                .ok_or(EmbeddingError::NotOnFace { vertex: v, face: f })?;
            corners.push(idx);
        }
        corners.sort_unstable();
        let corners: Vec<DartId> = corners.into_iter().map(|i| walk[i]).collect();
        self.add_vertex_at_corners(&corners)
    }

    /// Adds a new vertex joined to the given corners, which must all lie on
    /// one face and be listed in walk order.
    pub fn add_vertex_at_corners(
        &self,
        corners: &[DartId],
    ) -> Result<(PlanarGraph, VertexId), EmbeddingError> {
        if corners.is_empty() {
            return Err(EmbeddingError::EmptyVertexSet);
        }
        let f = self.face_of[corners[0]];
        if let Some(&c) = corners.iter().find(|&&c| self.face_of[c] != f) {
            return Err(EmbeddingError::CornersOnDifferentFaces(corners[0], c));
        }
        let mut builder = Builder::from_graph(self);
        let w = builder.insert_vertex(corners);
        Ok((builder.finish(self.components == 1)?, w))
    }

    /// Adds a copy of each listed dart's edge, drawn beside it. Returns the
    /// new edge ids; dart `2e` of each copy has the listed dart's direction.
    pub fn add_parallel_edges(&self, darts: &[DartId]) -> (PlanarGraph, Vec<EdgeId>) {
        let mut builder = Builder::from_graph(self);
        let ids = darts.iter().map(|&d| builder.insert_parallel(d)).collect();
        let g = builder
            .finish(self.components == 1)
            .expect("parallel copies preserve planarity");
        (g, ids)
    }

    /// Triangulates every face. Existing vertex, edge and dart ids are
    /// preserved; new edges and vertices are appended.
    pub fn triangulate(&self) -> Triangulation {
        let mut builder = Builder::from_graph(self);
        let mut adjacent: HashSet<(VertexId, VertexId)> = self
            .ends
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        let mut new_vertices = Vec::new();
        for walk in &self.faces {
            let m = walk.len();
            let verts: Vec<VertexId> = walk.iter().map(|&d| self.tail(d)).collect();
            let distinct = verts.iter().collect::<HashSet<_>>().len() == m;
            if m == 3 && distinct {
                continue;
            }
            let fan_root = if distinct && m > 3 {
                (0..m).find(|&j| {
                    (2..m - 1).all(|k| {
                        let w = verts[(j + k) % m];
                        !adjacent.contains(&(verts[j].min(w), verts[j].max(w)))
                    })
                })
            } else {
                None
            };
            match fan_root {
                Some(j) => {
                    let mut a = walk[j];
                    for k in 2..m - 1 {
                        let b = walk[(j + k) % m];
                        let e = builder.insert_edge(a, b);
                        let w = verts[(j + k) % m];
                        adjacent.insert((verts[j].min(w), verts[j].max(w)));
                        a = 2 * e;
                    }
                }
                None => {
                    let w = builder.insert_vertex(walk);
                    for &v in &verts {
                        adjacent.insert((v.min(w), v.max(w)));
                    }
                    new_vertices.push(w);
                }
            }
        }
        let original_edges = self.edge_count();
        let graph = builder
            .finish(self.components == 1)
            .expect("triangulation preserves planarity");
        let new_edges = (original_edges..graph.edge_count()).collect();
        Triangulation {
            graph,
            new_edges,
            new_vertices,
        }
    }

    /// Subgraph on `vertices` keeping the edges accepted by `keep_edge`
    /// (which must have both endpoints in the set), with the inherited
    /// embedding. The result may be disconnected.
    pub fn subgraph_piece(
        &self,
        vertices: &[VertexId],
        mut keep_edge: impl FnMut(EdgeId) -> bool,
    ) -> Result<Piece, EmbeddingError> {
        if vertices.is_empty() {
            return Err(EmbeddingError::EmptyVertexSet);
        }
        let mut local = vec![usize::MAX; self.vertex_count()];
        let mut vertex_map = Vec::with_capacity(vertices.len());
        for &v in vertices {
            if local[v] == usize::MAX {
                local[v] = vertex_map.len();
                vertex_map.push(v);
            }
        }
        let mut edge_map = Vec::new();
        let mut local_edge = vec![usize::MAX; self.edge_count()];
        let mut ends = Vec::new();
        for (e, &(u, v)) in self.ends.iter().enumerate() {
            if local[u] != usize::MAX && local[v] != usize::MAX && keep_edge(e) {
                local_edge[e] = edge_map.len();
                edge_map.push(e);
                ends.push((local[u], local[v]));
            }
        }
        let rotation = vertex_map
            .iter()
            .map(|&v| {
                self.rotation[v]
                    .iter()
                    .filter(|&&d| local_edge[edge_of(d)] != usize::MAX)
                    .map(|&d| 2 * local_edge[edge_of(d)] + (d & 1))
                    .collect()
            })
            .collect();
        let graph = PlanarGraph::from_darts(ends, rotation, false)?;
        Ok(Piece {
            graph,
            vertex_map,
            edge_map,
        })
    }

    /// Induced subgraph on `vertices`.
    pub fn induced(&self, vertices: &[VertexId]) -> Result<Piece, EmbeddingError> {
        self.subgraph_piece(vertices, |_| true)
    }
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    pub graph: PlanarGraph,
    /// Edges added by the triangulation; they should carry zero capacity.
    pub new_edges: Vec<EdgeId>,
    pub new_vertices: Vec<VertexId>,
}

/// A subgraph together with its embedding into the parent.
#[derive(Debug, Clone)]
pub struct Piece {
    pub graph: PlanarGraph,
    /// Local vertex id -> parent vertex id.
    pub vertex_map: Vec<VertexId>,
    /// Local edge id -> parent edge id. Dart parity is preserved.
    pub edge_map: Vec<EdgeId>,
}

impl Piece {
    pub fn parent_dart(&self, d: DartId) -> DartId {
        2 * self.edge_map[edge_of(d)] + (d & 1)
    }

    /// Parent vertex -> local vertex table.
    pub fn local_vertices(&self, parent_vertex_count: usize) -> Vec<Option<VertexId>> {
        let mut local = vec![None; parent_vertex_count];
        for (i, &v) in self.vertex_map.iter().enumerate() {
            local[v] = Some(i);
        }
        local
    }
}

/// Mutable rotation lists used to batch several insertions before tracing
/// faces once.
pub(crate) struct Builder {
    ends: Vec<(VertexId, VertexId)>,
    rotation: Vec<Vec<DartId>>,
}

impl Builder {
    pub(crate) fn from_graph(g: &PlanarGraph) -> Self {
        Builder {
            ends: g.ends.clone(),
            rotation: g.rotation.clone(),
        }
    }

    fn tail(&self, d: DartId) -> VertexId {
        let (u, v) = self.ends[d >> 1];
        if d & 1 == 0 {
            u
        } else {
            v
        }
    }

    fn insert_after(&mut self, v: VertexId, anchor: DartId, d: DartId) {
        let list = &mut self.rotation[v];
        let i = list
            .iter()
            .position(|&x| x == anchor)
            .expect("anchor dart in rotation");
        list.insert(i + 1, d);
    }

    /// New edge from corner `a` to corner `b`; returns its id. Dart `2e`
    /// leaves `tail(a)`.
    pub(crate) fn insert_edge(&mut self, a: DartId, b: DartId) -> EdgeId {
        let u = self.tail(a);
        let v = self.tail(b);
        let e = self.ends.len();
        self.ends.push((u, v));
        self.insert_after(u, a, 2 * e);
        self.insert_after(v, b, 2 * e + 1);
        e
    }

    fn insert_before(&mut self, v: VertexId, anchor: DartId, d: DartId) {
        let list = &mut self.rotation[v];
        let i = list
            .iter()
            .position(|&x| x == anchor)
            .expect("anchor dart in rotation");
        list.insert(i, d);
    }

    /// New edge parallel to dart `d`, drawn right beside it so that the two
    /// bound a digon. Dart `2e` has the same direction as `d`.
    pub(crate) fn insert_parallel(&mut self, d: DartId) -> EdgeId {
        let u = self.tail(d);
        let v = self.tail(d ^ 1);
        let e = self.ends.len();
        self.ends.push((u, v));
        self.insert_after(u, d, 2 * e);
        self.insert_before(v, d ^ 1, 2 * e + 1);
        e
    }

    /// New vertex joined to corners of one face, given in walk order.
    pub(crate) fn insert_vertex(&mut self, corners: &[DartId]) -> VertexId {
        let w = self.rotation.len();
        self.rotation.push(Vec::new());
        let first = corners[0];
        let n1 = self.tail(first);
        let e = self.ends.len();
        self.ends.push((w, n1));
        self.rotation[w].push(2 * e);
        self.insert_after(n1, first, 2 * e + 1);
        let mut last = 2 * e;
        for &c in &corners[1..] {
            last = 2 * self.insert_edge(last, c);
        }
        w
    }

    pub(crate) fn finish(self, require_connected: bool) -> Result<PlanarGraph, EmbeddingError> {
        PlanarGraph::from_darts(self.ends, self.rotation, require_connected)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn triangle() -> PlanarGraph {
        PlanarGraph::from_rotation(3, vec![(0, 1), (1, 2), (2, 0)], vec![vec![0, 2], vec![1, 0], vec![2, 1]])
            .unwrap()
    }

    pub fn grid(k: usize) -> PlanarGraph {
        let mut pts = Vec::new();
        let mut edges = Vec::new();
        for r in 0..k {
            for c in 0..k {
                pts.push((c as f64, r as f64));
                if c + 1 < k {
                    edges.push((r * k + c, r * k + c + 1));
                }
                if r + 1 < k {
                    edges.push((r * k + c, (r + 1) * k + c));
                }
            }
        }
        PlanarGraph::from_straight_line(&pts, edges).unwrap()
    }

    fn k4_edges() -> Vec<(usize, usize)> {
        vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    }

    fn k4_rotation(g: &PlanarGraph) -> bool {
        g.vertex_count() == 4 && g.face_count() == 4
    }

    #[test]
    fn triangle_euler() {
        let g = triangle();
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (3, 3, 2));
        for d in 0..g.dart_count() {
            assert_ne!(twin(d), d);
            assert_eq!(twin(twin(d)), d);
        }
    }

    #[test]
    fn k4_planar_rotation() {
        // Centre vertex 3 inside triangle 0,1,2.
        let pts = [(0.0, 0.0), (4.0, 0.0), (0.0, 4.0), (1.0, 1.0)];
        let g = PlanarGraph::from_straight_line(&pts, k4_edges()).unwrap();
        assert!(k4_rotation(&g));
        assert!(g.is_triangulated());
    }

    /// Enumerates every rotation system of K4 and checks that exactly the
    /// genus-0 ones are accepted, and that they are rejected otherwise.
    #[test]
    fn k4_rotations_by_enumeration() {
        let edges = k4_edges();
        let incident: Vec<Vec<usize>> = (0..4)
            .map(|v| (0..6).filter(|&e| edges[e].0 == v || edges[e].1 == v).collect())
            .collect();
        // Each vertex has degree 3, so two cyclic orders each.
        let mut planar = 0;
        let mut rejected = 0;
        for mask in 0..16u32 {
            let rotation: Vec<Vec<usize>> = (0..4)
                .map(|v| {
                    let mut l = incident[v].clone();
                    if mask >> v & 1 == 1 {
                        l.swap(1, 2);
                    }
                    l
                })
                .collect();
            match PlanarGraph::from_rotation(4, edges.clone(), rotation) {
                Ok(g) => {
                    assert_eq!(g.face_count(), 4);
                    planar += 1;
                }
                Err(EmbeddingError::NonPlanar { characteristic }) => {
                    assert_eq!(characteristic, 0);
                    rejected += 1;
                }
                Err(e) => panic!("unexpected {e}"),
            }
        }
        // The planar embedding and its mirror image.
        assert_eq!(planar, 2);
        assert_eq!(rejected, 14);
    }

    #[test]
    fn rejects_inconsistent_and_disconnected() {
        let err = PlanarGraph::from_rotation(3, vec![(0, 1), (1, 2)], vec![vec![0], vec![0, 1], vec![0]]);
        assert!(matches!(err, Err(EmbeddingError::NotIncident { .. })));
        let err = PlanarGraph::from_rotation(3, vec![(0, 1), (1, 2)], vec![vec![0], vec![0, 1], vec![]]);
        assert!(matches!(err, Err(EmbeddingError::MissingFromRotation(1))));
        let err = PlanarGraph::from_rotation(4, vec![(0, 1), (2, 3)], vec![vec![0], vec![0], vec![1], vec![1]]);
        assert_eq!(err.unwrap_err(), EmbeddingError::Disconnected);
        let err = PlanarGraph::from_rotation(2, vec![(0, 0)], vec![vec![0, 0], vec![]]);
        assert_eq!(err.unwrap_err(), EmbeddingError::SelfLoop(0));
    }

    #[test]
    fn single_vertex() {
        let g = PlanarGraph::from_rotation(1, vec![], vec![vec![]]).unwrap();
        assert_eq!(g.face_count(), 0);
        assert!(g.triangulate().new_edges.is_empty());
    }

    #[test]
    fn triangulate_triangle_is_noop() {
        let t = triangle().triangulate();
        assert!(t.new_edges.is_empty());
        assert!(t.new_vertices.is_empty());
    }

    #[test]
    fn triangulate_square() {
        let g = grid(2);
        assert_eq!((g.edge_count(), g.face_count()), (4, 2));
        // One chord through a 4-face gives three faces.
        let inner = (0..g.face_count()).find(|&f| g.face(f).len() == 4).unwrap();
        let (h, _) = g.add_edge_in_face(inner, 0, 3).unwrap();
        assert_eq!(h.face_count(), 3);
        // Full triangulation needs the other diagonal on the other side.
        let t = g.triangulate();
        assert_eq!(t.new_edges.len(), 2);
        assert!(t.new_vertices.is_empty());
        assert_eq!(t.graph.face_count(), 4);
        assert!(t.graph.is_triangulated());
    }

    #[test]
    fn triangulate_grid3() {
        let g = grid(3);
        assert_eq!((g.edge_count(), g.face_count()), (12, 5));
        let t = g.triangulate();
        assert!(t.graph.is_triangulated());
        assert!(t.new_vertices.is_empty());
        // 3n - 6 edges for a simple triangulation on 9 vertices.
        assert_eq!(t.graph.edge_count(), 21);
        assert_eq!(t.graph.face_count(), 14);
        // One chord per inner square plus 8 - 3 chords for the outer 8-face.
        assert_eq!(t.new_edges.len(), 4 + 5);
        assert!(t.graph.triangulate().new_edges.is_empty());
        // Original darts keep their rotation order.
        for v in 0..9 {
            let orig: Vec<_> = g.rotation(v).to_vec();
            let kept: Vec<_> = t.graph.rotation(v).iter().copied().filter(|&d| d < g.dart_count()).collect();
            let start = kept.iter().position(|&d| d == orig[0]).unwrap();
            let rotated: Vec<_> = kept[start..].iter().chain(&kept[..start]).copied().collect();
            assert_eq!(rotated, orig);
        }
    }

    #[test]
    fn triangulate_path_uses_apex_vertices() {
        // Path 0-1-2: single face with repeated vertex 1.
        let g = PlanarGraph::from_rotation(3, vec![(0, 1), (1, 2)], vec![vec![0], vec![0, 1], vec![1]]).unwrap();
        let t = g.triangulate();
        assert_eq!(t.new_vertices.len(), 1);
        assert!(t.graph.is_triangulated());
        let two = PlanarGraph::from_rotation(2, vec![(0, 1)], vec![vec![0], vec![0]]).unwrap();
        let t = two.triangulate();
        assert!(t.graph.is_triangulated());
        assert_eq!(t.graph.vertex_count(), 3);
    }

    #[test]
    fn apex_over_triangle() {
        let g = triangle();
        let outer = 1.min(g.face_count() - 1);
        let (h, w) = g.add_vertex_in_face(outer, &[0, 1, 2]).unwrap();
        assert_eq!(w, 3);
        assert_eq!((h.vertex_count(), h.edge_count(), h.face_count()), (4, 6, 4));
        let (p, _) = g.add_vertex_in_face(0, &[1]).unwrap();
        assert_eq!(p.face_count(), 2);
        assert_eq!(p.degree(3), 1);
    }

    #[test]
    fn apex_in_square_face() {
        let g = grid(2);
        let f = 0;
        let (h, _) = g.add_vertex_in_face(f, &[0, 1, 2, 3]).unwrap();
        assert_eq!(h.face_count(), g.face_count() + 3);
        assert!(matches!(
            g.add_edge_in_face(f, 1, 1),
            Err(EmbeddingError::SameVertex(1))
        ));
    }

    #[test]
    fn edge_in_face_errors() {
        let g = grid(3);
        let inner = (0..g.face_count())
            .find(|&f| g.face_vertices(f).contains(&0) && g.face(f).len() == 4)
            .unwrap();
        assert!(matches!(
            g.add_edge_in_face(inner, 0, 8),
            Err(EmbeddingError::NotOnFace { vertex: 8, .. })
        ));
        assert!(g.common_face(0, 4).is_some());
        assert!(g.common_face(0, 8).is_some());
        let g4 = grid(4);
        assert!(g4.common_face(0, 10).is_none());
    }

    #[test]
    fn parallel_copies_form_digons() {
        let g = grid(3);
        let (h, ids) = g.add_parallel_edges(&[0, 3, 5]);
        assert_eq!(ids, vec![12, 13, 14]);
        assert_eq!(h.face_count(), g.face_count() + 3);
        assert_eq!(h.ends(12), g.ends(0));
        assert_eq!(h.ends(13), (g.ends(1).1, g.ends(1).0));
        assert_eq!(h.face(h.face_of(2 * 12 + 1)).len(), 2);
    }

    #[test]
    fn pieces() {
        let g = grid(2);
        let all = g.induced(&[0, 1, 2, 3]).unwrap();
        assert_eq!(all.edge_map, vec![0, 1, 2, 3]);
        let pts = [(0.0, 0.0), (4.0, 0.0), (0.0, 4.0), (1.0, 1.0)];
        let k4 = PlanarGraph::from_straight_line(&pts, k4_edges()).unwrap();
        let tri = k4.induced(&[0, 1, 2]).unwrap();
        assert_eq!(tri.graph.edge_count(), 3);
        assert_eq!(tri.graph.face_count(), 2);
        assert!(k4.induced(&[]).is_err());
    }
}
