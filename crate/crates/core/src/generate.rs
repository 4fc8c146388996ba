//! Seeded instance generators.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::flow_base::{Capacities, FlowNetwork};
use crate::planar::{EdgeId, PlanarGraph, VertexId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityDist {
    /// Every dart gets capacity 1.
    Unit,
    /// Independent uniform integers in `lo..=hi` per dart.
    Uniform { lo: u32, hi: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Sources on the left column, sinks on the right column.
    OppositeSides,
    /// Terminals drawn from vertices off the boundary.
    RandomInterior,
    /// Every terminal on the outer face.
    OneFace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub k: usize,
    pub capacity: CapacityDist,
    pub layout: Layout,
    pub sources: usize,
    pub sinks: usize,
    pub seed: u64,
}

/// `k x k` grid drawn with vertex `r * k + c` at `(c, r)`.
pub fn grid_graph(k: usize) -> PlanarGraph {
    rect_grid(k, k)
}

/// `width x height` grid with vertex `r * width + c` at `(c, r)`.
pub fn rect_grid(width: usize, height: usize) -> PlanarGraph {
    grid_with_diagonals(width, height, false)
}

/// Grid with one diagonal per cell, so every inner face is a triangle.
pub fn triangulated_grid(k: usize) -> PlanarGraph {
    grid_with_diagonals(k, k, true)
}

fn grid_with_diagonals(w: usize, h: usize, diagonals: bool) -> PlanarGraph {
    assert!(w >= 1 && h >= 1);
    let points: Vec<(f64, f64)> = (0..w * h)
        .map(|v| ((v % w) as f64, (v / w) as f64))
        .collect();
    let mut edges = Vec::new();
    for r in 0..h {
        for c in 0..w {
            let v = r * w + c;
            if c + 1 < w {
                edges.push((v, v + 1));
            }
            if r + 1 < h {
                edges.push((v, v + w));
            }
            if diagonals && c + 1 < w && r + 1 < h {
                edges.push((v, v + w + 1));
            }
        }
    }
    PlanarGraph::from_straight_line(&points, edges).expect("grid drawing is planar")
}

fn draw_capacities<T: Scalar>(darts: usize, dist: CapacityDist, rng: &mut ChaCha8Rng) -> Capacities<T> {
    let per_dart = (0..darts)
        .map(|_| match dist {
            CapacityDist::Unit => T::one(),
            CapacityDist::Uniform { lo, hi } => T::from_count(rng.gen_range(lo..=hi) as usize),
        })
        .collect();
    Capacities::new(per_dart).expect("drawn capacities are nonnegative")
}

/// Grid instance with terminals placed by `spec.layout`. Terminal counts
/// are capped by the available vertices.
pub fn gen_grid<T: Scalar>(spec: &GridSpec) -> FlowNetwork<T> {
    let k = spec.k;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let graph = grid_graph(k);
    let caps = draw_capacities(graph.dart_count(), spec.capacity, &mut rng);
    let (sources, sinks) = match spec.layout {
        Layout::OppositeSides => {
            let left: Vec<_> = (0..k).map(|r| r * k).collect();
            let right: Vec<_> = (0..k).map(|r| r * k + k - 1).collect();
            if k == 1 {
                (left, Vec::new())
            } else {
                (
                    sample(&left, spec.sources, &mut rng),
                    sample(&right, spec.sinks, &mut rng),
                )
            }
        }
        Layout::RandomInterior => {
            let interior: Vec<_> = (0..k * k)
                .filter(|&v| k < 3 || (v % k != 0 && v % k != k - 1 && v / k != 0 && v / k != k - 1))
                .collect();
            split_sample(&interior, spec.sources, spec.sinks, &mut rng)
        }
        Layout::OneFace => split_sample(&boundary(k), spec.sources, spec.sinks, &mut rng),
    };
    FlowNetwork::new(graph, caps, sources, sinks).expect("terminals are disjoint")
}

/// Boundary of the grid in walk order.
fn boundary(k: usize) -> Vec<VertexId> {
    if k == 1 {
        return vec![0];
    }
    let mut walk: Vec<VertexId> = (0..k).collect();
    walk.extend((1..k).map(|r| r * k + k - 1));
    walk.extend((0..k - 1).rev().map(|c| (k - 1) * k + c));
    walk.extend((1..k - 1).rev().map(|r| r * k));
    walk
}

fn sample(pool: &[VertexId], count: usize, rng: &mut ChaCha8Rng) -> Vec<VertexId> {
    let mut picked: Vec<_> = pool
        .choose_multiple(rng, count.min(pool.len()))
        .copied()
        .collect();
    picked.sort_unstable();
    picked
}

fn split_sample(
    pool: &[VertexId],
    sources: usize,
    sinks: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<VertexId>, Vec<VertexId>) {
    let total = (sources + sinks).min(pool.len());
    let picked: Vec<_> = pool.choose_multiple(rng, total).copied().collect();
    let cut = sources.min(total);
    let mut s = picked[..cut].to_vec();
    let mut t = picked[cut..].to_vec();
    s.sort_unstable();
    t.sort_unstable();
    (s, t)
}

/// Counter-clockwise neighbour lists of a maximal plane graph grown by
/// repeatedly placing a vertex inside a random triangular face, then
/// randomized by `flips` random edge flips.
pub fn random_triangulation(n: usize, flips: usize, seed: u64) -> PlanarGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lists = stacked_lists(n.max(3), flips, &mut rng);
    from_neighbor_lists(&lists, |_, _| true)
}

fn stacked_lists(n: usize, flips: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<VertexId>> {
    let mut nbr: Vec<Vec<VertexId>> = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    let mut faces: Vec<[VertexId; 3]> = vec![[0, 1, 2], [0, 2, 1]];
    for w in 3..n {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[i];
        insert_after(&mut nbr[a], b, w);
        insert_after(&mut nbr[b], c, w);
        insert_after(&mut nbr[c], a, w);
        nbr.push(vec![a, b, c]);
        faces[i] = [a, b, w];
        faces.push([b, c, w]);
        faces.push([c, a, w]);
    }
    for _ in 0..flips {
        let u = rng.gen_range(0..n);
        let v = nbr[u][rng.gen_range(0..nbr[u].len())];
        flip(&mut nbr, u, v);
    }
    nbr
}

fn insert_after(list: &mut Vec<VertexId>, anchor: VertexId, x: VertexId) {
    let i = list.iter().position(|&y| y == anchor).expect("anchor in list");
    list.insert(i + 1, x);
}

/// Replaces edge `u v` by the other diagonal of its two triangles, unless
/// that would create a parallel edge or a vertex of degree below three.
fn flip(nbr: &mut [Vec<VertexId>], u: VertexId, v: VertexId) -> bool {
    if nbr[u].len() < 4 || nbr[v].len() < 4 {
        return false;
    }
    let lu = &nbr[u];
    let i = lu.iter().position(|&x| x == v).unwrap();
    let a = lu[(i + 1) % lu.len()];
    let b = lu[(i + lu.len() - 1) % lu.len()];
    if a == b || nbr[a].contains(&b) {
        return false;
    }
    nbr[u].retain(|&x| x != v);
    nbr[v].retain(|&x| x != u);
    insert_after(&mut nbr[a], u, b);
    insert_after(&mut nbr[b], v, a);
    true
}

/// Builds the embedding given by neighbour lists, keeping the edges
/// accepted by `keep`.
fn from_neighbor_lists(
    nbr: &[Vec<VertexId>],
    mut keep: impl FnMut(VertexId, VertexId) -> bool,
) -> PlanarGraph {
    let mut id: HashMap<(VertexId, VertexId), EdgeId> = HashMap::new();
    let mut edges = Vec::new();
    for (u, list) in nbr.iter().enumerate() {
        for &v in list {
            if u < v && keep(u, v) {
                id.insert((u, v), edges.len());
                edges.push((u, v));
            }
        }
    }
    let rotation = nbr
        .iter()
        .enumerate()
        .map(|(u, list)| {
            list.iter()
                .filter_map(|&v| id.get(&(u.min(v), u.max(v))).copied())
                .collect()
        })
        .collect();
    PlanarGraph::from_rotation(nbr.len(), edges, rotation).expect("neighbour lists are a plane embedding")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarSpec {
    pub n: usize,
    /// Capacities are uniform in `0..=max_capacity` per dart.
    pub max_capacity: u32,
    pub sources: usize,
    pub sinks: usize,
    /// Fraction of triangulation edges removed (connectivity is kept).
    pub sparsity: f64,
    pub seed: u64,
}

impl PlanarSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        PlanarSpec {
            n,
            max_capacity: 20,
            sources: 3,
            sinks: 3,
            sparsity: 0.3,
            seed,
        }
    }
}

/// Random connected plane graph: a random triangulation with a fraction of
/// edges removed, random capacities and random terminals.
pub fn gen_random_planar<T: Scalar>(spec: &PlanarSpec) -> FlowNetwork<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n.max(3);
    let nbr = stacked_lists(n, 2 * n, &mut rng);
    let removed = sparse_removal(&nbr, spec.sparsity, &mut rng);
    let graph = from_neighbor_lists(&nbr, |u, v| !removed.contains(&(u, v)));
    let caps = draw_capacities(
        graph.dart_count(),
        CapacityDist::Uniform {
            lo: 0,
            hi: spec.max_capacity,
        },
        &mut rng,
    );
    let all: Vec<_> = (0..n).collect();
    let (sources, sinks) = split_sample(&all, spec.sources, spec.sinks, &mut rng);
    FlowNetwork::new(graph, caps, sources, sinks).expect("terminals are disjoint")
}

/// Edges to drop: a random spanning tree is always kept.
fn sparse_removal(
    nbr: &[Vec<VertexId>],
    fraction: f64,
    rng: &mut ChaCha8Rng,
) -> BTreeSet<(VertexId, VertexId)> {
    let mut edges: Vec<(VertexId, VertexId)> = nbr
        .iter()
        .enumerate()
        .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
        .collect();
    edges.shuffle(rng);
    let mut parent: Vec<usize> = (0..nbr.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut extra = Vec::new();
    for &(u, v) in &edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            extra.push((u, v));
        } else {
            parent[a] = b;
        }
    }
    let count = ((edges.len() as f64) * fraction).round() as usize;
    extra.into_iter().take(count).collect()
}

/// Random instance whose single source and sink lie on a common face.
pub fn gen_same_face<T: Scalar>(n: usize, max_capacity: u32, seed: u64) -> FlowNetwork<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n.max(3);
    let nbr = stacked_lists(n, n, &mut rng);
    let removed = sparse_removal(&nbr, 0.4, &mut rng);
    let graph = from_neighbor_lists(&nbr, |u, v| !removed.contains(&(u, v)));
    let caps = draw_capacities(
        graph.dart_count(),
        CapacityDist::Uniform {
            lo: 0,
            hi: max_capacity,
        },
        &mut rng,
    );
    let face = rng.gen_range(0..graph.face_count());
    let mut on_face = graph.face_vertices(face);
    on_face.sort_unstable();
    on_face.dedup();
    let pair: Vec<_> = on_face.choose_multiple(&mut rng, 2).copied().collect();
    FlowNetwork::new(graph, caps, vec![pair[0]], vec![pair[1]]).expect("distinct terminals")
}
